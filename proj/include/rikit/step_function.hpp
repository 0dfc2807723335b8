#ifndef RIKIT_STEP_FUNCTION_HPP
#define RIKIT_STEP_FUNCTION_HPP

#include <utility>
#include <vector>

#include "rikit/common.hpp"

namespace rikit {

/// Nonnegative piecewise-constant function on (0, L), compactly supported.
///
/// Internally stored as edges 0 = e_0 < e_1 < ... < e_m = support_bound and
/// one value per cell (e_i, e_{i+1}). Canonical form: adjacent values
/// distinct (exact == comparison), trailing zero cell absorbed into the
/// implicit zero tail, the zero function is {edges [0, min(1,L)], value 0}.
class StepFunction {
public:
    struct Cell {
        double left;
        double right;
        double value;
    };

    static StepFunction zero(double domain_length);
    // value on (a, b), zero elsewhere
    static StepFunction indicator(double a, double b, double domain_length,
                                  double value = 1.0);
    // cells may arrive unsorted and with gaps; gaps are zero-filled,
    // overlaps are an error
    static StepFunction from_cells(std::vector<Cell> cells, double domain_length);
    // internal grid constructor: edges strictly increasing starting at 0,
    // values.size() == edges.size() - 1
    static StepFunction from_grid(std::vector<double> edges, std::vector<double> values,
                                  double domain_length);

    double domain_length() const { return domain_length_; }
    double support_bound() const { return edges_.back(); }
    // measure of {f > 0}
    double support_measure() const;
    bool is_zero() const { return values_.size() == 1 && values_[0] == 0.0; }

    int cell_count() const { return static_cast<int>(values_.size()); }
    double edge(int i) const { return edges_[static_cast<size_t>(i)]; }
    double value(int i) const { return values_[static_cast<size_t>(i)]; }
    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& values() const { return values_; }

    // pointwise evaluation; cells are taken left-closed, 0 beyond the support bound
    double operator()(double t) const;

    double integral() const;  // ∫ f
    double max_value() const;

    StepFunction rearrange() const;  // f*, canonical nonincreasing
    bool is_nonincreasing() const;

    // ∫₀ᵗ f* — exact on the rearranged cell structure
    double head_integral(double t) const;
    // f**(t) = head_integral(t)/t
    double double_star(double t) const;

    StepFunction scaled(double lambda) const;
    // min(f, c) and (f - c)₊, the clipping decomposition pair
    StepFunction clip_above(double c) const;
    StepFunction excess_over(double c) const;
    // f·χ_(0,t)
    StepFunction truncate(double t) const;

    // pointwise f <= g everywhere (merged grid, exact compare)
    static bool dominated_by(const StepFunction& f, const StepFunction& g);

    friend StepFunction add(const StepFunction& f, const StepFunction& g);
    // ∫ f·g, exact cell sums on the merged grid
    static double inner_product(const StepFunction& f, const StepFunction& g);

    // distribution as (value, measure) pairs, values strictly decreasing,
    // zero excluded
    std::vector<std::pair<double, double>> distribution() const;

    bool operator==(const StepFunction& other) const;

private:
    StepFunction() = default;
    void canonicalize();

    double domain_length_ = kInf;
    std::vector<double> edges_;   // edges_[0] == 0
    std::vector<double> values_;  // one per cell
};

StepFunction add(const StepFunction& f, const StepFunction& g);

/// Equimeasurability: distributions coincide (values exactly, measures to
/// 1e-12 — transports cut level measures at floating-point points).
bool is_equimeasurable(const StepFunction& f, const StepFunction& g);

/// Constructive stand-in for a measure-preserving transformation: where
/// each piece of each level of f* lands.
struct Layout {
    struct Piece {
        double left;
        double right;
        int level_index;  // index into the distribution of f (sorted desc)
    };
    std::vector<Piece> pieces;
};

Layout identity_layout(const StepFunction& f);
// h(t) = f*(a - t) on (0, a), a = support bound of f*
Layout reflection_layout(const StepFunction& f);
// cut f* into n equal-measure cells and concatenate them in `perm` order
Layout permutation_layout(const StepFunction& f, int n_cells, const std::vector<int>& perm);

StepFunction transport(const StepFunction& f, const Layout& layout);

}  // namespace rikit

#endif
