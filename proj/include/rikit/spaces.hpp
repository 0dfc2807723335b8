#ifndef RIKIT_SPACES_HPP
#define RIKIT_SPACES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rikit/step_function.hpp"
#include "rikit/weight.hpp"

namespace rikit {

/// Description of a rearrangement-invariant norm over (0, L).
class SpaceSpec {
public:
    static SpaceSpec lebesgue(double p, double L);
    static SpaceSpec lambda1(Weight v, double L);
    static SpaceSpec marcinkiewicz(Weight psi, double L);
    static SpaceSpec intersection(SpaceSpec lhs, SpaceSpec rhs);
    static SpaceSpec sum(SpaceSpec lhs, SpaceSpec rhs);

    double domain_length() const;

    // admissibility flags: Λ¹ needs V(t)/t almost-decreasing
    // (probe-verified), M_ψ needs quasiconcave ψ
    bool admissible(std::string* why = nullptr) const;

    std::string describe() const;

    struct Node;
    const Node& node() const { return *node_; }

    std::optional<double> lebesgue_p() const;

private:
    std::shared_ptr<const Node> node_;
};

/// ‖f‖_X; +inf is a legitimate value (f outside the space), never an error.
double norm(const SpaceSpec& X, const StepFunction& f);

/// φ_X(t) = ‖χ_(0,t)‖_X
double fundamental_function(const SpaceSpec& X, double t);

/// Analytic associate space where available; Marcinkiewicz primal throws
/// UnsupportedDualError (use associate_norm_lower instead).
SpaceSpec associate_space(const SpaceSpec& X);

struct AssociateLower {
    double lower = 0.0;                 // certified (candidate-attained) lower bound
    double exact = std::numeric_limits<double>::quiet_NaN();  // analytic dual when known
    StepFunction witness = StepFunction::zero(kInf);
};

/// Lower bound on ‖f‖_{X'} = sup{ ∫f*g* : ‖g‖_X ≤ 1 } by candidate seeds and
/// coordinate ascent over nonincreasing step functions.
AssociateLower associate_norm_lower(const SpaceSpec& X, const StepFunction& f, int budget);

/// K(f, t; Λ¹_ξ, L^∞) by the head-integral formula ∫₀^{Ξ⁻¹(t)} f* ξ.
double k_functional_formula(const StepFunction& f, double t, const Weight& xi);

/// Brute-force oracle: inf over clippings f* = (f*-c)₊ + min(f*, c) of
/// ‖(f*-c)₊‖_{Λ¹_ξ} + t·‖min(f*,c)‖_∞, c over the level set plus a 64-point
/// refinement.
double k_functional_oracle(const StepFunction& f, double t, const Weight& xi);

// --- evaluable-function norms (internal building blocks) -------------------

/// Sample F on an n-point geometric grid spanning (lo, hi) and return the
/// step approximation (cell value at the geometric midpoint).
StepFunction sample_to_step(const std::function<double(double)>& F, double lo, double hi,
                            int n, double domain_length);

/// High-accuracy ‖F‖_{L^p(0,L)} for piecewise-smooth nonnegative F with the
/// given smoothness breakpoints. p = inf uses a refined sup.
double lebesgue_norm_adaptive(const std::function<double(double)>& F, double p, double L,
                              std::vector<double> breaks);

/// Generic norm of an evaluable: sampled to a step function at `resolution`
/// points, then normed; the resolution is the caller's to record.
double norm_of_function(const SpaceSpec& X, const std::function<double(double)>& F,
                        double hi, int resolution);

}  // namespace rikit

#endif
