#ifndef RIKIT_WEIGHT_HPP
#define RIKIT_WEIGHT_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rikit/common.hpp"
#include "rikit/step_function.hpp"

namespace rikit {

/// c · t^a · ∏ ℓ_j(t)^{b_j} with ℓ_1 = 1 + |log t|, ℓ_{j+1} = 1 + log ℓ_j.
struct PowerLogWeight {
    double c = 1.0;
    double a = 0.0;
    std::vector<double> b;

    bool pure_power() const { return b.empty(); }
    double eval(double t) const;
    // does ∫₀ converge
    bool head_integrable() const;
};

double iterated_log(int j, double t);

/// Increasing bijection of (0, L) onto itself.
class Bijection {
public:
    // t ↦ t^alpha when L = ∞ or L = 1; L·(t/L)^alpha in general
    static Bijection power(double alpha, double L);
    static Bijection identity(double L) { return power(1.0, L); }
    static Bijection composite(Bijection outer, Bijection inner);
    static Bijection numeric(std::function<double(double)> fn, double L);

    double operator()(double t) const;
    // exact for power; monotone bisection (200 iteration cap) otherwise
    double inverse(double y) const;
    double domain_length() const;

    // nu(t) = k·t^alpha representation when available (power and
    // composites of powers)
    struct PowerForm {
        double k;
        double alpha;
    };
    std::optional<PowerForm> as_power() const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

enum class Monotonicity { None, Nonincreasing, Nondecreasing };

/// Weight on (0, L): analytic family, tabulated step, v = 1/∫₀^{ν⁻¹(·)}ξ,
/// products, or an arbitrary evaluable (used for derived profiles like ξ).
class Weight {
public:
    static Weight power_log(PowerLogWeight w);
    static Weight power(double c, double a) { return power_log({c, a, {}}); }
    static Weight one() { return power(1.0, 0.0); }
    static Weight tabulated(StepFunction f);
    static Weight reciprocal_primitive(Weight xi, Bijection nu);
    static Weight product(Weight lhs, Weight rhs);
    static Weight custom(std::function<double(double)> fn, std::string label,
                         Monotonicity m = Monotonicity::None);

    double operator()(double t) const;

    Monotonicity monotonicity() const;
    // declare and probe-verify on a geometric grid clipped to (0, L);
    // throws DomainError if the probe refutes the declaration
    Weight with_monotonicity(Monotonicity m, double L) const;

    // exact power-log form when derivable (power-log leaves, products,
    // reciprocal primitives of pure powers through power bijections)
    std::optional<PowerLogWeight> as_power_log() const;
    std::optional<PowerLogWeight> as_pure_power() const;

    std::string describe() const;

    struct Node;
    const Node& node() const { return *node_; }

private:
    std::shared_ptr<const Node> node_;
};

/// ∫_a^b w. Closed form for pure powers; exact cell sums for tabulated;
/// adaptive Simpson (rel tol 1e-10) otherwise. Divergent heads throw.
double integrate(const Weight& w, double a, double b);

/// U(t) = ∫₀ᵗ w
double primitive(const Weight& w, double t);

/// classification of ∫₀ w without evaluating it, when derivable
std::optional<bool> head_integrable_hint(const Weight& w);

struct DeltaReport {
    enum class Endpoint { Zero, Infinity };
    enum class Mode { Inf, Sup };
    Endpoint endpoint;
    Mode mode;
    double theta = 2.0;
    double estimate = 0.0;
    bool verdict = false;
    std::string confidence;  // "exact" | "probed"
};

DeltaReport check_delta(const Bijection& nu, DeltaReport::Endpoint endpoint,
                        DeltaReport::Mode mode, double theta);

struct AveragingReport {
    double constant_estimate = kInf;
    std::vector<double> grid;
    bool verdict = false;
    std::string confidence;  // "exact" | "probed"
    std::string reason;      // set when verdict is false
};

AveragingReport check_averaging(const Weight& w, double L);

bool check_quasiconcave(const Weight& psi, double L);

bool check_nondegenerate(const Weight& u, double L);

}  // namespace rikit

#endif
