#ifndef RIKIT_OPERATORS_HPP
#define RIKIT_OPERATORS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rikit/spaces.hpp"
#include "rikit/step_function.hpp"
#include "rikit/weight.hpp"

namespace rikit {

/// Hypothesis record attached to an operator at construction.
struct OperatorHypotheses {
    bool u_nonincreasing = false;
    bool v_nonincreasing = false;
    std::optional<DeltaReport> nu_inv_delta_sup_zero;
    std::optional<DeltaReport> nu_delta_inf_infinity;  // only for L = inf
};

/// R_{u,v,ν} g(t) = v(t)·∫₀^{ν(t)} g·u  or  H_{u,v,ν} g(t) = u(t)·∫_{ν(t)}^L g·v
struct OperatorSpec {
    enum class Kind { R, H };
    Kind kind;
    Weight u;
    Weight v;
    Bijection nu;
    double L;
    OperatorHypotheses hypotheses;

    static OperatorSpec make_R(Weight u, Weight v, Bijection nu, double L);
    static OperatorSpec make_H(Weight u, Weight v, Bijection nu, double L);
};

double apply_R(const OperatorSpec& spec, const StepFunction& g, double t);
double apply_H(const OperatorSpec& spec, const StepFunction& g, double t);

/// T_φ f(t) = (1/φ(t))·sup_{s∈[t,L)} φ(s) f*(s). Per-cell suprema are taken
/// at endpoints for monotone φ, by 256-point sampling otherwise. A declared
/// nonincreasing φ collapses to f* (equal up to countably many points).
double apply_T(const Weight& phi, const StepFunction& f, double t, double L);

/// suffix sup S(t) = sup_{s∈[t,L)} φ(s) f*(s) as a step function on the
/// cells of f*; the building block behind apply_T and the simplified
/// optimal-norm functional
StepFunction suffix_sup_profile(const Weight& phi, const StepFunction& fstar, double L);

StepFunction dilate(const StepFunction& f, double a);

struct ComposeResult {
    StepFunction value;  // sampled outer image
    int grid_points;
};

/// R_{u1,v1,ν1}((R_{u2,v2,ν2}(f*))*) on a sampled geometric grid.
ComposeResult compose_RR(const OperatorSpec& outer, const OperatorSpec& inner,
                         const StepFunction& f, int grid_points);

/// ∫₀^L f(t)·R g(t) dt and ∫₀^L g(t)·H f(t) dt. Closed form for pure-power
/// weights and power bijections; piecewise adaptive otherwise.
double pairing_f_Rg(const StepFunction& f, const OperatorSpec& R, const StepFunction& g);
double pairing_g_Hf(const StepFunction& g, const OperatorSpec& H, const StepFunction& f);

/// ∫₀^L g*(t)·H f*(t) dt for nonincreasing step g — the dual-witness pairing.
double pairing_gstar_Hfstar(const StepFunction& g, const OperatorSpec& H,
                            const StepFunction& f);

/// t-breakpoints at which H g / R g change analytic piece
std::vector<double> operator_breaks(const OperatorSpec& spec, const StepFunction& g);

}  // namespace rikit

#endif
