#ifndef RIKIT_OPTIMAL_HPP
#define RIKIT_OPTIMAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "rikit/operators.hpp"
#include "rikit/spaces.hpp"

namespace rikit {

/// ξ(t) = v(t)·U(ν(t)) (finite L) or its two-branch variant on (0, ∞).
/// Requires u nondegenerate; for L < ∞ also u(L⁻) > 0.
Weight xi_profile(const Weight& u, const Weight& v, const Bijection& nu, double L);

struct MembershipReport {
    bool member = false;
    bool analytic = false;  // decided by the power-log exponent rule
    int resolution = 0;     // sampling resolution when probed
    double norm_coarse = 0.0;
    double norm_fine = 0.0;
};

/// ξ ∈ X(0, L)? false means no rearrangement-invariant domain space exists.
bool xi_membership(const SpaceSpec& X, const Weight& u, const Weight& v,
                   const Bijection& nu, MembershipReport* report = nullptr);

/// ϱ(f) = ‖ v(t)·∫₀^{ν(t)} f* u ‖_X, evaluated on a sampled geometric grid.
double rho_R(const SpaceSpec& X, const Weight& u, const Weight& v, const Bijection& nu,
             const StepFunction& f, int grid_points = 2048);

/// v with 1/v(t) = ∫₀^{ν⁻¹(t)} ξ; nonincreasing by construction.
Weight build_v_from_xi(const Weight& xi, const Bijection& nu);

/// 1/ξ as a weight (exact power-log when ξ has one).
Weight reciprocal_weight(const Weight& xi);

struct RhoTildeOptions {
    int budget = 200;             // candidate evaluations for the ascent
    int witness_points = 16384;   // dual-witness grid resolution
    double witness_floor = 1e-40; // witness grid head, relative to the top
};

struct RhoTildeResult {
    double value = 0.0;  // certified lower estimate of the simplified functional
    StepFunction witness = StepFunction::zero(kInf);
    std::vector<std::string> warnings;
};

/// ϱ̃(f) = sup_{‖g‖_{X'}≤1} ∫ f*·R_{u,v,ν⁻¹}(T_φ g), φ = u/ξ, approximated
/// from below over nonincreasing step candidates.
RhoTildeResult rho_tilde(const SpaceSpec& X, const Weight& u, const Weight& xi,
                         const Bijection& nu, const StepFunction& f,
                         const RhoTildeOptions& opts = {},
                         const std::vector<StepFunction>& extra_seeds = {});

struct Bracket {
    double lower = 0.0;
    std::optional<double> upper;  // reported bound, not certified
    std::string witness;          // description of the candidate achieving lower
};

struct BracketWitnesses {
    std::vector<StepFunction> top_candidates;  // best equimeasurable h's
    std::vector<StepFunction> dual_witnesses;  // unit-ball g's pairing with them
    double norm_H_fstar = 0.0;                 // the h = f* entry
};

struct BracketOptions {
    int n_cells = 6;   // equal-measure cells for exhaustive transports (≤ 8)
    int budget = 2000; // fast-norm evaluations for search
    std::optional<Weight> xi_factorization;  // enables the reported upper bound
    int witness_points = 16384;
};

/// Certified-from-below bracket for sup_{h ~ f} ‖H h‖_X.
Bracket rho_H_bracket(const SpaceSpec& X, const Weight& u, const Weight& v,
                      const Bijection& nu, const StepFunction& f,
                      const BracketOptions& opts = {},
                      BracketWitnesses* witnesses = nullptr);

/// Lower estimate of ‖T_φ‖ on X' over random nonincreasing step functions.
/// A reported constant, never a certified upper bound.
double estimate_T_norm(const Weight& phi, const SpaceSpec& Xprime, int n_samples,
                       std::uint64_t seed);

/// ∫ over consecutive cells [edges_i, edges_{i+1}] of H_{u,v,ν} h — the
/// witness-construction primitive (closed form for power data).
std::vector<double> H_cell_integrals(const OperatorSpec& spec, const StepFunction& h,
                                     const std::vector<double>& edges);

/// L^p dual witness of ‖H h‖: cell-averaged (Hh)^{p-1}, exactly normalized
/// in L^{p'}; nonincreasing by construction.
StepFunction lp_dual_witness(const OperatorSpec& spec, const StepFunction& h, double p,
                             int points, double floor_ratio);

}  // namespace rikit

#endif
