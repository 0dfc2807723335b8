#include "rikit/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rikit {

Weight xi_profile(const Weight& u, const Weight& v, const Bijection& nu, double L) {
    if (!check_nondegenerate(u, L))
        throw HypothesisError("xi_profile: u is degenerate");
    if (!is_infinite_length(L)) {
        if (!(u(L * (1.0 - 1e-9)) > 0.0))
            throw HypothesisError("xi_profile: u vanishes at L-");
        auto pu = u.as_pure_power();
        auto pv = v.as_pure_power();
        auto pn = nu.as_power();
        if (pu && pv && pn) {
            double eu = pu->a + 1.0;
            double coef = pv->c * pu->c * std::pow(pn->k, eu) / eu;
            return Weight::power(coef, pv->a + pn->alpha * eu);
        }
        Weight uc = u;
        Weight vc = v;
        Bijection nuc = nu;
        return Weight::custom(
            [uc, vc, nuc](double t) { return vc(t) * primitive(uc, nuc(t)); },
            "xi-profile");
    }
    Weight uc = u;
    Weight vc = v;
    Bijection nuc = nu;
    return Weight::custom(
        [uc, vc, nuc](double t) {
            return t < 1.0 ? vc(t) * primitive(uc, nuc(t)) : vc(t);
        },
        "xi-profile-halfline");
}

namespace {

// bounded near 0: decided on the power-log scale
bool powerlog_bounded_near_zero(const PowerLogWeight& w) {
    if (w.a > 0.0) return true;
    if (w.a < 0.0) return false;
    for (double b : w.b) {
        if (b < 0.0) return true;
        if (b > 0.0) return false;
    }
    return true;
}

std::optional<bool> analytic_membership(const SpaceSpec& X, const Weight& xi) {
    auto p = X.lebesgue_p();
    auto pl = xi.as_power_log();
    if (!p || !pl) return std::nullopt;
    if (is_infinite_length(X.domain_length())) return std::nullopt;
    if (std::isinf(*p)) return powerlog_bounded_near_zero(*pl);
    PowerLogWeight scaled{1.0, (*p) * pl->a, pl->b};
    for (double& b : scaled.b) b *= *p;
    return scaled.head_integrable();
}

}  // namespace

bool xi_membership(const SpaceSpec& X, const Weight& u, const Weight& v,
                   const Bijection& nu, MembershipReport* report) {
    Weight xi = xi_profile(u, v, nu, X.domain_length());
    MembershipReport rep;
    if (auto verdict = analytic_membership(X, xi)) {
        rep.member = *verdict;
        rep.analytic = true;
        if (report) *report = rep;
        return rep.member;
    }
    double L = X.domain_length();
    double hi = is_infinite_length(L) ? 1e8 : L * (1.0 - 1e-12);
    double lo_coarse = is_infinite_length(L) ? 1e-8 : L * 1e-8;
    double lo_fine = is_infinite_length(L) ? 1e-10 : L * 1e-10;
    double hi_fine = is_infinite_length(L) ? 1e10 : hi;
    auto eval = [&xi](double t) { return xi(t); };
    StepFunction coarse = sample_to_step(eval, lo_coarse, hi, 4096, L);
    StepFunction fine = sample_to_step(eval, lo_fine, hi_fine, 5120, L);
    rep.resolution = 5120;
    rep.norm_coarse = norm(X, coarse);
    rep.norm_fine = norm(X, fine);
    rep.member = std::isfinite(rep.norm_fine) &&
                 rep.norm_fine <= rep.norm_coarse * (1.0 + 1e-3) + 1e-300;
    if (report) *report = rep;
    return rep.member;
}

double rho_R(const SpaceSpec& X, const Weight& u, const Weight& v, const Bijection& nu,
             const StepFunction& f, int grid_points) {
    if (!xi_membership(X, u, v, nu))
        throw NoOptimalSpaceError("rho_R: xi outside X, no optimal domain space exists");
    if (f.is_zero()) return 0.0;
    double L = X.domain_length();
    OperatorSpec spec = OperatorSpec::make_R(u, v, nu, L);
    StepFunction fstar = f.rearrange();
    auto F = [&](double t) { return apply_R(spec, fstar, t); };
    double hi = is_infinite_length(L)
                    ? std::max(1e6, fstar.support_bound() * 1e4)
                    : L * (1.0 - 1e-12);
    StepFunction sampled = sample_to_step(F, hi * 1e-9, hi, grid_points, L);
    return norm(X, sampled);
}

Weight build_v_from_xi(const Weight& xi, const Bijection& nu) {
    if (auto hint = head_integrable_hint(xi); hint && !*hint)
        throw DivergenceError("build_v_from_xi: xi has a divergent primitive");
    double probe = is_infinite_length(nu.domain_length())
                       ? 1.0
                       : 0.5 * nu.domain_length();
    double head = primitive(xi, probe);  // throws DivergenceError if divergent
    if (!(head > 0.0)) throw DomainError("build_v_from_xi: xi primitive vanishes");
    return Weight::reciprocal_primitive(xi, nu);
}

Weight reciprocal_weight(const Weight& xi) {
    if (auto pl = xi.as_power_log()) {
        PowerLogWeight inv{1.0 / pl->c, -pl->a, pl->b};
        for (double& b : inv.b) b = -b;
        return Weight::power_log(inv);
    }
    Weight copy = xi;
    Monotonicity m = xi.monotonicity() == Monotonicity::Nonincreasing
                         ? Monotonicity::Nondecreasing
                     : xi.monotonicity() == Monotonicity::Nondecreasing
                         ? Monotonicity::Nonincreasing
                         : Monotonicity::None;
    return Weight::custom([copy](double t) { return 1.0 / copy(t); }, "reciprocal", m);
}

std::vector<double> H_cell_integrals(const OperatorSpec& spec, const StepFunction& h,
                                     const std::vector<double>& edges) {
    std::vector<double> out(edges.size() - 1, 0.0);
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) continue;
        StepFunction cell = StepFunction::indicator(edges[i], edges[i + 1], spec.L);
        out[i] = pairing_g_Hf(cell, spec, h);
    }
    return out;
}

StepFunction lp_dual_witness(const OperatorSpec& spec, const StepFunction& h, double p,
                             int points, double floor_ratio) {
    double L = spec.L;
    double hi = is_infinite_length(L) ? std::max(1e6, h.support_bound() * 1e4)
                                      : L * (1.0 - 1e-15);
    std::vector<double> edges{0.0};
    auto geo = geometric_grid(hi * floor_ratio, hi, points);
    edges.insert(edges.end(), geo.begin(), geo.end());
    std::vector<double> I = H_cell_integrals(spec, h, edges);
    std::vector<double> vals(I.size());
    double pp = p / (p - 1.0);
    for (size_t i = 0; i < I.size(); ++i) {
        double len = edges[i + 1] - edges[i];
        vals[i] = I[i] > 0.0 ? std::pow(I[i] / len, p - 1.0) : 0.0;
    }
    double npow = 0.0;
    for (size_t i = 0; i < vals.size(); ++i)
        npow += std::pow(vals[i], pp) * (edges[i + 1] - edges[i]);
    if (!(npow > 0.0)) return StepFunction::zero(L);
    double scale = std::pow(npow, -1.0 / pp);
    for (double& v : vals) v *= scale;
    return StepFunction::from_grid(std::move(edges), std::move(vals), L);
}

namespace {

StepFunction normalized_in(const SpaceSpec& X, const StepFunction& g) {
    double n = norm(X, g);
    if (!(n > 0.0) || !std::isfinite(n)) return StepFunction::zero(g.domain_length());
    return g.scaled(1.0 / n);
}

}  // namespace

RhoTildeResult rho_tilde(const SpaceSpec& X, const Weight& u, const Weight& xi,
                         const Bijection& nu, const StepFunction& f,
                         const RhoTildeOptions& opts,
                         const std::vector<StepFunction>& extra_seeds) {
    RhoTildeResult out;
    double L = X.domain_length();
    out.witness = StepFunction::zero(L);
    if (f.is_zero()) return out;

    Weight v = build_v_from_xi(xi, nu);
    Weight phi = Weight::product(u, reciprocal_weight(xi));
    SpaceSpec Xprime = associate_space(X);  // UnsupportedDualError for M_psi primal
    OperatorSpec Hspec = OperatorSpec::make_H(u, v, nu, L);
    OperatorSpec Hxi = OperatorSpec::make_H(xi, v, nu, L);
    StepFunction fstar = f.rearrange();

    // finiteness display: u(t)·χ_(0,ν⁻¹(a))·∫_{ν(t)}^a v ∈ X
    {
        double a = is_infinite_length(L) ? 1.0 : L;
        double top = nu.inverse(a * (1.0 - 1e-12));
        auto F = [&](double t) {
            if (t >= top) return 0.0;
            return u(t) * integrate(v, nu(t), a);
        };
        double n1 = norm_of_function(X, F, top, 2048);
        if (!std::isfinite(n1))
            out.warnings.push_back("finiteness display fails: computation is heuristic");
    }

    auto Phi = [&](const StepFunction& g) {
        StepFunction gstar = g.rearrange();
        if (phi.monotonicity() == Monotonicity::Nonincreasing)
            return pairing_g_Hf(gstar, Hspec, fstar);
        StepFunction S = suffix_sup_profile(phi, gstar, L);
        return pairing_g_Hf(S, Hxi, fstar);
    };

    auto consider = [&](const StepFunction& g) {
        if (g.is_zero()) return;
        double val = Phi(g);
        if (val > out.value) {
            out.value = val;
            out.witness = g;
        }
    };

    for (const StepFunction& s : extra_seeds) consider(s);
    if (auto p = X.lebesgue_p(); p && std::isfinite(*p) && *p > 1.0)
        consider(lp_dual_witness(Hspec, fstar, *p, opts.witness_points, opts.witness_floor));
    consider(normalized_in(Xprime, fstar));
    double T = fstar.support_bound();
    for (double a : geometric_grid(T * 1e-6, is_infinite_length(L) ? T * 10 : L * (1.0 - 1e-12), 9))
        consider(normalized_in(Xprime, StepFunction::indicator(0.0, a, L)));

    // coordinate ascent from the best seed on a coarse partition
    if (opts.budget > 0 && !out.witness.is_zero()) {
        double hi = out.witness.support_bound();
        std::vector<double> edges{0.0};
        auto geo = geometric_grid(hi * 1e-8, hi, 25);
        edges.insert(edges.end(), geo.begin(), geo.end());
        std::vector<double> vals(edges.size() - 1);
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            vals[i] = out.witness(0.5 * (edges[i] + edges[i + 1]));
        int iters = 0;
        double step = 1.5;
        while (iters < opts.budget) {
            bool improved = false;
            for (size_t i = 0; i + 1 < edges.size() && iters < opts.budget; ++i) {
                for (double fac : {step, 1.0 / step}) {
                    ++iters;
                    std::vector<double> vv = vals;
                    vv[i] *= fac;
                    StepFunction cand =
                        normalized_in(Xprime, StepFunction::from_grid(edges, vv, L));
                    double before = out.value;
                    consider(cand);
                    if (out.value > before) {
                        vals = vv;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                step = std::sqrt(step);
                if (step < 1.01) break;
            }
        }
    }
    return out;
}

namespace {

double fast_H_norm(const SpaceSpec& X, const OperatorSpec& spec, const StepFunction& h,
                   int resolution) {
    auto F = [&](double t) { return apply_H(spec, h, t); };
    double L = spec.L;
    double hi = is_infinite_length(L)
                    ? std::max(1e6, spec.nu.inverse(std::min(1e250, h.support_bound())) * 10.0)
                    : L * (1.0 - 1e-12);
    return norm_of_function(X, F, hi, resolution);
}

double precise_H_norm(const SpaceSpec& X, const OperatorSpec& spec, const StepFunction& h) {
    auto F = [&](double t) { return apply_H(spec, h, t); };
    if (auto p = X.lebesgue_p())
        return lebesgue_norm_adaptive(F, *p, spec.L, operator_breaks(spec, h));
    return fast_H_norm(X, spec, h, 4096);
}

}  // namespace

Bracket rho_H_bracket(const SpaceSpec& X, const Weight& u, const Weight& v,
                      const Bijection& nu, const StepFunction& f,
                      const BracketOptions& opts, BracketWitnesses* witnesses) {
    if (opts.n_cells < 1 || opts.n_cells > 8)
        throw DomainError("rho_H_bracket: n_cells must be in [1, 8]");
    double L = X.domain_length();
    OperatorSpec spec = OperatorSpec::make_H(u, v, nu, L);

    // assumption display (Prop. norminducedbyH), two-resolution growth probe
    if (!is_infinite_length(L)) {
        auto F = [&](double t) { return u(t) * integrate(v, nu(t), L); };
        double top = L * (1.0 - 1e-12);
        double n1 = norm(X, sample_to_step(F, L * 1e-8, top, 2048, L));
        double n2 = norm(X, sample_to_step(F, L * 1e-10, top, 2560, L));
        if (!std::isfinite(n2) || n2 > n1 * (1.0 + 1e-3) + 1e-300)
            throw NoOptimalSpaceError("rho_H_bracket: assumption display fails");
    } else {
        double top = nu.inverse(1.0);
        auto F = [&](double t) { return t < top ? u(t) * integrate(v, nu(t), 1.0) : 0.0; };
        double n1 = norm_of_function(X, F, std::max(top, 1.0), 2048);
        if (!std::isfinite(n1))
            throw NoOptimalSpaceError("rho_H_bracket: head display fails");
        double worst = 0.0;
        double prev = 0.0;
        int grows = 0;
        for (int k = 1; k <= 9; ++k) {
            double tau = std::pow(10.0, k);
            double val = v(tau) * norm(X, sample_to_step([&u](double s) { return u(s); },
                                                         1e-9, nu.inverse(tau), 1024, L));
            worst = std::max(worst, val);
            if (val > prev * 1.5 && k > 1) ++grows;
            prev = val;
        }
        if (grows >= 6)
            throw NoOptimalSpaceError("rho_H_bracket: limsup display fails (decade probe)");
    }

    if (f.is_zero()) {
        if (witnesses) *witnesses = {};
        return {0.0, 0.0, "zero"};
    }

    StepFunction fstar = f.rearrange();
    struct Cand {
        StepFunction h;
        std::string desc;
        double fast = 0.0;
    };
    std::vector<Cand> cands;
    cands.push_back({fstar, "f*", 0.0});
    cands.push_back({transport(f, reflection_layout(f)), "reflection", 0.0});

    int n = opts.n_cells;
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    long max_perms = 1;
    for (int i = 2; i <= n; ++i) max_perms *= i;
    if (max_perms <= 5040) {
        std::vector<int> p = perm;
        do {
            bool identity = std::is_sorted(p.begin(), p.end());
            if (!identity)
                cands.push_back({transport(f, permutation_layout(f, n, p)), "perm", 0.0});
        } while (std::next_permutation(p.begin(), p.end()));
    }

    int fast_res = 1024;
    for (Cand& c : cands) c.fast = fast_H_norm(X, spec, c.h, fast_res);

    // greedy block-descent on pairwise swaps, from the identity arrangement
    {
        std::vector<int> arr = perm;
        double best = fast_H_norm(X, spec, transport(f, permutation_layout(f, n, arr)), fast_res);
        int evals = 0;
        bool improved = true;
        while (improved && evals < opts.budget) {
            improved = false;
            for (int i = 0; i < n && evals < opts.budget; ++i)
                for (int j = i + 1; j < n && evals < opts.budget; ++j) {
                    std::vector<int> trial = arr;
                    std::swap(trial[static_cast<size_t>(i)], trial[static_cast<size_t>(j)]);
                    ++evals;
                    StepFunction h = transport(f, permutation_layout(f, n, trial));
                    double val = fast_H_norm(X, spec, h, fast_res);
                    if (val > best * (1.0 + 1e-12)) {
                        best = val;
                        arr = trial;
                        improved = true;
                    }
                }
        }
        cands.push_back({transport(f, permutation_layout(f, n, arr)), "greedy", best});
    }

    std::sort(cands.begin() + 1, cands.end(),
              [](const Cand& a, const Cand& b) { return a.fast > b.fast; });
    size_t keep = std::min<size_t>(cands.size(), 8);

    Bracket out;
    BracketWitnesses wit;
    for (size_t i = 0; i < keep; ++i) {
        double val = precise_H_norm(X, spec, cands[i].h);
        if (i == 0) wit.norm_H_fstar = val;  // cands[0] is always f*
        if (val > out.lower) {
            out.lower = val;
            out.witness = cands[i].desc;
        }
        wit.top_candidates.push_back(cands[i].h);
        if (auto p = X.lebesgue_p(); p && std::isfinite(*p) && *p > 1.0)
            wit.dual_witnesses.push_back(
                lp_dual_witness(spec, cands[i].h, *p, opts.witness_points, 1e-40));
    }

    if (opts.xi_factorization) {
        Weight phi = Weight::product(u, reciprocal_weight(*opts.xi_factorization));
        double tn = estimate_T_norm(phi, associate_space(X), 40, 20240501u);
        out.upper = std::max(1.0, tn) * wit.norm_H_fstar;
    }
    if (witnesses) *witnesses = std::move(wit);
    return out;
}

double estimate_T_norm(const Weight& phi, const SpaceSpec& Xprime, int n_samples,
                       std::uint64_t seed) {
    Rng rng(derive_seed(seed, "T-norm"));
    double L = Xprime.domain_length();
    double hi = is_infinite_length(L) ? 1e4 : L * (1.0 - 1e-12);
    double best = 1.0;  // T_phi g >= g* makes 1 a universal floor
    for (int s = 0; s < n_samples; ++s) {
        int k = rng.uniform_int(1, 6);
        std::vector<double> levels(static_cast<size_t>(k));
        for (double& v : levels) v = rng.log_uniform(1e-2, 1e2);
        std::sort(levels.rbegin(), levels.rend());
        std::vector<double> edges{0.0};
        double pos = 0.0;
        for (int i = 0; i < k; ++i) {
            pos += rng.log_uniform(hi * 1e-6, hi / k);
            pos = std::min(pos, hi * (1.0 - 1e-9 * (k - i)));
            edges.push_back(pos);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        if (edges.size() < 2) continue;
        std::vector<double> vals(levels.begin(), levels.begin() + (edges.size() - 1));
        StepFunction g = StepFunction::from_grid(edges, vals, L);
        double ng = norm(Xprime, g);
        if (!(ng > 0.0) || !std::isfinite(ng)) continue;
        auto Tg = [&](double t) { return apply_T(phi, g, t, L); };
        double nT = norm_of_function(Xprime, Tg, hi, 2048);
        if (std::isfinite(nT)) best = std::max(best, nT / ng);
    }
    return best;
}

}  // namespace rikit
