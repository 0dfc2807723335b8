#include "rikit/operators.hpp"

#include <algorithm>
#include <cmath>

namespace rikit {

namespace {

// closed-form power integrals, exponent -1 handled
double int_pow(double coef, double e, double x1, double x2) {
    if (coef == 0.0 || x2 <= x1) return 0.0;
    if (x1 == 0.0 && e <= -1.0) throw DivergenceError("int_pow: divergent head");
    if (e == -1.0) return coef * std::log(x2 / x1);
    double hi = std::pow(x2, e + 1.0);
    double lo = x1 == 0.0 ? 0.0 : std::pow(x1, e + 1.0);
    return coef * (hi - lo) / (e + 1.0);
}

// ∫ coef·t^e·ln t dt
double int_pow_log(double coef, double e, double x1, double x2) {
    if (coef == 0.0 || x2 <= x1) return 0.0;
    auto anti = [&](double x) {
        if (e == -1.0) return 0.5 * std::log(x) * std::log(x);
        double p = std::pow(x, e + 1.0);
        return p * (std::log(x) / (e + 1.0) - 1.0 / ((e + 1.0) * (e + 1.0)));
    };
    if (x1 == 0.0) {
        if (e <= -1.0) throw DivergenceError("int_pow_log: divergent head");
        return coef * anti(x2);  // x^{e+1}·log x -> 0
    }
    return coef * (anti(x2) - anti(x1));
}

bool monotone_verdict(const Weight& w, Monotonicity want) {
    if (w.monotonicity() == want) return true;
    if (auto pp = w.as_pure_power())
        return want == Monotonicity::Nonincreasing ? pp->a <= 0.0 : pp->a >= 0.0;
    return false;
}

}  // namespace

OperatorSpec OperatorSpec::make_R(Weight u, Weight v, Bijection nu, double L) {
    OperatorSpec s{Kind::R, std::move(u), std::move(v), std::move(nu), L, {}};
    s.hypotheses.u_nonincreasing = monotone_verdict(s.u, Monotonicity::Nonincreasing);
    s.hypotheses.v_nonincreasing = monotone_verdict(s.v, Monotonicity::Nonincreasing);
    s.hypotheses.nu_inv_delta_sup_zero =
        check_delta(s.nu, DeltaReport::Endpoint::Zero, DeltaReport::Mode::Sup, 2.0);
    if (is_infinite_length(L))
        s.hypotheses.nu_delta_inf_infinity =
            check_delta(s.nu, DeltaReport::Endpoint::Infinity, DeltaReport::Mode::Inf, 2.0);
    return s;
}

OperatorSpec OperatorSpec::make_H(Weight u, Weight v, Bijection nu, double L) {
    OperatorSpec s = make_R(std::move(u), std::move(v), std::move(nu), L);
    s.kind = Kind::H;
    return s;
}

double apply_R(const OperatorSpec& spec, const StepFunction& g, double t) {
    if (!(t > 0.0) || (!is_infinite_length(spec.L) && t >= spec.L))
        throw DomainError("apply_R: t outside (0, L)");
    double x = spec.nu(t);
    double inner = 0.0;
    for (int i = 0; i < g.cell_count(); ++i) {
        double l = g.edge(i), r = std::min(g.edge(i + 1), x);
        if (r <= l) break;
        if (g.value(i) > 0.0) inner += g.value(i) * integrate(spec.u, l, r);
    }
    return spec.v(t) * inner;
}

double apply_H(const OperatorSpec& spec, const StepFunction& g, double t) {
    if (!(t > 0.0) || (!is_infinite_length(spec.L) && t >= spec.L))
        throw DomainError("apply_H: t outside (0, L)");
    double x = spec.nu(t);
    double tail = 0.0;
    for (int i = 0; i < g.cell_count(); ++i) {
        double l = std::max(g.edge(i), x), r = g.edge(i + 1);
        if (r <= l) continue;
        if (g.value(i) > 0.0) tail += g.value(i) * integrate(spec.v, l, r);
    }
    return spec.u(t) * tail;
}

namespace {

Monotonicity effective_monotonicity(const Weight& phi) {
    Monotonicity m = phi.monotonicity();
    if (m == Monotonicity::None)
        if (auto pp = phi.as_pure_power())
            m = pp->a <= 0.0 ? Monotonicity::Nonincreasing : Monotonicity::Nondecreasing;
    return m;
}

// sup of phi over [lo, hi)
double phi_sup(const Weight& phi, double lo, double hi) {
    Monotonicity m = effective_monotonicity(phi);
    if (m == Monotonicity::Nondecreasing) return phi(hi);
    if (m == Monotonicity::Nonincreasing) return phi(lo > 0.0 ? lo : hi * 1e-15);
    double s = 0.0;
    for (int k = 0; k <= 256; ++k) {
        double p = lo + (hi - lo) * k / 256.0;
        if (!(p > 0.0)) continue;
        s = std::max(s, phi(std::min(p, hi * (1.0 - 1e-15))));
    }
    return s;
}

}  // namespace

StepFunction suffix_sup_profile(const Weight& phi, const StepFunction& fstar, double L) {
    // S(t) = sup_{s in [t,L)} phi(s) f*(s); constant per cell of f* once the
    // per-cell sup of phi·value is known, then a running suffix max
    int n = fstar.cell_count();
    std::vector<double> cell_sup(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double y = fstar.value(i);
        if (y <= 0.0) continue;
        cell_sup[static_cast<size_t>(i)] = y * phi_sup(phi, fstar.edge(i), fstar.edge(i + 1));
    }
    double run = 0.0;
    std::vector<double> values(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        run = std::max(run, cell_sup[static_cast<size_t>(i)]);
        values[static_cast<size_t>(i)] = run;
    }
    return StepFunction::from_grid(fstar.edges(), values, L);
}

double apply_T(const Weight& phi, const StepFunction& f, double t, double L) {
    if (!(t > 0.0) || (!is_infinite_length(L) && t >= L))
        throw DomainError("apply_T: t outside (0, L)");
    StepFunction fstar = f.is_nonincreasing() ? f : f.rearrange();
    if (phi.monotonicity() == Monotonicity::Nonincreasing) return fstar(t);
    double best = 0.0;
    for (int i = 0; i < fstar.cell_count(); ++i) {
        double hi = fstar.edge(i + 1);
        if (hi <= t) continue;
        double y = fstar.value(i);
        if (y > 0.0) best = std::max(best, y * phi_sup(phi, std::max(fstar.edge(i), t), hi));
    }
    return best / phi(t);
}

StepFunction dilate(const StepFunction& f, double a) {
    if (!(a > 0.0)) throw DomainError("dilate: a must be positive");
    double L = f.domain_length();
    std::vector<StepFunction::Cell> cells;
    for (int i = 0; i < f.cell_count(); ++i) {
        double l = f.edge(i) * a, r = f.edge(i + 1) * a;
        if (!is_infinite_length(L)) {
            r = std::min(r, L);
            if (l >= L) break;
        }
        if (r > l && f.value(i) > 0.0) cells.push_back({l, r, f.value(i)});
    }
    return StepFunction::from_cells(std::move(cells), L);
}

ComposeResult compose_RR(const OperatorSpec& outer, const OperatorSpec& inner,
                         const StepFunction& f, int grid_points) {
    StepFunction fstar = f.rearrange();
    if (fstar.is_zero()) return {StepFunction::zero(inner.L), grid_points};
    double hi = is_infinite_length(inner.L) ? std::max(1e6, fstar.support_bound() * 1e4)
                                            : inner.L;
    auto inner_fn = [&](double s) { return apply_R(inner, fstar, s); };
    StepFunction sampled = sample_to_step(inner_fn, hi * 1e-9, hi * (1.0 - 1e-12),
                                          grid_points, inner.L);
    StepFunction rearranged = sampled.rearrange();
    auto outer_fn = [&](double t) { return apply_R(outer, rearranged, t); };
    StepFunction out = sample_to_step(outer_fn, hi * 1e-9, hi * (1.0 - 1e-12),
                                      grid_points, outer.L);
    return {out, grid_points};
}

std::vector<double> operator_breaks(const OperatorSpec& spec, const StepFunction& g) {
    std::vector<double> breaks;
    double L = spec.L;
    for (int i = 0; i <= g.cell_count(); ++i) {
        double e = g.edge(i);
        if (!(e > 0.0)) continue;
        if (!is_infinite_length(L) && e >= L) continue;
        breaks.push_back(spec.nu.inverse(e));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

namespace {

struct PowerTriple {
    PowerLogWeight u, v;
    Bijection::PowerForm nu;
};

std::optional<PowerTriple> power_forms(const OperatorSpec& spec) {
    auto pu = spec.u.as_pure_power();
    auto pv = spec.v.as_pure_power();
    auto pn = spec.nu.as_power();
    if (pu && pv && pn) return PowerTriple{*pu, *pv, *pn};
    return std::nullopt;
}

// pieces of (lo, hi) split at the nu-pullbacks of the edges of g
std::vector<double> pullback_pieces(const OperatorSpec& spec, const StepFunction& g,
                                    double lo, double hi) {
    std::vector<double> cuts{lo, hi};
    for (double b : operator_breaks(spec, g))
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

}  // namespace

double pairing_f_Rg(const StepFunction& f, const OperatorSpec& spec, const StepFunction& g) {
    auto pt = power_forms(spec);
    double total = 0.0;
    // inner cumulative ∫₀^{edge_i} g·u at g's edges
    std::vector<double> Ucum(static_cast<size_t>(g.cell_count()) + 1, 0.0);
    for (int i = 0; i < g.cell_count(); ++i) {
        double add = g.value(i) > 0.0 ? g.value(i) * integrate(spec.u, g.edge(i), g.edge(i + 1))
                                      : 0.0;
        Ucum[static_cast<size_t>(i) + 1] = Ucum[static_cast<size_t>(i)] + add;
    }
    for (int fc = 0; fc < f.cell_count(); ++fc) {
        double fv = f.value(fc);
        if (fv <= 0.0) continue;
        auto cuts = pullback_pieces(spec, g, f.edge(fc), f.edge(fc + 1));
        for (size_t k = 0; k + 1 < cuts.size(); ++k) {
            double p = cuts[k], q = cuts[k + 1];
            double xm = spec.nu(0.5 * (p + q));
            // active g-cell at xm (or fully past the support)
            int j = g.cell_count();
            for (int i = 0; i < g.cell_count(); ++i)
                if (xm < g.edge(i + 1)) {
                    j = i;
                    break;
                }
            if (j >= g.cell_count() || g.value(j) == 0.0) {
                // G(nu(t)) constant on this piece
                double G = j >= g.cell_count() ? Ucum.back() : Ucum[static_cast<size_t>(j)];
                if (G != 0.0) total += fv * G * integrate(spec.v, p, q);
                continue;
            }
            double gl = g.edge(j);
            if (pt) {
                // G(x) = C + gv·cu·(x^{eu} - gl^{eu})/eu with eu = au+1
                double eu = pt->u.a + 1.0;
                if (eu <= 0.0) throw DivergenceError("pairing_f_Rg: non-integrable u head");
                double gv = g.value(j);
                double C = Ucum[static_cast<size_t>(j)] -
                           gv * pt->u.c * std::pow(gl, eu) / eu;
                // term = fv·[C·∫v + gv·cu/eu·∫ v·(k t^alpha)^{eu}]
                total += fv * C * int_pow(pt->v.c, pt->v.a, p, q);
                total += fv * g.value(j) * pt->u.c / eu *
                         int_pow(pt->v.c * std::pow(pt->nu.k, eu), pt->v.a + pt->nu.alpha * eu,
                                 p, q);
            } else {
                auto integrand = [&](double t) { return fv * apply_R(spec, g, t); };
                total += p == 0.0 ? head_integral_adaptive(integrand, q, 1e-11)
                                  : adaptive_simpson(integrand, p, q, 1e-11);
            }
        }
    }
    return total;
}

double pairing_g_Hf(const StepFunction& g, const OperatorSpec& spec, const StepFunction& f) {
    auto pt = power_forms(spec);
    double L = spec.L;
    // tail cumulative: W(x) = ∫_x^L f·v at f's edges. The head edge may be
    // +inf (v not integrable at 0) without spoiling the pairing, which only
    // needs W strictly inside cells.
    int nf = f.cell_count();
    std::vector<double> Wedge(static_cast<size_t>(nf) + 1, 0.0);
    for (int i = nf - 1; i >= 0; --i) {
        double add = 0.0;
        if (f.value(i) > 0.0) {
            try {
                add = f.value(i) * integrate(spec.v, f.edge(i), f.edge(i + 1));
            } catch (const DivergenceError&) {
                add = kInf;  // only possible for the head cell at edge 0
            }
        }
        Wedge[static_cast<size_t>(i)] = Wedge[static_cast<size_t>(i) + 1] + add;
    }
    double total = 0.0;
    for (int gc = 0; gc < g.cell_count(); ++gc) {
        double gv = g.value(gc);
        if (gv <= 0.0) continue;
        double glo = g.edge(gc);
        double ghi = g.edge(gc + 1);
        if (!is_infinite_length(L)) ghi = std::min(ghi, L * (1.0 - 1e-15));
        if (ghi <= glo) continue;
        auto cuts = pullback_pieces(spec, f, glo, ghi);
        for (size_t k = 0; k + 1 < cuts.size(); ++k) {
            double p = cuts[k], q = cuts[k + 1];
            double xm = spec.nu(0.5 * (p + q));
            int j = nf;
            for (int i = 0; i < nf; ++i)
                if (xm < f.edge(i + 1)) {
                    j = i;
                    break;
                }
            if (j >= nf || f.value(j) == 0.0) {
                double W = j >= nf ? 0.0 : Wedge[static_cast<size_t>(j)];
                // careful: if x lands in a zero cell, W(x) = tail beyond the
                // cell's right edge
                if (j < nf && f.value(j) == 0.0) W = Wedge[static_cast<size_t>(j) + 1];
                if (W != 0.0) total += gv * W * integrate(spec.u, p, q);
                continue;
            }
            double fr = f.edge(j + 1);
            double fv = f.value(j);
            if (pt) {
                // W(x) = W(fr-tail) + fv·(Av(fr) − Av(x)), Av antiderivative of v
                double ev = pt->v.a + 1.0;
                double K;
                if (ev == 0.0) {
                    // Av(x) = cv·ln x
                    K = Wedge[static_cast<size_t>(j) + 1] + fv * pt->v.c * std::log(fr);
                    total += gv * K * int_pow(pt->u.c, pt->u.a, p, q);
                    // −fv·cv·∫ u(t)·ln(k t^alpha) dt
                    double lnk = std::log(pt->nu.k);
                    total -= gv * fv * pt->v.c *
                             (lnk * int_pow(pt->u.c, pt->u.a, p, q) +
                              pt->nu.alpha * int_pow_log(pt->u.c, pt->u.a, p, q));
                } else {
                    K = Wedge[static_cast<size_t>(j) + 1] + fv * pt->v.c * std::pow(fr, ev) / ev;
                    total += gv * K * int_pow(pt->u.c, pt->u.a, p, q);
                    total -= gv * fv * pt->v.c / ev *
                             int_pow(pt->u.c * std::pow(pt->nu.k, ev),
                                     pt->u.a + pt->nu.alpha * ev, p, q);
                }
            } else {
                auto integrand = [&](double t) { return gv * apply_H(spec, f, t); };
                total += p == 0.0 ? head_integral_adaptive(integrand, q, 1e-11)
                                  : adaptive_simpson(integrand, p, q, 1e-11);
            }
        }
    }
    return total;
}

double pairing_gstar_Hfstar(const StepFunction& g, const OperatorSpec& H,
                            const StepFunction& f) {
    return pairing_g_Hf(g.rearrange(), H, f.rearrange());
}

}  // namespace rikit
