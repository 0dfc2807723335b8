#include "rikit/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace rikit {

struct SpaceSpec::Node {
    struct Lebesgue {
        double p;
        double L;
    };
    struct LambdaOne {
        Weight v;
        double L;
    };
    struct Marcinkiewicz {
        Weight psi;
        double L;
    };
    struct Intersection {
        SpaceSpec lhs, rhs;
    };
    struct Sum {
        SpaceSpec lhs, rhs;
    };
    std::variant<Lebesgue, LambdaOne, Marcinkiewicz, Intersection, Sum> v;
};

SpaceSpec SpaceSpec::lebesgue(double p, double L) {
    if (!(p >= 1.0)) throw DomainError("lebesgue: p must be in [1, inf]");
    SpaceSpec s;
    s.node_ = std::make_shared<Node>(Node{Node::Lebesgue{p, L}});
    return s;
}

SpaceSpec SpaceSpec::lambda1(Weight v, double L) {
    SpaceSpec s;
    s.node_ = std::make_shared<Node>(Node{Node::LambdaOne{std::move(v), L}});
    return s;
}

SpaceSpec SpaceSpec::marcinkiewicz(Weight psi, double L) {
    SpaceSpec s;
    s.node_ = std::make_shared<Node>(Node{Node::Marcinkiewicz{std::move(psi), L}});
    return s;
}

SpaceSpec SpaceSpec::intersection(SpaceSpec lhs, SpaceSpec rhs) {
    SpaceSpec s;
    s.node_ = std::make_shared<Node>(Node{Node::Intersection{std::move(lhs), std::move(rhs)}});
    return s;
}

SpaceSpec SpaceSpec::sum(SpaceSpec lhs, SpaceSpec rhs) {
    SpaceSpec s;
    s.node_ = std::make_shared<Node>(Node{Node::Sum{std::move(lhs), std::move(rhs)}});
    return s;
}

double SpaceSpec::domain_length() const {
    const Node& n = *node_;
    if (auto* l = std::get_if<Node::Lebesgue>(&n.v)) return l->L;
    if (auto* l = std::get_if<Node::LambdaOne>(&n.v)) return l->L;
    if (auto* m = std::get_if<Node::Marcinkiewicz>(&n.v)) return m->L;
    if (auto* i = std::get_if<Node::Intersection>(&n.v)) return i->lhs.domain_length();
    return std::get<Node::Sum>(n.v).lhs.domain_length();
}

std::optional<double> SpaceSpec::lebesgue_p() const {
    if (auto* l = std::get_if<Node::Lebesgue>(&node_->v)) return l->p;
    return std::nullopt;
}

bool SpaceSpec::admissible(std::string* why) const {
    const Node& n = *node_;
    if (std::get_if<Node::Lebesgue>(&n.v)) return true;
    if (auto* l = std::get_if<Node::LambdaOne>(&n.v)) {
        // V(t)/t <= C·V(s)/s for s < t on the probe grid
        auto grid = probe_grid(l->L);
        double U = 0.0, prev = 0.0;
        double min_ratio = kInf, worst = 0.0;
        try {
            for (double t : grid) {
                U += integrate(l->v, prev, t);
                prev = t;
                double r = U / t;
                min_ratio = std::min(min_ratio, r);
                worst = std::max(worst, r / min_ratio);
            }
        } catch (const DivergenceError&) {
            if (why) *why = "V diverges";
            return false;
        }
        if (worst >= 1e6) {
            if (why) *why = "V(t)/t not almost-decreasing (probe constant >= 1e6)";
            return false;
        }
        return true;
    }
    if (auto* m = std::get_if<Node::Marcinkiewicz>(&n.v)) {
        if (!check_quasiconcave(m->psi, m->L)) {
            if (why) *why = "psi is not quasiconcave";
            return false;
        }
        return true;
    }
    if (auto* i = std::get_if<Node::Intersection>(&n.v))
        return i->lhs.admissible(why) && i->rhs.admissible(why);
    auto& s = std::get<Node::Sum>(n.v);
    return s.lhs.admissible(why) && s.rhs.admissible(why);
}

std::string SpaceSpec::describe() const {
    const Node& n = *node_;
    if (auto* l = std::get_if<Node::Lebesgue>(&n.v))
        return std::isinf(l->p) ? "Linf" : "L" + std::to_string(l->p);
    if (std::get_if<Node::LambdaOne>(&n.v)) return "Lambda1";
    if (std::get_if<Node::Marcinkiewicz>(&n.v)) return "M_psi";
    if (auto* i = std::get_if<Node::Intersection>(&n.v))
        return i->lhs.describe() + " ^ " + i->rhs.describe();
    auto& s = std::get<Node::Sum>(n.v);
    return s.lhs.describe() + " + " + s.rhs.describe();
}

namespace {

double lambda1_norm(const Weight& v, const StepFunction& f) {
    if (f.is_zero()) return 0.0;
    StepFunction r = f.rearrange();
    double total = 0.0;
    try {
        for (int i = 0; i < r.cell_count(); ++i)
            if (r.value(i) > 0.0)
                total += r.value(i) * integrate(v, r.edge(i), r.edge(i + 1));
    } catch (const DivergenceError&) {
        return kInf;  // f*(0+) > 0 against a non-integrable head: f outside the space
    }
    return total;
}

double marcinkiewicz_norm(const Weight& psi, const StepFunction& f, double L) {
    if (f.is_zero()) return 0.0;
    StepFunction r = f.rearrange();
    std::vector<double> ts = probe_grid(L);
    for (int i = 0; i < r.cell_count(); ++i) {
        double l = r.edge(i), rr = r.edge(i + 1);
        if (l > 0.0) ts.push_back(l);
        ts.push_back(rr);
        // light per-cell refinement
        for (int k = 1; k < 16; ++k)
            ts.push_back(l + (rr - l) * k / 16.0);
    }
    double best = 0.0;
    for (double t : ts) {
        if (!(t > 0.0) || t >= L) continue;
        best = std::max(best, psi(t) * r.head_integral(t) / t);
    }
    return best;
}

double sum_norm(const SpaceSpec& A, const SpaceSpec& B, const StepFunction& f) {
    if (f.is_zero()) return 0.0;
    // clipping decompositions f = (f-c)₊ + min(f,c); upper bound on the
    // true infimum, both assignment orders tried
    std::vector<double> cs{0.0};
    for (auto& [v, m] : f.distribution()) cs.push_back(v);
    double best = kInf;
    for (double c : cs) {
        StepFunction peak = f.excess_over(c);
        StepFunction flat = f.clip_above(c);
        best = std::min(best, norm(A, peak) + norm(B, flat));
        best = std::min(best, norm(A, flat) + norm(B, peak));
    }
    return best;
}

}  // namespace

double norm(const SpaceSpec& X, const StepFunction& f) {
    const SpaceSpec::Node& n = X.node();
    using N = SpaceSpec::Node;
    if (auto* l = std::get_if<N::Lebesgue>(&n.v)) {
        if (std::isinf(l->p)) return f.max_value();
        double s = 0.0;
        for (int i = 0; i < f.cell_count(); ++i)
            s += std::pow(f.value(i), l->p) * (f.edge(i + 1) - f.edge(i));
        return std::pow(s, 1.0 / l->p);
    }
    if (auto* l = std::get_if<N::LambdaOne>(&n.v)) return lambda1_norm(l->v, f);
    if (auto* m = std::get_if<N::Marcinkiewicz>(&n.v))
        return marcinkiewicz_norm(m->psi, f, m->L);
    if (auto* i = std::get_if<N::Intersection>(&n.v))
        return std::max(norm(i->lhs, f), norm(i->rhs, f));
    auto& s = std::get<N::Sum>(n.v);
    return sum_norm(s.lhs, s.rhs, f);
}

double fundamental_function(const SpaceSpec& X, double t) {
    if (t == 0.0) return 0.0;
    double L = X.domain_length();
    if (!(t > 0.0) || (!is_infinite_length(L) && t > L))
        throw DomainError("fundamental_function: t outside [0, L)");
    return norm(X, StepFunction::indicator(0.0, t, L));
}

SpaceSpec associate_space(const SpaceSpec& X) {
    const SpaceSpec::Node& n = X.node();
    using N = SpaceSpec::Node;
    if (auto* l = std::get_if<N::Lebesgue>(&n.v)) {
        if (std::isinf(l->p)) return SpaceSpec::lebesgue(1.0, l->L);
        if (l->p == 1.0) return SpaceSpec::lebesgue(kInf, l->L);
        return SpaceSpec::lebesgue(l->p / (l->p - 1.0), l->L);
    }
    if (auto* l = std::get_if<N::LambdaOne>(&n.v)) {
        // (Λ¹_ξ)' = M_ψ with ψ(t) = t / ∫₀ᵗ ξ
        Weight psi = Weight::product(
            Weight::power(1.0, 1.0),
            Weight::reciprocal_primitive(l->v, Bijection::identity(l->L)));
        return SpaceSpec::marcinkiewicz(std::move(psi), l->L);
    }
    if (std::get_if<N::Marcinkiewicz>(&n.v))
        throw UnsupportedDualError("no analytic associate for a Marcinkiewicz primal");
    if (auto* i = std::get_if<N::Intersection>(&n.v))
        return SpaceSpec::sum(associate_space(i->lhs), associate_space(i->rhs));
    auto& s = std::get<N::Sum>(n.v);
    return SpaceSpec::intersection(associate_space(s.lhs), associate_space(s.rhs));
}

namespace {

// partition for candidate g's: edges of f* refined geometrically toward 0
std::vector<double> candidate_edges(const StepFunction& fstar) {
    double T = fstar.support_bound();
    std::vector<double> edges{0.0};
    auto geo = geometric_grid(T * 1e-9, T, 33);
    edges.insert(edges.end(), geo.begin(), geo.end());
    for (int i = 1; i <= fstar.cell_count(); ++i) edges.push_back(fstar.edge(i));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

StepFunction normalized(const SpaceSpec& X, const StepFunction& g) {
    double n = norm(X, g);
    if (!(n > 0.0) || !std::isfinite(n)) return StepFunction::zero(g.domain_length());
    return g.scaled(1.0 / n);
}

}  // namespace

AssociateLower associate_norm_lower(const SpaceSpec& X, const StepFunction& f, int budget) {
    AssociateLower out;
    double L = X.domain_length();
    out.witness = StepFunction::zero(L);
    if (f.is_zero()) {
        out.lower = 0.0;
        try {
            out.exact = norm(associate_space(X), f);
        } catch (const UnsupportedDualError&) {
        }
        return out;
    }
    StepFunction fstar = f.rearrange();
    try {
        out.exact = norm(associate_space(X), f);
    } catch (const UnsupportedDualError&) {
    }

    auto consider = [&](const StepFunction& g) {
        StepFunction gn = normalized(X, g);
        if (gn.is_zero()) return;
        double val = StepFunction::inner_product(fstar, gn.rearrange());
        if (val > out.lower) {
            out.lower = val;
            out.witness = gn;
        }
    };

    // seeds: indicators, f*-shape, constant, dual-exponent shape for L^p
    std::vector<double> edges = candidate_edges(fstar);
    for (size_t i = 1; i < edges.size(); ++i)
        consider(StepFunction::indicator(0.0, edges[i], L));
    consider(fstar);
    if (auto p = X.lebesgue_p(); p && std::isfinite(*p) && *p > 1.0) {
        double q = 1.0 / (*p - 1.0);  // g = (f*)^{p'-1} = (f*)^{1/(p-1)}
        std::vector<StepFunction::Cell> cells;
        for (int i = 0; i < fstar.cell_count(); ++i)
            if (fstar.value(i) > 0.0)
                cells.push_back({fstar.edge(i), fstar.edge(i + 1), std::pow(fstar.value(i), q)});
        if (!cells.empty()) consider(StepFunction::from_cells(std::move(cells), L));
    }

    // coordinate ascent on the candidate partition starting from the best seed
    if (budget > 0 && !out.witness.is_zero()) {
        std::vector<double> vals(edges.size() - 1);
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            vals[i] = out.witness(0.5 * (edges[i] + edges[i + 1]));
        auto build = [&](const std::vector<double>& v) {
            return StepFunction::from_grid(edges, v, L);
        };
        double step = 1.6;
        int iters = 0;
        while (iters < budget) {
            bool improved = false;
            for (size_t i = 0; i + 1 < edges.size() && iters < budget; ++i) {
                for (double factor : {step, 1.0 / step}) {
                    ++iters;
                    std::vector<double> v = vals;
                    v[i] = std::max(v[i] * factor, 1e-12 * (out.witness.max_value() + 1e-300));
                    StepFunction cand = build(v);
                    double before = out.lower;
                    consider(cand);
                    if (out.lower > before) {
                        vals = v;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                step = std::sqrt(step);
                if (step < 1.002) break;
            }
        }
    }
    return out;
}

double k_functional_formula(const StepFunction& f, double t, const Weight& xi) {
    if (!(t > 0.0)) throw DomainError("k_functional: t must be positive");
    double L = f.domain_length();
    double Xi_L = kInf;
    if (!is_infinite_length(L)) Xi_L = primitive(xi, L);
    if (t >= Xi_L) throw DomainError("k_functional: t beyond the K-scale endpoint");
    // invert Ξ at t
    double x;
    if (auto pp = xi.as_pure_power()) {
        double e = pp->a + 1.0;
        x = std::pow(t * e / pp->c, 1.0 / e);
    } else {
        double lo = 0.0, hi = is_infinite_length(L) ? 1.0 : L;
        if (is_infinite_length(L))
            while (primitive(xi, hi) < t && hi < 1e300) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            double mid = lo == 0.0 ? hi * 0.5 : 0.5 * (lo + hi);
            if (primitive(xi, mid) < t)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-14 * hi) break;
        }
        x = 0.5 * (lo + hi);
    }
    StepFunction r = f.rearrange();
    double s = 0.0;
    for (int i = 0; i < r.cell_count(); ++i) {
        double l = r.edge(i), rr = std::min(r.edge(i + 1), x);
        if (rr <= l) break;
        s += r.value(i) * integrate(xi, l, rr);
    }
    return s;
}

double k_functional_oracle(const StepFunction& f, double t, const Weight& xi) {
    if (!(t > 0.0)) throw DomainError("k_functional: t must be positive");
    if (f.is_zero()) return 0.0;
    StepFunction r = f.rearrange();
    double top = r.max_value();
    std::vector<double> cs{0.0, top};
    for (auto& [v, m] : r.distribution()) cs.push_back(v);
    for (int k = 1; k < 64; ++k) cs.push_back(top * k / 64.0);
    double L = f.domain_length();
    SpaceSpec lam = SpaceSpec::lambda1(xi, L);
    double best = kInf;
    for (double c : cs) {
        double val = norm(lam, r.excess_over(c)) + t * std::min(c, top);
        best = std::min(best, val);
    }
    return best;
}

StepFunction sample_to_step(const std::function<double(double)>& F, double lo, double hi,
                            int n, double domain_length) {
    std::vector<double> grid = geometric_grid(lo, hi, n);
    std::vector<double> edges{0.0};
    std::vector<double> values;
    double prev = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double mid = prev == 0.0 ? 0.5 * grid[i] : std::sqrt(prev * grid[i]);
        double v = F(mid);
        edges.push_back(grid[i]);
        values.push_back(std::max(v, 0.0));
        prev = grid[i];
    }
    return StepFunction::from_grid(std::move(edges), std::move(values), domain_length);
}

double lebesgue_norm_adaptive(const std::function<double(double)>& F, double p, double L,
                              std::vector<double> breaks) {
    double hi = is_infinite_length(L) ? 1e9 : L;
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double b) { return !(b > 0.0) || b > hi; }),
                 breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (std::isinf(p)) {
        double best = 0.0;
        double lo = std::min(1e-12, breaks.front() * 1e-3);
        for (double t : geometric_grid(lo, hi * (1.0 - 1e-12), 4096))
            best = std::max(best, F(t));
        for (double b : breaks)
            if (b < hi) best = std::max(best, F(b * (1.0 + 1e-13)));
        return best;
    }
    auto Fp = [&](double t) { return std::pow(F(t), p); };
    double total = head_integral_adaptive(Fp, breaks.front(), 1e-11);
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        total += adaptive_simpson(Fp, breaks[i], breaks[i + 1], 1e-11);
    return std::pow(total, 1.0 / p);
}

double norm_of_function(const SpaceSpec& X, const std::function<double(double)>& F,
                        double hi, int resolution) {
    double L = X.domain_length();
    double top = is_infinite_length(L) ? hi : std::min(hi, L);
    StepFunction s = sample_to_step(F, top * 1e-9, top, resolution, L);
    return norm(X, s);
}

}  // namespace rikit
