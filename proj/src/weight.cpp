#include "rikit/weight.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace rikit {

double iterated_log(int j, double t) {
    double x = 1.0 + std::abs(std::log(t));
    for (int i = 1; i < j; ++i) x = 1.0 + std::log(x);
    return x;
}

double PowerLogWeight::eval(double t) const {
    double v = c * std::pow(t, a);
    for (size_t j = 0; j < b.size(); ++j)
        if (b[j] != 0.0) v *= std::pow(iterated_log(static_cast<int>(j) + 1, t), b[j]);
    return v;
}

bool PowerLogWeight::head_integrable() const {
    if (a > -1.0) return true;
    if (a < -1.0) return false;
    // a == -1: decided by the leading log exponent
    for (double bj : b) {
        if (bj < -1.0) return true;
        if (bj > -1.0) return false;
        // bj == -1: fall through to the next iterated log
    }
    return false;  // plain 1/t (possibly times 1/ℓ_j's) diverges
}

// ---------------------------------------------------------------------------
// Bijection

struct Bijection::Node {
    struct Power {
        double alpha;
        double L;
    };
    struct Composite {
        Bijection outer;
        Bijection inner;
    };
    struct Numeric {
        std::function<double(double)> fn;
        double L;
    };
    std::variant<Power, Composite, Numeric> v;
};

Bijection Bijection::power(double alpha, double L) {
    if (!(alpha > 0.0)) throw DomainError("bijection power: alpha must be positive");
    Bijection b;
    b.node_ = std::make_shared<Node>(Node{Node::Power{alpha, L}});
    return b;
}

Bijection Bijection::composite(Bijection outer, Bijection inner) {
    Bijection b;
    b.node_ = std::make_shared<Node>(Node{Node::Composite{std::move(outer), std::move(inner)}});
    return b;
}

Bijection Bijection::numeric(std::function<double(double)> fn, double L) {
    Bijection b;
    b.node_ = std::make_shared<Node>(Node{Node::Numeric{std::move(fn), L}});
    return b;
}

double Bijection::operator()(double t) const {
    const Node& n = *node_;
    if (auto* p = std::get_if<Node::Power>(&n.v)) {
        if (is_infinite_length(p->L) || p->L == 1.0) return std::pow(t, p->alpha);
        return p->L * std::pow(t / p->L, p->alpha);
    }
    if (auto* c = std::get_if<Node::Composite>(&n.v)) return c->outer(c->inner(t));
    return std::get<Node::Numeric>(n.v).fn(t);
}

double Bijection::domain_length() const {
    const Node& n = *node_;
    if (auto* p = std::get_if<Node::Power>(&n.v)) return p->L;
    if (auto* c = std::get_if<Node::Composite>(&n.v)) return c->outer.domain_length();
    return std::get<Node::Numeric>(n.v).L;
}

std::optional<Bijection::PowerForm> Bijection::as_power() const {
    const Node& n = *node_;
    if (auto* p = std::get_if<Node::Power>(&n.v)) {
        if (is_infinite_length(p->L) || p->L == 1.0) return PowerForm{1.0, p->alpha};
        return PowerForm{std::pow(p->L, 1.0 - p->alpha), p->alpha};
    }
    if (auto* c = std::get_if<Node::Composite>(&n.v)) {
        auto o = c->outer.as_power();
        auto i = c->inner.as_power();
        if (!o || !i) return std::nullopt;
        // k_o (k_i t^{a_i})^{a_o}
        return PowerForm{o->k * std::pow(i->k, o->alpha), o->alpha * i->alpha};
    }
    return std::nullopt;
}

double Bijection::inverse(double y) const {
    double L = domain_length();
    if (!(y > 0.0) || y >= L) {
        if (!(y > 0.0) || !is_infinite_length(L)) throw DomainError("bijection inverse: y outside (0, L)");
    }
    const Node& n = *node_;
    if (auto* p = std::get_if<Node::Power>(&n.v)) {
        if (is_infinite_length(p->L) || p->L == 1.0) return std::pow(y, 1.0 / p->alpha);
        return p->L * std::pow(y / p->L, 1.0 / p->alpha);
    }
    if (auto* c = std::get_if<Node::Composite>(&n.v))
        return c->inner.inverse(c->outer.inverse(y));
    const auto& num = std::get<Node::Numeric>(n.v);
    // bracket then bisect; monotonicity is the constructor's contract
    double lo = std::min(y, 1.0), hi = std::min(std::max(y, 1.0), is_infinite_length(L) ? 1e300 : L);
    while (num.fn(lo) > y && lo > 1e-300) lo *= 0.5;
    double cap = is_infinite_length(L) ? 1e300 : L * (1.0 - 1e-15);
    while (num.fn(hi) < y && hi < cap) hi = std::min(hi * 2.0, cap);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (num.fn(mid) < y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Weight

struct Weight::Node {
    struct Tabulated {
        StepFunction f;
    };
    struct ReciprocalPrimitive {
        Weight xi;
        Bijection nu;
    };
    struct Product {
        Weight lhs;
        Weight rhs;
    };
    struct Custom {
        std::function<double(double)> fn;
        std::string label;
    };
    std::variant<PowerLogWeight, Tabulated, ReciprocalPrimitive, Product, Custom> v;
    Monotonicity mono = Monotonicity::None;
};

Weight Weight::power_log(PowerLogWeight w) {
    if (!(w.c > 0.0)) throw DomainError("power_log: c must be positive");
    Weight out;
    auto n = std::make_shared<Node>();
    n->v = w;
    if (w.pure_power()) n->mono = w.a <= 0.0 ? Monotonicity::Nonincreasing : Monotonicity::Nondecreasing;
    out.node_ = n;
    return out;
}

Weight Weight::tabulated(StepFunction f) {
    Weight out;
    auto n = std::make_shared<Node>();
    n->v = Node::Tabulated{std::move(f)};
    out.node_ = n;
    return out;
}

Weight Weight::reciprocal_primitive(Weight xi, Bijection nu) {
    Weight out;
    auto n = std::make_shared<Node>();
    n->v = Node::ReciprocalPrimitive{std::move(xi), std::move(nu)};
    // reciprocal of a nondecreasing primitive
    n->mono = Monotonicity::Nonincreasing;
    out.node_ = n;
    return out;
}

Weight Weight::product(Weight lhs, Weight rhs) {
    Weight out;
    auto n = std::make_shared<Node>();
    Monotonicity ml = lhs.monotonicity(), mr = rhs.monotonicity();
    if (ml == mr && ml != Monotonicity::None) n->mono = ml;
    n->v = Node::Product{std::move(lhs), std::move(rhs)};
    out.node_ = n;
    return out;
}

Weight Weight::custom(std::function<double(double)> fn, std::string label, Monotonicity m) {
    Weight out;
    auto n = std::make_shared<Node>();
    n->v = Node::Custom{std::move(fn), std::move(label)};
    n->mono = m;
    out.node_ = n;
    return out;
}

double Weight::operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("weight eval: t must be positive");
    const Node& n = *node_;
    if (auto* p = std::get_if<PowerLogWeight>(&n.v)) return p->eval(t);
    if (auto* tb = std::get_if<Node::Tabulated>(&n.v)) return tb->f(t);
    if (auto* r = std::get_if<Node::ReciprocalPrimitive>(&n.v))
        return 1.0 / primitive(r->xi, r->nu.inverse(t));
    if (auto* pr = std::get_if<Node::Product>(&n.v)) return pr->lhs(t) * pr->rhs(t);
    return std::get<Node::Custom>(n.v).fn(t);
}

Monotonicity Weight::monotonicity() const { return node_->mono; }

Weight Weight::with_monotonicity(Monotonicity m, double L) const {
    if (m != Monotonicity::None) {
        auto grid = probe_grid(L);
        double prev = (*this)(grid[0]);
        for (size_t i = 1; i < grid.size(); ++i) {
            double cur = (*this)(grid[i]);
            double slack = 1e-12 * std::max(std::abs(prev), std::abs(cur));
            if (m == Monotonicity::Nonincreasing && cur > prev + slack)
                throw DomainError("declared nonincreasing weight increases on probe grid");
            if (m == Monotonicity::Nondecreasing && cur < prev - slack)
                throw DomainError("declared nondecreasing weight decreases on probe grid");
            prev = cur;
        }
    }
    Weight out;
    auto n = std::make_shared<Node>(*node_);
    n->mono = m;
    out.node_ = n;
    return out;
}

std::optional<PowerLogWeight> Weight::as_power_log() const {
    const Node& n = *node_;
    if (auto* p = std::get_if<PowerLogWeight>(&n.v)) return *p;
    if (auto* pr = std::get_if<Node::Product>(&n.v)) {
        auto l = pr->lhs.as_power_log();
        auto r = pr->rhs.as_power_log();
        if (!l || !r) return std::nullopt;
        PowerLogWeight out{l->c * r->c, l->a + r->a, {}};
        size_t nb = std::max(l->b.size(), r->b.size());
        out.b.resize(nb, 0.0);
        for (size_t i = 0; i < nb; ++i)
            out.b[i] = (i < l->b.size() ? l->b[i] : 0.0) + (i < r->b.size() ? r->b[i] : 0.0);
        while (!out.b.empty() && out.b.back() == 0.0) out.b.pop_back();
        return out;
    }
    if (auto* r = std::get_if<Node::ReciprocalPrimitive>(&n.v)) {
        auto xi = r->xi.as_power_log();
        auto nu = r->nu.as_power();
        if (!xi || !xi->pure_power() || !nu || xi->a <= -1.0) return std::nullopt;
        // 1/Ξ(ν⁻¹(t)) with Ξ(s) = c s^{a+1}/(a+1), ν⁻¹(t) = (t/k)^{1/α}
        double e = (xi->a + 1.0) / nu->alpha;
        double coef = (xi->a + 1.0) / xi->c * std::pow(nu->k, e);
        return PowerLogWeight{coef, -e, {}};
    }
    return std::nullopt;
}

std::optional<PowerLogWeight> Weight::as_pure_power() const {
    auto pl = as_power_log();
    if (pl && pl->pure_power()) return pl;
    return std::nullopt;
}

std::string Weight::describe() const {
    const Node& n = *node_;
    if (auto* p = std::get_if<PowerLogWeight>(&n.v)) {
        std::string s = std::to_string(p->c) + "*t^" + std::to_string(p->a);
        for (size_t j = 0; j < p->b.size(); ++j)
            if (p->b[j] != 0.0)
                s += "*l" + std::to_string(j + 1) + "^" + std::to_string(p->b[j]);
        return s;
    }
    if (std::get_if<Node::Tabulated>(&n.v)) return "tabulated";
    if (std::get_if<Node::ReciprocalPrimitive>(&n.v)) return "reciprocal-primitive";
    if (auto* pr = std::get_if<Node::Product>(&n.v))
        return "(" + pr->lhs.describe() + ")*(" + pr->rhs.describe() + ")";
    return "custom:" + std::get<Node::Custom>(n.v).label;
}

// ---------------------------------------------------------------------------
// Integration

std::optional<bool> head_integrable_hint(const Weight& w) {
    if (auto pl = w.as_power_log()) return pl->head_integrable();
    const Weight::Node& n = w.node();
    if (std::get_if<Weight::Node::Tabulated>(&n.v)) return true;
    return std::nullopt;
}

double integrate(const Weight& w, double a, double b) {
    if (!(b > a)) return 0.0;
    if (a < 0.0) throw DomainError("integrate: negative lower limit");
    if (auto pp = w.as_pure_power()) {
        double e = pp->a;
        if (a == 0.0 && e <= -1.0) throw DivergenceError("divergent head integral of t^" + std::to_string(e));
        if (e == -1.0) return pp->c * std::log(b / a);
        return pp->c * (std::pow(b, e + 1.0) - (a == 0.0 ? 0.0 : std::pow(a, e + 1.0))) / (e + 1.0);
    }
    const Weight::Node& n = w.node();
    if (auto* tb = std::get_if<Weight::Node::Tabulated>(&n.v)) {
        const StepFunction& f = tb->f;
        double s = 0.0;
        for (int i = 0; i < f.cell_count(); ++i) {
            double l = std::max(a, f.edge(i)), r = std::min(b, f.edge(i + 1));
            if (r > l) s += f.value(i) * (r - l);
        }
        return s;
    }
    auto eval = [&w](double t) { return w(t); };
    if (a > 0.0) return adaptive_simpson(eval, a, b, 1e-10);
    if (auto hint = head_integrable_hint(w); hint && !*hint)
        throw DivergenceError("divergent head integral of " + w.describe());
    return head_integral_adaptive(eval, b, 1e-10);
}

double primitive(const Weight& w, double t) { return integrate(w, 0.0, t); }

// ---------------------------------------------------------------------------
// Checkers

DeltaReport check_delta(const Bijection& nu, DeltaReport::Endpoint endpoint,
                        DeltaReport::Mode mode, double theta) {
    if (!(theta > 1.0)) throw DomainError("check_delta: theta must exceed 1");
    double L = nu.domain_length();
    if (endpoint == DeltaReport::Endpoint::Infinity && !is_infinite_length(L))
        throw DomainError("check_delta: endpoint infinity needs L = infinity");
    DeltaReport rep;
    rep.endpoint = endpoint;
    rep.mode = mode;
    rep.theta = theta;
    if (auto p = nu.as_power()) {
        rep.estimate = std::pow(theta, p->alpha);
        rep.confidence = "exact";
        rep.verdict = mode == DeltaReport::Mode::Inf ? rep.estimate > 1.0 : true;
        return rep;
    }
    // probe 12 decades toward the endpoint; per decade keep the min (inf
    // mode) or max (sup mode), then stabilize with an A + B/d fit over the
    // last 3 decades (exact both for powers and for log-type growth)
    constexpr int kDecades = 12;
    std::vector<double> per_decade;
    for (int d = 1; d <= kDecades; ++d) {
        double base = endpoint == DeltaReport::Endpoint::Zero ? std::pow(10.0, -d)
                                                              : std::pow(10.0, d);
        double best = mode == DeltaReport::Mode::Inf ? kInf : 0.0;
        for (int i = 0; i < 64; ++i) {
            double t = base * std::pow(10.0, i / 64.0);
            if (endpoint == DeltaReport::Endpoint::Zero && !is_infinite_length(L) &&
                theta * t >= L)
                continue;
            double ratio = nu(theta * t) / nu(t);
            best = mode == DeltaReport::Mode::Inf ? std::min(best, ratio)
                                                  : std::max(best, ratio);
        }
        if (std::isfinite(best) && best > 0.0) per_decade.push_back(best);
    }
    if (per_decade.size() < 3) {
        rep.estimate = per_decade.empty() ? 1.0 : per_decade.back();
        rep.confidence = "probed";
        rep.verdict = false;
        return rep;
    }
    size_t m = per_decade.size();
    // least squares of r = A + B/d through the last three decades
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = m - 3; i < m; ++i) {
        double x = 1.0 / static_cast<double>(i + 1);
        double y = per_decade[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = 3.0 * sxx - sx * sx;
    double A = std::abs(denom) < 1e-30 ? per_decade.back() : (sy * sxx - sx * sxy) / denom;
    rep.estimate = A;
    rep.confidence = "probed";
    if (mode == DeltaReport::Mode::Inf)
        rep.verdict = A > 1.01;  // probe margin; exact branch handles powers
    else
        rep.verdict = std::isfinite(A) && per_decade.back() < 1e12;
    return rep;
}

AveragingReport check_averaging(const Weight& w, double L) {
    AveragingReport rep;
    if (auto pp = w.as_pure_power()) {
        double beta = pp->a + 1.0;
        if (beta <= 0.0) {
            rep.verdict = false;
            rep.confidence = "exact";
            rep.reason = "divergent primitive";
            return rep;
        }
        rep.constant_estimate = 1.0 / beta;
        rep.verdict = true;
        rep.confidence = "exact";
        return rep;
    }
    rep.grid = probe_grid(L);
    rep.confidence = "probed";
    double U = 0.0;
    double prev = 0.0;
    double worst = 0.0;
    try {
        for (double t : rep.grid) {
            U += integrate(w, prev, t);
            prev = t;
            double wt = w(t);
            if (!(wt > 0.0)) {
                rep.verdict = false;
                rep.reason = "weight vanishes on probe grid";
                return rep;
            }
            worst = std::max(worst, U / (t * wt));
        }
    } catch (const DivergenceError&) {
        rep.verdict = false;
        rep.reason = "divergent primitive";
        return rep;
    }
    rep.constant_estimate = worst;
    rep.verdict = std::isfinite(worst);
    return rep;
}

bool check_quasiconcave(const Weight& psi, double L) {
    auto grid = probe_grid(L);
    double prev = psi(grid[0]);
    double prev_ratio = prev / grid[0];
    for (size_t i = 1; i < grid.size(); ++i) {
        double cur = psi(grid[i]);
        double slack = 1e-12 * std::max(std::abs(prev), std::abs(cur));
        if (cur < prev - slack) return false;  // must be nondecreasing
        double ratio = cur / grid[i];
        double rslack = 1e-12 * std::max(std::abs(prev_ratio), std::abs(ratio));
        if (ratio > prev_ratio + rslack) return false;  // psi/t must be nonincreasing
        prev = cur;
        prev_ratio = ratio;
    }
    return true;
}

bool check_nondegenerate(const Weight& u, double L) {
    double t0 = is_infinite_length(L) ? 1.0 : std::min(1.0, 0.5 * L);
    try {
        double U = primitive(u, t0);
        return U > 0.0 && std::isfinite(U);
    } catch (const DivergenceError&) {
        return false;
    }
}

}  // namespace rikit
