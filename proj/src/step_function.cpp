#include "rikit/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rikit {

namespace {

bool measures_close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

StepFunction StepFunction::zero(double domain_length) {
    StepFunction f;
    f.domain_length_ = domain_length;
    double t = is_infinite_length(domain_length) ? 1.0 : std::min(1.0, domain_length);
    f.edges_ = {0.0, t};
    f.values_ = {0.0};
    return f;
}

StepFunction StepFunction::indicator(double a, double b, double domain_length, double value) {
    if (!(0.0 <= a && a < b) || b > domain_length)
        throw DomainError("indicator: need 0 <= a < b <= L");
    if (value < 0.0) throw DomainError("indicator: negative value");
    std::vector<Cell> cells{{a, b, value}};
    return from_cells(std::move(cells), domain_length);
}

StepFunction StepFunction::from_cells(std::vector<Cell> cells, double domain_length) {
    std::sort(cells.begin(), cells.end(),
              [](const Cell& x, const Cell& y) { return x.left < y.left; });
    std::vector<double> edges{0.0};
    std::vector<double> values;
    double pos = 0.0;
    for (const Cell& c : cells) {
        if (!(c.left >= 0.0 && c.right > c.left))
            throw DomainError("from_cells: bad cell bounds");
        if (c.right > domain_length) throw DomainError("from_cells: cell beyond L");
        if (c.value < 0.0 || !std::isfinite(c.value))
            throw DomainError("from_cells: values must be finite nonnegative");
        if (c.left < pos) throw DomainError("from_cells: overlapping cells");
        if (c.left > pos) {
            edges.push_back(c.left);
            values.push_back(0.0);
        }
        edges.push_back(c.right);
        values.push_back(c.value);
        pos = c.right;
    }
    if (values.empty()) return zero(domain_length);
    StepFunction f;
    f.domain_length_ = domain_length;
    f.edges_ = std::move(edges);
    f.values_ = std::move(values);
    f.canonicalize();
    return f;
}

StepFunction StepFunction::from_grid(std::vector<double> edges, std::vector<double> values,
                                     double domain_length) {
    if (edges.size() < 2 || edges.front() != 0.0 || values.size() + 1 != edges.size())
        throw DomainError("from_grid: inconsistent grid");
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] < edges[i + 1])) throw DomainError("from_grid: edges not increasing");
    if (edges.back() > domain_length) throw DomainError("from_grid: beyond L");
    for (double v : values)
        if (v < 0.0 || !std::isfinite(v)) throw DomainError("from_grid: bad value");
    StepFunction f;
    f.domain_length_ = domain_length;
    f.edges_ = std::move(edges);
    f.values_ = std::move(values);
    f.canonicalize();
    return f;
}

void StepFunction::canonicalize() {
    // merge adjacent equal values (exact comparison)
    std::vector<double> edges{edges_[0]};
    std::vector<double> values;
    for (size_t i = 0; i < values_.size(); ++i) {
        if (!values.empty() && values.back() == values_[i]) {
            edges.back() = edges_[i + 1];
        } else {
            values.push_back(values_[i]);
            edges.push_back(edges_[i + 1]);
        }
    }
    // drop a trailing zero cell; the zero tail is implicit
    if (values.size() > 1 && values.back() == 0.0) {
        values.pop_back();
        edges.pop_back();
    }
    if (values.size() == 1 && values[0] == 0.0) {
        *this = zero(domain_length_);
        return;
    }
    edges_ = std::move(edges);
    values_ = std::move(values);
}

double StepFunction::support_measure() const {
    double m = 0.0;
    for (size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > 0.0) m += edges_[i + 1] - edges_[i];
    return m;
}

double StepFunction::operator()(double t) const {
    if (t < 0.0 || t >= edges_.back()) return 0.0;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
    size_t i = static_cast<size_t>(it - edges_.begin());
    if (i == 0) return values_[0];
    return values_[i - 1];
}

double StepFunction::integral() const {
    double s = 0.0;
    for (size_t i = 0; i < values_.size(); ++i) s += values_[i] * (edges_[i + 1] - edges_[i]);
    return s;
}

double StepFunction::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

StepFunction StepFunction::rearrange() const {
    std::vector<std::pair<double, double>> dist = distribution();
    if (dist.empty()) return zero(domain_length_);
    std::vector<double> edges{0.0};
    std::vector<double> values;
    double pos = 0.0;
    for (auto& [v, m] : dist) {
        pos += m;
        edges.push_back(pos);
        values.push_back(v);
    }
    StepFunction f;
    f.domain_length_ = domain_length_;
    f.edges_ = std::move(edges);
    f.values_ = std::move(values);
    // distribution() already merged equal values; structure is canonical
    return f;
}

bool StepFunction::is_nonincreasing() const {
    for (size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i] < values_[i + 1]) return false;
    // a positive tail after an interior zero cell would violate monotonicity,
    // but canonical form already forbids zero followed by positive only via
    // value comparison above (0 < v); nothing more to check
    return true;
}

double StepFunction::head_integral(double t) const {
    if (t <= 0.0) return 0.0;
    StepFunction r = is_nonincreasing() ? *this : rearrange();
    double s = 0.0;
    for (size_t i = 0; i < r.values_.size(); ++i) {
        double l = r.edges_[i], rr = r.edges_[i + 1];
        if (t <= l) break;
        s += r.values_[i] * (std::min(t, rr) - l);
    }
    return s;
}

double StepFunction::double_star(double t) const {
    if (t <= 0.0) throw DomainError("double_star: t must be positive");
    return head_integral(t) / t;
}

StepFunction StepFunction::scaled(double lambda) const {
    if (lambda < 0.0) throw DomainError("scaled: negative factor");
    StepFunction f = *this;
    for (double& v : f.values_) v *= lambda;
    f.canonicalize();
    return f;
}

StepFunction StepFunction::clip_above(double c) const {
    StepFunction f = *this;
    for (double& v : f.values_) v = std::min(v, c);
    f.canonicalize();
    return f;
}

StepFunction StepFunction::excess_over(double c) const {
    StepFunction f = *this;
    for (double& v : f.values_) v = std::max(v - c, 0.0);
    f.canonicalize();
    return f;
}

StepFunction StepFunction::truncate(double t) const {
    if (t <= 0.0) return zero(domain_length_);
    if (t >= edges_.back()) return *this;
    std::vector<double> edges{0.0};
    std::vector<double> values;
    for (size_t i = 0; i < values_.size(); ++i) {
        double r = std::min(edges_[i + 1], t);
        if (r <= edges_[i]) break;
        edges.push_back(r);
        values.push_back(values_[i]);
    }
    StepFunction f;
    f.domain_length_ = domain_length_;
    f.edges_ = std::move(edges);
    f.values_ = std::move(values);
    f.canonicalize();
    return f;
}

namespace {

// visit cells of the merged partition of f and g up to max(T_f, T_g)
template <typename Fn>
void merged_cells(const StepFunction& f, const StepFunction& g, Fn&& fn) {
    std::vector<double> edges;
    edges.reserve(f.edges().size() + g.edges().size());
    edges.insert(edges.end(), f.edges().begin(), f.edges().end());
    edges.insert(edges.end(), g.edges().begin(), g.edges().end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        double l = edges[i], r = edges[i + 1];
        fn(l, r, f(l), g(l));
    }
}

}  // namespace

bool StepFunction::dominated_by(const StepFunction& f, const StepFunction& g) {
    bool ok = true;
    merged_cells(f, g, [&](double, double, double fv, double gv) {
        if (fv > gv) ok = false;
    });
    return ok;
}

StepFunction add(const StepFunction& f, const StepFunction& g) {
    double L = std::min(f.domain_length(), g.domain_length());
    std::vector<double> edges{0.0};
    std::vector<double> values;
    merged_cells(f, g, [&](double, double r, double fv, double gv) {
        edges.push_back(r);
        values.push_back(fv + gv);
    });
    if (values.empty()) return StepFunction::zero(L);
    return StepFunction::from_grid(std::move(edges), std::move(values), L);
}

double StepFunction::inner_product(const StepFunction& f, const StepFunction& g) {
    double s = 0.0;
    merged_cells(f, g, [&](double l, double r, double fv, double gv) {
        s += fv * gv * (r - l);
    });
    return s;
}

std::vector<std::pair<double, double>> StepFunction::distribution() const {
    std::vector<std::pair<double, double>> d;
    for (size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > 0.0) d.emplace_back(values_[i], edges_[i + 1] - edges_[i]);
    std::sort(d.begin(), d.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<std::pair<double, double>> merged;
    for (auto& [v, m] : d) {
        if (!merged.empty() && merged.back().first == v)
            merged.back().second += m;
        else
            merged.emplace_back(v, m);
    }
    return merged;
}

bool StepFunction::operator==(const StepFunction& other) const {
    return edges_ == other.edges_ && values_ == other.values_;
}

bool is_equimeasurable(const StepFunction& f, const StepFunction& g) {
    auto df = f.distribution();
    auto dg = g.distribution();
    if (df.size() != dg.size()) return false;
    for (size_t i = 0; i < df.size(); ++i) {
        if (df[i].first != dg[i].first) return false;
        if (!measures_close(df[i].second, dg[i].second)) return false;
    }
    return true;
}

Layout identity_layout(const StepFunction& f) {
    StepFunction r = f.rearrange();
    Layout lay;
    for (int i = 0; i < r.cell_count(); ++i)
        if (r.value(i) > 0.0) lay.pieces.push_back({r.edge(i), r.edge(i + 1), i});
    return lay;
}

Layout reflection_layout(const StepFunction& f) {
    StepFunction r = f.rearrange();
    double a = r.support_bound();
    Layout lay;
    for (int i = 0; i < r.cell_count(); ++i)
        if (r.value(i) > 0.0)
            lay.pieces.push_back({a - r.edge(i + 1), a - r.edge(i), i});
    std::sort(lay.pieces.begin(), lay.pieces.end(),
              [](auto& x, auto& y) { return x.left < y.left; });
    return lay;
}

Layout permutation_layout(const StepFunction& f, int n_cells, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != n_cells)
        throw InvalidLayoutError("permutation_layout: perm size mismatch");
    StepFunction r = f.rearrange();
    double a = r.support_bound();
    double w = a / n_cells;
    Layout lay;
    // target block k holds source block perm[k]; each block may intersect
    // several levels of f*
    for (int k = 0; k < n_cells; ++k) {
        double src_lo = perm[static_cast<size_t>(k)] * w;
        double src_hi = src_lo + w;
        double dst_lo = k * w;
        for (int i = 0; i < r.cell_count(); ++i) {
            double l = std::max(src_lo, r.edge(i));
            double rr = std::min(src_hi, r.edge(i + 1));
            if (rr <= l) continue;
            double off = l - src_lo;
            if (r.value(i) > 0.0)
                lay.pieces.push_back({dst_lo + off, dst_lo + off + (rr - l), i});
        }
    }
    std::sort(lay.pieces.begin(), lay.pieces.end(),
              [](auto& x, auto& y) { return x.left < y.left; });
    return lay;
}

StepFunction transport(const StepFunction& f, const Layout& layout) {
    StepFunction r = f.rearrange();
    auto dist = r.distribution();
    std::vector<double> used(dist.size(), 0.0);
    std::vector<StepFunction::Cell> cells;
    double prev_right = 0.0;
    for (const Layout::Piece& p : layout.pieces) {
        if (!(p.right > p.left) || p.left < 0.0)
            throw InvalidLayoutError("transport: bad piece bounds");
        if (p.left < prev_right - 1e-12 * std::max(1.0, prev_right))
            throw InvalidLayoutError("transport: overlapping pieces");
        if (p.level_index < 0 || p.level_index >= static_cast<int>(dist.size()))
            throw InvalidLayoutError("transport: level index out of range");
        if (p.right > f.domain_length())
            throw InvalidLayoutError("transport: piece beyond domain");
        used[static_cast<size_t>(p.level_index)] += p.right - p.left;
        double left = std::max(p.left, prev_right);  // absorb fp-abutting pieces
        if (p.right <= left) throw InvalidLayoutError("transport: degenerate piece");
        cells.push_back({left, p.right, dist[static_cast<size_t>(p.level_index)].first});
        prev_right = p.right;
    }
    for (size_t i = 0; i < dist.size(); ++i)
        if (!measures_close(used[i], dist[i].second))
            throw InvalidLayoutError("transport: level measure mismatch");
    return StepFunction::from_cells(std::move(cells), f.domain_length());
}

}  // namespace rikit
