#include "rikit/common.hpp"

#include <algorithm>
#include <cmath>

namespace rikit {

std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<size_t>(n));
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo * std::exp(step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> probe_grid(double L) {
    double lo = 1e-9;
    double hi = is_infinite_length(L) ? 1e9 : std::min(1e9, L * (1.0 - 1e-12));
    if (hi <= lo) {
        lo = L * 1e-12;
        hi = L * (1.0 - 1e-12);
    }
    int decades = static_cast<int>(std::ceil(std::log10(hi / lo)));
    int n = std::max(2, 64 * decades);
    return geometric_grid(lo, hi, n);
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
    std::uint64_t h = base ^ 0x9e3779b97f4a7c15ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
    (void)m;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    double scale = std::max({std::abs(whole), 1e-300});
    return adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol * scale, max_depth);
}

double head_integral_adaptive(const std::function<double(double)>& f, double b, double tol) {
    if (!(b > 0.0)) return 0.0;
    // geometric splitting toward 0; segment sums must decay
    double total = 0.0;
    double hi = b;
    double prev = kInf;
    int flat = 0;
    for (int k = 0; k < 2400; ++k) {
        double lo = hi * 0.5;
        double seg = adaptive_simpson(f, lo, hi, tol);
        total += seg;
        if (total > 0.0 && seg <= tol * total && k > 8) return total;
        if (seg >= prev * 0.999 && seg > 0.0) {
            if (++flat > 60) throw DivergenceError("head integral does not converge");
        } else {
            flat = 0;
        }
        prev = seg;
        hi = lo;
        if (hi < 1e-300) return total;
    }
    return total;
}

}  // namespace rikit
