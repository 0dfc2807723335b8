#ifndef RIKIT_COMMON_HPP
#define RIKIT_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rikit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Domains are (0, L) with L in (0, inf]; L == kInf marks the half line.
inline bool is_infinite_length(double L) { return std::isinf(L); }

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// t outside (0, L) or a parameter outside its admissible range.
struct DomainError : Error {
    using Error::Error;
};

// A head integral that does not converge. Distinct from an infinite norm,
// which is a legitimate value.
struct DivergenceError : Error {
    using Error::Error;
};

struct InvalidLayoutError : Error {
    using Error::Error;
};

// A proposition's hypothesis failed hard enough that the requested
// functional is not defined (nondegeneracy, membership displays).
struct HypothesisError : Error {
    using Error::Error;
};

struct UnsupportedDualError : Error {
    using Error::Error;
};

struct NoOptimalSpaceError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// n points geometric between lo and hi inclusive, lo > 0.
std::vector<double> geometric_grid(double lo, double hi, int n);

// 64 points/decade spanning [1e-9, 1e9] clipped to (0, L).
std::vector<double> probe_grid(double L);

// Deterministic RNG used by the verification harness. Not distribution-
// portable across standard libraries, but reports only need to be
// reproducible for a fixed binary, which mt19937_64 + explicit mapping is.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next01();
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    // log-uniform snapped to the 2^-20 dyadic grid; sums of a few such
    // values are exact in double
    double dyadic_log_uniform(double lo, double hi) {
        double x = log_uniform(lo, hi);
        return std::round(x * 1048576.0) / 1048576.0;
    }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next01() * (hi - lo + 1)) % (hi - lo + 1);
    }
    std::uint64_t raw() { return eng_(); }

private:
    double next01() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }
    std::mt19937_64 eng_;
};

// Derive a per-case seed so cases are independent of execution order.
std::uint64_t derive_seed(std::uint64_t base, const std::string& tag);

// Adaptive Simpson on a smooth interval, relative tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 48);

// Integral over (0, b] of a function that may blow up at 0: geometric
// splitting toward the origin with divergence detection.
double head_integral_adaptive(const std::function<double(double)>& f, double b,
                              double tol = 1e-10);

}  // namespace rikit

#endif
