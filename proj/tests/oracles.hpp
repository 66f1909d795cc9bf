#pragma once

// Independent reference implementations used only by the tests. Nothing
// here shares code paths with the library routines it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline bool is_prime_td(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> primes_td(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; n <= limit; ++n)
        if (is_prime_td(n)) out.push_back(n);
    return out;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

/// #E(F_p) by counting (x, y) pairs directly, plus the point at infinity.
inline std::int64_t point_count(std::int64_t p, std::int64_t a, std::int64_t b) {
    std::vector<std::int64_t> sqrt_count(p, 0);
    for (std::int64_t y = 0; y < p; ++y) ++sqrt_count[y * y % p];
    std::int64_t count = 1;
    for (std::int64_t x = 0; x < p; ++x) count += sqrt_count[mod(x * x % p * x + a * x + b, p)];
    return count;
}

inline std::int64_t naive_ap(std::int64_t p, std::int64_t a, std::int64_t b) { return p + 1 - point_count(p, a, b); }

inline bool good_reduction(std::int64_t p, std::int64_t a, std::int64_t b) {
    return mod(4 * mod(a, p) * mod(a, p) % p * mod(a, p) + 27 * mod(b, p) * mod(b, p), p) != 0;
}

/// Euler's criterion by repeated multiplication.
inline int euler_criterion(std::int64_t a, std::int64_t p) {
    const std::int64_t r = mod(a, p);
    if (r == 0) return 0;
    std::int64_t acc = 1;
    for (std::int64_t i = 0; i < (p - 1) / 2; ++i) acc = acc * r % p;
    return acc == 1 ? 1 : -1;
}

/// Composite Simpson on n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Midpoint rule refined by Richardson extrapolation until successive
/// estimates agree to tol.
inline double midpoint_refined(const std::function<double(double)>& f, double a, double b, double tol) {
    auto midpoint = [&](int n) {
        const double h = (b - a) / n;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
        return s * h;
    };
    int n = 64;
    double prev = midpoint(n);
    double prev_extrap = prev;
    for (int it = 0; it < 20; ++it) {
        n *= 2;
        const double cur = midpoint(n);
        const double extrap = cur + (cur - prev) / 3.0;
        if (std::abs(extrap - prev_extrap) < tol) return extrap;
        prev = cur;
        prev_extrap = extrap;
    }
    return prev_extrap;
}

/// pi_{1/2}(x) through u = sqrt(t): (1/2) int_{sqrt 2}^{sqrt x} du / log u, split
/// into geometric panels.
inline double pi_half_substitution(double x) {
    const auto f = [](double u) { return 0.5 / std::log(u); };
    double lo = std::sqrt(2.0);
    const double hi = std::sqrt(x);
    double total = 0.0;
    while (lo < hi) {
        const double next = std::min(lo * 1.5, hi);
        total += midpoint_refined(f, lo, next, 1e-13);
        lo = next;
    }
    return total;
}

/// Primitive class count by scanning every (A, B) with the crude bound A <= sqrt(|d|)
/// and reducing nothing: counts forms in the fundamental domain directly.
inline std::int64_t class_number_scan(std::int64_t d) {
    std::int64_t h = 0;
    for (std::int64_t A = 1; A * A <= -d; ++A) {
        for (std::int64_t B = -A + 1; B <= A; ++B) {
            const std::int64_t num = B * B - d;
            if (num % (4 * A) != 0) continue;
            const std::int64_t C = num / (4 * A);
            if (C < A || (C == A && B < 0)) continue;
            if (std::gcd(std::gcd(A, std::abs(B)), C) != 1) continue;
            ++h;
        }
    }
    return h;
}

}  // namespace oracle
