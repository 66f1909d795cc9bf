#include "ltst/classnum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <string>

#include "ltst/errors.hpp"
#include "ltst/ffield.hpp"

namespace ltst {

bool FormClass::is_reduced() const {
    if (A <= 0 || std::abs(B) > A || A > C) return false;
    if ((std::abs(B) == A || A == C) && B < 0) return false;
    return true;
}

bool is_negative_discriminant(std::int64_t d) {
    if (d >= 0) return false;
    const std::int64_t m = ((d % 4) + 4) % 4;
    return m == 0 || m == 1;
}

namespace {

void require_discriminant(std::int64_t d, const char* what) {
    if (!is_negative_discriminant(d))
        throw DomainError(std::string(what) + ": need d < 0 with d = 0 or 1 mod 4, got " + std::to_string(d));
}

}  // namespace

int unit_count(std::int64_t d) {
    if (d == -3) return 6;
    if (d == -4) return 4;
    return 2;
}

std::vector<FormClass> reduced_forms(std::int64_t d) {
    require_discriminant(d, "reduced_forms");
    const std::int64_t n = -d;
    std::vector<FormClass> forms;
    // Reduced forms satisfy 3A^2 <= |d|.
    for (std::int64_t A = 1; 3 * A * A <= n; ++A) {
        for (std::int64_t b = 0; b <= A; ++b) {
            if ((b - n) % 2 != 0) continue;  // B = d mod 2
            const std::int64_t num = b * b + n;
            if (num % (4 * A) != 0) continue;
            const std::int64_t C = num / (4 * A);
            if (C < A) continue;
            for (int sign = 0; sign < (b == 0 ? 1 : 2); ++sign) {
                const std::int64_t B = sign == 0 ? b : -b;
                const FormClass f{A, B, C};
                if (!f.is_reduced()) continue;
                if (std::gcd(std::gcd(A, std::abs(B)), C) != 1) continue;
                forms.push_back(f);
            }
        }
    }
    return forms;
}

ClassNumberResult class_number(std::int64_t d) {
    return {d, static_cast<std::int64_t>(reduced_forms(d).size()), unit_count(d)};
}

Rational hurwitz_class_number(std::int64_t D) {
    require_discriminant(D, "hurwitz_class_number");
    Rational total;
    for (std::int64_t f = 1; f * f <= -D; ++f) {
        if (D % (f * f) != 0) continue;
        const std::int64_t d = D / (f * f);
        if (!is_negative_discriminant(d)) continue;
        const auto cn = class_number(d);
        total += Rational(2 * cn.h, cn.w);
    }
    return total;
}

Rational kronecker_H(std::int64_t r, std::uint64_t p) {
    if (!is_prime(p)) throw DomainError("kronecker_H: p must be prime");
    const std::int64_t D = r * r - 4 * static_cast<std::int64_t>(p);
    if (D >= 0) throw DomainError("kronecker_H: requires r^2 < 4p");
    return hurwitz_class_number(D);
}

double L_one_chi(std::int64_t d, std::uint64_t terms) {
    require_discriminant(d, "L_one_chi");
    if (terms < 1000) throw DomainError("L_one_chi: at least 1000 terms required");
    // (d/.) is periodic modulo |d| for a discriminant d.
    const auto period = static_cast<std::uint64_t>(-d);
    std::vector<signed char> chi(period);
    for (std::uint64_t n = 0; n < period; ++n) chi[n] = static_cast<signed char>(kronecker(d, static_cast<std::int64_t>(n)));
    // Sum from the small tail terms upward to limit rounding.
    double sum = 0.0;
    std::uint64_t residue = terms % period;
    for (std::uint64_t n = terms; n >= 1; --n) {
        const signed char c = chi[residue];
        if (c != 0) sum += static_cast<double>(c) / static_cast<double>(n);
        residue = residue == 0 ? period - 1 : residue - 1;
    }
    return sum;
}

double analytic_hurwitz(std::int64_t D, std::uint64_t terms) {
    require_discriminant(D, "analytic_hurwitz");
    double total = 0.0;
    for (std::int64_t f = 1; f * f <= -D; ++f) {
        if (D % (f * f) != 0) continue;
        const std::int64_t d = D / (f * f);
        if (!is_negative_discriminant(d)) continue;
        total += std::sqrt(static_cast<double>(-d)) * L_one_chi(d, terms);
    }
    return total / std::numbers::pi;
}

TraceRange traces_in_window(std::uint64_t p, const SatoTateWindow& window) {
    const long double scale = 2.0L * std::sqrt(static_cast<long double>(p));
    auto lo = static_cast<std::int64_t>(std::ceil(scale * window.alpha));
    auto hi = static_cast<std::int64_t>(std::floor(scale * window.beta));
    const auto four_p = 4 * static_cast<std::int64_t>(p);
    while (lo * lo >= four_p && lo <= hi) ++lo;
    while (hi * hi >= four_p && hi >= lo) --hi;
    return {lo, hi};
}

Rational hp_sum(std::uint64_t p, const SatoTateWindow& window) {
    if (p <= 3 || !is_prime(p)) throw DomainError("hp_sum: p must be a prime > 3");
    Rational total;
    const auto range = traces_in_window(p, window);
    for (std::int64_t r = range.lo; r <= range.hi; ++r) total += kronecker_H(r, p);
    return total;
}

}  // namespace ltst
