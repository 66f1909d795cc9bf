#pragma once

// Class numbers of negative discriminants by reduced-form enumeration, the
// Hurwitz-weighted class number H, and the L(1, chi_d) cross-check.

#include <cstdint>
#include <vector>

#include "ltst/analytic.hpp"
#include "ltst/rational.hpp"

namespace ltst {

/// Positive-definite binary quadratic form A x^2 + B xy + C y^2.
struct FormClass {
    std::int64_t A;
    std::int64_t B;
    std::int64_t C;

    [[nodiscard]] std::int64_t discriminant() const { return B * B - 4 * A * C; }
    /// |B| <= A <= C, with B >= 0 when |B| == A or A == C.
    [[nodiscard]] bool is_reduced() const;
    friend bool operator==(const FormClass&, const FormClass&) = default;
};

struct ClassNumberResult {
    std::int64_t d;
    std::int64_t h;
    int w;
};

/// True for d < 0 with d = 0 or 1 mod 4.
bool is_negative_discriminant(std::int64_t d);

/// Number of units of the order of discriminant d: 6, 4 or 2.
int unit_count(std::int64_t d);

/// Primitive reduced forms of discriminant d, one per class, ordered by A,
/// then |B|, with positive B before negative B.
std::vector<FormClass> reduced_forms(std::int64_t d);

ClassNumberResult class_number(std::int64_t d);

/// Hurwitz class number: sum over D = d f^2, d = 0,1 mod 4, of (2/w(d)) h(d).
/// Takes the negative discriminant D.
Rational hurwitz_class_number(std::int64_t D);

/// The class number H(r^2 - 4p) counting F_p-isomorphism classes of curves
/// with trace r (weighted). Throws DomainError unless r^2 < 4p.
Rational kronecker_H(std::int64_t r, std::uint64_t p);

/// Partial sum sum_{n <= terms} (d/n)/n. Requires terms >= 1000.
double L_one_chi(std::int64_t d, std::uint64_t terms);

/// (1/pi) sum_{D = d f^2} sqrt|d| L(1, chi_d), the analytic counterpart of
/// hurwitz_class_number(D).
double analytic_hurwitz(std::int64_t D, std::uint64_t terms);

/// H_p = sum of kronecker_H(r, p) over integers r in [2 sqrt(p) alpha, 2 sqrt(p) beta]
/// with r^2 < 4p.
Rational hp_sum(std::uint64_t p, const SatoTateWindow& window);

/// Integer range of traces r with r / (2 sqrt p) in the window (Hasse-clipped).
struct TraceRange {
    std::int64_t lo;
    std::int64_t hi;  // empty when hi < lo
};
TraceRange traces_in_window(std::uint64_t p, const SatoTateWindow& window);

}  // namespace ltst
