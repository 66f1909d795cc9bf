#pragma once

// Family averages over the box |a| <= A, |b| <= B: the Lang-Trotter and
// Sato-Tate left-hand sides, CM detection, and the character-sum
// decomposition M(p) + E1(p) + E2(p) of the per-prime trace count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ltst/analytic.hpp"
#include "ltst/curvecount.hpp"

namespace ltst {

/// The box of integral models E(a, b), |a| <= A, |b| <= B.
struct FamilyWindow {
    std::int64_t A = 1;
    std::int64_t B = 1;
    bool exclude_zero_ab = false;
    bool exclude_all_cm = false;

    void validate() const;
    /// Normalization 4AB, independent of exclusions.
    [[nodiscard]] double normalization() const { return 4.0 * static_cast<double>(A) * static_cast<double>(B); }
};

/// Members of a window after exclusions, in lexicographic (a, b) order.
struct FamilyMembers {
    std::vector<CurveModel> curves;
    std::uint64_t singular_skipped = 0;
    std::uint64_t excluded = 0;
};
FamilyMembers family_members(const FamilyWindow& window);

/// The thirteen rational j-invariants of curves with complex multiplication.
std::span<const std::int64_t> cm_j_invariants();
/// True when j(E) is one of the CM j-invariants (covers a = 0 and b = 0).
bool has_cm(const CurveModel& curve);

enum class SweepOrder { CurveMajor, PrimeMajor };

struct SweepOptions {
    unsigned workers = 1;
    SweepOrder order = SweepOrder::CurveMajor;
    CutoffMode cutoff_mode = CutoffMode::AllGood;
    /// Byte budget of the shared trace cache; 0 disables it.
    std::size_t cache_bytes = std::size_t{64} << 20;
    /// Curve-major sweeps hold one residue table per prime.
    std::size_t table_bytes = std::size_t{256} << 20;
    /// Cap on (#curves) x (#primes).
    std::uint64_t max_work_units = 200'000'000;
    /// Prime cutoff of the C_r product.
    std::uint64_t constant_cutoff = 1'000'000;
    /// Asymptotic parameters, reported only.
    double epsilon = 0.05;
    double C = 3.0;
    double c = 1.0;
};

struct ExperimentReport {
    std::string kind;
    std::int64_t A = 0;
    std::int64_t B = 0;
    double x = 0.0;
    std::optional<std::int64_t> r;
    std::optional<double> alpha;
    std::optional<double> beta;
    bool exclude_zero_ab = false;
    bool exclude_all_cm = false;
    std::uint64_t curves = 0;
    std::uint64_t singular_skipped = 0;
    std::uint64_t excluded = 0;
    double empirical = 0.0;
    double predicted = 0.0;
    /// empirical / predicted, NaN when predicted is zero.
    double ratio = 0.0;
    double tail_bound = 0.0;
    Verdicts verdicts;
    std::vector<std::string> warnings;
    TraceCache::Stats cache;
};

/// (1/4AB) sum over the window of pi^r_{E(a,b)}(x), against C_r pi_{1/2}(x).
ExperimentReport lt_average(const FamilyWindow& window, std::int64_t r, double x, const SweepOptions& options = {});

/// (1/4AB) sum over the window (ab != 0 forced) of Theta_{E(a,b)}(alpha, beta; x),
/// against x F(alpha, beta).
ExperimentReport st_average(const FamilyWindow& window, const SatoTateWindow& st, double x,
                            const SweepOptions& options = {});

/// Per-curve pi^r counts over the window, for callers needing the raw values.
std::vector<std::uint64_t> family_pi_r(std::span<const CurveModel> curves, std::int64_t r, double x,
                                       const SweepOptions& options, TraceCache::Stats* cache_stats = nullptr);
/// Per-curve Theta values, each accumulated in increasing p.
std::vector<double> family_theta(std::span<const CurveModel> curves, const SatoTateWindow& st, double x,
                                 const SweepOptions& options, TraceCache::Stats* cache_stats = nullptr);

/// Order-fixed pairwise summation.
double pairwise_sum(std::span<const double> values);

struct CmCurve {
    CurveModel curve;
    CurveModel::JInvariant j;
};
/// CM members of the whole box (exclusion flags are ignored), singular pairs skipped.
std::vector<CmCurve> cm_scan(const FamilyWindow& window);

struct CmContribution {
    std::int64_t A;
    std::int64_t B;
    double x;
    /// (1/4AB)(sum_{1<=|a|<=A} pi^0_{E(a,0)}(x) + sum_{1<=|b|<=B} pi^0_{E(0,b)}(x)).
    double value;
    std::uint64_t pi_x;
    /// (1/A + 1/B) pi(x).
    double deuring_reference;
    /// (pi/3) pi_{1/2}(x).
    double lt_reference;
};
CmContribution cm_family_contribution(std::int64_t A, std::int64_t B, double x, const SweepOptions& options = {});

/// B(r) = max{3, r, r^2/4}.
struct BrCutoff {
    std::int64_t r;
    double value;
    static BrCutoff of(std::int64_t r) { return {r, br_cutoff(r)}; }
};

inline constexpr double kDecompositionTolerance = 1e-6;

struct DecompositionResult {
    std::uint64_t p;
    std::int64_t r;
    std::int64_t A;
    std::int64_t B;
    std::complex<double> M;
    std::complex<double> E1;
    std::complex<double> E2;
    std::uint64_t brute_count;
    /// Number of representatives with u v != 0 used.
    std::uint64_t classes;

    [[nodiscard]] std::complex<double> total() const { return M + E1 + E2; }
    [[nodiscard]] double deviation() const { return std::abs(total() - static_cast<double>(brute_count)); }
    [[nodiscard]] bool holds(double tol = kDecompositionTolerance) const {
        return deviation() <= tol && std::abs(total().imag()) <= tol;
    }
};

using Representatives = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Brute-force #{|a| <= A, |b| <= B : p not| ab, a_p(E(a,b)) = r}.
std::uint64_t restricted_trace_count(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B);

/// Evaluates the character expansion of the restricted count over k = 1..4,
/// all characters mod p and the class representatives with uv != 0, split
/// by which of (./p)_4^k chi^3 and chi^2 are principal. Requires p = 1 mod 4.
DecompositionResult decompose_count(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B,
                                    std::uint32_t cap = kDefaultEnumerationCap);
/// Same, with caller-supplied representatives (one per class with uv != 0).
DecompositionResult decompose_count(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B,
                                    const Representatives& representatives);

/// Elements of Z[zeta_n], n = p - 1, reduced modulo the cyclotomic polynomial.
struct CyclotomicDecomposition {
    std::uint64_t p;
    std::int64_t r;
    /// Coefficients of 4(p-1) M, 4(p-1) E1, 4(p-1) E2 in the basis 1, zeta, ..., zeta^{phi(n)-1}.
    std::vector<std::int64_t> M;
    std::vector<std::int64_t> E1;
    std::vector<std::int64_t> E2;
    std::uint64_t brute_count;
    /// 4(p-1)(M + E1 + E2) equals 4(p-1) brute_count exactly.
    bool identity_exact;
};

inline constexpr std::uint64_t kExactDecompositionCap = 100;

/// Exact integer evaluation of the same expansion. Throws ResourceError for p above cap.
CyclotomicDecomposition decompose_count_exact(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B,
                                              std::uint64_t cap = kExactDecompositionCap);

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t n);

}  // namespace ltst
