#pragma once

// Short-interval multiplicative character sums sum_{0 < |n| <= M} chi(n) and
// the scan for primes where some non-principal character sum is large.

#include <complex>
#include <cstdint>
#include <vector>

#include "ltst/ffield.hpp"

namespace ltst {

/// Parameters of an exceptional-prime scan over M < p <= x.
struct ScanConfig {
    double x;
    std::uint64_t M;
    double eta;

    /// Throws DomainError unless M >= 2 and eta in (0, 1/4].
    void validate() const;
    /// M^(1 - eta).
    [[nodiscard]] double threshold() const;
};

struct PrimeScanRow {
    std::uint32_t p;
    double max_sum;
    /// min(2M, 2 sqrt(p) log p + 2).
    double cap;
    bool exceptional;
};

struct ScanReport {
    ScanConfig config;
    double threshold;
    std::vector<PrimeScanRow> rows;
    std::vector<std::uint32_t> exceptional;
    std::uint64_t scanned = 0;
    /// x^(3/4 + 4 eta).
    double reference = 0.0;

    [[nodiscard]] double exceptional_fraction() const;
    [[nodiscard]] double reference_ratio() const;
};

/// sum over nonzero n with |n| <= M of chi_j(n), evaluated term by term.
/// Throws DomainError unless 1 <= M < p and j in [0, p-2].
std::complex<double> char_sum_interval(const CharacterTable& table, std::uint32_t j, std::uint64_t M);

/// sum_{n=1}^{M} chi_j(n).
std::complex<double> char_sum_one_sided(const CharacterTable& table, std::uint32_t j, std::uint64_t M);

/// Max over non-principal j of |sum_{|n| <= M} chi_j(n)|, by bucketing dlog over
/// [1, M] and evaluating every character on the histogram.
double max_char_sum(const CharacterTable& table, std::uint64_t M);

/// Scans every prime M < p <= x. Throws IdentityError if any maximum breaks
/// the trivial or Polya-Vinogradov cap.
ScanReport exceptional_primes(const ScanConfig& config, unsigned workers = 1);

/// min(2M, 2 sqrt(p) log p + 2).
double char_sum_cap(std::uint64_t p, std::uint64_t M);

}  // namespace ltst
