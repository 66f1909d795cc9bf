#include "ltst/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltst/errors.hpp"
#include "ltst/parallel.hpp"

namespace ltst {

void ScanConfig::validate() const {
    if (M < 2) throw DomainError("scan: M must be at least 2");
    if (!(eta > 0.0 && eta <= 0.25)) throw DomainError("scan: eta must lie in (0, 1/4]");
    if (!(x >= 2.0)) throw DomainError("scan: x must be at least 2");
}

double ScanConfig::threshold() const { return std::pow(static_cast<double>(M), 1.0 - eta); }

double ScanReport::exceptional_fraction() const {
    return scanned == 0 ? 0.0 : static_cast<double>(exceptional.size()) / static_cast<double>(scanned);
}

double ScanReport::reference_ratio() const { return static_cast<double>(exceptional.size()) / reference; }

namespace {

void require_interval(const CharacterTable& table, std::uint32_t j, std::uint64_t M) {
    if (j >= table.order()) throw DomainError("character index out of range");
    if (M < 1 || M >= table.p()) throw DomainError("interval length M must satisfy 1 <= M < p");
}

}  // namespace

std::complex<double> char_sum_one_sided(const CharacterTable& table, std::uint32_t j, std::uint64_t M) {
    require_interval(table, j, M);
    std::complex<double> sum{0.0, 0.0};
    for (std::uint64_t n = 1; n <= M; ++n) sum += table.root(*table.exponent(j, static_cast<std::int64_t>(n)));
    return sum;
}

std::complex<double> char_sum_interval(const CharacterTable& table, std::uint32_t j, std::uint64_t M) {
    require_interval(table, j, M);
    std::complex<double> sum{0.0, 0.0};
    for (std::int64_t n = -static_cast<std::int64_t>(M); n <= static_cast<std::int64_t>(M); ++n) {
        if (n == 0) continue;
        sum += table.root(*table.exponent(j, n));
    }
    return sum;
}

double max_char_sum(const CharacterTable& table, std::uint64_t M) {
    if (M < 2 || M >= table.p()) throw DomainError("max_char_sum: need 2 <= M < p");
    const std::uint32_t n = table.order();
    // Distinct dlogs of 1..M (dlog is injective on residues).
    std::vector<std::uint32_t> logs;
    logs.reserve(M);
    for (std::uint64_t k = 1; k <= M; ++k) logs.push_back(*table.dlog(static_cast<std::int64_t>(k)));
    std::sort(logs.begin(), logs.end());

    // chi_j(-1) = (-1)^j, so odd characters vanish and even ones double the
    // one-sided sum.
    double best = 0.0;
    for (std::uint32_t j = 2; j < n; j += 2) {
        std::complex<double> s{0.0, 0.0};
        for (std::uint32_t d : logs) s += table.root(static_cast<std::uint64_t>(j) * d % n);
        best = std::max(best, 2.0 * std::abs(s));
    }
    return best;
}

double char_sum_cap(std::uint64_t p, std::uint64_t M) {
    const auto q = static_cast<double>(p);
    return std::min(2.0 * static_cast<double>(M), 2.0 * std::sqrt(q) * std::log(q) + 2.0);
}

ScanReport exceptional_primes(const ScanConfig& config, unsigned workers) {
    config.validate();
    ScanReport report{config, config.threshold(), {}, {}, 0, std::pow(config.x, 0.75 + 4.0 * config.eta)};
    const auto hi = static_cast<std::uint64_t>(std::floor(config.x));
    if (hi <= config.M) return report;
    const PrimeSet primes = sieve_primes(hi);
    const auto range = primes.range(config.M, hi);
    report.rows.resize(range.size());
    parallel_for(range.size(), workers, [&](std::size_t i) {
        const std::uint32_t p = range[i];
        const CharacterTable table(p);
        const double max_sum = max_char_sum(table, config.M);
        const double cap = char_sum_cap(p, config.M);
        // Small slack for rounding in the floating evaluation.
        if (max_sum > cap + 1e-9)
            throw IdentityError("character sum exceeds its cap at p = " + std::to_string(p));
        report.rows[i] = PrimeScanRow{p, max_sum, cap, max_sum > report.threshold};
    });
    report.scanned = report.rows.size();
    for (const auto& row : report.rows)
        if (row.exceptional) report.exceptional.push_back(row.p);
    return report;
}

}  // namespace ltst
