#pragma once

// Traces of Frobenius of y^2 = x^3 + ax + b over F_p, the counting
// functions pi_E^r(x) and Theta_E(alpha, beta; x), exhaustive trace tables
// and F_p-isomorphism classes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <list>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ltst/analytic.hpp"
#include "ltst/ffield.hpp"

namespace ltst {

/// Integral short Weierstrass model y^2 = x^3 + a x + b.
struct CurveModel {
    std::int64_t a;
    std::int64_t b;

    /// 4a^3 + 27b^2.
    [[nodiscard]] __int128 discriminant_factor() const {
        const __int128 A = a;
        const __int128 B = b;
        return 4 * A * A * A + 27 * B * B;
    }
    [[nodiscard]] bool is_singular() const { return discriminant_factor() == 0; }
    /// p does not divide 4a^3 + 27b^2 (meaningful for p > 3).
    [[nodiscard]] bool has_good_reduction(std::uint64_t p) const;

    /// j = 1728 * 4a^3 / (4a^3 + 27b^2) as a reduced fraction with positive
    /// denominator; nullopt for singular curves.
    struct JInvariant {
        __int128 num;
        __int128 den;
    };
    [[nodiscard]] std::optional<JInvariant> j_invariant() const;
};

/// (p, a_p) with #E(F_p) = p + 1 - a_p.
struct TraceRecord {
    std::uint64_t p;
    std::int64_t a_p;

    [[nodiscard]] bool satisfies_hasse() const { return a_p * a_p <= 4 * static_cast<std::int64_t>(p); }
    [[nodiscard]] std::int64_t point_count() const { return static_cast<std::int64_t>(p) + 1 - a_p; }
};

/// Quadratic residue table for one prime; a trace costs O(p) additions.
class ResidueTable {
public:
    explicit ResidueTable(std::uint32_t p);

    [[nodiscard]] std::uint32_t p() const { return p_; }
    /// Legendre symbol of a residue in [0, p).
    [[nodiscard]] int symbol(std::uint32_t r) const { return chi_[r]; }
    /// a_p of y^2 = x^3 + a x + b for residues a, b (no reduction check).
    [[nodiscard]] std::int64_t trace(std::uint32_t a, std::uint32_t b) const;
    /// a_p for integral coefficients; throws ReductionError on bad reduction.
    [[nodiscard]] std::int64_t trace(const CurveModel& curve) const;
    /// Number of bytes held.
    [[nodiscard]] std::size_t bytes() const { return chi_.size(); }

private:
    std::uint32_t p_;
    std::vector<signed char> chi_;
};

/// a_p(E(a, b)). Throws DomainError for p <= 3 or composite p, ReductionError
/// when p | 4a^3 + 27b^2.
std::int64_t ap(std::uint64_t p, std::int64_t a, std::int64_t b);

/// Which primes pi_E^r counts: every good prime p > 3, or p > B(r) as in the
/// rewritten family sum.
enum class CutoffMode { AllGood, AboveBr };

/// B(r) = max{3, r, r^2/4}.
double br_cutoff(std::int64_t r);

/// #{good p, 3 < p <= x (or B(r) < p <= x): a_p = r}.
std::uint64_t pi_r(const CurveModel& curve, std::int64_t r, double x, CutoffMode mode = CutoffMode::AllGood);

/// Sum of log p over good primes 3 < p <= x with a_p/(2 sqrt p) in the window,
/// accumulated in increasing p.
double theta(const CurveModel& curve, const SatoTateWindow& window, double x);

/// a_p / (2 sqrt p).
inline double normalized_trace(std::int64_t a_p, std::uint64_t p) {
    return static_cast<double>(a_p) / (2.0 * std::sqrt(static_cast<double>(p)));
}

inline constexpr std::uint32_t kDefaultEnumerationCap = 300;

/// a_p for every residue pair (a, b) modulo p.
class TraceTable {
public:
    static constexpr std::int16_t kSingular = INT16_MIN;

    TraceTable(std::uint32_t p, std::vector<std::int16_t> traces);

    [[nodiscard]] std::uint32_t p() const { return p_; }
    /// kSingular for singular pairs.
    [[nodiscard]] std::int16_t at(std::uint32_t a, std::uint32_t b) const { return traces_[std::size_t{a} * p_ + b]; }
    [[nodiscard]] bool is_singular(std::uint32_t a, std::uint32_t b) const { return at(a, b) == kSingular; }
    [[nodiscard]] const std::map<std::int64_t, std::uint64_t>& histogram() const { return histogram_; }
    /// histogram[r], zero when absent.
    [[nodiscard]] std::uint64_t count(std::int64_t r) const;
    [[nodiscard]] std::uint64_t good_pairs() const { return good_; }
    [[nodiscard]] std::vector<std::pair<std::uint32_t, std::uint32_t>> singular_pairs() const;

private:
    std::uint32_t p_;
    std::vector<std::int16_t> traces_;
    std::map<std::int64_t, std::uint64_t> histogram_;
    std::uint64_t good_ = 0;
};

/// Exhaustive trace table over all p^2 residue pairs. Throws ResourceError
/// when p exceeds cap.
TraceTable enumerate_traces(std::uint64_t p, std::uint32_t cap = kDefaultEnumerationCap, unsigned workers = 1);

/// F_p-isomorphism classes of curves with trace r, as orbits of
/// t.(u, v) = (t^4 u, t^6 v).
struct IsoClassSet {
    std::uint64_t p;
    std::int64_t r;
    /// Lexicographically least member of each orbit, in increasing order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> representatives;
    /// Orbits with u v != 0.
    std::uint64_t restricted_count = 0;

    /// Representatives with u v != 0.
    [[nodiscard]] std::vector<std::pair<std::uint32_t, std::uint32_t>> restricted() const;
};

/// Computes the classes from a trace table. Asserts I_{r,p} <= H(r^2 - 4p)
/// (IdentityError otherwise). Traces with r^2 >= 4p give an empty set.
IsoClassSet iso_classes(const TraceTable& table, std::int64_t r);
IsoClassSet iso_classes(std::uint64_t p, std::int64_t r, std::uint32_t cap = kDefaultEnumerationCap);

/// Thread-safe memo of a_p keyed by (p, a mod p, b mod p). Entries are grouped
/// per prime; whole primes are evicted least-recently-used once the byte
/// budget is exceeded.
class TraceCache {
public:
    struct Stats {
        std::uint64_t hits = 0;
        std::uint64_t misses = 0;
        std::uint64_t evictions = 0;
        std::size_t bytes = 0;
    };

    explicit TraceCache(std::size_t byte_budget) : budget_(byte_budget) {}

    [[nodiscard]] std::optional<std::int64_t> lookup(std::uint32_t p, std::uint32_t a, std::uint32_t b);
    void store(std::uint32_t p, std::uint32_t a, std::uint32_t b, std::int64_t trace);
    [[nodiscard]] Stats stats() const;
    [[nodiscard]] std::size_t budget() const { return budget_; }

private:
    static constexpr std::size_t kEntryBytes = 32;
    struct PrimeEntry {
        std::unordered_map<std::uint64_t, std::int16_t> traces;
        std::list<std::uint32_t>::iterator lru;
    };

    void touch(PrimeEntry& entry);
    void evict_locked();

    std::size_t budget_;
    mutable std::mutex mutex_;
    std::unordered_map<std::uint32_t, PrimeEntry> entries_;
    std::list<std::uint32_t> lru_;  // most recent at the front
    Stats stats_;
};

/// Trace through an optional cache.
std::int64_t cached_trace(const ResidueTable& table, TraceCache* cache, const CurveModel& curve);

}  // namespace ltst
