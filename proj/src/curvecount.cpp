#include "ltst/curvecount.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ltst/classnum.hpp"
#include "ltst/errors.hpp"
#include "ltst/parallel.hpp"

namespace ltst {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

void require_prime_above_3(std::uint64_t p, const char* what) {
    if (p <= 3 || !is_prime(p)) throw DomainError(std::string(what) + ": p must be a prime > 3");
}

}  // namespace

bool CurveModel::has_good_reduction(std::uint64_t p) const {
    const std::uint64_t ar = reduce_mod(a, p);
    const std::uint64_t br = reduce_mod(b, p);
    const std::uint64_t a3 = mul_mod(mul_mod(ar, ar, p), ar, p);
    const std::uint64_t b2 = mul_mod(br, br, p);
    return (mul_mod(4, a3, p) + mul_mod(27, b2, p)) % p != 0;
}

std::optional<CurveModel::JInvariant> CurveModel::j_invariant() const {
    const __int128 den = discriminant_factor();
    if (den == 0) return std::nullopt;
    const __int128 A = a;
    __int128 num = 1728 * 4 * A * A * A;
    __int128 d = den;
    const __int128 g = gcd128(num, d);
    if (g > 1) {
        num /= g;
        d /= g;
    }
    if (d < 0) {
        num = -num;
        d = -d;
    }
    return JInvariant{num, d};
}

ResidueTable::ResidueTable(std::uint32_t p) : p_(p), chi_(p, -1) {
    if (p < 3 || !is_prime(p)) throw DomainError("ResidueTable: p must be an odd prime");
    chi_[0] = 0;
    for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) chi_[x * x % p] = 1;
}

std::int64_t ResidueTable::trace(std::uint32_t a, std::uint32_t b) const {
    // Walk f(x) = x^3 + a x + b by finite differences: f(x+1) - f(x) = 3x^2 + 3x + 1 + a.
    const std::uint32_t p = p_;
    const std::uint32_t six = 6 % p;
    std::uint32_t v = b;
    std::uint32_t d1 = (1 + a) % p;
    std::uint32_t d2 = six;
    std::int64_t sum = 0;
    for (std::uint32_t x = 0; x < p; ++x) {
        sum += chi_[v];
        v += d1;
        if (v >= p) v -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
        d2 += six;
        if (d2 >= p) d2 -= p;
    }
    return -sum;
}

std::int64_t ResidueTable::trace(const CurveModel& curve) const {
    if (!curve.has_good_reduction(p_))
        throw ReductionError("curve (" + std::to_string(curve.a) + ", " + std::to_string(curve.b) +
                             ") has bad reduction at " + std::to_string(p_));
    return trace(static_cast<std::uint32_t>(reduce_mod(curve.a, p_)),
                 static_cast<std::uint32_t>(reduce_mod(curve.b, p_)));
}

std::int64_t ap(std::uint64_t p, std::int64_t a, std::int64_t b) {
    require_prime_above_3(p, "ap");
    if (p > 0xFFFFFFFFull) throw ResourceError("ap: p exceeds 32-bit range");
    const ResidueTable table(static_cast<std::uint32_t>(p));
    return table.trace(CurveModel{a, b});
}

double br_cutoff(std::int64_t r) {
    const auto rd = static_cast<double>(r);
    return std::max({3.0, rd, rd * rd / 4.0});
}

namespace {

std::uint64_t floor_bound(double x) { return x < 0 ? 0 : static_cast<std::uint64_t>(std::floor(x)); }

void require_nonsingular(const CurveModel& curve) {
    if (curve.is_singular()) throw DomainError("curve is singular: 4a^3 + 27b^2 = 0");
}

}  // namespace

std::uint64_t pi_r(const CurveModel& curve, std::int64_t r, double x, CutoffMode mode) {
    require_nonsingular(curve);
    const std::uint64_t hi = floor_bound(x);
    if (hi < 5) return 0;
    const auto lo = mode == CutoffMode::AllGood ? std::uint64_t{3} : floor_bound(br_cutoff(r));
    const PrimeSet primes = sieve_primes(hi);
    std::uint64_t count = 0;
    for (std::uint32_t p : primes.range(std::max<std::uint64_t>(lo, 3), hi)) {
        if (4 * static_cast<std::int64_t>(p) < r * r) continue;  // Hasse excludes r here
        if (!curve.has_good_reduction(p)) continue;
        const ResidueTable table(p);
        if (table.trace(curve) == r) ++count;
    }
    return count;
}

double theta(const CurveModel& curve, const SatoTateWindow& window, double x) {
    require_nonsingular(curve);
    const std::uint64_t hi = floor_bound(x);
    if (hi < 5) return 0.0;
    const PrimeSet primes = sieve_primes(hi);
    double sum = 0.0;
    for (std::uint32_t p : primes.range(3, hi)) {
        if (!curve.has_good_reduction(p)) continue;
        const ResidueTable table(p);
        if (window.contains(normalized_trace(table.trace(curve), p))) sum += std::log(static_cast<double>(p));
    }
    return sum;
}

TraceTable::TraceTable(std::uint32_t p, std::vector<std::int16_t> traces) : p_(p), traces_(std::move(traces)) {
    for (std::int16_t t : traces_) {
        if (t == kSingular) continue;
        ++histogram_[t];
        ++good_;
    }
}

std::uint64_t TraceTable::count(std::int64_t r) const {
    const auto it = histogram_.find(r);
    return it == histogram_.end() ? 0 : it->second;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> TraceTable::singular_pairs() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t a = 0; a < p_; ++a)
        for (std::uint32_t b = 0; b < p_; ++b)
            if (is_singular(a, b)) out.emplace_back(a, b);
    return out;
}

TraceTable enumerate_traces(std::uint64_t p, std::uint32_t cap, unsigned workers) {
    require_prime_above_3(p, "enumerate_traces");
    if (p > cap) throw ResourceError("enumerate_traces: p = " + std::to_string(p) + " exceeds cap " + std::to_string(cap));
    const auto q = static_cast<std::uint32_t>(p);
    const ResidueTable residues(q);
    // Doubled symbol table so f(x) + b needs no reduction.
    std::vector<signed char> chi2(2 * std::size_t{q});
    for (std::uint32_t i = 0; i < 2 * q; ++i) chi2[i] = static_cast<signed char>(residues.symbol(i % q));

    std::vector<std::int16_t> traces(std::size_t{q} * q);
    parallel_for(q, workers, [&](std::size_t ai) {
        const auto a = static_cast<std::uint64_t>(ai);
        std::vector<std::uint32_t> f(q);
        for (std::uint64_t x = 0; x < q; ++x) f[x] = static_cast<std::uint32_t>((x * x % q * x + a * x) % q);
        const std::uint64_t disc_a = 4 * (a * a % q * a % q) % q;
        for (std::uint32_t b = 0; b < q; ++b) {
            auto& slot = traces[ai * q + b];
            if ((disc_a + 27 * (std::uint64_t{b} * b % q)) % q == 0) {
                slot = TraceTable::kSingular;
                continue;
            }
            std::int64_t sum = 0;
            const signed char* row = chi2.data() + b;
            for (std::uint32_t x = 0; x < q; ++x) sum += row[f[x]];
            slot = static_cast<std::int16_t>(-sum);
        }
    });
    return TraceTable(q, std::move(traces));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> IsoClassSet::restricted() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& [u, v] : representatives)
        if (u != 0 && v != 0) out.emplace_back(u, v);
    return out;
}

IsoClassSet iso_classes(const TraceTable& table, std::int64_t r) {
    const std::uint32_t p = table.p();
    IsoClassSet out{p, r, {}, 0};
    if (r * r >= 4 * static_cast<std::int64_t>(p)) return out;

    std::vector<std::uint64_t> t4(p), t6(p);
    for (std::uint64_t t = 1; t < p; ++t) {
        const std::uint64_t t2 = t * t % p;
        t4[t] = t2 * t2 % p;
        t6[t] = t4[t] * t2 % p;
    }
    std::vector<char> seen(std::size_t{p} * p, 0);
    for (std::uint32_t u = 0; u < p; ++u) {
        for (std::uint32_t v = 0; v < p; ++v) {
            const std::size_t idx = std::size_t{u} * p + v;
            if (seen[idx] || table.is_singular(u, v) || table.at(u, v) != r) continue;
            out.representatives.emplace_back(u, v);
            if (u != 0 && v != 0) ++out.restricted_count;
            for (std::uint64_t t = 1; t < p; ++t) seen[(t4[t] * u % p) * p + t6[t] * v % p] = 1;
        }
    }
    const Rational H = kronecker_H(r, p);
    if (Rational(static_cast<std::int64_t>(out.restricted_count)) > H)
        throw IdentityError("I_{r,p} exceeds H(r^2 - 4p) at p = " + std::to_string(p) + ", r = " + std::to_string(r));
    return out;
}

IsoClassSet iso_classes(std::uint64_t p, std::int64_t r, std::uint32_t cap) {
    require_prime_above_3(p, "iso_classes");
    if (p > cap) throw ResourceError("iso_classes: p = " + std::to_string(p) + " exceeds cap " + std::to_string(cap));
    if (r * r >= 4 * static_cast<std::int64_t>(p)) return IsoClassSet{p, r, {}, 0};
    return iso_classes(enumerate_traces(p, cap), r);
}

std::optional<std::int64_t> TraceCache::lookup(std::uint32_t p, std::uint32_t a, std::uint32_t b) {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(p);
    if (it != entries_.end()) {
        const auto hit = it->second.traces.find(std::uint64_t{a} * p + b);
        if (hit != it->second.traces.end()) {
            ++stats_.hits;
            touch(it->second);
            return hit->second;
        }
    }
    ++stats_.misses;
    return std::nullopt;
}

void TraceCache::store(std::uint32_t p, std::uint32_t a, std::uint32_t b, std::int64_t trace) {
    if (budget_ == 0) return;
    std::lock_guard lock(mutex_);
    auto it = entries_.find(p);
    if (it == entries_.end()) {
        lru_.push_front(p);
        it = entries_.emplace(p, PrimeEntry{{}, lru_.begin()}).first;
    } else {
        touch(it->second);
    }
    if (it->second.traces.emplace(std::uint64_t{a} * p + b, static_cast<std::int16_t>(trace)).second)
        stats_.bytes += kEntryBytes;
    evict_locked();
}

void TraceCache::touch(PrimeEntry& entry) { lru_.splice(lru_.begin(), lru_, entry.lru); }

void TraceCache::evict_locked() {
    // The most recent prime is kept even when it alone exceeds the budget.
    while (stats_.bytes > budget_ && lru_.size() > 1) {
        const std::uint32_t victim = lru_.back();
        lru_.pop_back();
        const auto it = entries_.find(victim);
        stats_.bytes -= it->second.traces.size() * kEntryBytes;
        entries_.erase(it);
        ++stats_.evictions;
    }
}

TraceCache::Stats TraceCache::stats() const {
    std::lock_guard lock(mutex_);
    return stats_;
}

std::int64_t cached_trace(const ResidueTable& table, TraceCache* cache, const CurveModel& curve) {
    const std::uint32_t p = table.p();
    const auto a = static_cast<std::uint32_t>(reduce_mod(curve.a, p));
    const auto b = static_cast<std::uint32_t>(reduce_mod(curve.b, p));
    if (cache != nullptr) {
        if (const auto hit = cache->lookup(p, a, b)) return *hit;
    }
    const std::int64_t t = table.trace(a, b);
    if (cache != nullptr) cache->store(p, a, b, t);
    return t;
}

}  // namespace ltst
