#include "ltst/ffield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ltst/errors.hpp"

namespace ltst {

std::size_t PrimeSet::count_up_to(std::uint64_t x) const {
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), x,
                         [](std::uint64_t v, std::uint32_t q) { return v < q; }) -
        primes_.begin());
}

std::span<const std::uint32_t> PrimeSet::range(std::uint64_t lo_exclusive, std::uint64_t hi_inclusive) const {
    const std::size_t lo = count_up_to(lo_exclusive);
    const std::size_t hi = count_up_to(hi_inclusive);
    if (hi <= lo) return {};
    return std::span<const std::uint32_t>(primes_).subspan(lo, hi - lo);
}

bool PrimeSet::contains(std::uint64_t n) const {
    return std::binary_search(primes_.begin(), primes_.end(), n,
                              [](std::uint64_t a, std::uint64_t b) { return a < b; });
}

PrimeSet sieve_primes(std::uint64_t limit) {
    if (limit < 2) throw DomainError("sieve_primes: limit must be at least 2");
    if (limit > 0xFFFFFFFFull) throw ResourceError("sieve_primes: limit exceeds 32-bit range");

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint32_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t k = i * i; k <= root; k += i) small[k] = 0;
    }

    std::vector<std::uint32_t> primes;
    constexpr std::uint64_t kSegment = 1u << 16;
    std::vector<char> seg(kSegment);
    for (std::uint64_t lo = 2; lo <= limit; lo += kSegment) {
        const std::uint64_t hi = std::min(lo + kSegment - 1, limit);
        std::fill(seg.begin(), seg.end(), 1);
        for (std::uint32_t q : base) {
            const std::uint64_t q2 = static_cast<std::uint64_t>(q) * q;
            if (q2 > hi) break;
            std::uint64_t start = std::max(q2, (lo + q - 1) / q * q);
            for (std::uint64_t k = start; k <= hi; k += q) seg[k - lo] = 0;
        }
        for (std::uint64_t n = lo; n <= hi; ++n)
            if (seg[n - lo]) primes.push_back(static_cast<std::uint32_t>(n));
    }
    return PrimeSet(limit, std::move(primes));
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (std::uint64_t d = 5; d * d <= n; d += 6)
        if (n % d == 0 || n % (d + 2) == 0) return false;
    return true;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

void require_odd_prime(std::uint64_t p, const char* what) {
    if (p < 3 || !is_prime(p)) throw DomainError(std::string(what) + ": modulus must be an odd prime");
}

}  // namespace

int legendre(std::int64_t a, std::uint64_t p) {
    require_odd_prime(p, "legendre");
    const std::uint64_t r = reduce_mod(a, p);
    if (r == 0) return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int kronecker(std::int64_t a, std::int64_t n) {
    // Cohen, Algorithm 1.4.10, with the sign convention (a/-1) = sign(a).
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int k = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v % 2 == 1) {
        const std::int64_t m8 = ((a % 8) + 8) % 8;
        if (m8 == 3 || m8 == 5) k = -k;
    }
    // n is now odd and positive: Jacobi symbol.
    std::int64_t b = n;
    std::int64_t x = a % b;
    if (x < 0) x += b;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            const std::int64_t m8 = b % 8;
            if (m8 == 3 || m8 == 5) k = -k;
        }
        std::swap(x, b);
        if (x % 4 == 3 && b % 4 == 3) k = -k;
        x %= b;
    }
    return b == 1 ? k : 0;
}

std::uint32_t least_primitive_root(std::uint32_t p) {
    if (!is_prime(p)) throw DomainError("least_primitive_root: p must be prime");
    if (p == 2) return 1;
    const auto factors = prime_factors(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        const bool ok = std::all_of(factors.begin(), factors.end(),
                                    [&](std::uint64_t q) { return pow_mod(g, (p - 1) / q, p) != 1; });
        if (ok) return g;
    }
    throw IdentityError("least_primitive_root: none found");
}

int quartic_symbol(std::int64_t a, std::uint64_t p) {
    if (!is_prime(p) || p % 4 != 1) throw DomainError("quartic_symbol: p must be a prime = 1 mod 4");
    const std::uint64_t r = reduce_mod(a, p);
    if (r == 0) throw DomainError("quartic_symbol: p divides a");
    const std::uint64_t g = least_primitive_root(static_cast<std::uint32_t>(p));
    const std::uint64_t iota = pow_mod(g, (p - 1) / 4, p);
    const std::uint64_t value = pow_mod(r, (p - 1) / 4, p);
    std::uint64_t cur = 1;
    for (int k = 0; k < 4; ++k) {
        if (cur == value) return k;
        cur = mul_mod(cur, iota, p);
    }
    throw IdentityError("quartic_symbol: value is not a fourth root of unity");
}

CharacterTable::CharacterTable(std::uint32_t p, std::uint32_t cap) : p_(p), g_(0) {
    if (p > cap) throw ResourceError("character table: p = " + std::to_string(p) + " exceeds cap " + std::to_string(cap));
    if (p < 3 || !is_prime(p)) throw DomainError("character table: p must be an odd prime");
    g_ = least_primitive_root(p);
    const std::uint32_t n = p - 1;
    dlog_.assign(p, 0);
    pow_.resize(n);
    std::uint64_t cur = 1;
    for (std::uint32_t e = 0; e < n; ++e) {
        pow_[e] = static_cast<std::uint32_t>(cur);
        dlog_[cur] = e;
        cur = cur * g_ % p;
    }
    roots_.resize(n);
    for (std::uint32_t m = 0; m < n; ++m) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        roots_[m] = {std::cos(angle), std::sin(angle)};
    }
    // Exact values at the quarter points.
    roots_[0] = {1.0, 0.0};
    if (n % 2 == 0) roots_[n / 2] = {-1.0, 0.0};
    if (n % 4 == 0) {
        roots_[n / 4] = {0.0, 1.0};
        roots_[3 * n / 4] = {0.0, -1.0};
    }
}

std::optional<std::uint32_t> CharacterTable::dlog(std::int64_t n) const {
    const std::uint64_t r = reduce_mod(n, p_);
    if (r == 0) return std::nullopt;
    return dlog_[r];
}

std::optional<std::uint32_t> CharacterTable::exponent(std::uint32_t j, std::int64_t n) const {
    const auto d = dlog(n);
    if (!d) return std::nullopt;
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(j) * *d % order());
}

std::uint32_t CharacterTable::quartic_index() const {
    if (p_ % 4 != 1) throw DomainError("quartic character requires p = 1 mod 4");
    return order() / 4;
}

CharacterTable build_character_table(std::uint32_t p, std::uint32_t cap) { return CharacterTable(p, cap); }

std::complex<double> character_value(const CharacterTable& table, std::uint32_t j, std::int64_t n) {
    if (j >= table.order()) throw DomainError("character_value: index out of range");
    const auto e = table.exponent(j, n);
    if (!e) return {0.0, 0.0};
    return table.root(*e);
}

}  // namespace ltst
