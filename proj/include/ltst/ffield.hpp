#pragma once

// Prime generation and arithmetic over F_p: residue symbols, discrete
// logarithms and the multiplicative characters built on them.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ltst {

/// All primes up to a limit, in increasing order.
class PrimeSet {
public:
    PrimeSet(std::uint64_t limit, std::vector<std::uint32_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    [[nodiscard]] std::uint64_t limit() const { return limit_; }
    [[nodiscard]] std::size_t size() const { return primes_.size(); }
    [[nodiscard]] std::span<const std::uint32_t> primes() const { return primes_; }
    [[nodiscard]] auto begin() const { return primes_.begin(); }
    [[nodiscard]] auto end() const { return primes_.end(); }
    [[nodiscard]] std::uint32_t operator[](std::size_t i) const { return primes_[i]; }

    /// pi(x) for x <= limit.
    [[nodiscard]] std::size_t count_up_to(std::uint64_t x) const;
    /// Primes q with lo < q <= hi.
    [[nodiscard]] std::span<const std::uint32_t> range(std::uint64_t lo_exclusive,
                                                       std::uint64_t hi_inclusive) const;
    [[nodiscard]] bool contains(std::uint64_t n) const;

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> primes_;
};

/// Segmented sieve of Eratosthenes. Throws DomainError for limit < 2.
PrimeSet sieve_primes(std::uint64_t limit);

/// Deterministic primality by trial division.
bool is_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Reduces a (possibly negative) integer into [0, m).
inline std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) {
    const std::int64_t r = a % static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

/// Distinct prime factors in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(std::int64_t a, std::uint64_t p);

/// Kronecker symbol (a/n) for any integer n.
int kronecker(std::int64_t a, std::int64_t n);

/// Least primitive root of a prime p.
std::uint32_t least_primitive_root(std::uint32_t p);

/// Exponent k in {0,1,2,3} of the quartic residue symbol (a/p)_4 = i^k,
/// with i identified with g^((p-1)/4) for the least primitive root g.
int quartic_symbol(std::int64_t a, std::uint64_t p);

inline constexpr std::uint32_t kDefaultCharacterTableCap = 1u << 20;

/// Discrete-log table for a prime p >= 3 together with the (p-1)-th roots of
/// unity. Character chi_j sends n to e^(2 pi i j dlog(n) / (p-1)); every
/// character and the quartic symbol are views into this table.
class CharacterTable {
public:
    explicit CharacterTable(std::uint32_t p, std::uint32_t cap = kDefaultCharacterTableCap);

    [[nodiscard]] std::uint32_t p() const { return p_; }
    [[nodiscard]] std::uint32_t generator() const { return g_; }
    /// Order of the character group, p - 1.
    [[nodiscard]] std::uint32_t order() const { return p_ - 1; }

    /// dlog of a residue coprime to p; nullopt when p | n.
    [[nodiscard]] std::optional<std::uint32_t> dlog(std::int64_t n) const;
    /// g^e mod p.
    [[nodiscard]] std::uint32_t power(std::uint64_t e) const { return pow_[e % order()]; }

    /// e^(2 pi i m / (p-1)).
    [[nodiscard]] const std::complex<double>& root(std::uint64_t m) const { return roots_[m % order()]; }

    /// j * dlog(n) mod (p-1), or nullopt when p | n.
    [[nodiscard]] std::optional<std::uint32_t> exponent(std::uint32_t j, std::int64_t n) const;

    /// Index of the quartic character (a/p)_4; requires p = 1 mod 4.
    [[nodiscard]] std::uint32_t quartic_index() const;

private:
    std::uint32_t p_;
    std::uint32_t g_;
    std::vector<std::uint32_t> dlog_;  // indexed by residue, dlog_[0] unused
    std::vector<std::uint32_t> pow_;
    std::vector<std::complex<double>> roots_;
};

/// Builds the character table for p, throwing ResourceError above cap.
CharacterTable build_character_table(std::uint32_t p, std::uint32_t cap = kDefaultCharacterTableCap);

/// chi_j(n); zero when p | n. Throws DomainError for j outside [0, p-2].
std::complex<double> character_value(const CharacterTable& table, std::uint32_t j, std::int64_t n);

}  // namespace ltst
