#include <doctest.h>

#include <cmath>
#include <random>

#include "ltst/charsum.hpp"
#include "ltst/errors.hpp"
#include "oracles.hpp"

using namespace ltst;

namespace {

double naive_max(const CharacterTable& t, std::uint64_t M) {
    double best = 0.0;
    for (std::uint32_t j = 1; j < t.order(); ++j) best = std::max(best, std::abs(char_sum_interval(t, j, M)));
    return best;
}

}  // namespace

TEST_CASE("interval sums for p = 5, M = 2") {
    const auto t = build_character_table(5);
    CHECK(std::abs(char_sum_interval(t, 0, 2) - std::complex<double>(4, 0)) < 1e-15);
    for (std::uint32_t j = 1; j < 4; ++j) CHECK(std::abs(char_sum_interval(t, j, 2)) < 1e-15);
    CHECK(max_char_sum(t, 2) == doctest::Approx(0.0));
    CHECK_THROWS_AS(char_sum_interval(t, 0, 5), DomainError);
    CHECK_THROWS_AS(char_sum_interval(t, 0, 0), DomainError);
    CHECK_THROWS_AS(char_sum_interval(t, 4, 2), DomainError);
    CHECK_THROWS_AS(max_char_sum(t, 1), DomainError);
}

TEST_CASE("reflection identity and principal sums") {
    std::mt19937_64 rng(3);
    const auto primes = oracle::primes_td(3000);
    for (int i = 0; i < 1000; ++i) {
        const auto p = static_cast<std::uint32_t>(primes[1 + rng() % (primes.size() - 1)]);
        const CharacterTable t(p);
        const auto j = static_cast<std::uint32_t>(rng() % t.order());
        const std::uint64_t M = 1 + rng() % (p - 1);
        const auto two = char_sum_interval(t, j, M);
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        const auto one = char_sum_one_sided(t, j, M);
        REQUIRE(std::abs(two - (1.0 + sign) * one) < 1e-8);
        REQUIRE(std::abs(char_sum_interval(t, 0, M) - std::complex<double>(2.0 * M, 0)) < 1e-9);
    }
}

TEST_CASE("full-interval sums vanish for non-principal characters") {
    for (std::uint32_t p : {7u, 13u, 101u, 997u}) {
        const CharacterTable t(p);
        for (std::uint32_t j = 1; j < t.order(); ++j) REQUIRE(std::abs(char_sum_one_sided(t, j, p - 1)) < 1e-8);
    }
}

TEST_CASE("max_char_sum agrees with the naive maximum") {
    for (std::uint64_t p : oracle::primes_td(200)) {
        if (p < 5) continue;
        const CharacterTable t(static_cast<std::uint32_t>(p));
        for (std::uint64_t M = 2; M < p; M += 1 + M / 4) {
            const double fast = max_char_sum(t, M);
            REQUIRE(std::abs(fast - naive_max(t, M)) < 1e-9);
            REQUIRE(fast <= char_sum_cap(p, M) + 1e-9);
        }
    }
}

TEST_CASE("cap and config validation") {
    CHECK(char_sum_cap(5, 2) == 4.0);
    CHECK(char_sum_cap(1009, 1000) == doctest::Approx(2.0 * std::sqrt(1009.0) * std::log(1009.0) + 2.0));
    CHECK_THROWS_AS((ScanConfig{100.0, 1, 0.05}.validate()), DomainError);
    CHECK_THROWS_AS((ScanConfig{100.0, 10, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((ScanConfig{100.0, 10, 0.3}.validate()), DomainError);
    CHECK(ScanConfig{100.0, 16, 0.25}.threshold() == doctest::Approx(8.0));
}

TEST_CASE("exceptional scan") {
    const ScanConfig cfg{600.0, 20, 0.05};
    const auto rep = exceptional_primes(cfg);
    CHECK(rep.scanned == oracle::primes_td(600).size() - oracle::primes_td(20).size());
    CHECK(rep.rows.size() == rep.scanned);
    std::size_t count = 0;
    for (const auto& row : rep.rows) {
        CHECK(row.p > 20);
        CHECK(row.max_sum <= row.cap + 1e-9);
        CHECK(row.exceptional == (row.max_sum > rep.threshold));
        if (row.exceptional) ++count;
    }
    CHECK(count == rep.exceptional.size());
    CHECK(rep.exceptional_fraction() == doctest::Approx(static_cast<double>(count) / rep.scanned));
    CHECK(rep.reference == doctest::Approx(std::pow(600.0, 0.75 + 0.2)));
}

TEST_CASE("exceptional count is monotone in eta") {
    std::size_t prev = 0;
    for (double eta : {0.02, 0.05, 0.1, 0.2, 0.25}) {
        const auto rep = exceptional_primes(ScanConfig{800.0, 30, eta});
        CHECK(rep.exceptional.size() >= prev);
        prev = rep.exceptional.size();
    }
}

TEST_CASE("exceptional scan is deterministic across workers") {
    const ScanConfig cfg{1500.0, 40, 0.05};
    const auto a = exceptional_primes(cfg, 1);
    const auto b = exceptional_primes(cfg, 3);
    REQUIRE(a.rows.size() == b.rows.size());
    CHECK(a.exceptional == b.exceptional);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].max_sum == b.rows[i].max_sum);
}
