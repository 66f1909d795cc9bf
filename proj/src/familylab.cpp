#include "ltst/familylab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "ltst/errors.hpp"
#include "ltst/ffield.hpp"
#include "ltst/parallel.hpp"

namespace ltst {

void FamilyWindow::validate() const {
    if (A < 1 || B < 1) throw DomainError("family window requires A, B >= 1");
}

namespace {

constexpr std::array<std::int64_t, 13> kCmJ = {
    0,           1728,         -3375,          8000,         54000,         287496,
    -32768,      16581375,     -884736,        -12288000,    -884736000,    -147197952000,
    -262537412640768000,
};

}  // namespace

std::span<const std::int64_t> cm_j_invariants() { return kCmJ; }

bool has_cm(const CurveModel& curve) {
    const auto j = curve.j_invariant();
    if (!j || j->den != 1) return false;
    return std::find(kCmJ.begin(), kCmJ.end(), static_cast<std::int64_t>(j->num)) != kCmJ.end();
}

FamilyMembers family_members(const FamilyWindow& window) {
    window.validate();
    FamilyMembers out;
    for (std::int64_t a = -window.A; a <= window.A; ++a) {
        for (std::int64_t b = -window.B; b <= window.B; ++b) {
            const CurveModel curve{a, b};
            if (curve.is_singular()) {
                ++out.singular_skipped;
                continue;
            }
            if ((window.exclude_zero_ab && (a == 0 || b == 0)) || (window.exclude_all_cm && has_cm(curve))) {
                ++out.excluded;
                continue;
            }
            out.curves.push_back(curve);
        }
    }
    return out;
}

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    if (values.size() == 1) return values[0];
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

/// Calls visit(curve_index, p, a_p) for every good prime 3 < p <= x accepted
/// by want(p). For each curve the primes arrive in increasing order, in
/// either sweep order.
template <class Want, class Visit>
void sweep(std::span<const CurveModel> curves, double x, const SweepOptions& options, Want&& want, Visit&& visit,
           TraceCache::Stats* cache_stats) {
    if (!(x >= 5.0) || curves.empty()) return;
    const auto hi = static_cast<std::uint64_t>(std::floor(x));
    const PrimeSet all = sieve_primes(hi);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t p : all.range(3, hi))
        if (want(p)) primes.push_back(p);

    const auto work = static_cast<unsigned __int128>(curves.size()) * primes.size();
    if (work > options.max_work_units)
        throw ResourceError("sweep needs " + std::to_string(static_cast<std::uint64_t>(work)) +
                            " curve-prime evaluations, above the cap of " + std::to_string(options.max_work_units));

    TraceCache cache(options.cache_bytes);
    TraceCache* cache_ptr = options.cache_bytes > 0 ? &cache : nullptr;

    if (options.order == SweepOrder::CurveMajor) {
        const std::size_t bytes = std::accumulate(primes.begin(), primes.end(), std::size_t{0});
        if (bytes > options.table_bytes)
            throw ResourceError("curve-major sweep needs " + std::to_string(bytes) +
                                " bytes of residue tables; raise the table budget or sweep prime-major");
        std::vector<ResidueTable> tables;
        tables.reserve(primes.size());
        for (std::uint32_t p : primes) tables.emplace_back(p);
        parallel_for(curves.size(), options.workers, [&](std::size_t i) {
            const CurveModel& curve = curves[i];
            for (const ResidueTable& table : tables) {
                if (!curve.has_good_reduction(table.p())) continue;
                visit(i, table.p(), cached_trace(table, cache_ptr, curve));
            }
        });
    } else {
        for (std::uint32_t p : primes) {
            const ResidueTable table(p);
            parallel_for(curves.size(), options.workers, [&](std::size_t i) {
                const CurveModel& curve = curves[i];
                if (!curve.has_good_reduction(p)) return;
                visit(i, p, cached_trace(table, cache_ptr, curve));
            });
        }
    }
    if (cache_stats != nullptr) *cache_stats = cache.stats();
}

}  // namespace

std::vector<std::uint64_t> family_pi_r(std::span<const CurveModel> curves, std::int64_t r, double x,
                                       const SweepOptions& options, TraceCache::Stats* cache_stats) {
    std::vector<std::uint64_t> counts(curves.size(), 0);
    const double lower = options.cutoff_mode == CutoffMode::AboveBr ? br_cutoff(r) : 3.0;
    sweep(
        curves, x, options,
        [&](std::uint32_t p) { return static_cast<double>(p) > lower && r * r <= 4 * static_cast<std::int64_t>(p); },
        [&](std::size_t i, std::uint32_t, std::int64_t t) {
            if (t == r) ++counts[i];
        },
        cache_stats);
    return counts;
}

std::vector<double> family_theta(std::span<const CurveModel> curves, const SatoTateWindow& st, double x,
                                 const SweepOptions& options, TraceCache::Stats* cache_stats) {
    std::vector<double> sums(curves.size(), 0.0);
    sweep(
        curves, x, options, [](std::uint32_t) { return true; },
        [&](std::size_t i, std::uint32_t p, std::int64_t t) {
            if (st.contains(normalized_trace(t, p))) sums[i] += std::log(static_cast<double>(p));
        },
        cache_stats);
    return sums;
}

namespace {

ExperimentReport base_report(const char* kind, const FamilyWindow& window, const FamilyMembers& members, double x) {
    ExperimentReport rep;
    rep.kind = kind;
    rep.A = window.A;
    rep.B = window.B;
    rep.x = x;
    rep.exclude_zero_ab = window.exclude_zero_ab;
    rep.exclude_all_cm = window.exclude_all_cm;
    rep.curves = members.curves.size();
    rep.singular_skipped = members.singular_skipped;
    rep.excluded = members.excluded;
    if (members.curves.empty()) rep.warnings.emplace_back("window has no members after exclusions");
    if (x < 5.0) rep.warnings.emplace_back("no primes above 3 up to x");
    return rep;
}

double safe_ratio(double num, double den) { return den != 0.0 ? num / den : std::nan(""); }

}  // namespace

ExperimentReport lt_average(const FamilyWindow& window, std::int64_t r, double x, const SweepOptions& options) {
    const FamilyMembers members = family_members(window);
    ExperimentReport rep = base_report("lt-average", window, members, x);
    rep.r = r;
    const auto counts = family_pi_r(members.curves, r, x, options, &rep.cache);
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    rep.empirical = static_cast<double>(total) / window.normalization();
    if (x >= 2.0) {
        const Prediction pred = lt_prediction(r, x, options.constant_cutoff);
        rep.predicted = pred.value;
        rep.tail_bound = pred.tail_bound;
    }
    rep.ratio = safe_ratio(rep.empirical, rep.predicted);
    rep.verdicts = lang_trotter_conditions(ExperimentConfig{window.A, window.B, x, options.epsilon, options.C, options.c});
    if (r == 0 && !window.exclude_zero_ab && !window.exclude_all_cm)
        rep.warnings.emplace_back("r = 0 with the CM families E(a,0), E(0,b) included");
    return rep;
}

ExperimentReport st_average(const FamilyWindow& window_in, const SatoTateWindow& st, double x,
                            const SweepOptions& options) {
    FamilyWindow window = window_in;
    window.exclude_zero_ab = true;
    const FamilyMembers members = family_members(window);
    ExperimentReport rep = base_report("st-average", window, members, x);
    rep.alpha = st.alpha;
    rep.beta = st.beta;
    const auto sums = family_theta(members.curves, st, x, options, &rep.cache);
    rep.empirical = pairwise_sum(sums) / window.normalization();
    rep.predicted = st_prediction(st, x).value;
    rep.ratio = safe_ratio(rep.empirical, rep.predicted);
    rep.verdicts =
        sato_tate_conditions(ExperimentConfig{window.A, window.B, x, options.epsilon, options.C, options.c}, st);
    return rep;
}

std::vector<CmCurve> cm_scan(const FamilyWindow& window) {
    window.validate();
    std::vector<CmCurve> out;
    for (std::int64_t a = -window.A; a <= window.A; ++a) {
        for (std::int64_t b = -window.B; b <= window.B; ++b) {
            const CurveModel curve{a, b};
            if (curve.is_singular()) continue;
            if (a == 0 || b == 0 || has_cm(curve)) out.push_back({curve, *curve.j_invariant()});
        }
    }
    return out;
}

CmContribution cm_family_contribution(std::int64_t A, std::int64_t B, double x, const SweepOptions& options) {
    if (A < 1 || B < 1) throw DomainError("cm_family_contribution requires A, B >= 1");
    CmContribution out{A, B, x, 0.0, 0, 0.0, 0.0};
    if (x < 5.0) return out;
    std::vector<CurveModel> curves;
    for (std::int64_t a = -A; a <= A; ++a)
        if (a != 0) curves.push_back({a, 0});
    for (std::int64_t b = -B; b <= B; ++b)
        if (b != 0) curves.push_back({0, b});
    const auto counts = family_pi_r(curves, 0, x, options);
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    out.value = static_cast<double>(total) / (4.0 * static_cast<double>(A) * static_cast<double>(B));
    out.pi_x = sieve_primes(static_cast<std::uint64_t>(std::floor(x))).size();
    out.deuring_reference = (1.0 / static_cast<double>(A) + 1.0 / static_cast<double>(B)) * static_cast<double>(out.pi_x);
    out.lt_reference = std::numbers::pi / 3.0 * pi_half(x);
    return out;
}

std::uint64_t restricted_trace_count(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B) {
    if (p <= 3 || !is_prime(p)) throw DomainError("restricted_trace_count: p must be a prime > 3");
    const ResidueTable table(static_cast<std::uint32_t>(p));
    std::unordered_map<std::uint64_t, std::int64_t> memo;
    std::uint64_t count = 0;
    for (std::int64_t a = -A; a <= A; ++a) {
        const std::uint64_t ar = reduce_mod(a, p);
        if (ar == 0) continue;
        for (std::int64_t b = -B; b <= B; ++b) {
            const std::uint64_t br = reduce_mod(b, p);
            if (br == 0) continue;
            const CurveModel curve{a, b};
            if (!curve.has_good_reduction(p)) continue;
            const std::uint64_t key = ar * p + br;
            auto it = memo.find(key);
            if (it == memo.end())
                it = memo.emplace(key, table.trace(static_cast<std::uint32_t>(ar), static_cast<std::uint32_t>(br))).first;
            if (it->second == r) ++count;
        }
    }
    return count;
}

namespace {

enum class TermClass { Main, FirstError, SecondError };

/// Exponent data shared by the floating and exact evaluations.
struct Expansion {
    std::uint32_t n;
    std::uint32_t quarter;
    std::vector<std::int64_t> hist_a;  // #{|a| <= A, p not| a, dlog a = d}
    std::vector<std::int64_t> hist_b;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rep_logs;  // (dlog u, dlog v)

    // Exponents for the (k, j) term: a-sum uses chi_{ea}, b-sum chi_{eb}.
    [[nodiscard]] std::uint32_t ea(std::uint32_t k, std::uint32_t j) const {
        return static_cast<std::uint32_t>((std::uint64_t{k} * quarter + 3ull * j) % n);
    }
    [[nodiscard]] std::uint32_t eb(std::uint32_t j) const {
        return static_cast<std::uint32_t>((n - 2ull * j % n) % n);
    }
    // Exponent of (u/p)_4^{-k} conj(chi)^3(u) chi^2(v).
    [[nodiscard]] std::uint32_t rep_exponent(std::uint32_t k, std::uint32_t j, std::size_t idx) const {
        const auto [du, dv] = rep_logs[idx];
        const std::uint64_t neg = std::uint64_t{ea(k, j)} * du % n;
        return static_cast<std::uint32_t>((2ull * j % n * dv + n - neg) % n);
    }
    [[nodiscard]] TermClass classify(std::uint32_t k, std::uint32_t j) const {
        const bool first = ea(k, j) == 0;
        const bool second = (2ull * j) % n == 0;
        if (first && second) return TermClass::Main;
        if (first || second) return TermClass::FirstError;
        return TermClass::SecondError;
    }
};

Expansion make_expansion(const CharacterTable& table, std::int64_t A, std::int64_t B, const Representatives& reps) {
    Expansion ex;
    ex.n = table.order();
    ex.quarter = table.quartic_index();
    ex.hist_a.assign(ex.n, 0);
    ex.hist_b.assign(ex.n, 0);
    for (std::int64_t a = -A; a <= A; ++a)
        if (const auto d = table.dlog(a)) ++ex.hist_a[*d];
    for (std::int64_t b = -B; b <= B; ++b)
        if (const auto d = table.dlog(b)) ++ex.hist_b[*d];
    for (const auto& [u, v] : reps) {
        const auto du = table.dlog(u);
        const auto dv = table.dlog(v);
        if (!du || !dv) throw DomainError("decomposition representatives must have u v != 0 mod p");
        ex.rep_logs.emplace_back(*du, *dv);
    }
    return ex;
}

void require_decomposition_args(std::uint64_t p, std::int64_t A, std::int64_t B) {
    if (p <= 3 || !is_prime(p) || p % 4 != 1) throw DomainError("decomposition requires a prime p = 1 mod 4");
    if (A < 1 || B < 1) throw DomainError("decomposition requires A, B >= 1");
}

}  // namespace

DecompositionResult decompose_count(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B,
                                    const Representatives& reps) {
    require_decomposition_args(p, A, B);
    const CharacterTable table(static_cast<std::uint32_t>(p));
    const Expansion ex = make_expansion(table, A, B, reps);
    const std::uint32_t n = ex.n;

    // Character sums over the two boxes for every exponent.
    auto box_sums = [&](const std::vector<std::int64_t>& hist) {
        std::vector<std::complex<double>> sums(n);
        for (std::uint32_t e = 0; e < n; ++e) {
            std::complex<double> s{0.0, 0.0};
            for (std::uint32_t d = 0; d < n; ++d)
                if (hist[d] != 0) s += static_cast<double>(hist[d]) * table.root(std::uint64_t{e} * d);
            sums[e] = s;
        }
        return sums;
    };
    const auto sum_a = box_sums(ex.hist_a);
    const auto sum_b = box_sums(ex.hist_b);

    std::array<std::complex<double>, 3> parts{};
    for (std::uint32_t k = 1; k <= 4; ++k) {
        for (std::uint32_t j = 0; j < n; ++j) {
            std::complex<double> coef{0.0, 0.0};
            for (std::size_t i = 0; i < ex.rep_logs.size(); ++i) coef += table.root(ex.rep_exponent(k, j, i));
            parts[static_cast<std::size_t>(ex.classify(k, j))] += coef * sum_a[ex.ea(k, j)] * sum_b[ex.eb(j)];
        }
    }
    const double norm = 4.0 * static_cast<double>(n);
    return DecompositionResult{p,
                               r,
                               A,
                               B,
                               parts[0] / norm,
                               parts[1] / norm,
                               parts[2] / norm,
                               restricted_trace_count(p, r, A, B),
                               reps.size()};
}

DecompositionResult decompose_count(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B,
                                    std::uint32_t cap) {
    require_decomposition_args(p, A, B);
    return decompose_count(p, r, A, B, iso_classes(p, r, cap).restricted());
}

std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t n) {
    if (n == 0) throw DomainError("cyclotomic_polynomial: n must be positive");
    // x^n - 1 divided by Phi_d for every proper divisor d.
    std::vector<std::int64_t> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (std::uint64_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const auto divisor = cyclotomic_polynomial(d);
        const std::size_t dd = divisor.size() - 1;
        std::vector<std::int64_t> quotient(poly.size() - dd, 0);
        for (std::size_t i = poly.size() - 1; i + 1 > dd; --i) {
            const std::int64_t c = poly[i];  // divisor is monic
            quotient[i - dd] = c;
            for (std::size_t t = 0; t <= dd; ++t) poly[i - dd + t] -= c * divisor[t];
            if (i == dd) break;
        }
        poly = std::move(quotient);
    }
    return poly;
}

namespace {

/// Reduces an element of Z[x]/(x^n - 1) modulo the monic polynomial phi.
std::vector<std::int64_t> reduce_cyclotomic(std::vector<std::int64_t> v, const std::vector<std::int64_t>& phi) {
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = v.size(); i-- > deg;) {
        const std::int64_t c = v[i];
        if (c == 0) continue;
        for (std::size_t t = 0; t <= deg; ++t) v[i - deg + t] -= c * phi[t];
    }
    v.resize(deg);
    return v;
}

/// Cyclic product in Z[x]/(x^n - 1).
std::vector<std::int64_t> cyclic_multiply(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    const std::size_t n = a.size();
    std::vector<std::int64_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (b[j] != 0) out[(i + j) % n] += a[i] * b[j];
    }
    return out;
}

}  // namespace

CyclotomicDecomposition decompose_count_exact(std::uint64_t p, std::int64_t r, std::int64_t A, std::int64_t B,
                                              std::uint64_t cap) {
    require_decomposition_args(p, A, B);
    if (p > cap) throw ResourceError("exact decomposition: p = " + std::to_string(p) + " exceeds cap " + std::to_string(cap));
    const CharacterTable table(static_cast<std::uint32_t>(p));
    const Expansion ex = make_expansion(table, A, B, iso_classes(p, r).restricted());
    const std::uint32_t n = ex.n;

    // Box sums as group-ring elements: sum_d hist[d] x^{e d}.
    auto box_poly = [&](const std::vector<std::int64_t>& hist, std::uint32_t e) {
        std::vector<std::int64_t> poly(n, 0);
        for (std::uint32_t d = 0; d < n; ++d) poly[std::uint64_t{e} * d % n] += hist[d];
        return poly;
    };

    std::array<std::vector<std::int64_t>, 3> parts;
    for (auto& part : parts) part.assign(n, 0);
    for (std::uint32_t k = 1; k <= 4; ++k) {
        for (std::uint32_t j = 0; j < n; ++j) {
            std::vector<std::int64_t> coef(n, 0);
            for (std::size_t i = 0; i < ex.rep_logs.size(); ++i) ++coef[ex.rep_exponent(k, j, i)];
            const auto term =
                cyclic_multiply(cyclic_multiply(coef, box_poly(ex.hist_a, ex.ea(k, j))), box_poly(ex.hist_b, ex.eb(j)));
            auto& part = parts[static_cast<std::size_t>(ex.classify(k, j))];
            for (std::uint32_t m = 0; m < n; ++m) part[m] += term[m];
        }
    }

    const auto phi = cyclotomic_polynomial(n);
    CyclotomicDecomposition out{p, r, reduce_cyclotomic(parts[0], phi), reduce_cyclotomic(parts[1], phi),
                                reduce_cyclotomic(parts[2], phi), restricted_trace_count(p, r, A, B), false};
    std::vector<std::int64_t> total(out.M.size(), 0);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] = out.M[i] + out.E1[i] + out.E2[i];
    std::vector<std::int64_t> expected(total.size(), 0);
    expected[0] = 4 * static_cast<std::int64_t>(n) * static_cast<std::int64_t>(out.brute_count);
    out.identity_exact = total == expected;
    return out;
}

}  // namespace ltst
