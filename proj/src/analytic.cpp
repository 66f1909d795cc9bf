#include "ltst/analytic.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ltst/errors.hpp"
#include "ltst/ffield.hpp"

namespace ltst {

SatoTateWindow SatoTateWindow::make(double alpha, double beta) {
    if (!(alpha >= -1.0 && beta <= 1.0 && alpha < beta))
        throw DomainError("Sato-Tate window requires -1 <= alpha < beta <= 1");
    return SatoTateWindow{alpha, beta};
}

double SatoTateWindow::measure() const { return sato_tate_measure(alpha, beta); }

double lang_trotter_factor(std::int64_t r, std::uint64_t p) {
    const auto q = static_cast<double>(p);
    if (r % static_cast<std::int64_t>(p) == 0) return 1.0 / (1.0 - 1.0 / (q * q));
    return q * (q * q - q - 1.0) / ((q - 1.0) * (q * q - 1.0));
}

LangTrotterConstant lang_trotter_constant(std::int64_t r, std::uint64_t cutoff) {
    if (cutoff < 100) throw DomainError("lang_trotter_constant: cutoff must be at least 100");
    const PrimeSet primes = sieve_primes(cutoff);
    // Summing logs keeps the million-factor product accurate.
    double log_product = 0.0;
    for (std::uint32_t p : primes) log_product += std::log(lang_trotter_factor(r, p));
    const double value = 2.0 / std::numbers::pi * std::exp(log_product);
    const double log_tail = 2.0 / static_cast<double>(cutoff - 1);
    LangTrotterConstant out{r, cutoff, value, value * std::expm1(log_tail), std::nullopt};
    if (r == 0) out.closed_form = std::numbers::pi / 3.0;
    return out;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double pi_half(double x) {
    if (!(x >= 2.0)) throw DomainError("pi_half: x must be at least 2");
    if (x == 2.0) return 0.0;
    // Splitting at powers of two keeps each panel's scale comparable.
    const auto integrand = [](double t) { return 1.0 / (2.0 * std::sqrt(t) * std::log(t)); };
    double total = 0.0;
    double lo = 2.0;
    while (lo < x) {
        const double hi = std::min(2.0 * lo, x);
        total += adaptive_simpson(integrand, lo, hi, 1e-12);
        lo = hi;
    }
    return total;
}

double sato_tate_measure(double alpha, double beta) {
    if (!(alpha >= -1.0 && beta <= 1.0 && alpha < beta))
        throw DomainError("sato_tate_measure requires -1 <= alpha < beta <= 1");
    const auto antiderivative = [](double t) { return t * std::sqrt(1.0 - t * t) + std::asin(t); };
    return (antiderivative(beta) - antiderivative(alpha)) / std::numbers::pi;
}

Prediction lt_prediction(std::int64_t r, double x, std::uint64_t cutoff) {
    const auto constant = lang_trotter_constant(r, cutoff);
    const double scale = pi_half(x);
    if (constant.closed_form) return {*constant.closed_form * scale, 0.0};
    return {constant.value * scale, constant.tail_bound * scale};
}

Prediction st_prediction(const SatoTateWindow& window, double x) { return {x * window.measure(), 0.0}; }

Verdicts lang_trotter_conditions(const ExperimentConfig& cfg) {
    const double floor_ab = std::pow(cfg.x, cfg.epsilon);
    const double ab = static_cast<double>(cfg.A) * static_cast<double>(cfg.B);
    Verdicts v{
        {"A_B_gt_x_eps", static_cast<double>(cfg.A) > floor_ab && static_cast<double>(cfg.B) > floor_ab},
        {"AB_gt_x_3/2_eps", ab > std::pow(cfg.x, 1.5 + cfg.epsilon)},
        {"AB_lt_x_C", ab < std::pow(cfg.x, cfg.C)},
        {"C_gt_3/2_eps", cfg.C > 1.5 + cfg.epsilon},
    };
    bool all = true;
    for (const auto& [name, ok] : v) all = all && ok;
    v.emplace_back("all", all);
    return v;
}

Verdicts sato_tate_conditions(const ExperimentConfig& cfg, const SatoTateWindow& w) {
    const double F = w.measure();
    const double floor_ab = std::pow(cfg.x, cfg.epsilon);
    const double ab = static_cast<double>(cfg.A) * static_cast<double>(cfg.B);
    const double ratio = w.beta != 0.0 ? w.gamma() / w.beta : INFINITY;
    Verdicts v{
        {"A_B_gt_x_eps", static_cast<double>(cfg.A) > floor_ab && static_cast<double>(cfg.B) > floor_ab},
        {"AB_gt_x_1_eps_over_F", ab > std::pow(cfg.x, 1.0 + cfg.epsilon) / F},
        {"AB_lt_x_C", ab < std::pow(cfg.x, cfg.C)},
        {"C_gt_3/2_2eps", cfg.C > 1.5 + 2.0 * cfg.epsilon},
        {"gamma_over_beta_in_range",
         std::pow(cfg.x, cfg.epsilon - 5.0 / 12.0) <= ratio && ratio <= std::pow(cfg.x, -cfg.epsilon)},
        {"F_ge_x_-1/2_eps", F >= std::pow(cfg.x, -0.5 + cfg.epsilon)},
        {"window_avoids_-1_0_1", !(w.contains(-1.0) || w.contains(0.0) || w.contains(1.0))},
    };
    bool all = true;
    for (const auto& [name, ok] : v) all = all && ok;
    v.emplace_back("all", all);
    return v;
}

}  // namespace ltst
