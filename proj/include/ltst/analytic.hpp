#pragma once

// Analytic side of the average Lang-Trotter and Sato-Tate statements:
// the constant C_r, the scale pi_{1/2}(x), the semicircle measure F and
// the family-size condition checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ltst {

/// A window [alpha, beta] of normalized traces a_p / (2 sqrt p).
struct SatoTateWindow {
    double alpha;
    double beta;

    /// Validates -1 <= alpha < beta <= 1; throws DomainError otherwise.
    static SatoTateWindow make(double alpha, double beta);

    [[nodiscard]] double gamma() const { return beta - alpha; }
    /// Semicircle mass of the window.
    [[nodiscard]] double measure() const;
    /// Inclusive membership test.
    [[nodiscard]] bool contains(double t) const { return alpha <= t && t <= beta; }
};

/// Truncated Euler product for C_r with a rigorous truncation bound.
struct LangTrotterConstant {
    std::int64_t r;
    std::uint64_t cutoff;
    double value;
    /// Bound on |C_r - value|.
    double tail_bound;
    /// pi / 3 when r == 0.
    std::optional<double> closed_form;
};

/// C_r = (2/pi) prod_{p | r} (1 - p^-2)^-1 prod_{p not| r} p(p^2-p-1)/((p-1)(p^2-1)),
/// truncated to primes p <= cutoff. Every factor is 1 + O(p^-2), so the
/// truncated tail satisfies |log tail| <= sum_{n > P} 2/n^2 <= 2/(P-1).
LangTrotterConstant lang_trotter_constant(std::int64_t r, std::uint64_t cutoff);

/// The local Euler factor of C_r at the prime p.
double lang_trotter_factor(std::int64_t r, std::uint64_t p);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 60);

/// pi_{1/2}(x) = int_2^x dt / (2 sqrt(t) log t). Throws DomainError for x < 2.
double pi_half(double x);

/// F(alpha, beta) = (2/pi) int_alpha^beta sqrt(1 - t^2) dt in closed form.
double sato_tate_measure(double alpha, double beta);

struct Prediction {
    double value;
    /// Absolute uncertainty inherited from truncating C_r (0 when exact).
    double tail_bound;
};

/// C_r * pi_{1/2}(x).
Prediction lt_prediction(std::int64_t r, double x, std::uint64_t cutoff);
/// x * F(alpha, beta).
Prediction st_prediction(const SatoTateWindow& window, double x);

/// Asymptotic parameters of the family-average estimates. They are evaluated and
/// reported, never enforced.
struct ExperimentConfig {
    std::int64_t A = 1;
    std::int64_t B = 1;
    double x = 2.0;
    double epsilon = 0.05;
    double C = 3.0;
    double c = 1.0;
};

using Verdicts = std::vector<std::pair<std::string, bool>>;

/// A,B > x^eps and x^{3/2+eps} < AB < x^C.
Verdicts lang_trotter_conditions(const ExperimentConfig& config);

/// A,B > x^eps, x^{1+eps}/F < AB < x^C, x^{eps-5/12} <= gamma/beta <= x^{-eps},
/// F >= x^{-1/2+eps}, and whether the window avoids -1, 0 and 1.
Verdicts sato_tate_conditions(const ExperimentConfig& config, const SatoTateWindow& window);

}  // namespace ltst
