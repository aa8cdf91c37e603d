#pragma once

// Closed-form limits at n -> infinity, the two integral identities behind
// them (each with an independent quadrature route), and the exact finite-n
// distribution of the white survivors.

#include "cewc/chain.hpp"
#include "cewc/errors.hpp"
#include "cewc/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cewc {

enum class LimitRegime { Subcritical, Critical, Supercritical };

inline constexpr std::string_view to_string(LimitRegime r) noexcept
{
    switch (r) {
    case LimitRegime::Subcritical: return "subcritical";
    case LimitRegime::Critical: return "critical";
    case LimitRegime::Supercritical: return "supercritical";
    }
    return "?";
}

namespace detail {

inline void require_positive(double x, const char* what)
{
    if (!(x > 0.0) || !std::isfinite(x)) throw invalid_params(std::string(what) + " must be positive and finite");
}

} // namespace detail

/// Exact comparison against 1; there is no tolerance band.
inline LimitRegime classify_regime(double lambda)
{
    detail::require_positive(lambda, "lambda");
    if (lambda < 1.0) return LimitRegime::Subcritical;
    if (lambda > 1.0) return LimitRegime::Supercritical;
    return LimitRegime::Critical;
}

/// lim P(W = 0): 0 below criticality, 2^-alpha at lambda = 1, 1 above.
inline double extinction_limit(double lambda, double alpha)
{
    detail::require_positive(alpha, "alpha");
    switch (classify_regime(lambda)) {
    case LimitRegime::Subcritical: return 0.0;
    case LimitRegime::Critical: return std::exp2(-alpha);
    case LimitRegime::Supercritical: return 1.0;
    }
    return 0.0;
}

/// lim E[W] at lambda = 1.
inline double expected_white_limit(double alpha)
{
    detail::require_positive(alpha, "alpha");
    return 2.0 * alpha;
}

/// Limit in probability of C / log n at lambda = 1.
inline double conversion_growth_limit(double alpha)
{
    detail::require_positive(alpha, "alpha");
    return alpha;
}

/// P(G_alpha < E) for independent G_alpha ~ Gamma(alpha,1), E ~ Exp(1).
inline double prob_gamma_less_exp_closed(double alpha)
{
    detail::require_positive(alpha, "alpha");
    return std::exp2(-alpha);
}

/// Same probability as the integral of x^(alpha-1) e^(-2x) / Gamma(alpha)
/// over the half line.
inline double prob_gamma_less_exp_quadrature(double alpha, QuadratureOptions opt = {})
{
    detail::require_positive(alpha, "alpha");
    const double log_norm = -std::lgamma(alpha);
    auto integrand = [alpha, log_norm](double x) {
        if (x <= 0.0) return 0.0;
        return std::exp((alpha - 1.0) * std::log(x) - 2.0 * x + log_norm);
    };
    return integrate_half_line(integrand, opt).value;
}

/// E[(G_alpha - E) 1{G_alpha > E}].
inline double expected_excess_closed(double alpha)
{
    detail::require_positive(alpha, "alpha");
    return alpha - (1.0 - std::exp2(-alpha));
}

/// Same expectation as the integral of (x - 1 + e^-x) against the
/// Gamma(alpha,1) density; x - 1 + e^-x is evaluated as x + expm1(-x).
inline double expected_excess_quadrature(double alpha, QuadratureOptions opt = {})
{
    detail::require_positive(alpha, "alpha");
    const double log_norm = -std::lgamma(alpha);
    auto integrand = [alpha, log_norm](double x) {
        if (x <= 0.0) return 0.0;
        const double inner = x + std::expm1(-x);
        return inner * std::exp((alpha - 1.0) * std::log(x) - x + log_norm);
    };
    return integrate_half_line(integrand, opt).value;
}

/// E[Z] = P(G > E) + E[(G - E) 1{G > E}], assembled from the two identities.
inline double expected_Z(double alpha)
{
    return (1.0 - prob_gamma_less_exp_closed(alpha)) + expected_excess_closed(alpha);
}

/// Density of Gamma(shape, 1).
inline double gamma_pdf(double shape, double x)
{
    if (x <= 0.0) return 0.0;
    return std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
}

// ---------------------------------------------------------------------------
// Exact distribution of W

inline constexpr std::int64_t max_exact_n = 5000;

struct ExactDistribution {
    std::int64_t n = 0;
    double lambda = 0.0;
    double alpha = 0.0;
    InitMode mode = InitMode::Standard;
    /// probabilities[k] = P(W = k), k = 0..n.
    std::vector<double> probabilities;
    double expected_W = 0.0;
    double expected_C = 0.0;
    double extinction_probability = 0.0;
    /// Number of jump layers propagated before all mass was absorbed.
    std::int64_t layers = 0;
};

/// Forward propagation of probability mass over the embedded jump chain.
///
/// States (r, b) are grouped by layer r + 2b, which every jump raises by one,
/// so each layer is pushed to the next exactly once. Mass leaving a layer
/// through r = 0 is absorbed at W = w. Expected conversions accumulate the
/// mass times alpha / (lambda w + b + alpha) at every visited state.
inline ExactDistribution exact_distribution_W(std::int64_t n, double lambda, double alpha,
                                              InitMode mode = InitMode::Standard)
{
    if (n > max_exact_n) throw resource_limit("exact distribution is limited to n <= 5000");
    const Params params{n, lambda, alpha, mode};
    const std::int64_t total = params.vertex_count();
    const double conv = params.conversion_rate();
    const PopulationState start = initial_state(params);

    ExactDistribution out;
    out.n = n;
    out.lambda = lambda;
    out.alpha = alpha;
    out.mode = mode;
    out.probabilities.assign(static_cast<std::size_t>(n) + 1, 0.0);

    // mass indexed by b within the current layer; r = layer - 2b.
    std::vector<double> cur(static_cast<std::size_t>(total) + 2, 0.0);
    std::vector<double> nxt(cur.size(), 0.0);
    std::int64_t layer = start.layer();
    std::int64_t lo = start.b;
    std::int64_t hi = start.b;
    cur[static_cast<std::size_t>(start.b)] = 1.0;

    while (lo <= hi) {
        std::int64_t nlo = total + 1;
        std::int64_t nhi = -1;
        for (std::int64_t b = lo; b <= hi; ++b) {
            const double m = cur[static_cast<std::size_t>(b)];
            if (m == 0.0) continue;
            cur[static_cast<std::size_t>(b)] = 0.0;
            const std::int64_t r = layer - 2 * b;
            const std::int64_t w = total - r - b;
            const double grow = lambda * static_cast<double>(w);
            const double decrease = static_cast<double>(b) + conv;
            const double denom = grow + decrease;
            out.expected_C += m * conv / denom;
            if (w > 0) {
                nxt[static_cast<std::size_t>(b)] += m * grow / denom;
                nlo = std::min(nlo, b);
                nhi = std::max(nhi, b);
            }
            const double down = m * decrease / denom;
            if (r == 1) {
                out.probabilities[static_cast<std::size_t>(w)] += down;
            } else {
                nxt[static_cast<std::size_t>(b + 1)] += down;
                nlo = std::min(nlo, b + 1);
                nhi = std::max(nhi, b + 1);
            }
        }
        std::swap(cur, nxt);
        lo = nlo;
        hi = nhi;
        ++layer;
        ++out.layers;
    }

    for (std::size_t k = 0; k < out.probabilities.size(); ++k)
        out.expected_W += static_cast<double>(k) * out.probabilities[k];
    out.extinction_probability = out.probabilities[0];
    return out;
}

} // namespace cewc
