#include "cewc/analytics.hpp"
#include "cewc/special.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace cewc;

namespace {

constexpr double alpha_grid[] = {0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0};

} // namespace

TEST(Special, IncompleteGammaMatchesIntegratedDensity)
{
    for (double a : {0.5, 1.0, 2.5, 7.0, 30.0}) {
        for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 40.0}) {
            const double direct = integrate([a](double t) { return gamma_pdf(a, t); }, 0.0, x, {.abs_tol = 1e-13}).value;
            EXPECT_NEAR(regularized_gamma_p(a, x), direct, 1e-9) << "a=" << a << " x=" << x;
            EXPECT_NEAR(regularized_gamma_p(a, x) + regularized_gamma_q(a, x), 1.0, 1e-14);
        }
    }
}

TEST(Special, KnownValues)
{
    EXPECT_NEAR(gamma_cdf(1.0, 2.0), 1.0 - std::exp(-2.0), 1e-15);
    EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-12);
    EXPECT_NEAR(chi_square_sf(2.0 * 3.0, 2), std::exp(-3.0), 1e-15);
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
    EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
    EXPECT_THROW(normal_quantile(1.0), invalid_params);
}

TEST(Quadrature, PolynomialAndHalfLine)
{
    EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0).value, 9.0, 1e-13);
    EXPECT_NEAR(integrate_half_line([](double x) { return std::exp(-x); }).value, 1.0, 1e-12);
    EXPECT_NEAR(integrate_half_line([](double x) { return 1.0 / (1.0 + x * x); }).value, std::acos(-1.0) / 2, 1e-9);
}

TEST(Quadrature, ReportsFailureToConverge)
{
    auto wild = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
    EXPECT_THROW(integrate(wild, 0.0, 1.0, {.abs_tol = 1e-14, .max_intervals = 50}), quadrature_error);
}

TEST(Analytics, RegimeClassification)
{
    EXPECT_EQ(classify_regime(0.999), LimitRegime::Subcritical);
    EXPECT_EQ(classify_regime(1.0), LimitRegime::Critical);
    EXPECT_EQ(classify_regime(1.001), LimitRegime::Supercritical);
    EXPECT_EQ(to_string(LimitRegime::Critical), "critical");
    EXPECT_THROW(classify_regime(0.0), invalid_params);
    EXPECT_THROW(classify_regime(-1.0), invalid_params);
}

TEST(Analytics, LimitExamples)
{
    EXPECT_EQ(extinction_limit(1.0, 1.0), 0.5);
    EXPECT_EQ(extinction_limit(1.0, 2.0), 0.25);
    EXPECT_EQ(extinction_limit(0.5, 2.0), 0.0);
    EXPECT_EQ(extinction_limit(2.0, 2.0), 1.0);
    EXPECT_EQ(expected_white_limit(1.5), 3.0);
    EXPECT_EQ(conversion_growth_limit(0.7), 0.7);
    EXPECT_THROW(extinction_limit(1.0, 0.0), invalid_params);
    EXPECT_THROW(expected_white_limit(-2.0), invalid_params);
}

TEST(Analytics, ProbabilityIdentityOverGrid)
{
    for (double a : alpha_grid)
        EXPECT_NEAR(prob_gamma_less_exp_quadrature(a), prob_gamma_less_exp_closed(a), 1e-8) << a;
}

TEST(Analytics, ExcessIdentityOverGrid)
{
    for (double a : alpha_grid)
        EXPECT_NEAR(expected_excess_quadrature(a), expected_excess_closed(a), 1e-8) << a;
    EXPECT_NEAR(expected_excess_closed(1.0), 0.5, 1e-15);
}

TEST(Analytics, ExpectedZ)
{
    // E[Z] = 1 - 2^-a + a - 1 + 2^-a = a.
    for (double a : alpha_grid) EXPECT_NEAR(expected_Z(a), a, 1e-12) << a;
}

TEST(Exact, SingleWhiteVertex)
{
    const auto d = exact_distribution_W(1, 1.0, 1.0);
    ASSERT_EQ(d.probabilities.size(), 2u);
    EXPECT_NEAR(d.probabilities[0], cewc::testing::k2_p_w0, 1e-15);
    EXPECT_NEAR(d.probabilities[1], cewc::testing::k2_p_w1, 1e-15);
    EXPECT_NEAR(d.expected_C, cewc::testing::k2_expected_c, 1e-15);
    EXPECT_NEAR(d.expected_W, 0.5, 1e-15);
    EXPECT_EQ(d.extinction_probability, d.probabilities[0]);
}

TEST(Exact, AllWhiteSurviveOnlyByInstantConversion)
{
    for (std::int64_t n : {5, 50, 500}) {
        for (double lambda : {0.5, 1.0, 3.0}) {
            const auto d = exact_distribution_W(n, lambda, 1.7);
            const double expected = 1.7 / (lambda * static_cast<double>(n) + 1.7);
            EXPECT_NEAR(d.probabilities[static_cast<std::size_t>(n)], expected, 1e-14);
        }
    }
}

TEST(Exact, NormalizedAndLayerBounded)
{
    for (std::int64_t n : {1, 2, 10, 200, 2000}) {
        for (auto mode : {InitMode::Standard, InitMode::Kortchemski}) {
            const auto d = exact_distribution_W(n, 1.0, 2.0, mode);
            const double mass = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
            EXPECT_NEAR(mass, 1.0, 1e-12) << n;
            const Params p{n, 1.0, 2.0, mode};
            EXPECT_LE(d.layers, 2 * p.vertex_count());
            for (double q : d.probabilities) EXPECT_GE(q, 0.0);
        }
    }
}

TEST(Exact, UnitConversionRateMatchesKortchemskiStart)
{
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto a = exact_distribution_W(40, lambda, 1.0, InitMode::Standard);
        const auto b = exact_distribution_W(40, lambda, 1.0, InitMode::Kortchemski);
        for (std::size_t k = 0; k < a.probabilities.size(); ++k)
            EXPECT_NEAR(a.probabilities[k], b.probabilities[k], 1e-13) << k;
        EXPECT_EQ(b.expected_C, 0.0);
    }
}

TEST(Exact, AgreesWithJumpTreeOracle)
{
    for (std::int64_t n : {1, 2, 3, 7, 15, 30}) {
        for (double lambda : {0.4, 1.0, 2.5}) {
            for (double alpha : {0.3, 1.0, 4.0}) {
                cewc::testing::JumpTreeOracle oracle{n + 1, lambda, alpha, {}};
                const auto want = oracle.solve(1, 0);
                const auto got = exact_distribution_W(n, lambda, alpha);
                for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k)
                    ASSERT_NEAR(got.probabilities[k], want.w_dist[k], 1e-13) << n << " " << lambda << " " << alpha;
                ASSERT_NEAR(got.expected_C, want.expected_c, 1e-12);
            }
            cewc::testing::JumpTreeOracle k_oracle{n + 2, lambda, 0.0, {}};
            const auto want = k_oracle.solve(1, 1);
            const auto got = exact_distribution_W(n, lambda, 1.0, InitMode::Kortchemski);
            for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k)
                ASSERT_NEAR(got.probabilities[k], want.w_dist[k], 1e-13);
        }
    }
}

TEST(Exact, CriticalTrendTowardsLimit)
{
    double previous_gap = 1.0;
    for (std::int64_t n : {100, 400, 1600}) {
        const double gap = std::abs(exact_distribution_W(n, 1.0, 2.0).extinction_probability - 0.25);
        EXPECT_LT(gap, previous_gap);
        previous_gap = gap;
    }
    EXPECT_LT(previous_gap, 1e-3);
}

TEST(Exact, RejectsOversizedAndInvalid)
{
    EXPECT_THROW(exact_distribution_W(max_exact_n + 1, 1.0, 1.0), resource_limit);
    EXPECT_THROW(exact_distribution_W(0, 1.0, 1.0), invalid_params);
    EXPECT_THROW(exact_distribution_W(10, -1.0, 1.0), invalid_params);
    EXPECT_NO_THROW(exact_distribution_W(max_exact_n, 1.0, 1.0));
}
