#include "cewc/random.hpp"
#include "cewc/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace cewc;

TEST(Wilson, ZeroSuccesses)
{
    const auto ci = stats_wilson_ci(0, 100);
    EXPECT_EQ(ci.lo, 0.0);
    // z^2 / (n + z^2) for z = 1.96.
    EXPECT_NEAR(ci.hi, 0.0370, 1e-3);
}

TEST(Wilson, SymmetricAtHalf)
{
    const auto ci = stats_wilson_ci(50, 100);
    EXPECT_NEAR(0.5 - ci.lo, ci.hi - 0.5, 1e-14);
    EXPECT_NEAR(ci.lo, 0.4038, 1e-4);
}

TEST(Wilson, AllSuccessesContainOne)
{
    const auto ci = stats_wilson_ci(100, 100);
    EXPECT_TRUE(ci.contains(1.0));
    EXPECT_LT(ci.lo, 1.0);
}

TEST(Wilson, RejectsBadCounts)
{
    EXPECT_THROW(stats_wilson_ci(1, 0), invalid_params);
    EXPECT_THROW(stats_wilson_ci(5, 4), invalid_params);
    EXPECT_THROW(stats_wilson_ci(-1, 4), invalid_params);
}

TEST(RunningMean, MatchesTwoPass)
{
    const std::vector<double> xs = {1.0, 4.0, 4.0, 7.0, 9.0, 11.0};
    const auto m = summarize_samples(xs);
    EXPECT_EQ(m.count(), 6);
    EXPECT_NEAR(m.mean(), 6.0, 1e-15);
    double ss = 0.0;
    for (double x : xs) ss += (x - 6.0) * (x - 6.0);
    EXPECT_NEAR(m.variance(), ss / 5.0, 1e-13);
    EXPECT_NEAR(m.std_error(), std::sqrt(ss / 5.0 / 6.0), 1e-13);
}

TEST(ZScore, ZeroErrorCases)
{
    EXPECT_EQ(z_score(1.0, 1.0, 0.0), 0.0);
    EXPECT_TRUE(std::isinf(z_score(1.0, 2.0, 0.0)));
    EXPECT_EQ(z_score(3.0, 1.0, 0.5), 4.0);
}

TEST(Ks, SamplesFromTheModelScoreLow)
{
    Rng g{7};
    std::vector<double> xs(100000);
    for (auto& x : xs) x = uniform_open(g);
    EXPECT_LT(stats_ks(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }), ks_critical_value(xs.size()));
}

TEST(Ks, ConstantSampleScoresHigh)
{
    const std::vector<double> xs(1000, 2.0);
    EXPECT_GE(stats_ks(xs, [](double x) { return 1.0 - std::exp(-x); }), 0.5);
}

TEST(Ks, OrderDoesNotMatter)
{
    Rng g{8};
    std::vector<double> xs(500);
    for (auto& x : xs) x = exponential(g, 1.0);
    auto cdf = [](double x) { return 1.0 - std::exp(-x); };
    const double d = stats_ks(xs, cdf);
    std::reverse(xs.begin(), xs.end());
    EXPECT_EQ(stats_ks(xs, cdf), d);
    std::sort(xs.begin(), xs.end());
    EXPECT_EQ(stats_ks(xs, cdf), d);
}

TEST(Ks, ExactSmallSample)
{
    // Empirical steps at 0.2 and 0.6 against U(0,1): sup gap is 0.4 at 0.6-.
    const std::vector<double> xs = {0.2, 0.6};
    EXPECT_NEAR(stats_ks(xs, [](double x) { return x; }), 0.4, 1e-15);
}

TEST(KsTwoSample, IdenticalAndDisjoint)
{
    const std::vector<double> a = {1, 2, 3, 4};
    const std::vector<double> b = {5, 6, 7};
    EXPECT_EQ(stats_ks_two_sample(a, a), 0.0);
    EXPECT_EQ(stats_ks_two_sample(a, b), 1.0);
    const std::vector<double> c = {1, 3};
    const std::vector<double> d = {2, 4};
    EXPECT_NEAR(stats_ks_two_sample(c, d), 0.5, 1e-15);
}

TEST(ChiSquare, PerfectFitAndPooling)
{
    const std::vector<std::int64_t> obs = {50, 30, 20};
    const std::vector<double> probs = {0.5, 0.3, 0.2};
    const auto r = stats_chi_square(obs, probs);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.dof, 2);
    EXPECT_EQ(r.p_value, 1.0);

    // Expected 97, 1, 1, 1: the three small bins pool into one of 3, which
    // is itself below 5 and dropped.
    const std::vector<std::int64_t> obs2 = {97, 1, 1, 1};
    const std::vector<double> probs2 = {0.97, 0.01, 0.01, 0.01};
    const auto r2 = stats_chi_square(obs2, probs2);
    EXPECT_EQ(r2.bins, 1);
    EXPECT_EQ(r2.dof, 0);
}

TEST(ChiSquare, DetectsMisfit)
{
    const std::vector<std::int64_t> obs = {600, 400};
    const std::vector<double> probs = {0.5, 0.5};
    const auto r = stats_chi_square(obs, probs);
    EXPECT_NEAR(r.statistic, 40.0, 1e-12);
    EXPECT_LT(r.p_value, 1e-9);
    EXPECT_THROW(stats_chi_square(obs, std::vector<double>{1.0}), invalid_params);
}
