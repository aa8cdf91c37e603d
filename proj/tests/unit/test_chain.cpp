#include "cewc/analytics.hpp"
#include "cewc/chain.hpp"
#include "cewc/stats.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace cewc;

TEST(Params, Validation)
{
    EXPECT_THROW(Params(0, 1.0, 1.0), invalid_params);
    EXPECT_THROW(Params(10, 0.0, 1.0), invalid_params);
    EXPECT_THROW(Params(10, -1.0, 1.0), invalid_params);
    EXPECT_THROW(Params(10, 1.0, -0.5), invalid_params);
    EXPECT_THROW(Params(10, 1.0, 0.0), invalid_params);
    EXPECT_THROW(Params(max_white_budget + 1, 1.0, 1.0), invalid_params);
    EXPECT_THROW(Params(10, std::nan(""), 1.0), invalid_params);
    EXPECT_NO_THROW(Params(10, 1.0, 0.0, InitMode::Kortchemski));
    EXPECT_NO_THROW(Params(max_white_budget, 1.0, 1.0));
}

TEST(Params, KortchemskiSwitchesConversionOff)
{
    const Params p{10, 1.0, 3.0, InitMode::Kortchemski};
    EXPECT_EQ(p.conversion_rate(), 0.0);
    EXPECT_EQ(p.vertex_count(), 12);
    EXPECT_EQ(Params(10, 1.0, 3.0).vertex_count(), 11);
}

TEST(Chain, InitialState)
{
    EXPECT_EQ(initial_state(Params(100, 1.0, 4.0)), (PopulationState{1, 0, 100}));
    EXPECT_EQ(initial_state(Params(100, 1.0, 0.0, InitMode::Kortchemski)), (PopulationState{1, 1, 100}));
    EXPECT_EQ(initial_state(Params(1, 1.0, 1.0)), (PopulationState{1, 0, 1}));
}

TEST(Chain, JumpProbabilitiesExamples)
{
    auto p = jump_probabilities({1, 0, 100}, Params(100, 1.0, 4.0));
    EXPECT_DOUBLE_EQ(p.grow, 100.0 / 104.0);
    EXPECT_DOUBLE_EQ(p.chase, 0.0);
    EXPECT_DOUBLE_EQ(p.convert, 4.0 / 104.0);

    p = jump_probabilities({2, 3, 0}, Params(4, 1.0, 1.0));
    EXPECT_DOUBLE_EQ(p.grow, 0.0);
    EXPECT_DOUBLE_EQ(p.chase, 0.75);
    EXPECT_DOUBLE_EQ(p.convert, 0.25);

    p = jump_probabilities({5, 2, 10}, Params(16, 2.0, 0.5));
    EXPECT_DOUBLE_EQ(p.grow, 20.0 / 22.5);
    EXPECT_DOUBLE_EQ(p.chase, 2.0 / 22.5);
    EXPECT_DOUBLE_EQ(p.convert, 0.5 / 22.5);
}

TEST(Chain, TotalRateExamples)
{
    EXPECT_DOUBLE_EQ(total_rate({1, 0, 100}, Params(100, 1.0, 4.0)), 104.0);
    EXPECT_DOUBLE_EQ(total_rate({2, 3, 0}, Params(4, 1.0, 1.0)), 8.0);
    EXPECT_DOUBLE_EQ(total_rate({1, 0, 1}, Params(1, 1.0, 1.0)), 2.0);
}

TEST(Chain, FixatedStateHasNoTransition)
{
    const Params p{5, 1.0, 1.0};
    Rng g{1};
    EXPECT_THROW(jump_probabilities({0, 3, 3}, p), no_transition);
    EXPECT_THROW(total_rate({0, 3, 3}, p), no_transition);
    EXPECT_THROW(step(PopulationState{0, 3, 3}, p, g), no_transition);
}

TEST(Chain, JumpProbabilitiesSumToOneOnRandomStates)
{
    Rng g{11};
    for (int i = 0; i < 10000; ++i) {
        const auto n = static_cast<std::int64_t>(1 + uniform_index(g, 1000));
        const double lambda = 0.01 + 10.0 * uniform_open(g);
        const double alpha = 0.01 + 10.0 * uniform_open(g);
        const Params p{n, lambda, alpha};
        const auto r = static_cast<std::int64_t>(1 + uniform_index(g, static_cast<std::uint64_t>(n + 1)));
        const auto b = static_cast<std::int64_t>(uniform_index(g, static_cast<std::uint64_t>(n + 2 - r)));
        const PopulationState s{r, b, n + 1 - r - b};
        const auto jp = jump_probabilities(s, p);
        ASSERT_NEAR(jp.grow + jp.chase + jp.convert, 1.0, 1e-12);
        ASSERT_GE(jp.grow, 0.0);
        ASSERT_GE(jp.chase, 0.0);
    }
}

TEST(Chain, StepWithoutWhitesDecreasesRed)
{
    const Params p{4, 1.0, 1.0};
    Rng g{3};
    for (int i = 0; i < 100; ++i) {
        const auto o = step(PopulationState{2, 3, 0}, p, g);
        EXPECT_EQ(o.state, (PopulationState{1, 4, 0}));
        EXPECT_NE(o.event, EventKind::Grow);
        EXPECT_GT(o.holding_time, 0.0);
    }
}

TEST(Chain, InstantConversionFixatesWithAllWhite)
{
    EXPECT_EQ(apply_event({1, 0, 7}, EventKind::Convert), (PopulationState{0, 1, 7}));
}

TEST(Chain, StepIsDeterministicGivenSeed)
{
    const Params p{20, 1.3, 0.7};
    Rng a{99};
    Rng b{99};
    const auto x = step(PopulationState{3, 2, 16}, p, a);
    const auto y = step(PopulationState{3, 2, 16}, p, b);
    EXPECT_EQ(x.state, y.state);
    EXPECT_EQ(x.event, y.event);
    EXPECT_EQ(x.holding_time, y.holding_time);
}

TEST(Chain, RunToFixationInvariants)
{
    for (auto mode : {InitMode::Standard, InitMode::Kortchemski}) {
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const Params p{37, 0.5 + 0.01 * static_cast<double>(seed % 100), 1.5, mode};
            Rng g = trial_rng(5, seed);
            const auto res = run_to_fixation(p, g);
            ASSERT_EQ(res.white_survivors + res.blue_total, p.vertex_count());
            ASSERT_LE(res.conversions, res.blue_total);
            ASSERT_GT(res.fixation_time, 0.0);
            ASSERT_LE(res.jump_count, p.max_jumps());
            if (mode == InitMode::Kortchemski) {
                ASSERT_EQ(res.conversions, 0);
            }
            Rng again = trial_rng(5, seed);
            ASSERT_EQ(run_to_fixation(p, again), res);
        }
    }
}

TEST(Chain, LayerAdvancesByOneEveryJump)
{
    const Params p{60, 1.0, 2.0};
    Rng g{8};
    PopulationState s = initial_state(p);
    while (s.r > 0) {
        const auto o = step(s, p, g);
        ASSERT_EQ(o.state.layer(), s.layer() + 1);
        ASSERT_EQ(o.state.total(), s.total());
        s = o.state;
    }
}

TEST(Chain, TwoVertexLawMatchesHandEnumeration)
{
    const Params p{1, 1.0, 1.0};
    constexpr int trials = 100000;
    std::int64_t w0 = 0;
    RunningMean c;
    for (int i = 0; i < trials; ++i) {
        Rng g = trial_rng(17, static_cast<std::uint64_t>(i));
        const auto r = run_to_fixation(p, g);
        w0 += r.white_survivors == 0;
        c.add(static_cast<double>(r.conversions));
    }
    const double p_hat = static_cast<double>(w0) / trials;
    EXPECT_LE(z_score(p_hat, cewc::testing::k2_p_w0, std::sqrt(0.25 / trials)), 3.0);
    EXPECT_LE(z_score(c.mean(), cewc::testing::k2_expected_c, c.std_error()), 3.0);
}

TEST(Chain, InstantConversionProbabilityAtN100)
{
    const Params p{100, 1.0, 4.0};
    constexpr int trials = 100000;
    std::int64_t hits = 0;
    for (int i = 0; i < trials; ++i) {
        Rng g = trial_rng(23, static_cast<std::uint64_t>(i));
        hits += run_to_fixation(p, g).white_survivors == 100;
    }
    const double expect = 4.0 / 104.0;
    EXPECT_LE(z_score(static_cast<double>(hits) / trials, expect, std::sqrt(expect * (1 - expect) / trials)), 3.0);
}

TEST(Chain, EmbeddedLawMatchesExactDistribution)
{
    const Params p{50, 1.0, 2.0};
    const auto exact = exact_distribution_W(50, 1.0, 2.0);
    constexpr int trials = 100000;
    std::vector<std::int64_t> hist(51, 0);
    for (int i = 0; i < trials; ++i) {
        Rng g = trial_rng(29, static_cast<std::uint64_t>(i));
        ++hist[static_cast<std::size_t>(run_to_fixation(p, g).white_survivors)];
    }
    for (std::size_t k = 0; k < hist.size(); ++k) {
        const double q = exact.probabilities[k];
        const double se = std::sqrt(q * (1 - q) / trials);
        EXPECT_LE(z_score(static_cast<double>(hist[k]) / trials, q, se), 3.0) << "W = " << k;
    }
}

TEST(Chain, TrajectoryInvariantsOnK101)
{
    const Params p{100, 1.0, 4.0};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng g = trial_rng(31, seed);
        const Trajectory t = record_trajectory(p, g);
        ASSERT_EQ(trajectory_violation(t, p), "");
        for (const auto& j : t.jumps) ASSERT_EQ(j.state.total(), 101);
        ASSERT_EQ(t.jumps.back().state.r, 0);
        Rng g2 = trial_rng(31, seed);
        ASSERT_EQ(summarize(t), run_to_fixation(p, g2));
    }
}

TEST(Chain, TrajectoryViolationDetectsTampering)
{
    const Params p{10, 1.0, 1.0};
    Rng g{4};
    Trajectory t = record_trajectory(p, g);
    ASSERT_EQ(trajectory_violation(t, p), "");
    Trajectory bad = t;
    bad.jumps.front().state.w += 1;
    EXPECT_NE(trajectory_violation(bad, p), "");
    bad = t;
    bad.jumps.back().time = 0.0;
    EXPECT_NE(trajectory_violation(bad, p), "");
    bad = t;
    bad.jumps.pop_back();
    EXPECT_NE(trajectory_violation(bad, p), "");
}
