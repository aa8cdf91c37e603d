#include "cewc/verify.hpp"

#include <gtest/gtest.h>

using namespace cewc;

TEST(Verify, IdentityCheckPassesWithTrueClosedForms)
{
    EXPECT_TRUE(verify::criterion_integral_identities().passed);
}

TEST(Verify, IdentityCheckCatchesWrongClosedForm)
{
    verify::Options opt;
    opt.closed_forms.prob_gamma_less_exp = [](double a) { return std::exp2(-a) + 1e-6; };
    const auto r = verify::criterion_integral_identities(opt);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.measured.at("max_abs_diff_p_less").get<double>(), 1e-7);

    verify::Options excess;
    excess.closed_forms.expected_excess = [](double a) { return a - 1.0 + std::exp2(-a - 1); };
    EXPECT_FALSE(verify::criterion_integral_identities(excess).passed);
}

TEST(Verify, FastLevelPasses)
{
    std::vector<int> seen;
    const auto report =
        verify::run_verification(verify::Level::Fast, {}, [&](const verify::CriterionResult& c) { seen.push_back(c.id); });
    EXPECT_EQ(seen, (std::vector<int>{1, 4, 5, 6, 7, 10, 11, 12}));
    for (const auto& c : report.criteria) EXPECT_TRUE(c.passed) << verify::summary_line(c);
    EXPECT_TRUE(report.passed());

    const auto j = verify::to_json(report);
    EXPECT_EQ(j.at("level"), "fast");
    EXPECT_EQ(j.at("criteria").size(), 8u);
}

TEST(Verify, SummaryLineFormat)
{
    verify::CriterionResult c;
    c.id = 4;
    c.name = "x";
    c.passed = true;
    c.seconds = 0.25;
    EXPECT_EQ(verify::summary_line(c), "[PASS] 4. x (0.25 s)");
    c.passed = false;
    EXPECT_EQ(verify::summary_line(c).substr(0, 6), "[FAIL]");
}
