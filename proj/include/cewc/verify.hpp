#pragma once

// The acceptance checks. Each criterion runs at its pinned sample size and
// tolerance and reports what it measured; `run_verification` collects them
// into a report. Shared by `cewc verify` and the acceptance test binary.

#include "cewc/analytics.hpp"
#include "cewc/birth_death.hpp"
#include "cewc/harness.hpp"
#include "cewc/stats.hpp"

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace cewc::verify {

enum class Level { Fast, Full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    /// Measured values next to what they were checked against.
    ordered_json measured = ordered_json::object();
};

struct Report {
    Level level = Level::Fast;
    std::vector<CriterionResult> criteria;
    bool passed() const
    {
        for (const auto& c : criteria)
            if (!c.passed) return false;
        return true;
    }
};

/// Closed forms the identity check compares against quadrature; swappable
/// so tests can inject a wrong formula and watch the check fail.
struct ClosedForms {
    std::function<double(double)> prob_gamma_less_exp = prob_gamma_less_exp_closed;
    std::function<double(double)> expected_excess = expected_excess_closed;
};

struct Options {
    std::uint64_t seed = 20251019;
    int parallelism = 1;
    ClosedForms closed_forms{};
};

namespace detail {

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <class Body>
CriterionResult timed(int id, std::string name, double budget, Body&& body)
{
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.budget_seconds = budget;
    Stopwatch clock;
    try {
        r.passed = body(r.measured);
    } catch (const std::exception& e) {
        r.passed = false;
        r.measured["exception"] = e.what();
    }
    r.seconds = clock.seconds();
    r.measured["seconds"] = r.seconds;
    if (r.seconds >= budget) {
        r.measured["over_budget"] = true;
        r.passed = false;
    }
    return r;
}

inline bool strictly_decreasing(const std::vector<double>& xs)
{
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] < xs[i - 1])) return false;
    return true;
}

inline ExperimentConfig experiment(const Params& p, Engine engine, Estimator est, std::int64_t trials,
                                   std::uint64_t seed, int parallelism)
{
    ExperimentConfig cfg;
    cfg.params = p;
    cfg.engine = engine;
    cfg.estimator = est;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.parallelism = parallelism;
    return cfg;
}

} // namespace detail

inline const std::vector<double>& identity_alpha_grid()
{
    static const std::vector<double> grid = {0.1, 0.3, 1.0, 2.0, 2.5, 4.0, 8.0};
    return grid;
}

/// 1. Closed forms of the two integral identities against quadrature.
inline CriterionResult criterion_integral_identities(const Options& opt = {})
{
    return detail::timed(1, "integral identities: closed form vs quadrature", 1.0, [&](ordered_json& m) {
        constexpr double tol = 1e-8;
        double worst_less = 0.0;
        double worst_excess = 0.0;
        ordered_json rows = ordered_json::array();
        for (double a : identity_alpha_grid()) {
            const double cl = opt.closed_forms.prob_gamma_less_exp(a);
            const double ql = prob_gamma_less_exp_quadrature(a);
            const double ce = opt.closed_forms.expected_excess(a);
            const double qe = expected_excess_quadrature(a);
            worst_less = std::max(worst_less, std::abs(cl - ql));
            worst_excess = std::max(worst_excess, std::abs(ce - qe));
            rows.push_back({{"alpha", a}, {"p_less_closed", cl}, {"p_less_quadrature", ql},
                            {"excess_closed", ce}, {"excess_quadrature", qe}});
        }
        m["grid"] = std::move(rows);
        m["max_abs_diff_p_less"] = worst_less;
        m["max_abs_diff_excess"] = worst_excess;
        m["tolerance"] = tol;
        return worst_less < tol && worst_excess < tol;
    });
}

/// 2. Terminal value laws of the rescaled birth processes.
inline CriterionResult criterion_terminal_values(const Options& opt = {})
{
    return detail::timed(2, "terminal value laws (Exp / Gamma samplers)", 120.0, [&](ordered_json& m) {
        constexpr std::size_t samples = 100000;
        constexpr double ks_tol = 0.01;
        bool ok = true;

        // (a), (b): process limit at t = 12, alpha = 3.
        {
            Rng rng{derive_seed(opt.seed, 201)};
            std::vector<double> xs(samples);
            for (auto& x : xs) x = sample_terminal_gamma_process(3.0, 12.0, rng).value;
            const RunningMean mean = summarize_samples(xs);
            const double expected = 3.0 - 2.0 * std::exp(-12.0);
            const double z = z_score(mean.mean(), expected, mean.std_error());
            const double ks = stats_ks(xs, [](double x) { return gamma_cdf(3.0, x); });
            m["a_process_mean"] = {{"mean", mean.mean()}, {"expected", expected}, {"std_error", mean.std_error()},
                                   {"z", z}, {"passed", z <= 3.0}};
            m["b_process_ks_vs_gamma3"] = {{"statistic", ks}, {"threshold", ks_tol}, {"passed", ks < ks_tol}};
            ok = ok && z <= 3.0 && ks < ks_tol;
        }
        // (c): limit sum vs direct Gamma at alpha = 1.5.
        {
            Rng rng_sum{derive_seed(opt.seed, 202)};
            Rng rng_direct{derive_seed(opt.seed, 203)};
            std::vector<double> sums(samples);
            std::vector<double> direct(samples);
            for (auto& x : sums) x = sample_limit_sum(1.5, 40.0, rng_sum).value;
            for (auto& x : direct) x = sample_terminal_gamma_direct(1.5, rng_direct).value;
            const double ks = stats_ks_two_sample(sums, direct);
            m["c_limit_sum_vs_direct_ks"] = {{"statistic", ks}, {"threshold", ks_tol}, {"passed", ks < ks_tol}};
            ok = ok && ks < ks_tol;
        }
        // (d): Laplace transform of the limit sum at s = 1, alpha = 2.
        {
            Rng rng{derive_seed(opt.seed, 204)};
            RunningMean mean;
            for (std::size_t i = 0; i < samples; ++i) mean.add(std::exp(-sample_limit_sum(2.0, 40.0, rng).value));
            const double z = z_score(mean.mean(), 0.25, mean.std_error());
            m["d_laplace_transform"] = {{"mean", mean.mean()}, {"expected", 0.25}, {"std_error", mean.std_error()},
                                        {"z", z}, {"passed", z <= 3.0}};
            ok = ok && z <= 3.0;
        }
        return ok;
    });
}

/// Histogram of W over trial results.
inline std::vector<std::int64_t> w_histogram(const std::vector<FixationResult>& results, std::int64_t n)
{
    std::vector<std::int64_t> h(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& r : results) ++h[static_cast<std::size_t>(r.white_survivors)];
    return h;
}

/// Extinction z-score (against the exact probability) and chi-square of an
/// engine's W histogram against the exact distribution.
inline bool check_engine_against_exact(const ExperimentConfig& cfg, const ExactDistribution& exact, ordered_json& m)
{
    const auto results = run_trials(cfg);
    const auto hist = w_histogram(results, cfg.params.n());
    const double n = static_cast<double>(results.size());
    const double p = exact.extinction_probability;
    const double p_hat = static_cast<double>(hist[0]) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    const double z = z_score(p_hat, p, se);
    const auto chi = stats_chi_square(hist, exact.probabilities);
    const bool ok = z <= 3.0 && chi.p_value >= 0.001;
    m = {{"n", cfg.params.n()},
         {"trials", cfg.trials},
         {"extinction_estimate", p_hat},
         {"extinction_exact", p},
         {"std_error", se},
         {"z", z},
         {"chi_square", chi.statistic},
         {"dof", chi.dof},
         {"p_value", chi.p_value},
         {"passed", ok}};
    return ok;
}

/// 3. All three engines reproduce the exact W law.
inline CriterionResult criterion_cross_engine(const Options& opt = {})
{
    return detail::timed(3, "cross-engine law equivalence vs exact distribution", 300.0, [&](ordered_json& m) {
        const Params p50{50, 1.0, 2.0};
        const Params p20{20, 1.0, 2.0};
        const auto exact50 = exact_distribution_W(50, 1.0, 2.0);
        const auto exact20 = exact_distribution_W(20, 1.0, 2.0);
        bool ok = true;
        ordered_json sub;
        ok &= check_engine_against_exact(
            detail::experiment(p50, Engine::Chain, Estimator::FullWHistogram, 100000, derive_seed(opt.seed, 301),
                               opt.parallelism),
            exact50, sub);
        m["chain"] = sub;
        ok &= check_engine_against_exact(
            detail::experiment(p20, Engine::Graph, Estimator::FullWHistogram, 10000, derive_seed(opt.seed, 302),
                               opt.parallelism),
            exact20, sub);
        m["graph"] = sub;
        ok &= check_engine_against_exact(
            detail::experiment(p50, Engine::Coupling, Estimator::FullWHistogram, 100000, derive_seed(opt.seed, 303),
                               opt.parallelism),
            exact50, sub);
        m["coupling"] = sub;
        return ok;
    });
}

/// 4. P(W = n) = alpha / (lambda n + alpha) in the exact distribution.
inline CriterionResult criterion_instant_conversion(const Options& = {})
{
    return detail::timed(4, "instant-conversion identity P(W=n)", 1.0, [&](ordered_json& m) {
        struct Case {
            std::int64_t n;
            double lambda;
            double alpha;
        };
        bool ok = true;
        ordered_json rows = ordered_json::array();
        for (const Case c : {Case{10, 1.0, 1.0}, Case{100, 1.0, 4.0}, Case{50, 2.0, 0.5}}) {
            const auto d = exact_distribution_W(c.n, c.lambda, c.alpha);
            const double got = d.probabilities.back();
            const double want = c.alpha / (c.lambda * static_cast<double>(c.n) + c.alpha);
            const double diff = std::abs(got - want);
            ok = ok && diff < 1e-12;
            rows.push_back({{"n", c.n}, {"lambda", c.lambda}, {"alpha", c.alpha}, {"p_w_eq_n", got},
                            {"expected", want}, {"abs_diff", diff}});
        }
        m["cases"] = std::move(rows);
        m["tolerance"] = 1e-12;
        return ok;
    });
}

/// 5. Standard with alpha = 1 equals Kortchemski chase-escape.
inline CriterionResult criterion_alpha_one_equivalence(const Options& = {})
{
    return detail::timed(5, "alpha=1 standard equals Kortchemski chase-escape", 1.0, [&](ordered_json& m) {
        const auto standard = exact_distribution_W(50, 1.0, 1.0, InitMode::Standard);
        const auto kort = exact_distribution_W(50, 1.0, 0.0, InitMode::Kortchemski);
        double worst = 0.0;
        for (std::size_t k = 0; k < standard.probabilities.size(); ++k)
            worst = std::max(worst, std::abs(standard.probabilities[k] - kort.probabilities[k]));
        m["max_abs_diff"] = worst;
        m["tolerance"] = 1e-12;
        m["extinction_standard"] = standard.extinction_probability;
        m["extinction_kortchemski"] = kort.extinction_probability;
        return worst < 1e-12;
    });
}

/// 6. Extinction probability approaches 2^-alpha at criticality, 0 / 1 off it.
inline CriterionResult criterion_extinction_trend(const Options& = {})
{
    return detail::timed(6, "extinction probability trend (lambda=1, alpha=2) and off-critical", 120.0,
                         [&](ordered_json& m) {
                             const double limit = extinction_limit(1.0, 2.0);
                             std::vector<double> gaps;
                             ordered_json rows = ordered_json::array();
                             for (std::int64_t n : {100, 400, 1600}) {
                                 const double p = exact_distribution_W(n, 1.0, 2.0).extinction_probability;
                                 gaps.push_back(std::abs(p - limit));
                                 rows.push_back({{"n", n}, {"extinction", p}, {"gap", gaps.back()}});
                             }
                             const double sub = exact_distribution_W(1600, 0.5, 2.0).extinction_probability;
                             const double super = exact_distribution_W(1600, 2.0, 2.0).extinction_probability;
                             const bool trend = detail::strictly_decreasing(gaps);
                             m["critical"] = std::move(rows);
                             m["limit"] = limit;
                             m["final_gap"] = gaps.back();
                             m["gap_strictly_decreasing"] = trend;
                             m["subcritical_lambda_0.5_n1600"] = sub;
                             m["supercritical_lambda_2_n1600"] = super;
                             return trend && sub < 0.05 && super > 0.95;
                         });
}

/// 7. E[W] approaches 2 alpha at criticality.
inline CriterionResult criterion_expected_white_trend(const Options& = {})
{
    return detail::timed(7, "expected white survivors trend towards 2 alpha", 120.0, [&](ordered_json& m) {
        bool ok = true;
        for (double alpha : {1.0, 3.0}) {
            const double limit = expected_white_limit(alpha);
            std::vector<double> gaps;
            ordered_json rows = ordered_json::array();
            for (std::int64_t n : {100, 400, 1600}) {
                const double ew = exact_distribution_W(n, 1.0, alpha).expected_W;
                gaps.push_back(std::abs(ew - limit));
                rows.push_back({{"n", n}, {"expected_w", ew}, {"gap", gaps.back()}});
            }
            const bool trend = detail::strictly_decreasing(gaps);
            ok = ok && trend;
            m["alpha_" + format_double(alpha)] = {{"rows", rows},
                                                  {"limit", limit},
                                                  {"final_relative_gap", gaps.back() / limit},
                                                  {"gap_strictly_decreasing", trend}};
        }
        return ok;
    });
}

/// 8. C / log n concentrates at alpha.
inline CriterionResult criterion_conversion_trend(const Options& opt = {})
{
    return detail::timed(8, "conversions over log n trend towards alpha (alpha=4)", 300.0, [&](ordered_json& m) {
        constexpr double alpha = 4.0;
        std::vector<double> gaps;
        std::vector<double> far;
        ordered_json rows = ordered_json::array();
        std::uint64_t k = 0;
        for (std::int64_t n : {100, 1000, 10000}) {
            const auto cfg = detail::experiment(Params{n, 1.0, alpha}, Engine::Chain, Estimator::ConversionOverLogN,
                                                10000, derive_seed(opt.seed, 800 + k++), opt.parallelism);
            const auto results = run_trials(cfg);
            const auto summary = summarize_trials(cfg, results);
            const double log_n = std::log(static_cast<double>(n));
            std::int64_t outside = 0;
            for (const auto& r : results) outside += std::abs(static_cast<double>(r.conversions) / log_n - alpha) > 1.0;
            gaps.push_back(std::abs(summary.estimate - alpha));
            far.push_back(static_cast<double>(outside) / static_cast<double>(results.size()));
            rows.push_back({{"n", n},
                            {"mean_c_over_log_n", summary.estimate},
                            {"std_error", summary.std_error},
                            {"gap", gaps.back()},
                            {"fraction_off_by_more_than_1", far.back()}});
        }
        const bool mean_trend = detail::strictly_decreasing(gaps);
        const bool prob_trend = detail::strictly_decreasing(far);
        m["rows"] = std::move(rows);
        m["gap_strictly_decreasing"] = mean_trend;
        m["fraction_strictly_decreasing"] = prob_trend;
        return mean_trend && prob_trend;
    });
}

/// 9. Fixation time over log n near 1. Measured on the coupling engine: its
/// fixation time runs on the birth/death clock (per-red rates), which is the
/// clock the limit is stated on. The chain's physical time is shorter by the
/// red population factor.
inline CriterionResult criterion_fixation_time(const Options& opt = {})
{
    return detail::timed(9, "fixation time over log n (n=1e4, alpha=1)", 120.0, [&](ordered_json& m) {
        const auto cfg = detail::experiment(Params{10000, 1.0, 1.0}, Engine::Coupling, Estimator::TauOverLogN, 1000,
                                            derive_seed(opt.seed, 900), opt.parallelism);
        const auto s = run_experiment(cfg);
        m["mean_tau_over_log_n"] = s.estimate;
        m["std_error"] = s.std_error;
        m["accepted_range"] = {0.85, 1.15};
        return s.estimate >= 0.85 && s.estimate <= 1.15;
    });
}

/// 10. E[Z] = alpha, by direct simulation of Z.
inline CriterionResult criterion_z_identity(const Options& opt = {})
{
    return detail::timed(10, "E[Z] = alpha by direct simulation (alpha=2)", 30.0, [&](ordered_json& m) {
        constexpr double alpha = 2.0;
        Rng rng{derive_seed(opt.seed, 1000)};
        RunningMean mean;
        for (int i = 0; i < 100000; ++i) mean.add(static_cast<double>(sample_z(alpha, rng)));
        const double assembled = expected_Z(alpha);
        const double z = z_score(mean.mean(), alpha, mean.std_error());
        m["mean_z"] = mean.mean();
        m["std_error"] = mean.std_error();
        m["z"] = z;
        m["assembled_expected_z"] = assembled;
        return z <= 3.0 && std::abs(assembled - alpha) < 1e-12;
    });
}

/// 11. Trajectory export on K_101 with lambda = 1, alpha = 4.
inline CriterionResult criterion_trajectory_export(const Options& opt = {})
{
    return detail::timed(11, "trajectory export on K_101 (lambda=1, alpha=4)", 30.0, [&](ordered_json& m) {
        const Params p{100, 1.0, 4.0};
        std::vector<double> ws;
        bool valid = true;
        std::string first_error;
        for (std::uint64_t s = 0; s < 100; ++s) {
            Rng rng = trial_rng(opt.seed, 1100 + s);
            const Trajectory traj = record_trajectory(p, rng);
            std::stringstream csv;
            write_trajectory_csv(csv, traj);
            const Trajectory back = parse_trajectory_csv(csv, initial_state(p));
            const std::string err = trajectory_violation(back, p);
            if (!err.empty()) {
                valid = false;
                if (first_error.empty()) first_error = err;
            }
            ws.push_back(static_cast<double>(summarize(back).white_survivors));
        }
        const RunningMean wm = summarize_samples(ws);
        m["runs"] = ws.size();
        m["all_csv_valid"] = valid;
        if (!first_error.empty()) m["first_violation"] = first_error;
        m["w_mean"] = wm.mean();
        m["w_variance"] = wm.variance();
        m["w_min"] = *std::min_element(ws.begin(), ws.end());
        m["w_max"] = *std::max_element(ws.begin(), ws.end());
        return valid && wm.variance() > 0.0;
    });
}

/// 12. Same seed, same answer: every engine, and across parallelism levels.
inline CriterionResult criterion_determinism(const Options& opt = {})
{
    return detail::timed(12, "determinism across reruns and parallelism", 30.0, [&](ordered_json& m) {
        bool ok = true;
        const Params p{50, 1.0, 2.0};
        const Graph k51 = complete_graph(p.vertex_count());
        for (Engine e : {Engine::Chain, Engine::Graph, Engine::Coupling}) {
            bool same = true;
            for (std::uint64_t s = 0; s < 50; ++s) {
                Rng a = trial_rng(opt.seed, 1200 + s);
                Rng b = trial_rng(opt.seed, 1200 + s);
                same = same && run_engine(e, p, &k51, a) == run_engine(e, p, &k51, b);
            }
            m[std::string(to_string(e)) + "_rerun_identical"] = same;
            ok = ok && same;
        }
        for (Engine e : {Engine::Chain, Engine::Coupling}) {
            auto cfg = detail::experiment(p, e, Estimator::ExpectedW, 20000, derive_seed(opt.seed, 1250), 1);
            const std::string serial = to_json(run_experiment(cfg)).dump();
            cfg.parallelism = 8;
            const std::string parallel = to_json(run_experiment(cfg)).dump();
            const bool same = serial == parallel;
            m[std::string(to_string(e)) + "_parallelism_1_vs_8_identical"] = same;
            ok = ok && same;
        }
        return ok;
    });
}

inline bool is_fast(int id) { return id != 2 && id != 3 && id != 8 && id != 9; }

inline Report run_verification(Level level, const Options& opt = {},
                               const std::function<void(const CriterionResult&)>& on_result = {})
{
    using Fn = CriterionResult (*)(const Options&);
    static constexpr Fn all[] = {criterion_integral_identities,   criterion_terminal_values,
                                 criterion_cross_engine,          criterion_instant_conversion,
                                 criterion_alpha_one_equivalence, criterion_extinction_trend,
                                 criterion_expected_white_trend,  criterion_conversion_trend,
                                 criterion_fixation_time,         criterion_z_identity,
                                 criterion_trajectory_export,     criterion_determinism};
    Report report;
    report.level = level;
    int id = 0;
    for (Fn f : all) {
        ++id;
        if (level == Level::Fast && !is_fast(id)) continue;
        report.criteria.push_back(f(opt));
        if (on_result) on_result(report.criteria.back());
    }
    return report;
}

inline ordered_json to_json(const Report& r)
{
    ordered_json j;
    j["level"] = r.level == Level::Fast ? "fast" : "full";
    j["passed"] = r.passed();
    ordered_json rows = ordered_json::array();
    for (const auto& c : r.criteria) {
        ordered_json row;
        row["id"] = c.id;
        row["name"] = c.name;
        row["passed"] = c.passed;
        row["seconds"] = c.seconds;
        row["budget_seconds"] = c.budget_seconds;
        row["measured"] = c.measured;
        rows.push_back(std::move(row));
    }
    j["criteria"] = std::move(rows);
    return j;
}

inline std::string summary_line(const CriterionResult& c)
{
    std::ostringstream out;
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << " (" << format_double(std::round(c.seconds * 1000.0) / 1000.0)
        << " s)";
    return out.str();
}

} // namespace cewc::verify
