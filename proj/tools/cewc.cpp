// cewc: command-line driver for chase-escape with conversion experiments.
//
//   cewc simulate --n 100 --lambda 1 --alpha 4 --seed 7 > traj.csv
//   cewc estimate --n 50 --alpha 2 --estimator extinction_prob --trials 100000
//   cewc exact    --n 50 --alpha 1
//   cewc verify   --level fast
//
// Exit status: 0 success, 1 verification failure, 2 usage or input error.

#include "cewc/analytics.hpp"
#include "cewc/harness.hpp"
#include "cewc/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_usage = 2;

struct RawOptions {
    std::int64_t n = 100;
    double lambda = 1.0;
    double alpha = 1.0;
    std::string init = "standard";
    std::string engine = "chain";
    std::string estimator = "extinction_prob";
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;
    int parallelism = 1;
    std::string graph_file;
    std::string output;
    std::string format;
    std::string config;
    std::string level = "fast";
    std::uint64_t verify_seed = 20251019;
    int verify_parallelism = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
};

void add_model_flags(CLI::App* cmd, RawOptions& o)
{
    cmd->add_option("--n", o.n, "white-site budget (graph is K_{n+1}, or K_{n+2} for kortchemski)")->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "red spread rate per red-white edge")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "conversion rate per red vertex (ignored for kortchemski)")->capture_default_str();
    cmd->add_option("--init", o.init, "initial condition")
        ->check(CLI::IsMember({"standard", "kortchemski"}))
        ->capture_default_str();
}

void add_run_flags(CLI::App* cmd, RawOptions& o)
{
    cmd->add_option("--engine", o.engine, "simulator")->check(CLI::IsMember({"chain", "graph", "coupling"}))->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--graph-file", o.graph_file, "edge list for the graph engine (default: complete graph)");
    cmd->add_option("--config", o.config, "JSON experiment config; its keys override the flags");
}

void add_output_flags(CLI::App* cmd, RawOptions& o, std::string default_format)
{
    o.format = std::move(default_format);
    cmd->add_option("--output", o.output, "output path (default: standard output)");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

cewc::ExperimentConfig make_config(const RawOptions& o)
{
    cewc::ExperimentConfig cfg;
    cfg.params = cewc::Params{o.n, o.lambda, o.alpha, cewc::parse_init_mode(o.init)};
    cfg.engine = cewc::parse_engine(o.engine);
    cfg.estimator = cewc::parse_estimator(o.estimator);
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.parallelism = o.parallelism;
    cfg.graph_file = o.graph_file;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw cewc::invalid_params("cannot open config file: " + o.config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw cewc::invalid_params(std::string("config file is not valid JSON: ") + e.what());
        }
        cfg = cewc::config_from_json(j, cfg);
    }
    cfg.validate();
    return cfg;
}

/// Writes to --output or standard output.
template <class Writer>
void emit(const RawOptions& o, Writer&& write)
{
    if (o.output.empty()) {
        write(std::cout);
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("failed writing to standard output");
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + o.output);
    write(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + o.output);
}

int cmd_simulate(const RawOptions& o)
{
    auto cfg = make_config(o);
    if (cfg.engine == cewc::Engine::Coupling) throw cewc::invalid_params("simulate supports the chain and graph engines");
    cewc::Rng rng = cewc::trial_rng(cfg.seed, 0);
    cewc::Trajectory traj;
    if (cfg.engine == cewc::Engine::Chain) {
        traj = cewc::record_trajectory(cfg.params, rng);
    } else {
        const auto graph = cewc::graph_for(cfg);
        traj = cewc::record_graph_trajectory(*graph, cfg.params, rng);
    }
    emit(o, [&](std::ostream& out) {
        if (o.format == "json") out << cewc::trajectory_json(traj, cfg.params).dump(2) << '\n';
        else cewc::write_trajectory_csv(out, traj);
    });
    return exit_ok;
}

int cmd_estimate(const RawOptions& o)
{
    const auto cfg = make_config(o);
    const auto summary = cewc::run_experiment(cfg);
    emit(o, [&](std::ostream& out) {
        if (o.format == "csv") {
            out << "estimator,engine,n,lambda,alpha,init,trials,seed,estimate,std_error,ci_lo,ci_hi\n";
            out << summary.estimator << ',' << summary.engine << ',' << summary.n << ','
                << cewc::format_double(summary.lambda) << ',' << cewc::format_double(summary.alpha) << ','
                << summary.init << ',' << summary.trials << ',' << summary.seed << ','
                << cewc::format_double(summary.estimate) << ',' << cewc::format_double(summary.std_error) << ','
                << cewc::format_double(summary.ci95.lo) << ',' << cewc::format_double(summary.ci95.hi) << '\n';
        } else {
            out << cewc::to_json(summary).dump(2) << '\n';
        }
    });
    return exit_ok;
}

int cmd_exact(const RawOptions& o)
{
    const cewc::Params p{o.n, o.lambda, o.alpha, cewc::parse_init_mode(o.init)};
    const auto d = cewc::exact_distribution_W(p.n(), p.lambda(), p.alpha(), p.mode());
    emit(o, [&](std::ostream& out) {
        if (o.format == "csv") {
            out << "w,probability\n";
            for (std::size_t k = 0; k < d.probabilities.size(); ++k)
                out << k << ',' << cewc::format_double(d.probabilities[k]) << '\n';
        } else {
            out << cewc::to_json(d).dump(2) << '\n';
        }
    });
    return exit_ok;
}

int cmd_verify(const RawOptions& o)
{
    cewc::verify::Options opt;
    opt.seed = o.verify_seed;
    opt.parallelism = o.verify_parallelism;
    const auto level = o.level == "full" ? cewc::verify::Level::Full : cewc::verify::Level::Fast;
    const auto report = cewc::verify::run_verification(
        level, opt, [](const auto& c) { std::cerr << cewc::verify::summary_line(c) << '\n'; });
    emit(o, [&](std::ostream& out) { out << cewc::verify::to_json(report).dump(2) << '\n'; });
    return report.passed() ? exit_ok : exit_verify_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Chase-escape with conversion on complete graphs: simulation, exact oracles, verification"};
    app.require_subcommand(1);
    RawOptions o;

    auto* simulate = app.add_subcommand("simulate", "record one trajectory (CSV or JSON)");
    add_model_flags(simulate, o);
    add_run_flags(simulate, o);
    add_output_flags(simulate, o, "csv");
    simulate->add_option("--trials", o.trials, "must be 1 for simulate")->check(CLI::Range(1, 1));

    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate with standard error (JSON)");
    add_model_flags(estimate, o);
    add_run_flags(estimate, o);
    estimate->add_option("--trials", o.trials, "number of realizations")->capture_default_str();
    estimate->add_option("--parallelism", o.parallelism, "worker threads")->capture_default_str();
    estimate->add_option("--estimator", o.estimator, "statistic to estimate")
        ->check(CLI::IsMember({"extinction_prob", "expected_w", "conversion_over_log_n", "tau_over_log_n", "w_histogram"}))
        ->capture_default_str();

    auto* exact = app.add_subcommand("exact", "exact distribution of W by dynamic programming (JSON)");
    add_model_flags(exact, o);

    auto* verify = app.add_subcommand("verify", "run the acceptance checks; JSON report");
    verify->add_option("--level", o.level, "fast or full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
    verify->add_option("--seed", o.verify_seed, "master seed")->capture_default_str();
    verify->add_option("--parallelism", o.verify_parallelism, "worker threads")->capture_default_str();

    // Output flags are registered after defaults that differ per subcommand.
    std::string estimate_format = "json";
    estimate->add_option("--output", o.output, "output path (default: standard output)");
    estimate->add_option("--format", estimate_format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    std::string exact_format = "json";
    exact->add_option("--output", o.output, "output path (default: standard output)");
    exact->add_option("--format", exact_format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    verify->add_option("--output", o.output, "output path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*simulate) return cmd_simulate(o);
        if (*estimate) {
            o.format = estimate_format;
            return cmd_estimate(o);
        }
        if (*exact) {
            o.format = exact_format;
            return cmd_exact(o);
        }
        if (*verify) return cmd_verify(o);
    } catch (const cewc::invalid_params& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
