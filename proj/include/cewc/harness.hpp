#pragma once

// Monte Carlo experiments over the three engines, and the JSON/CSV forms
// the command-line tool reads and writes.
//
// Seed splitting: trial i of an experiment with master seed s runs on
// Rng{derive_seed(s, i)}. Trials are split into `parallelism` contiguous
// blocks, one thread per block; every trial writes its own slot and the
// estimators fold the slots in trial order on the calling thread. The merged
// result therefore does not depend on the parallelism level.

#include "cewc/analytics.hpp"
#include "cewc/birth_death.hpp"
#include "cewc/chain.hpp"
#include "cewc/graph_sim.hpp"
#include "cewc/random.hpp"
#include "cewc/stats.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace cewc {

using ordered_json = nlohmann::ordered_json;

enum class Engine { Chain, Graph, Coupling };
enum class Estimator { ExtinctionProb, ExpectedW, ConversionOverLogN, TauOverLogN, FullWHistogram };

inline constexpr std::string_view to_string(Engine e) noexcept
{
    switch (e) {
    case Engine::Chain: return "chain";
    case Engine::Graph: return "graph";
    case Engine::Coupling: return "coupling";
    }
    return "?";
}

inline constexpr std::string_view to_string(Estimator e) noexcept
{
    switch (e) {
    case Estimator::ExtinctionProb: return "extinction_prob";
    case Estimator::ExpectedW: return "expected_w";
    case Estimator::ConversionOverLogN: return "conversion_over_log_n";
    case Estimator::TauOverLogN: return "tau_over_log_n";
    case Estimator::FullWHistogram: return "w_histogram";
    }
    return "?";
}

inline Engine parse_engine(std::string_view s)
{
    for (Engine e : {Engine::Chain, Engine::Graph, Engine::Coupling})
        if (s == to_string(e)) return e;
    throw invalid_params("unknown engine '" + std::string(s) + "' (expected chain, graph or coupling)");
}

inline Estimator parse_estimator(std::string_view s)
{
    for (Estimator e : {Estimator::ExtinctionProb, Estimator::ExpectedW, Estimator::ConversionOverLogN,
                        Estimator::TauOverLogN, Estimator::FullWHistogram})
        if (s == to_string(e)) return e;
    throw invalid_params("unknown estimator '" + std::string(s) + "'");
}

inline InitMode parse_init_mode(std::string_view s)
{
    if (s == "standard") return InitMode::Standard;
    if (s == "kortchemski") return InitMode::Kortchemski;
    throw invalid_params("unknown initial condition '" + std::string(s) + "' (expected standard or kortchemski)");
}

struct ExperimentConfig {
    Params params{100, 1.0, 1.0};
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;
    Estimator estimator = Estimator::ExtinctionProb;
    Engine engine = Engine::Chain;
    int parallelism = 1;
    /// Edge-list file for the graph engine; empty means the complete graph.
    std::string graph_file;

    void validate() const
    {
        if (trials < 1) throw invalid_params("trials must be >= 1");
        if (parallelism < 1) throw invalid_params("parallelism must be >= 1");
        if ((estimator == Estimator::ConversionOverLogN || estimator == Estimator::TauOverLogN) && params.n() < 2)
            throw invalid_params("log n estimators need n >= 2");
        if (engine == Engine::Coupling && params.mode() != InitMode::Standard)
            throw invalid_params("the coupling engine only covers the standard initial condition");
        if (engine != Engine::Graph && !graph_file.empty())
            throw invalid_params("--graph-file is only meaningful with the graph engine");
    }
};

struct EstimatorSummary {
    std::string estimator;
    std::string engine;
    std::int64_t n = 0;
    double lambda = 0.0;
    double alpha = 0.0;
    std::string init;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    Interval ci95;
    /// Only for the histogram estimator: counts of W = 0..n.
    std::vector<std::int64_t> histogram;

    friend bool operator==(const EstimatorSummary& a, const EstimatorSummary& b)
    {
        return a.estimator == b.estimator && a.engine == b.engine && a.n == b.n && a.lambda == b.lambda &&
               a.alpha == b.alpha && a.init == b.init && a.trials == b.trials && a.seed == b.seed &&
               a.estimate == b.estimate && a.std_error == b.std_error && a.ci95.lo == b.ci95.lo &&
               a.ci95.hi == b.ci95.hi && a.histogram == b.histogram;
    }
};

/// Runs one realization on the configured engine. `graph` must be set for
/// the graph engine.
template <BitGenerator G>
FixationResult run_engine(Engine engine, const Params& params, const Graph* graph, G& rng)
{
    switch (engine) {
    case Engine::Chain: return run_to_fixation(params, rng);
    case Engine::Graph: return run_graph_to_fixation(*graph, params, rng);
    case Engine::Coupling: return coupled_fixation(params.n(), params.lambda(), params.alpha(), rng);
    }
    throw invalid_params("unknown engine");
}

inline std::shared_ptr<const Graph> graph_for(const ExperimentConfig& cfg)
{
    if (cfg.engine != Engine::Graph) return nullptr;
    if (!cfg.graph_file.empty()) return std::make_shared<const Graph>(Graph::load_edge_list(cfg.graph_file));
    return std::make_shared<const Graph>(complete_graph(cfg.params.vertex_count()));
}

/// Every trial's result, in trial order.
inline std::vector<FixationResult> run_trials(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto graph = graph_for(cfg);
    std::vector<FixationResult> results(static_cast<std::size_t>(cfg.trials));

    auto run_block = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            Rng rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(i));
            results[static_cast<std::size_t>(i)] = run_engine(cfg.engine, cfg.params, graph.get(), rng);
        }
    };

    const std::int64_t workers = std::min<std::int64_t>(cfg.parallelism, cfg.trials);
    if (workers <= 1) {
        run_block(0, cfg.trials);
        return results;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (std::int64_t k = 0; k < workers; ++k) {
        const std::int64_t begin = cfg.trials * k / workers;
        const std::int64_t end = cfg.trials * (k + 1) / workers;
        threads.emplace_back([&, k, begin, end] {
            try {
                run_block(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(k)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

/// Folds per-trial results into the configured estimator.
inline EstimatorSummary summarize_trials(const ExperimentConfig& cfg, const std::vector<FixationResult>& results)
{
    EstimatorSummary s;
    s.estimator = std::string(to_string(cfg.estimator));
    s.engine = std::string(to_string(cfg.engine));
    s.n = cfg.params.n();
    s.lambda = cfg.params.lambda();
    s.alpha = cfg.params.alpha();
    s.init = std::string(to_string(cfg.params.mode()));
    s.trials = static_cast<std::int64_t>(results.size());
    s.seed = cfg.seed;

    if (cfg.estimator == Estimator::ExtinctionProb) {
        std::int64_t hits = 0;
        for (const auto& r : results) hits += r.white_survivors == 0;
        const double n = static_cast<double>(results.size());
        s.estimate = static_cast<double>(hits) / n;
        s.std_error = std::sqrt(s.estimate * (1.0 - s.estimate) / n);
        s.ci95 = stats_wilson_ci(hits, s.trials, 0.95);
        return s;
    }

    const double log_n = std::log(static_cast<double>(cfg.params.n()));
    RunningMean m;
    for (const auto& r : results) {
        switch (cfg.estimator) {
        case Estimator::ConversionOverLogN: m.add(static_cast<double>(r.conversions) / log_n); break;
        case Estimator::TauOverLogN: m.add(r.fixation_time / log_n); break;
        default: m.add(static_cast<double>(r.white_survivors)); break;
        }
    }
    s.estimate = m.mean();
    s.std_error = m.std_error();
    const double z = normal_quantile(0.975);
    s.ci95 = {s.estimate - z * s.std_error, s.estimate + z * s.std_error};
    if (cfg.estimator == Estimator::FullWHistogram) {
        s.histogram.assign(static_cast<std::size_t>(cfg.params.n()) + 1, 0);
        for (const auto& r : results) ++s.histogram[static_cast<std::size_t>(r.white_survivors)];
    }
    return s;
}

inline EstimatorSummary run_experiment(const ExperimentConfig& cfg) { return summarize_trials(cfg, run_trials(cfg)); }

// ---------------------------------------------------------------------------
// JSON

inline ordered_json params_json(std::int64_t n, double lambda, double alpha, std::string_view init)
{
    ordered_json j;
    j["n"] = n;
    j["lambda"] = lambda;
    j["alpha"] = alpha;
    j["init"] = init;
    return j;
}

inline ordered_json to_json(const EstimatorSummary& s)
{
    ordered_json j;
    j["estimator"] = s.estimator;
    j["engine"] = s.engine;
    j["params"] = params_json(s.n, s.lambda, s.alpha, s.init);
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["estimate"] = s.estimate;
    j["std_error"] = s.std_error;
    j["ci95"] = {s.ci95.lo, s.ci95.hi};
    if (!s.histogram.empty()) j["histogram"] = s.histogram;
    return j;
}

inline EstimatorSummary summary_from_json(const ordered_json& j)
{
    EstimatorSummary s;
    s.estimator = j.at("estimator").get<std::string>();
    s.engine = j.at("engine").get<std::string>();
    const auto& p = j.at("params");
    s.n = p.at("n").get<std::int64_t>();
    s.lambda = p.at("lambda").get<double>();
    s.alpha = p.at("alpha").get<double>();
    s.init = p.at("init").get<std::string>();
    s.trials = j.at("trials").get<std::int64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.estimate = j.at("estimate").get<double>();
    s.std_error = j.at("std_error").get<double>();
    s.ci95 = {j.at("ci95").at(0).get<double>(), j.at("ci95").at(1).get<double>()};
    if (j.contains("histogram")) s.histogram = j.at("histogram").get<std::vector<std::int64_t>>();
    return s;
}

inline ordered_json to_json(const ExactDistribution& d)
{
    ordered_json j;
    j["params"] = params_json(d.n, d.lambda, d.alpha, to_string(d.mode));
    j["distribution"] = d.probabilities;
    j["expected_w"] = d.expected_W;
    j["expected_c"] = d.expected_C;
    j["extinction_probability"] = d.extinction_probability;
    return j;
}

/// Reads an ExperimentConfig from JSON. Missing keys keep the values in
/// `base`.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {})
{
    static const std::vector<std::string> known = {"n",      "lambda",     "alpha", "init",        "engine",
                                                   "trials", "seed",       "estimator", "parallelism", "graph_file"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw invalid_params("unknown config key '" + key + "'");
    }
    const std::int64_t n = j.value("n", base.params.n());
    const double lambda = j.value("lambda", base.params.lambda());
    const double alpha = j.value("alpha", base.params.alpha());
    const InitMode mode = j.contains("init") ? parse_init_mode(j.at("init").get<std::string>()) : base.params.mode();
    base.params = Params{n, lambda, alpha, mode};
    if (j.contains("engine")) base.engine = parse_engine(j.at("engine").get<std::string>());
    if (j.contains("estimator")) base.estimator = parse_estimator(j.at("estimator").get<std::string>());
    base.trials = j.value("trials", base.trials);
    base.seed = j.value("seed", base.seed);
    base.parallelism = j.value("parallelism", base.parallelism);
    base.graph_file = j.value("graph_file", base.graph_file);
    return base;
}

// ---------------------------------------------------------------------------
// Trajectory CSV

inline std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline constexpr std::string_view trajectory_csv_header = "jump_index,time,r,b,w,event";

/// One row per jump; the initial condition is implied by the parameters.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << trajectory_csv_header << '\n';
    std::size_t index = 0;
    for (const auto& j : traj.jumps) {
        out << ++index << ',' << format_double(j.time) << ',' << j.state.r << ',' << j.state.b << ',' << j.state.w
            << ',' << to_string(j.event) << '\n';
    }
}

inline ordered_json trajectory_json(const Trajectory& traj, const Params& p)
{
    ordered_json j;
    j["params"] = params_json(p.n(), p.lambda(), p.alpha(), to_string(p.mode()));
    j["initial"] = {{"r", traj.initial.r}, {"b", traj.initial.b}, {"w", traj.initial.w}};
    ordered_json rows = ordered_json::array();
    std::size_t index = 0;
    for (const auto& jr : traj.jumps) {
        ordered_json row;
        row["jump_index"] = ++index;
        row["time"] = jr.time;
        row["r"] = jr.state.r;
        row["b"] = jr.state.b;
        row["w"] = jr.state.w;
        row["event"] = to_string(jr.event);
        rows.push_back(std::move(row));
    }
    j["jumps"] = std::move(rows);
    return j;
}

namespace detail {

template <class T>
T parse_field(std::string_view text, std::size_t line)
{
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw invalid_params("trajectory CSV line " + std::to_string(line) + ": bad field '" + std::string(text) + "'");
    return value;
}

} // namespace detail

/// Parses CSV written by write_trajectory_csv; `initial` is the state the
/// first row jumped from.
inline Trajectory parse_trajectory_csv(std::istream& in, PopulationState initial)
{
    Trajectory traj{initial, {}};
    std::string line;
    if (!std::getline(in, line) || line != trajectory_csv_header) throw invalid_params("trajectory CSV: bad header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 6) throw invalid_params("trajectory CSV line " + std::to_string(lineno) + ": expected 6 fields");
        if (detail::parse_field<std::size_t>(fields[0], lineno) != traj.jumps.size() + 1)
            throw invalid_params("trajectory CSV line " + std::to_string(lineno) + ": jump index out of sequence");
        JumpRecord rec;
        rec.time = detail::parse_field<double>(fields[1], lineno);
        rec.state.r = detail::parse_field<std::int64_t>(fields[2], lineno);
        rec.state.b = detail::parse_field<std::int64_t>(fields[3], lineno);
        rec.state.w = detail::parse_field<std::int64_t>(fields[4], lineno);
        if (fields[5] == "grow") rec.event = EventKind::Grow;
        else if (fields[5] == "chase") rec.event = EventKind::Chase;
        else if (fields[5] == "convert") rec.event = EventKind::Convert;
        else throw invalid_params("trajectory CSV line " + std::to_string(lineno) + ": unknown event");
        traj.jumps.push_back(rec);
    }
    return traj;
}

/// Population trajectory from the graph engine, in the same shape as the
/// chain's.
template <BitGenerator G>
Trajectory record_graph_trajectory(const Graph& graph, const Params& params, G& rng)
{
    GraphState s = GraphState::initial(graph, params);
    Trajectory traj{s.population(), {}};
    double t = 0.0;
    while (s.red_count() > 0) {
        const auto o = s.step(params, rng);
        t += o.holding_time;
        traj.jumps.push_back({t, s.population(), o.event});
    }
    return traj;
}

} // namespace cewc
