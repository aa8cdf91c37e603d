#pragma once

// Population-level chase-escape with conversion on the complete graph.
//
// The state is the triple (r, b, w) of red, blue and white counts. From a
// state with r >= 1 the chain jumps at total rate r(lambda*w + b + alpha):
//
//   grow     white -> red        rate lambda * r * w
//   chase    red -> blue         rate b * r       (a blue neighbour)
//   convert  red -> blue         rate alpha * r   (spontaneous)
//
// The common factor r cancels from the jump probabilities. The process
// fixates when r reaches 0.

#include "cewc/errors.hpp"
#include "cewc/random.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cewc {

enum class InitMode { Standard, Kortchemski };

enum class EventKind { Grow, Chase, Convert };

inline constexpr std::string_view to_string(EventKind e) noexcept
{
    switch (e) {
    case EventKind::Grow: return "grow";
    case EventKind::Chase: return "chase";
    case EventKind::Convert: return "convert";
    }
    return "?";
}

inline constexpr std::string_view to_string(InitMode m) noexcept
{
    return m == InitMode::Standard ? "standard" : "kortchemski";
}

/// Largest white budget accepted; keeps lambda*r*w well inside double precision.
inline constexpr std::int64_t max_white_budget = 100'000'000;

/// Model parameters. Validated on construction.
///
/// Standard mode runs on K_{n+1} from one red root. Kortchemski mode runs
/// plain chase-escape on K_{n+2} from one red and one blue vertex; conversion
/// is switched off there, so `alpha` is carried but `conversion_rate()` is 0.
class Params {
public:
    Params(std::int64_t n, double lambda, double alpha, InitMode mode = InitMode::Standard)
        : n_{n}, lambda_{lambda}, alpha_{alpha}, mode_{mode}
    {
        if (n < 1) throw invalid_params("n must be >= 1");
        if (n > max_white_budget) throw invalid_params("n exceeds the supported maximum of 1e8");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw invalid_params("lambda must be positive and finite");
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw invalid_params("alpha must be non-negative and finite");
        if (mode == InitMode::Standard && alpha == 0.0)
            throw invalid_params("alpha = 0 with the standard initial condition never fixates");
    }

    std::int64_t n() const noexcept { return n_; }
    double lambda() const noexcept { return lambda_; }
    double alpha() const noexcept { return alpha_; }
    InitMode mode() const noexcept { return mode_; }

    double conversion_rate() const noexcept { return mode_ == InitMode::Standard ? alpha_ : 0.0; }
    std::int64_t vertex_count() const noexcept { return mode_ == InitMode::Standard ? n_ + 1 : n_ + 2; }
    /// Every vertex turns red at most once and blue at most once.
    std::int64_t max_jumps() const noexcept { return 2 * vertex_count(); }

    friend bool operator==(const Params&, const Params&) = default;

private:
    std::int64_t n_;
    double lambda_;
    double alpha_;
    InitMode mode_;
};

struct PopulationState {
    std::int64_t r = 0;
    std::int64_t b = 0;
    std::int64_t w = 0;

    std::int64_t total() const noexcept { return r + b + w; }
    /// r + 2b; grows by exactly one at every jump.
    std::int64_t layer() const noexcept { return r + 2 * b; }
    bool fixated() const noexcept { return r == 0; }

    friend bool operator==(const PopulationState&, const PopulationState&) = default;
};

struct FixationResult {
    std::int64_t white_survivors = 0;
    std::int64_t blue_total = 0;
    std::int64_t conversions = 0;
    double fixation_time = 0.0;
    std::int64_t jump_count = 0;

    friend bool operator==(const FixationResult&, const FixationResult&) = default;
};

struct JumpProbabilities {
    double grow = 0.0;
    double chase = 0.0;
    double convert = 0.0;
};

struct JumpRecord {
    double time = 0.0;
    PopulationState state;
    EventKind event = EventKind::Grow;
};

/// One realization: the initial condition and every jump after it.
struct Trajectory {
    PopulationState initial;
    std::vector<JumpRecord> jumps;
};

struct StepOutcome {
    PopulationState state;
    EventKind event = EventKind::Grow;
    double holding_time = 0.0;
};

inline PopulationState initial_state(const Params& p) noexcept
{
    if (p.mode() == InitMode::Kortchemski) return {1, 1, p.n()};
    return {1, 0, p.n()};
}

inline double total_rate(const PopulationState& s, const Params& p)
{
    if (s.r <= 0) throw no_transition{};
    const double per_red = p.lambda() * static_cast<double>(s.w) + static_cast<double>(s.b) + p.conversion_rate();
    return static_cast<double>(s.r) * per_red;
}

inline JumpProbabilities jump_probabilities(const PopulationState& s, const Params& p)
{
    if (s.r <= 0) throw no_transition{};
    const double grow = p.lambda() * static_cast<double>(s.w);
    const double chase = static_cast<double>(s.b);
    const double convert = p.conversion_rate();
    const double denom = grow + chase + convert;
    if (!(denom > 0.0)) throw invalid_params("state has no enabled transitions (w = 0, b = 0, alpha = 0)");
    return {grow / denom, chase / denom, convert / denom};
}

/// Applies an event to a state. Throws if the event is not enabled.
inline PopulationState apply_event(PopulationState s, EventKind e)
{
    if (s.r <= 0) throw no_transition{};
    if (e == EventKind::Grow) {
        if (s.w <= 0) throw invalid_params("grow requires a white vertex");
        ++s.r;
        --s.w;
    } else {
        --s.r;
        ++s.b;
    }
    return s;
}

/// One jump of the chain. Draw order: event uniform, then (for a red
/// decrease) the chase-vs-convert uniform, then the holding time.
template <BitGenerator G>
StepOutcome step(const PopulationState& s, const Params& p, G& rng)
{
    if (s.r <= 0) throw no_transition{};
    const double grow = p.lambda() * static_cast<double>(s.w);
    const double decrease = static_cast<double>(s.b) + p.conversion_rate();
    const double per_red = grow + decrease;
    if (!(per_red > 0.0)) throw invalid_params("state has no enabled transitions (w = 0, b = 0, alpha = 0)");

    EventKind event;
    if (uniform_open(rng) * per_red < grow) {
        event = EventKind::Grow;
    } else {
        // Red decrease: convert with probability alpha / (b + alpha).
        event = uniform_open(rng) * decrease < p.conversion_rate() ? EventKind::Convert : EventKind::Chase;
    }
    const double holding = exponential(rng, static_cast<double>(s.r) * per_red);
    return {apply_event(s, event), event, holding};
}

template <BitGenerator G>
FixationResult run_to_fixation(const Params& p, G& rng)
{
    PopulationState s = initial_state(p);
    FixationResult out;
    while (s.r > 0) {
        const StepOutcome o = step(s, p, rng);
        s = o.state;
        out.fixation_time += o.holding_time;
        ++out.jump_count;
        if (o.event == EventKind::Convert) ++out.conversions;
    }
    out.white_survivors = s.w;
    out.blue_total = s.b;
    return out;
}

template <BitGenerator G>
Trajectory record_trajectory(const Params& p, G& rng)
{
    Trajectory traj{initial_state(p), {}};
    PopulationState s = traj.initial;
    double t = 0.0;
    while (s.r > 0) {
        const StepOutcome o = step(s, p, rng);
        s = o.state;
        t += o.holding_time;
        traj.jumps.push_back({t, s, o.event});
    }
    return traj;
}

/// Summary statistics of a recorded trajectory.
inline FixationResult summarize(const Trajectory& traj)
{
    FixationResult out;
    const PopulationState last = traj.jumps.empty() ? traj.initial : traj.jumps.back().state;
    out.white_survivors = last.w;
    out.blue_total = last.b;
    out.jump_count = static_cast<std::int64_t>(traj.jumps.size());
    out.fixation_time = traj.jumps.empty() ? 0.0 : traj.jumps.back().time;
    for (const auto& j : traj.jumps)
        if (j.event == EventKind::Convert) ++out.conversions;
    return out;
}

/// Empty string when the trajectory satisfies every structural invariant,
/// otherwise a description of the first violation.
inline std::string trajectory_violation(const Trajectory& traj, const Params& p)
{
    if (traj.initial != initial_state(p)) return "first state is not the initial condition";
    const std::int64_t total = p.vertex_count();
    PopulationState prev = traj.initial;
    double prev_t = 0.0;
    for (std::size_t i = 0; i < traj.jumps.size(); ++i) {
        const auto& j = traj.jumps[i];
        const std::string at = " at jump " + std::to_string(i + 1);
        if (j.state.r < 0 || j.state.b < 0 || j.state.w < 0) return "negative count" + at;
        if (j.state.total() != total) return "vertex count not conserved" + at;
        if (!(j.time > prev_t)) return "times not strictly increasing" + at;
        if (prev.r <= 0) return "jump after fixation" + at;
        if (j.event == EventKind::Chase && prev.b == 0) return "chase with no blue vertex" + at;
        if (j.event == EventKind::Convert && p.conversion_rate() == 0.0) return "convert with alpha = 0" + at;
        PopulationState expect;
        try {
            expect = apply_event(prev, j.event);
        } catch (const std::exception&) {
            return "illegal event" + at;
        }
        if (expect != j.state) return "state does not follow from event" + at;
        if (j.state.layer() != prev.layer() + 1) return "layer r+2b did not advance by one" + at;
        prev = j.state;
        prev_t = j.time;
    }
    if (prev.r != 0) return "last state has red vertices";
    return {};
}

} // namespace cewc
