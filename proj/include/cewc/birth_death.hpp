#pragma once

// The death process, the defective birth process, and their coupling to
// chase-escape with conversion on K_{n+1}; plus samplers for the terminal
// values of the rescaled processes.
//
// Death process: n individuals, each dying at rate lambda. Spacing after the
// i-th death is Exp(lambda (n - i)). Under the coupling the survivors are the
// white vertices.
//
// Defective birth process: one progenitor reproducing at rate alpha, every
// descendant at rate 1. After i births the next birth comes at rate i + alpha
// and belongs to the progenitor with probability alpha / (i + alpha). Births
// are the blue vertices; progenitor births are conversions.

#include "cewc/chain.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace cewc {

struct DeathTimes {
    std::vector<double> delta;
};

struct BirthTimes {
    std::vector<double> beta;
    std::vector<bool> defective;
};

enum class TerminalKind { ExpUnit, GammaAlpha, LimitSum };

struct TerminalSample {
    double value = 0.0;
    TerminalKind kind = TerminalKind::ExpUnit;
};

/// Lazily generated death times.
class DeathClock {
public:
    DeathClock(std::int64_t n, double lambda) : n_{n}, lambda_{lambda}
    {
        if (n < 1) throw invalid_params("death process needs n >= 1");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw invalid_params("lambda must be positive");
    }

    std::int64_t deaths() const noexcept { return deaths_; }
    bool exhausted() const noexcept { return deaths_ == n_; }

    /// Time of the next death; +inf once everyone has died.
    template <BitGenerator G>
    double next(G& rng)
    {
        if (exhausted()) return std::numeric_limits<double>::infinity();
        time_ += exponential(rng, lambda_ * static_cast<double>(n_ - deaths_));
        ++deaths_;
        return time_;
    }

private:
    std::int64_t n_;
    double lambda_;
    std::int64_t deaths_ = 0;
    double time_ = 0.0;
};

/// Lazily generated defective birth times. Draw order per birth: spacing,
/// then the progenitor flag.
class BirthClock {
public:
    explicit BirthClock(double alpha) : alpha_{alpha}
    {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw invalid_params("alpha must be positive");
    }

    std::int64_t births() const noexcept { return births_; }
    bool last_defective() const noexcept { return last_defective_; }

    template <BitGenerator G>
    double next(G& rng)
    {
        const double rate = static_cast<double>(births_) + alpha_;
        time_ += exponential(rng, rate);
        last_defective_ = uniform_open(rng) * rate < alpha_;
        ++births_;
        return time_;
    }

private:
    double alpha_;
    std::int64_t births_ = 0;
    double time_ = 0.0;
    bool last_defective_ = false;
};

template <BitGenerator G>
DeathTimes simulate_death_times(std::int64_t n, double lambda, G& rng)
{
    DeathClock clock{n, lambda};
    DeathTimes out;
    out.delta.reserve(static_cast<std::size_t>(n));
    while (!clock.exhausted()) out.delta.push_back(clock.next(rng));
    return out;
}

template <BitGenerator G>
BirthTimes simulate_birth_times(double alpha, std::int64_t k, G& rng)
{
    if (k < 1) throw invalid_params("need at least one birth");
    BirthClock clock{alpha};
    BirthTimes out;
    out.beta.reserve(static_cast<std::size_t>(k));
    out.defective.reserve(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        out.beta.push_back(clock.next(rng));
        out.defective.push_back(clock.last_defective());
    }
    return out;
}

/// Chase-escape with conversion on K_{n+1} replayed from independent death
/// and birth clocks. The clocks run on two generators split off `rng`.
///
/// Merging by time, a death is a grow and a birth is a red decrease. With d
/// deaths and k births the red count is 1 + d - k, so fixation is the first
/// birth that finds fewer deaths before it than its own index:
///   tau = beta(min{ i >= 1 : beta(i) < delta(i) }),  delta(n+1) = +inf.
/// A birth and a death at the same instant resolve as the birth.
template <BitGenerator G>
FixationResult coupled_fixation(std::int64_t n, double lambda, double alpha, G& rng)
{
    if (!(alpha > 0.0)) throw invalid_params("coupling needs alpha > 0");
    static_cast<void>(Params{n, lambda, alpha});
    auto death_rng = rng.split();
    auto birth_rng = rng.split();
    DeathClock death_clock{n, lambda};
    BirthClock birth_clock{alpha};

    FixationResult out;
    std::int64_t deaths = 0;
    std::int64_t births = 0;
    double next_death = death_clock.next(death_rng);
    double next_birth = birth_clock.next(birth_rng);
    for (;;) {
        if (next_birth <= next_death) {
            ++births;
            if (birth_clock.last_defective()) ++out.conversions;
            if (births == deaths + 1) {
                out.fixation_time = next_birth;
                break;
            }
            next_birth = birth_clock.next(birth_rng);
        } else {
            ++deaths;
            next_death = death_clock.next(death_rng);
        }
    }
    out.white_survivors = n - deaths;
    out.blue_total = births;
    out.jump_count = deaths + births;
    return out;
}

template <BitGenerator G>
TerminalSample sample_terminal_exp(G& rng)
{
    return {exponential(rng, 1.0), TerminalKind::ExpUnit};
}

template <BitGenerator G>
TerminalSample sample_terminal_gamma_direct(double alpha, G& rng)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw invalid_params("alpha must be positive");
    return {gamma_variate(rng, alpha), TerminalKind::GammaAlpha};
}

struct ProcessLimitOptions {
    /// Refuse horizons whose expected population e^t exceeds this.
    double population_cap = 1e9;
    /// Jumps simulated one by one before switching to the exact
    /// clan-size completion. Use a huge value for a purely jump-by-jump run.
    std::int64_t direct_jumps = 64;
};

/// e^{-t} B_t for the defective birth process run to horizon t.
///
/// The first `direct_jumps` jumps are simulated directly (next jump after
/// Exp(count - 1 + alpha)). If the horizon is not reached by then, the rest
/// is completed with the process's exact transition law: each ordinary
/// individual alive at time s heads a rate-1 Yule clan whose size at t is
/// Geometric(e^{-(t-s)}), and every later progenitor birth at time v seeds a
/// clan of size Geometric(e^{-(t-v)}). This keeps the cost per sample
/// O(direct_jumps + alpha t) instead of O(e^t).
template <BitGenerator G>
TerminalSample sample_terminal_gamma_process(double alpha, double t_horizon, G& rng, ProcessLimitOptions opt = {})
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw invalid_params("alpha must be positive");
    if (!(t_horizon >= 0.0) || !std::isfinite(t_horizon)) throw invalid_params("horizon must be finite and >= 0");
    if (std::exp(t_horizon) > opt.population_cap)
        throw resource_limit("expected population e^t exceeds the configured cap");

    std::uint64_t count = 1;
    double t = 0.0;
    for (std::int64_t jump = 0; jump < opt.direct_jumps; ++jump) {
        t += exponential(rng, static_cast<double>(count - 1) + alpha);
        if (t > t_horizon) return {std::exp(-t_horizon) * static_cast<double>(count), TerminalKind::GammaAlpha};
        ++count;
    }

    // Clan completion from time t with `count - 1` ordinary individuals.
    const double remaining = t_horizon - t;
    const double survive = std::exp(-remaining);
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i + 1 < count; ++i) total += geometric_variate(rng, survive);
    double v = t + exponential(rng, alpha);
    while (v <= t_horizon) {
        total += geometric_variate(rng, std::exp(-(t_horizon - v)));
        v += exponential(rng, alpha);
    }
    return {std::exp(-t_horizon) * static_cast<double>(total), TerminalKind::GammaAlpha};
}

/// X = sum_i e^{-T_i} E_i over a rate-alpha Poisson process (T_i) on
/// [0, truncation] with independent Exp(1) marks. Draw order per point:
/// gap, then mark.
template <BitGenerator G>
TerminalSample sample_limit_sum(double alpha, double truncation, G& rng)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw invalid_params("alpha must be positive");
    if (!(truncation > 0.0) || !std::isfinite(truncation)) throw invalid_params("truncation must be positive");
    double sum = 0.0;
    double t = exponential(rng, alpha);
    while (t <= truncation) {
        sum += std::exp(-t) * exponential(rng, 1.0);
        t += exponential(rng, alpha);
    }
    return {sum, TerminalKind::LimitSum};
}

/// Z = [1 + Poisson(G - E)] 1{G > E} with G ~ Gamma(alpha,1), E ~ Exp(1).
template <BitGenerator G>
std::uint64_t sample_z(double alpha, G& rng)
{
    const double g = sample_terminal_gamma_direct(alpha, rng).value;
    const double e = sample_terminal_exp(rng).value;
    if (!(g > e)) return 0;
    return 1 + poisson_variate(rng, g - e);
}

} // namespace cewc
