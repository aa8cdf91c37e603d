#pragma once

// Seeded generators and the handful of variate samplers the simulators need.
//
// Everything here is implemented locally instead of going through
// <random> distributions: the standard distributions are implementation
// defined, so the same seed would give different streams under different
// standard libraries. The algorithms below are fixed:
//
//   * SplitMix64 (Steele, Lea, Flood) for seed mixing and stream derivation
//   * xoshiro256** (Blackman, Vigna) as the workhorse generator
//   * uniforms on the open interval (0,1) from the top 52 bits
//   * exponential by inverse CDF, normal by the Marsaglia polar method,
//     gamma by Marsaglia-Tsang (with the U^(1/a) boost for a < 1)

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace cewc {

/// Any 64-bit uniform bit source with a `next_u64()` member.
template <class G>
concept BitGenerator = requires(G g) {
    { g.next_u64() } -> std::same_as<std::uint64_t>;
};

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_{seed} {}

    constexpr std::uint64_t next_u64() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

/// Seed for stream `index` under `master`. Two rounds of the SplitMix64
/// finalizer over (master, index) so that neighbouring indices and
/// neighbouring master seeds land far apart.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept
{
    return splitmix64_mix(splitmix64_mix(master + 0x9E3779B97F4A7C15ULL) ^
                          (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

class Xoshiro256ss {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256ss(std::uint64_t seed) noexcept
    {
        SplitMix64 sm{seed};
        for (auto& word : s_) word = sm.next_u64();
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    constexpr result_type operator()() noexcept { return next_u64(); }

    constexpr std::uint64_t next_u64() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Independent child generator; advances this one by a single draw.
    constexpr Xoshiro256ss split() noexcept { return Xoshiro256ss{next_u64() ^ 0x5851F42D4C957F2DULL}; }

    friend constexpr bool operator==(const Xoshiro256ss&, const Xoshiro256ss&) = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

using Rng = Xoshiro256ss;

/// Generator for trial `index` of an experiment seeded with `master`.
inline Rng trial_rng(std::uint64_t master, std::uint64_t index) noexcept { return Rng{derive_seed(master, index)}; }

// ---------------------------------------------------------------------------
// Variates

/// Uniform on (0,1), never 0 and never 1.
template <BitGenerator G>
double uniform_open(G& g) noexcept
{
    return (static_cast<double>(g.next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

/// Uniform integer in [0, bound), unbiased (Lemire's multiply-shift with rejection).
template <BitGenerator G>
std::uint64_t uniform_index(G& g, std::uint64_t bound)
{
    if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
    unsigned __int128 m = static_cast<unsigned __int128>(g.next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(g.next_u64()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Exp(rate) by inverse CDF; strictly positive.
template <BitGenerator G>
double exponential(G& g, double rate) noexcept
{
    return -std::log(uniform_open(g)) / rate;
}

template <BitGenerator G>
double standard_normal(G& g) noexcept
{
    for (;;) {
        const double u = 2.0 * uniform_open(g) - 1.0;
        const double v = 2.0 * uniform_open(g) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

/// Gamma(shape, 1).
template <BitGenerator G>
double gamma_variate(G& g, double shape)
{
    if (!(shape > 0.0) || !std::isfinite(shape)) throw std::invalid_argument("gamma_variate: shape must be positive");
    if (shape < 1.0) {
        // G(a) = G(a+1) * U^(1/a)
        const double boost = std::pow(uniform_open(g), 1.0 / shape);
        return gamma_variate(g, shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = standard_normal(g);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open(g);
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Poisson(mean) by counting unit-rate arrivals in [0, mean]. O(mean) work,
/// which is all the callers need (means of order ten).
template <BitGenerator G>
std::uint64_t poisson_variate(G& g, double mean)
{
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson_variate: mean must be finite and >= 0");
    std::uint64_t count = 0;
    double t = exponential(g, 1.0);
    while (t <= mean) {
        ++count;
        t += exponential(g, 1.0);
    }
    return count;
}

/// Geometric on {1, 2, ...} with success probability p: P(k) = p (1-p)^(k-1).
template <BitGenerator G>
std::uint64_t geometric_variate(G& g, double p)
{
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric_variate: p must lie in (0,1]");
    if (p == 1.0) return 1;
    const double k = std::floor(std::log(uniform_open(g)) / std::log1p(-p));
    return 1 + static_cast<std::uint64_t>(k);
}

} // namespace cewc
