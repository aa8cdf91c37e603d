#pragma once

// Small statistics toolkit for the Monte Carlo checks: Wilson intervals,
// running means, Kolmogorov-Smirnov and chi-square goodness of fit.

#include "cewc/errors.hpp"
#include "cewc/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cewc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

inline Interval stats_wilson_ci(std::int64_t successes, std::int64_t trials, double confidence = 0.95)
{
    if (trials < 1) throw invalid_params("wilson interval needs at least one trial");
    if (successes < 0 || successes > trials) throw invalid_params("successes must lie in [0, trials]");
    if (!(confidence > 0.0 && confidence < 1.0)) throw invalid_params("confidence must lie in (0,1)");
    const double z = normal_quantile(0.5 + 0.5 * confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Welford accumulator. Results depend on insertion order only.
class RunningMean {
public:
    void add(double x) noexcept
    {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::int64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double std_error() const noexcept
    {
        return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline RunningMean summarize_samples(std::span<const double> xs)
{
    RunningMean m;
    for (double x : xs) m.add(x);
    return m;
}

/// |observed - expected| measured in standard errors.
inline double z_score(double observed, double expected, double std_error)
{
    if (std_error > 0.0) return std::abs(observed - expected) / std_error;
    return observed == expected ? 0.0 : std::numeric_limits<double>::infinity();
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_emp - F|.
inline double stats_ks(std::span<const double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty()) throw invalid_params("KS statistic of an empty sample");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double stats_ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) throw invalid_params("KS statistic of an empty sample");
    std::vector<double> xa(a.begin(), a.end());
    std::vector<double> xb(b.begin(), b.end());
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    const double na = static_cast<double>(xa.size());
    const double nb = static_cast<double>(xb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < xa.size() && j < xb.size()) {
        const double x = std::min(xa[i], xb[j]);
        while (i < xa.size() && xa[i] <= x) ++i;
        while (j < xb.size() && xb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Critical value of the one-sample KS statistic, asymptotic form.
inline double ks_critical_value(std::size_t n, double significance = 0.01)
{
    return std::sqrt(-0.5 * std::log(0.5 * significance) / static_cast<double>(n));
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int bins = 0;
};

/// Pearson goodness of fit of integer counts against model probabilities.
/// Bins whose expected count is below `min_expected` are pooled into one
/// bin, which is kept only if it reaches `min_expected` itself.
inline ChiSquareResult stats_chi_square(std::span<const std::int64_t> observed, std::span<const double> probabilities,
                                        double min_expected = 5.0)
{
    if (observed.size() != probabilities.size()) throw invalid_params("chi-square: size mismatch");
    std::int64_t trials = 0;
    for (auto o : observed) trials += o;
    if (trials < 1) throw invalid_params("chi-square: no observations");
    const double n = static_cast<double>(trials);

    ChiSquareResult out;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        const double e = n * probabilities[k];
        const double o = static_cast<double>(observed[k]);
        if (e >= min_expected) {
            out.statistic += (o - e) * (o - e) / e;
            ++out.bins;
        } else {
            pooled_obs += o;
            pooled_exp += e;
        }
    }
    if (pooled_exp >= min_expected) {
        out.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++out.bins;
    }
    out.dof = std::max(out.bins - 1, 0);
    out.p_value = out.dof > 0 ? chi_square_sf(out.statistic, out.dof) : 1.0;
    return out;
}

} // namespace cewc
