#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature, and a wrapper for
// integrals over [0, inf) through u = x / (1 + x).

#include "cewc/errors.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace cewc {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_intervals = 20000;
};

namespace detail {

struct GkSegment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const GkSegment& o) const noexcept { return error < o.error; }
};

template <class F>
GkSegment gauss_kronrod15(F& f, double lo, double hi)
{
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * wk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += wk[j] * pair;
        if (j % 2 == 1) gauss += wg[j / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Integral of f over [lo, hi]. Nodes are interior, so integrable endpoint
/// singularities are never evaluated. Throws quadrature_error when the
/// summed error estimate stays above `abs_tol` after `max_intervals`.
template <class F>
QuadratureResult integrate(F f, double lo, double hi, QuadratureOptions opt = {})
{
    std::priority_queue<detail::GkSegment> work;
    auto first = detail::gauss_kronrod15(f, lo, hi);
    double value = first.value;
    double error = first.error;
    work.push(first);
    int intervals = 1;
    while (error > opt.abs_tol) {
        if (intervals >= opt.max_intervals || !std::isfinite(value))
            throw quadrature_error("adaptive quadrature did not converge", value, error);
        const auto worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi))
            throw quadrature_error("adaptive quadrature reached floating-point resolution", value, error);
        const auto left = detail::gauss_kronrod15(f, worst.lo, mid);
        const auto right = detail::gauss_kronrod15(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
        ++intervals;
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0;
    double err = 0.0;
    while (!work.empty()) {
        sum += work.top().value;
        err += work.top().error;
        work.pop();
    }
    return {sum, err, intervals};
}

/// Integral of f over [0, inf) with x = u / (1 - u), dx = du / (1 - u)^2.
template <class F>
QuadratureResult integrate_half_line(F f, QuadratureOptions opt = {})
{
    auto mapped = [&f](double u) {
        const double one_minus = 1.0 - u;
        const double x = u / one_minus;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, opt);
}

} // namespace cewc
