#pragma once

// Brute-force reference computations used only by the tests. Each one goes
// through pointwise evaluation rather than the closed forms under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "schro1d/potential.hpp"

namespace oracle {

/// Midpoint Riemann sum of V_- over [a, b] with step h (pointwise V).
inline double riemann_negative_integral(const schro1d::PiecewisePotential& v, double a, double b, double h) {
    const auto n = static_cast<long>(std::ceil((b - a) / h));
    const double step = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i)
        s += v.negative_part(a + (static_cast<double>(i) + 0.5) * step);
    return s * step;
}

/// sup over grid x in [x_0 - 1, x_n] of the Riemann window integral of V_-
/// over [x, x + 1], using a running sum of midpoint samples at step h.
/// Exact to rounding when all breakpoints are multiples of h away from x_0 - 1.
inline double brute_force_c1(const schro1d::PiecewisePotential& v, double h) {
    const double start = v.left() - 1.0;
    const auto cells = static_cast<long>(std::llround((v.right() + 1.0 - start) / h));
    const auto window = static_cast<long>(std::llround(1.0 / h));
    std::vector<double> prefix(static_cast<std::size_t>(cells) + 1, 0.0);
    for (long i = 0; i < cells; ++i)
        prefix[static_cast<std::size_t>(i) + 1] =
            prefix[static_cast<std::size_t>(i)] + h * v.negative_part(start + (static_cast<double>(i) + 0.5) * h);
    double best = 0.0;
    for (long i = 0; i + window <= cells; ++i)
        best = std::max(best, prefix[static_cast<std::size_t>(i + window)] - prefix[static_cast<std::size_t>(i)]);
    return best;
}

/// Random step potential whose breakpoints are integer multiples of `grid`.
inline schro1d::PiecewisePotential grid_aligned_steps(std::uint64_t seed, double grid) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cells(1, 25);
    std::uniform_int_distribution<long> width(static_cast<long>(0.05 / grid), static_cast<long>(1.5 / grid));
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    std::uniform_int_distribution<long> offset(-static_cast<long>(3.0 / grid), static_cast<long>(3.0 / grid));
    const int n = cells(rng);
    long m = offset(rng);
    std::vector<double> b{static_cast<double>(m) * grid};
    std::vector<double> vals;
    for (int i = 0; i < n; ++i) {
        m += width(rng);
        b.push_back(static_cast<double>(m) * grid);
        vals.push_back(value(rng));
    }
    return schro1d::PiecewisePotential(std::move(b), std::move(vals));
}

/// max over a dense grid of f on [a, b].
inline double dense_max(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    double m = -INFINITY;
    for (int i = 0; i <= n; ++i)
        m = std::max(m, f(a + (b - a) * i / n));
    return m;
}

} // namespace oracle
