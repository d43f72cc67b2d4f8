#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace schro1d {

/// Real potential that is constant on each cell [x_{i-1}, x_i) of a finite
/// partition and zero outside [x_0, x_n].
///
/// The negative part V_-(x) = max(-V(x), 0) has an exact piecewise-linear
/// antiderivative, which is cached at construction so window integrals cost
/// O(log n).
class PiecewisePotential {
public:
    /// Throws InvalidArgument unless breakpoints are finite and strictly
    /// increasing, values are finite, and values.size() + 1 == breakpoints.size() >= 2.
    PiecewisePotential(std::vector<double> breakpoints, std::vector<double> values,
                       bool discretization_surrogate = false);
    /// V = 0 on [0, 1].
    PiecewisePotential() : PiecewisePotential({0.0, 1.0}, {0.0}) {}

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t cell_count() const noexcept { return values_.size(); }
    double left() const noexcept { return breakpoints_.front(); }
    double right() const noexcept { return breakpoints_.back(); }

    // Set for potentials that discretize a non-step profile (spike lattices).
    bool discretization_surrogate() const noexcept { return surrogate_; }

    double operator()(double x) const noexcept;
    double negative_part(double x) const noexcept;

    /// Integral of V_- from left() to x; constant outside the described interval.
    double negative_part_antiderivative(double x) const noexcept;

    PiecewisePotential translated(double shift) const;
    PiecewisePotential scaled(double factor) const;
    /// x -> V(-x).
    PiecewisePotential reflected() const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<double> prefix_; // prefix_[i] = integral of V_- over [x_0, x_i]
    bool surrogate_ = false;
};

struct WindowIntegralProfile {
    std::vector<double> candidates;
    std::vector<double> integrals;
    double supremum = 0.0;
    double argmax = 0.0;
};

/// Exact integral of V_- over [a, b]. Throws InvalidArgument if a > b or
/// either endpoint is not finite.
double negative_part_integral(const PiecewisePotential& v, double a, double b);

/// C_1 = sup_x of the integral of V_- over [x, x+1], computed exactly.
///
/// F(x) is piecewise linear with kinks only where x or x + 1 crosses a
/// breakpoint, so the maximum is attained on {x_i} U {x_i - 1}, clipped to
/// [x_0 - 1, x_n]. Ties resolve to the smallest abscissa.
WindowIntegralProfile c1_sup(const PiecewisePotential& v);

// Potential families used as a test corpus.

struct SquareWellParams {
    double depth = 1.0;  // V = -depth on the well
    double width = 1.0;
    double offset = 0.0; // left edge of the well
};

/// Lattice of truncated inverse-square-root spikes
/// V(x) = -min(g / sqrt|x - m|, cap), one spike at the centre m of each
/// period, averaged exactly over cells of the given width.
struct SpikeLatticeParams {
    double g = 1.0;
    double period = 1.0;
    double cap = 100.0;
    double cell = 1e-3;
    double start = 0.0;
    double end = 5.0;
};

struct RandomStepParams {
    int cells = 20;
    double value_min = -5.0;
    double value_max = 5.0;
    double width_min = 0.1;
    double width_max = 1.0;
    double start = 0.0;
};

/// V = curvature * x^2 on [-half_width, half_width], cell-averaged.
struct QuadraticWellParams {
    double curvature = 1.0;
    double half_width = 6.0;
    double cell = 1e-2;
};

using FamilyParams = std::variant<SquareWellParams, SpikeLatticeParams, RandomStepParams, QuadraticWellParams>;

/// Deterministic in (params, seed); only random_step consumes the seed.
PiecewisePotential make_family(const FamilyParams& params, std::uint64_t seed = 0);

} // namespace schro1d
