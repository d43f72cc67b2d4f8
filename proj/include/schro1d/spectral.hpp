#pragma once

#include <iosfwd>
#include <vector>

#include "schro1d/potential.hpp"
#include "schro1d/solver.hpp"

namespace schro1d {

/// Largest singular value of a 2x2 complex matrix, in closed form. Equal to
/// sqrt((|A|_F^2 + sqrt(|A|_F^4 - 4 |det A|^2)) / 2), evaluated without the
/// cancellation that formula suffers near unitary matrices.
double operator_norm(const Matrix2& m) noexcept;
double frobenius_norm(const Matrix2& m) noexcept;

/// Running integral of 1 / |T(E, x, 0)|^2 on [0, X] (operator 2-norm,
/// trapezoid rule on the solver grid). Divergence is not decided here; the
/// curve and the log-log slope of its tail are diagnostics.
struct SimonStolzCurve {
    std::vector<double> xs;
    std::vector<double> norm_t;
    std::vector<double> integrand;
    std::vector<double> cumulative;

    /// Least-squares slope of log(cumulative) against log(x) over the last
    /// half of the grid. Near 1 for linear growth, near 0 when saturating.
    double tail_loglog_slope() const;
};

/// Throws InvalidArgument for complex E or X < 0.
SimonStolzCurve simon_stolz_curve(const PiecewisePotential& v, Energy e, double x_max, double max_step);

/// Same grid and quadrature with the Frobenius norm; used to show the norm
/// choice does not matter beyond a factor of 2.
SimonStolzCurve simon_stolz_curve_frobenius(const PiecewisePotential& v, Energy e, double x_max,
                                            double max_step);

/// CSV with header x,norm_T,integrand,cumulative.
void write_curve_csv(std::ostream& out, const SimonStolzCurve& curve);

/// Polar coordinates of a real solution at E = k^2 > 0:
///   u = R sin(theta), u' = k R cos(theta).
struct PruferTrace {
    std::vector<double> xs;
    std::vector<double> r;
    std::vector<double> theta;
    double k = 1.0;
};

/// Throws NotRealSolution when the trace has imaginary parts above 1e-10
/// (relative to its scale) or E differs from k^2, and GridTooCoarse when two
/// neighbouring angles differ by more than pi/2.
PruferTrace prufer_decompose(const SolutionTrace& trace, double k);

/// Largest relative residual of k^2 R^2 = u'^2 + k^2 u^2 and of the
/// reconstruction u = R sin(theta), u' = k R cos(theta).
double prufer_identity_residual(const PruferTrace& prufer, const SolutionTrace& trace);

/// Relative residual of k^2 * int R^2 = int u'^2 + k^2 int u^2 (trapezoid).
double prufer_integral_residual(const PruferTrace& prufer, const SolutionTrace& trace);

void write_prufer_csv(std::ostream& out, const PruferTrace& prufer);

} // namespace schro1d
