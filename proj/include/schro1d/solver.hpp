#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "schro1d/constants.hpp"
#include "schro1d/potential.hpp"

namespace schro1d {

using cplx = std::complex<double>;

struct InitialData {
    double x0 = 0.0;
    cplx u0{0.0, 0.0};
    cplx du0{1.0, 0.0};
};

enum class Method { exact_cell, rk4, analytic };

const char* to_string(Method m) noexcept;

/// Samples (x, u(x), u'(x)) of one solution of -u'' + V u = E u on a
/// strictly increasing grid.
struct SolutionTrace {
    std::vector<double> xs;
    std::vector<cplx> u;
    std::vector<cplx> du;
    Energy energy;
    Method method = Method::exact_cell;
    double max_step = 0.0;

    std::size_t size() const noexcept { return xs.size(); }
    double front() const { return xs.front(); }
    double back() const { return xs.back(); }
};

/// Throws InvalidArgument if the grid is not strictly increasing, the arrays
/// disagree in length or have fewer than two samples, or a sample is not finite.
void validate_trace(const SolutionTrace& trace);

/// Row-major 2x2 complex matrix.
struct Matrix2 {
    std::array<cplx, 4> a{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{1.0}};

    cplx& operator()(int r, int c) noexcept { return a[static_cast<std::size_t>(2 * r + c)]; }
    const cplx& operator()(int r, int c) const noexcept { return a[static_cast<std::size_t>(2 * r + c)]; }
    cplx det() const noexcept { return a[0] * a[3] - a[1] * a[2]; }

    static Matrix2 identity() noexcept { return {}; }
};

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs) noexcept;

/// T(E, to, from): maps (u(from), u'(from)) to (u(to), u'(to)).
struct TransferMatrix {
    Matrix2 entries;
    double from = 0.0;
    double to = 0.0;
    Energy energy;
};

/// Closed-form propagator over a step h of -u'' + q u = 0 with constant
/// q = V - E:
///   [[cosh(s h), sinh(s h)/s], [s sinh(s h), cosh(s h)]],  s = sqrt(q).
/// Entries are even in s; a Taylor series replaces them when |q| h^2 < 1e-8.
Matrix2 cell_propagator(cplx q, double h) noexcept;

/// Grid from `from` to `to` (in that order) containing every breakpoint
/// strictly between them, refined uniformly so no step exceeds max_step.
std::vector<double> propagation_grid(const PiecewisePotential& v, double from, double to, double max_step);

/// |u| or |u'| above this aborts propagation with OverflowAtX.
inline constexpr double overflow_threshold = 1e150;

/// Exact-per-cell propagation from init.x0 to x_end (either direction).
SolutionTrace propagate_exact(const PiecewisePotential& v, Energy e, const InitialData& init, double x_end,
                              double max_step);

/// Classical fixed-step RK4 on (u, u')' = (u', (V - E) u) over the same grid
/// as propagate_exact.
SolutionTrace propagate_rk(const PiecewisePotential& v, Energy e, const InitialData& init, double x_end,
                           double step);

/// T(E, x, y), built from the product of exact cell propagators from y to x.
TransferMatrix transfer_matrix(const PiecewisePotential& v, Energy e, double x, double y, double max_step);

/// Trace sampled from closed-form u and u' on the given grid.
SolutionTrace analytic_trace(std::vector<double> xs, const std::function<cplx(double)>& u,
                             const std::function<cplx(double)>& du, Energy e);

/// u(x) -> u(-x); the derivative changes sign.
SolutionTrace reflected(const SolutionTrace& trace);

/// u -> factor * u.
SolutionTrace scaled(const SolutionTrace& trace, cplx factor);

inline cplx wronskian(cplx u, cplx du, cplx v, cplx dv) noexcept { return u * dv - du * v; }

/// CSV with header x,re_u,im_u,re_du,im_du.
void write_trace_csv(std::ostream& out, const SolutionTrace& trace);

} // namespace schro1d
