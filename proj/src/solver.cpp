#include "schro1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "schro1d/errors.hpp"

namespace schro1d {

const char* to_string(Method m) noexcept {
    switch (m) {
    case Method::exact_cell: return "exact_cell";
    case Method::rk4: return "rk4";
    case Method::analytic: return "analytic";
    }
    return "unknown";
}

void validate_trace(const SolutionTrace& t) {
    if (t.xs.size() < 2)
        throw InvalidArgument("trace needs at least two samples");
    if (t.u.size() != t.xs.size() || t.du.size() != t.xs.size())
        throw InvalidArgument("trace arrays differ in length");
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
        if (!std::isfinite(t.xs[i]) || !std::isfinite(t.u[i].real()) || !std::isfinite(t.u[i].imag()) ||
            !std::isfinite(t.du[i].real()) || !std::isfinite(t.du[i].imag()))
            throw InvalidArgument("trace sample " + std::to_string(i) + " is not finite");
        if (i > 0 && !(t.xs[i] > t.xs[i - 1]))
            throw InvalidArgument("trace grid is not strictly increasing at index " + std::to_string(i));
    }
}

Matrix2 operator*(const Matrix2& l, const Matrix2& r) noexcept {
    Matrix2 m;
    m(0, 0) = l(0, 0) * r(0, 0) + l(0, 1) * r(1, 0);
    m(0, 1) = l(0, 0) * r(0, 1) + l(0, 1) * r(1, 1);
    m(1, 0) = l(1, 0) * r(0, 0) + l(1, 1) * r(1, 0);
    m(1, 1) = l(1, 0) * r(0, 1) + l(1, 1) * r(1, 1);
    return m;
}

Matrix2 cell_propagator(cplx q, double h) noexcept {
    Matrix2 m;
    if (std::abs(q) * h * h < 1e-8) {
        const cplx qh2 = q * h * h;
        m(0, 0) = 1.0 + qh2 / 2.0 + qh2 * qh2 / 24.0;
        m(0, 1) = h * (1.0 + qh2 / 6.0 + qh2 * qh2 / 120.0);
        m(1, 0) = q * h * (1.0 + qh2 / 6.0);
        m(1, 1) = m(0, 0);
        return m;
    }
    const cplx s = std::sqrt(q);
    const cplx ch = std::cosh(s * h);
    const cplx sh = std::sinh(s * h);
    m(0, 0) = ch;
    m(0, 1) = sh / s;
    m(1, 0) = s * sh;
    m(1, 1) = ch;
    return m;
}

std::vector<double> propagation_grid(const PiecewisePotential& v, double from, double to, double max_step) {
    if (!std::isfinite(from) || !std::isfinite(to))
        throw InvalidArgument("propagation endpoints must be finite");
    if (!(max_step > 0.0) || !std::isfinite(max_step))
        throw InvalidArgument("max_step must be positive and finite");
    if (from == to)
        throw InvalidArgument("propagation interval is empty");

    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    std::vector<double> knots{lo};
    for (double b : v.breakpoints())
        if (b > lo && b < hi)
            knots.push_back(b);
    knots.push_back(hi);

    std::vector<double> grid{lo};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i];
        const double b = knots[i + 1];
        const auto pieces = std::max<long>(1, static_cast<long>(std::ceil((b - a) / max_step)));
        for (long j = 1; j < pieces; ++j)
            grid.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(pieces));
        grid.push_back(b);
    }
    if (from > to)
        std::reverse(grid.begin(), grid.end());
    return grid;
}

namespace {

void check_finite_init(const InitialData& init) {
    if (!std::isfinite(init.x0) || !std::isfinite(init.u0.real()) || !std::isfinite(init.u0.imag()) ||
        !std::isfinite(init.du0.real()) || !std::isfinite(init.du0.imag()))
        throw InvalidArgument("initial data must be finite");
}

void guard(double x, cplx u, cplx du) {
    const double mag = std::max(std::abs(u), std::abs(du));
    if (!(mag <= overflow_threshold)) {
        std::ostringstream msg;
        msg << "solution exceeded " << overflow_threshold << " at x = " << std::setprecision(17) << x;
        throw OverflowAtX(x, msg.str());
    }
}

// Propagates along `grid` (ordered in the direction of travel) with a
// per-step stepper and returns an increasing-x trace.
template <class Stepper>
SolutionTrace run(const std::vector<double>& grid, const InitialData& init, Energy e, Method method,
                  double max_step, Stepper&& step) {
    SolutionTrace t;
    t.energy = e;
    t.method = method;
    t.max_step = max_step;
    t.xs = grid;
    t.u.resize(grid.size());
    t.du.resize(grid.size());
    t.u[0] = init.u0;
    t.du[0] = init.du0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        step(grid[i], grid[i + 1], t.u[i], t.du[i], t.u[i + 1], t.du[i + 1]);
        guard(grid[i + 1], t.u[i + 1], t.du[i + 1]);
    }
    if (grid.front() > grid.back()) {
        std::reverse(t.xs.begin(), t.xs.end());
        std::reverse(t.u.begin(), t.u.end());
        std::reverse(t.du.begin(), t.du.end());
    }
    return t;
}

} // namespace

SolutionTrace propagate_exact(const PiecewisePotential& v, Energy e, const InitialData& init, double x_end,
                              double max_step) {
    check_finite_init(init);
    const auto grid = propagation_grid(v, init.x0, x_end, max_step);
    const cplx energy = e.value();
    return run(grid, init, e, Method::exact_cell, max_step,
               [&](double a, double b, cplx u, cplx du, cplx& u1, cplx& du1) {
                   const Matrix2 m = cell_propagator(v(0.5 * (a + b)) - energy, b - a);
                   u1 = m(0, 0) * u + m(0, 1) * du;
                   du1 = m(1, 0) * u + m(1, 1) * du;
               });
}

SolutionTrace propagate_rk(const PiecewisePotential& v, Energy e, const InitialData& init, double x_end,
                           double step) {
    check_finite_init(init);
    const auto grid = propagation_grid(v, init.x0, x_end, step);
    const cplx energy = e.value();
    return run(grid, init, e, Method::rk4, step, [&](double a, double b, cplx u, cplx du, cplx& u1, cplx& du1) {
        // Each grid step lies inside one cell, so q is constant over it.
        const cplx q = v(0.5 * (a + b)) - energy;
        const double h = b - a;
        const cplx k1u = du, k1d = q * u;
        const cplx k2u = du + 0.5 * h * k1d, k2d = q * (u + 0.5 * h * k1u);
        const cplx k3u = du + 0.5 * h * k2d, k3d = q * (u + 0.5 * h * k2u);
        const cplx k4u = du + h * k3d, k4d = q * (u + h * k3u);
        u1 = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du1 = du + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    });
}

TransferMatrix transfer_matrix(const PiecewisePotential& v, Energy e, double x, double y, double max_step) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw InvalidArgument("transfer matrix endpoints must be finite");
    TransferMatrix t;
    t.from = y;
    t.to = x;
    t.energy = e;
    if (x == y)
        return t;
    const auto grid = propagation_grid(v, y, x, max_step);
    const cplx energy = e.value();
    Matrix2 m = Matrix2::identity();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        m = cell_propagator(v(0.5 * (grid[i] + grid[i + 1])) - energy, grid[i + 1] - grid[i]) * m;
        for (const cplx& z : m.a) {
            if (!(std::abs(z) <= overflow_threshold))
                throw OverflowAtX(grid[i + 1], "transfer matrix overflow");
        }
    }
    t.entries = m;
    return t;
}

SolutionTrace analytic_trace(std::vector<double> xs, const std::function<cplx(double)>& u,
                             const std::function<cplx(double)>& du, Energy e) {
    SolutionTrace t;
    t.energy = e;
    t.method = Method::analytic;
    t.xs = std::move(xs);
    t.u.reserve(t.xs.size());
    t.du.reserve(t.xs.size());
    for (double x : t.xs) {
        t.u.push_back(u(x));
        t.du.push_back(du(x));
    }
    validate_trace(t);
    for (std::size_t i = 0; i + 1 < t.xs.size(); ++i)
        t.max_step = std::max(t.max_step, t.xs[i + 1] - t.xs[i]);
    return t;
}

SolutionTrace reflected(const SolutionTrace& trace) {
    SolutionTrace t = trace;
    std::reverse(t.xs.begin(), t.xs.end());
    std::reverse(t.u.begin(), t.u.end());
    std::reverse(t.du.begin(), t.du.end());
    for (auto& x : t.xs)
        x = -x;
    for (auto& d : t.du)
        d = -d;
    return t;
}

SolutionTrace scaled(const SolutionTrace& trace, cplx factor) {
    SolutionTrace t = trace;
    for (auto& z : t.u)
        z *= factor;
    for (auto& z : t.du)
        z *= factor;
    return t;
}

void write_trace_csv(std::ostream& out, const SolutionTrace& t) {
    out << "x,re_u,im_u,re_du,im_du\n" << std::setprecision(17);
    for (std::size_t i = 0; i < t.xs.size(); ++i)
        out << t.xs[i] << ',' << t.u[i].real() << ',' << t.u[i].imag() << ',' << t.du[i].real() << ','
            << t.du[i].imag() << '\n';
}

} // namespace schro1d
