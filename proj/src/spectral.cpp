#include "schro1d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "schro1d/errors.hpp"

namespace schro1d {

double frobenius_norm(const Matrix2& m) noexcept {
    double s = 0.0;
    for (const cplx& z : m.a)
        s += std::norm(z);
    return std::sqrt(s);
}

double operator_norm(const Matrix2& m) noexcept {
    // Rotate by a phase so det becomes real and nonnegative. Then
    //   sigma_1 + sigma_2 = sqrt(|a + conj d|^2 + |b - conj c|^2),
    //   sigma_1 - sigma_2 = sqrt(|a - conj d|^2 + |b + conj c|^2),
    // neither of which cancels near unitary matrices.
    const cplx det = m.det();
    const cplx phase = det == cplx{0.0} ? cplx{1.0} : std::polar(1.0, -0.5 * std::arg(det));
    const cplx a = m(0, 0) * phase, b = m(0, 1) * phase, c = m(1, 0) * phase, d = m(1, 1) * phase;
    const double sum = std::hypot(std::abs(a + std::conj(d)), std::abs(b - std::conj(c)));
    const double diff = std::hypot(std::abs(a - std::conj(d)), std::abs(b + std::conj(c)));
    return 0.5 * (sum + diff);
}

double SimonStolzCurve::tail_loglog_slope() const {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = xs.size() / 2; i < xs.size(); ++i)
        if (xs[i] > 0.0 && cumulative[i] > 0.0)
            pts.emplace_back(std::log(xs[i]), std::log(cumulative[i]));
    if (pts.size() < 2)
        return 0.0;
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

template <class Norm>
SimonStolzCurve curve_with(const PiecewisePotential& v, Energy e, double x_max, double max_step, Norm norm) {
    if (!e.is_real())
        throw InvalidArgument("transfer-matrix integral is defined for real energies only");
    if (!std::isfinite(x_max) || x_max < 0.0)
        throw InvalidArgument("upper limit X must be finite and nonnegative");

    SimonStolzCurve c;
    if (x_max == 0.0) {
        c.xs = {0.0};
        c.norm_t = {1.0};
        c.integrand = {1.0};
        c.cumulative = {0.0};
        return c;
    }
    const auto first = propagate_exact(v, e, {0.0, 1.0, 0.0}, x_max, max_step);
    const auto second = propagate_exact(v, e, {0.0, 0.0, 1.0}, x_max, max_step);
    const std::size_t n = first.size();
    c.xs = first.xs;
    c.norm_t.resize(n);
    c.integrand.resize(n);
    c.cumulative.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Matrix2 t;
        t(0, 0) = first.u[i];
        t(1, 0) = first.du[i];
        t(0, 1) = second.u[i];
        t(1, 1) = second.du[i];
        c.norm_t[i] = norm(t);
        c.integrand[i] = 1.0 / (c.norm_t[i] * c.norm_t[i]);
        if (i > 0)
            c.cumulative[i] =
                c.cumulative[i - 1] + 0.5 * (c.xs[i] - c.xs[i - 1]) * (c.integrand[i] + c.integrand[i - 1]);
    }
    return c;
}

} // namespace

SimonStolzCurve simon_stolz_curve(const PiecewisePotential& v, Energy e, double x_max, double max_step) {
    return curve_with(v, e, x_max, max_step, [](const Matrix2& m) { return operator_norm(m); });
}

SimonStolzCurve simon_stolz_curve_frobenius(const PiecewisePotential& v, Energy e, double x_max,
                                            double max_step) {
    return curve_with(v, e, x_max, max_step, [](const Matrix2& m) { return frobenius_norm(m); });
}

void write_curve_csv(std::ostream& out, const SimonStolzCurve& c) {
    out << "x,norm_T,integrand,cumulative\n" << std::setprecision(17);
    for (std::size_t i = 0; i < c.xs.size(); ++i)
        out << c.xs[i] << ',' << c.norm_t[i] << ',' << c.integrand[i] << ',' << c.cumulative[i] << '\n';
}

PruferTrace prufer_decompose(const SolutionTrace& trace, double k) {
    validate_trace(trace);
    if (!(k > 0.0) || !std::isfinite(k))
        throw InvalidArgument("Prufer wave number k must be positive");
    const double k2 = k * k;
    if (std::abs(trace.energy.im) > 1e-12 || std::abs(trace.energy.re - k2) > 1e-12 * std::max(1.0, k2))
        throw NotRealSolution("trace energy does not equal k^2");

    double scale = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i)
        scale = std::max({scale, std::abs(trace.u[i]), std::abs(trace.du[i])});
    if (scale == 0.0)
        throw NotRealSolution("trivial solution has no Prufer decomposition");
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (std::abs(trace.u[i].imag()) > 1e-10 * scale || std::abs(trace.du[i].imag()) > 1e-10 * scale)
            throw NotRealSolution("trace has non-negligible imaginary part");

    PruferTrace p;
    p.k = k;
    p.xs = trace.xs;
    p.r.resize(trace.size());
    p.theta.resize(trace.size());
    constexpr double pi = std::numbers::pi;
    double previous_raw = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double u = trace.u[i].real();
        const double du = trace.du[i].real();
        p.r[i] = std::sqrt(du * du + k2 * u * u) / k;
        if (!(p.r[i] > 0.0))
            throw NotRealSolution("R vanished; u and u' cannot both be zero for a nontrivial solution");
        const double raw = std::atan2(u, du / k);
        if (i == 0) {
            p.theta[i] = raw;
        } else {
            double step = std::remainder(raw - previous_raw, 2.0 * pi);
            if (std::abs(step) > 0.5 * pi)
                throw GridTooCoarse("Prufer angle moved by more than pi/2 between grid points near x = " +
                                    std::to_string(trace.xs[i]));
            p.theta[i] = p.theta[i - 1] + step;
        }
        previous_raw = raw;
    }
    return p;
}

double prufer_identity_residual(const PruferTrace& p, const SolutionTrace& trace) {
    const double k2 = p.k * p.k;
    double worst = 0.0;
    for (std::size_t i = 0; i < p.xs.size(); ++i) {
        const double u = trace.u[i].real();
        const double du = trace.du[i].real();
        const double rhs = du * du + k2 * u * u;
        worst = std::max(worst, std::abs(k2 * p.r[i] * p.r[i] - rhs) / rhs);
        const double mag = p.k * p.r[i];
        worst = std::max(worst, std::abs(u - p.r[i] * std::sin(p.theta[i])) * p.k / mag);
        worst = std::max(worst, std::abs(du - mag * std::cos(p.theta[i])) / mag);
    }
    return worst;
}

double prufer_integral_residual(const PruferTrace& p, const SolutionTrace& trace) {
    const double k2 = p.k * p.k;
    double r2 = 0.0, du2 = 0.0, u2 = 0.0;
    for (std::size_t i = 0; i + 1 < p.xs.size(); ++i) {
        const double h = 0.5 * (p.xs[i + 1] - p.xs[i]);
        r2 += h * (p.r[i] * p.r[i] + p.r[i + 1] * p.r[i + 1]);
        du2 += h * (std::norm(trace.du[i].real()) + std::norm(trace.du[i + 1].real()));
        u2 += h * (std::norm(trace.u[i].real()) + std::norm(trace.u[i + 1].real()));
    }
    const double rhs = du2 + k2 * u2;
    return std::abs(k2 * r2 - rhs) / rhs;
}

void write_prufer_csv(std::ostream& out, const PruferTrace& p) {
    out << "x,R,theta\n" << std::setprecision(17);
    for (std::size_t i = 0; i < p.xs.size(); ++i)
        out << p.xs[i] << ',' << p.r[i] << ',' << p.theta[i] << '\n';
}

} // namespace schro1d
