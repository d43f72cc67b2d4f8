#include "schro1d/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "schro1d/errors.hpp"

namespace schro1d {

const char* to_string(WeightKind k) noexcept {
    switch (k) {
    case WeightKind::exponential: return "exponential";
    case WeightKind::polynomial: return "polynomial";
    case WeightKind::custom_samples: return "custom_samples";
    }
    return "unknown";
}

double WeightSpec::operator()(double x) const {
    switch (kind) {
    case WeightKind::exponential: return std::exp(parameter * std::abs(x));
    case WeightKind::polynomial: return std::pow(1.0 + std::abs(x), parameter);
    case WeightKind::custom_samples: break;
    }
    if (sample_xs.empty() || x < sample_xs.front() || x > sample_xs.back())
        throw InadmissibleWeight("custom weight evaluated outside its sampled range");
    auto it = std::upper_bound(sample_xs.begin(), sample_xs.end(), x);
    if (it == sample_xs.end())
        return sample_ws.back();
    const auto j = static_cast<std::size_t>(it - sample_xs.begin());
    const double t = (x - sample_xs[j - 1]) / (sample_xs[j] - sample_xs[j - 1]);
    return (1.0 - t) * sample_ws[j - 1] + t * sample_ws[j];
}

namespace {

void check_radius(double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw InvalidArgument("weight radius must be finite and nonnegative");
}

void require_admissible(const WeightSpec& w) {
    if (!std::isfinite(w.admissibility_bound))
        throw InadmissibleWeight(std::string(to_string(w.kind)) + " weight has no finite admissibility bound");
}

} // namespace

WeightSpec exponential_weight(double a, double radius) {
    check_radius(radius);
    if (!std::isfinite(a))
        throw InadmissibleWeight("exponential weight rate must be finite");
    WeightSpec w;
    w.kind = WeightKind::exponential;
    w.parameter = a;
    w.radius = radius;
    // | |x| - |y| | <= |x - y|, with equality on a half-line.
    w.admissibility_bound = std::exp(std::abs(a) * radius);
    require_admissible(w);
    return w;
}

WeightSpec polynomial_weight(double alpha, double radius) {
    check_radius(radius);
    if (!std::isfinite(alpha))
        throw InadmissibleWeight("polynomial weight exponent must be finite");
    WeightSpec w;
    w.kind = WeightKind::polynomial;
    w.parameter = alpha;
    w.radius = radius;
    // (1 + |x|) <= (1 + |y|)(1 + |x - y|), attained at y = 0.
    w.admissibility_bound = std::pow(1.0 + radius, std::abs(alpha));
    require_admissible(w);
    return w;
}

WeightSpec custom_weight(std::vector<double> xs, std::vector<double> ws, double radius) {
    check_radius(radius);
    if (xs.size() < 2 || xs.size() != ws.size())
        throw InadmissibleWeight("custom weight needs at least two (x, w) samples");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || (i > 0 && !(xs[i] > xs[i - 1])))
            throw InadmissibleWeight("custom weight abscissae must be finite and strictly increasing");
        if (!(ws[i] > 0.0) || !std::isfinite(ws[i]))
            throw InadmissibleWeight("custom weight must be positive and finite");
    }
    WeightSpec w;
    w.kind = WeightKind::custom_samples;
    w.radius = radius;
    w.sample_xs = xs;
    w.sample_ws = ws;
    // sup_x w(x) / min_{|y-x|<=r} w(y). Between consecutive candidates (the
    // samples and the samples shifted by +-r) this is a maximum of ratios of
    // linear functions, so the sup is attained at a candidate.
    std::vector<double> candidates = xs;
    for (double x : xs)
        for (double c : {x - radius, x + radius})
            if (c > xs.front() && c < xs.back())
                candidates.push_back(c);
    double bound = 1.0;
    for (double x : candidates) {
        const double lo = std::max(xs.front(), x - radius), hi = std::min(xs.back(), x + radius);
        double m = std::min(w(lo), w(hi));
        for (auto it = std::upper_bound(xs.begin(), xs.end(), lo); it != xs.end() && *it < hi; ++it)
            m = std::min(m, ws[static_cast<std::size_t>(it - xs.begin())]);
        bound = std::max(bound, w(x) / m);
    }
    w.admissibility_bound = bound;
    require_admissible(w);
    return w;
}

namespace {

double grid_step(const SolutionTrace& t) {
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < t.xs.size(); ++i)
        h = std::max(h, t.xs[i + 1] - t.xs[i]);
    return h;
}

double max_abs(const std::vector<cplx>& z) {
    double m = 0.0;
    for (const auto& v : z)
        m = std::max(m, std::abs(v));
    return m;
}

CheckOutcome start(std::string name, double tolerance) {
    CheckOutcome o;
    o.name = std::move(name);
    o.tolerance = tolerance;
    o.worst_ratio = -std::numeric_limits<double>::infinity();
    return o;
}

void record(CheckOutcome& o, double ratio, double x) {
    ++o.points_checked;
    if (std::isnan(ratio))
        ratio = std::numeric_limits<double>::infinity();
    if (ratio > o.worst_ratio) {
        o.worst_ratio = ratio;
        o.witness_x = x;
    }
}

CheckOutcome& finish(CheckOutcome& o) {
    o.pass = o.points_checked > 0 && o.worst_ratio <= 1.0 + o.tolerance;
    return o;
}

std::string format_g(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// Grid indices i whose window [x_i - r, x_i + r] lies inside the trace, with
// the grid nodes [lo, hi] inside the window.
struct Windows {
    std::vector<std::size_t> centre, lo, hi;
};

Windows inner_windows(const std::vector<double>& xs, double r) {
    Windows w;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] - r < xs.front() || xs[i] + r > xs.back())
            continue;
        w.centre.push_back(i);
        w.lo.push_back(static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), xs[i] - r) - xs.begin()));
        w.hi.push_back(static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), xs[i] + r) - xs.begin()) - 1);
    }
    return w;
}

// Same, but the window is snapped outward to the nearest enclosing nodes.
Windows outer_windows(const std::vector<double>& xs, double r) {
    Windows w;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] - r < xs.front() || xs[i] + r > xs.back())
            continue;
        w.centre.push_back(i);
        w.lo.push_back(static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), xs[i] - r) - xs.begin()) - 1);
        w.hi.push_back(static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), xs[i] + r) - xs.begin()));
    }
    return w;
}

// Maximum of values over each [lo_q, hi_q]; both bounds nondecreasing in q.
std::vector<double> sliding_max(const std::vector<double>& values, const std::vector<std::size_t>& lo,
                                const std::vector<std::size_t>& hi) {
    std::vector<double> out(lo.size());
    std::deque<std::size_t> dq;
    std::size_t next = 0;
    for (std::size_t q = 0; q < lo.size(); ++q) {
        for (; next <= hi[q]; ++next) {
            while (!dq.empty() && values[dq.back()] <= values[next])
                dq.pop_back();
            dq.push_back(next);
        }
        while (dq.front() < lo[q])
            dq.pop_front();
        out[q] = values[dq.front()];
    }
    return out;
}

// Range sums over nonnegative pieces without subtracting prefixes, so small
// windows next to large ones keep full relative precision.
class RangeSum {
public:
    explicit RangeSum(const std::vector<double>& pieces) : n_(pieces.size()), tree_(2 * pieces.size()) {
        std::copy(pieces.begin(), pieces.end(), tree_.begin() + static_cast<std::ptrdiff_t>(n_));
        for (std::size_t i = n_; i-- > 1;)
            tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
    }

    // Sum of pieces[l, r).
    double operator()(std::size_t l, std::size_t r) const {
        double s = 0.0;
        for (l += n_, r += n_; l < r; l /= 2, r /= 2) {
            if (l & 1)
                s += tree_[l++];
            if (r & 1)
                s += tree_[--r];
        }
        return s;
    }

private:
    std::size_t n_;
    std::vector<double> tree_;
};

// Trapezoid pieces of |u / scale|^p between consecutive nodes.
std::vector<double> trapezoid_pieces(const std::vector<double>& xs, const std::vector<double>& f) {
    std::vector<double> pieces(xs.size() - 1);
    for (std::size_t j = 0; j + 1 < xs.size(); ++j)
        pieces[j] = 0.5 * (xs[j + 1] - xs[j]) * (f[j] + f[j + 1]);
    return pieces;
}

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InvalidArgument("exponent p must be finite and >= 1");
}

std::string p_suffix(double p) {
    std::ostringstream s;
    s << "_p" << p;
    return s.str();
}

// Shared body of the two windowed L^p checks.
CheckOutcome windowed_lp(const SolutionTrace& trace, const std::string& name, const std::vector<cplx>& lhs_values,
                         double half_width, double log_factor, double p, double tolerance) {
    validate_trace(trace);
    check_p(p);
    const auto& xs = trace.xs;
    const auto win = outer_windows(xs, half_width);
    if (win.centre.empty())
        throw TraceTooShort(name + ": no grid point has its window of half-width " + format_g(half_width) +
                            " inside the trace");
    const double scale = std::max(max_abs(trace.u), std::numeric_limits<double>::min());
    std::vector<double> f(trace.size());
    for (std::size_t j = 0; j < trace.size(); ++j)
        f[j] = std::pow(std::abs(trace.u[j]) / scale, p);
    const RangeSum integral(trapezoid_pieces(xs, f));
    const double factor = std::exp(log_factor);

    CheckOutcome o = start(name, tolerance);
    for (std::size_t q = 0; q < win.centre.size(); ++q) {
        const std::size_t i = win.centre[q];
        const double lhs = std::pow(std::abs(lhs_values[i]) / scale, p);
        record(o, lhs == 0.0 ? 0.0 : lhs / (factor * integral(win.lo[q], win.hi[q])), xs[i]);
    }
    o.margin_notes = "trapezoid on |u|^p; windows snapped outward to grid nodes; half-width " + format_g(half_width);
    return finish(o);
}

} // namespace

CheckOutcome check_derivative_bound(const SolutionTrace& trace, const EstimateConstants& k, double tolerance) {
    validate_trace(trace);
    const auto win = inner_windows(trace.xs, k.k_radius);
    if (win.centre.empty())
        throw TraceTooShort("derivative_bound: trace shorter than 2K = " + format_g(2.0 * k.k_radius));
    std::vector<double> au(trace.size()), adu(trace.size());
    for (std::size_t j = 0; j < trace.size(); ++j) {
        au[j] = std::abs(trace.u[j]);
        adu[j] = std::abs(trace.du[j]);
    }
    const auto max_u = sliding_max(au, win.lo, win.hi);
    const auto max_du = sliding_max(adu, win.lo, win.hi);
    const double h = grid_step(trace);

    CheckOutcome o = start("derivative_bound", tolerance);
    double worst_eps = 0.0;
    for (std::size_t q = 0; q < win.centre.size(); ++q) {
        const std::size_t i = win.centre[q];
        if (adu[i] == 0.0) {
            record(o, 0.0, trace.xs[i]);
            continue;
        }
        const double eps = max_u[q] > 0.0 ? h * max_du[q] / max_u[q] : 0.0;
        worst_eps = std::max(worst_eps, eps);
        record(o, adu[i] / (k.c_bound * max_u[q] * (1.0 + eps)), trace.xs[i]);
    }
    o.margin_notes = "grid-max window, slack (1+eps_grid) with eps_grid = h*max|u'|/max|u|; h = " + format_g(h) +
                     ", largest eps_grid = " + format_g(worst_eps);
    return finish(o);
}

CheckOutcome check_persistence(const SolutionTrace& trace, const EstimateConstants& k, double tolerance) {
    validate_trace(trace);
    const auto& xs = trace.xs;
    const double threshold = 1e-3 * max_abs(trace.u);
    const double h = grid_step(trace);

    CheckOutcome o = start("persistence", tolerance);
    std::size_t near_zero = 0, decreasing = 0, too_close_to_end = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double ui = std::abs(trace.u[i]);
        if (!(ui > threshold)) {
            ++near_zero;
            continue;
        }
        if ((std::conj(trace.u[i]) * trace.du[i]).real() < 0.0) {
            ++decreasing;
            continue;
        }
        const double end = xs[i] + k.delta;
        if (end > xs.back()) {
            ++too_close_to_end;
            continue;
        }
        double min_u = ui;
        for (std::size_t j = i + 1; j < trace.size() && xs[j] < end; ++j)
            min_u = std::min(min_u, std::abs(trace.u[j]));
        record(o, 0.5 * ui / min_u, xs[i]);
    }
    if (o.points_checked == 0)
        throw NoEligiblePoints("persistence: no grid point has u != 0 and Re[conj(u) u'] >= 0 with x + delta inside the trace");
    o.margin_notes = "skipped " + std::to_string(near_zero) + " near-zero, " + std::to_string(decreasing) +
                     " with Re[conj(u)u'] < 0, " + std::to_string(too_close_to_end) +
                     " within delta of the end; minimum taken over grid points (h = " + format_g(h) + ")";
    return finish(o);
}

CheckOutcome check_local_lp(const SolutionTrace& trace, const EstimateConstants& k, double p, double tolerance) {
    check_p(p);
    return windowed_lp(trace, "local_lp" + p_suffix(p), trace.u, k.delta, p * std::log(2.0) - std::log(k.delta),
                       p, tolerance);
}

CheckOutcome check_derivative_lp(const SolutionTrace& trace, const EstimateConstants& k, double p,
                                 double tolerance) {
    check_p(p);
    return windowed_lp(trace, "derivative_lp" + p_suffix(p), trace.du, k.k_radius + k.delta,
                       p * std::log(2.0 * k.c_bound) - std::log(k.delta), p, tolerance);
}

CheckOutcome check_weighted(const SolutionTrace& trace, const EstimateConstants& k, double p, const WeightSpec& w,
                            double a, double b, double tolerance) {
    validate_trace(trace);
    check_p(p);
    require_admissible(w);
    if (!(a < b))
        throw InvalidArgument("weighted check window needs a < b");
    const double reach = k.k_radius + k.delta;
    if (w.radius + 1e-12 * std::max(1.0, reach) < reach)
        throw InadmissibleWeight("weight admissibility radius " + format_g(w.radius) + " is below K + delta = " +
                                 format_g(reach));
    const auto& xs = trace.xs;
    const auto node_at_or_below = [&](double x) {
        return static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    };
    const auto node_at_or_above = [&](double x) {
        return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
    };
    if (a < xs.front() || b > xs.back())
        throw TraceTooShort("weighted: window [a, b] outside the trace");
    const std::size_t ia = node_at_or_below(a);
    const std::size_t ib = node_at_or_above(b);
    if (xs[ia] - reach < xs.front() || xs[ib] + reach > xs.back())
        throw TraceTooShort("weighted: trace does not cover [a - K - delta, b + K + delta]");
    const std::size_t ja = node_at_or_below(xs[ia] - reach);
    const std::size_t jb = node_at_or_above(xs[ib] + reach);

    const double scale = std::max(max_abs(trace.u), std::numeric_limits<double>::min());
    const auto trapezoid = [&](const std::vector<cplx>& z, std::size_t lo, std::size_t hi) {
        double s = 0.0;
        double prev = std::pow(std::abs(z[lo]) / scale, p) * w(xs[lo]);
        for (std::size_t j = lo + 1; j <= hi; ++j) {
            const double cur = std::pow(std::abs(z[j]) / scale, p) * w(xs[j]);
            s += 0.5 * (xs[j] - xs[j - 1]) * (prev + cur);
            prev = cur;
        }
        return s;
    };
    const double lhs = trapezoid(trace.du, ia, ib);
    const double rhs = std::exp(p * std::log(2.0 * k.c_bound) - std::log(k.delta)) * w.admissibility_bound * 2.0 *
                       reach * trapezoid(trace.u, ja, jb);

    CheckOutcome o = start(std::string("weighted") + p_suffix(p) + "_" + to_string(w.kind), tolerance);
    record(o, lhs == 0.0 ? 0.0 : lhs / rhs, xs[ia]);
    o.points_checked = ib - ia + 1;
    o.margin_notes = "window [" + format_g(xs[ia]) + ", " + format_g(xs[ib]) + "], admissibility bound " +
                     format_g(w.admissibility_bound) + " at radius " + format_g(w.radius);
    return finish(o);
}

CheckOutcome check_decay(const SolutionTrace& trace, double tail_fraction, double factor, double tolerance) {
    validate_trace(trace);
    if (!(tail_fraction > 0.0 && tail_fraction < 0.5))
        throw InvalidArgument("tail_fraction must lie in (0, 1/2)");
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw InvalidArgument("decay factor must be positive");
    const double length = trace.back() - trace.front();
    const double head_end = trace.front() + tail_fraction * length;
    const double tail_start = trace.back() - tail_fraction * length;
    double head = 0.0, tail = 0.0;
    std::size_t n = 0;
    double tail_witness = trace.back();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double m = std::max(std::abs(trace.u[i]), std::abs(trace.du[i]));
        if (trace.xs[i] <= head_end) {
            head = std::max(head, m);
            ++n;
        }
        if (trace.xs[i] >= tail_start) {
            if (m > tail) {
                tail = m;
                tail_witness = trace.xs[i];
            }
            ++n;
        }
    }
    CheckOutcome o = start("decay", tolerance);
    o.worst_ratio = head > 0.0 ? factor * tail / head : std::numeric_limits<double>::infinity();
    o.witness_x = tail_witness;
    o.points_checked = n;
    o.margin_notes = "head max " + format_g(head) + ", tail max " + format_g(tail) + ", factor " + format_g(factor) +
                     " (finite-trend surrogate)";
    return finish(o);
}

namespace {

std::size_t nearest_node(const std::vector<double>& xs, double x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.end())
        return xs.size() - 1;
    const auto j = static_cast<std::size_t>(it - xs.begin());
    if (j > 0 && x - xs[j - 1] < xs[j] - x)
        return j - 1;
    return j;
}

struct LemmaEvaluation {
    double ratio;
    double slack;
};

LemmaEvaluation evaluate_lemma(const SolutionTrace& t, const EstimateConstants& k, cplx omega, std::size_t ix,
                               std::size_t iy, double trace_max, double h) {
    const cplx w = std::conj(omega);
    const double sign_floor = -1e-10 * std::abs(omega) * trace_max;
    double max_u = 0.0, max_du = 0.0;
    for (std::size_t j = ix; j <= iy; ++j) {
        if ((w * t.u[j]).real() < sign_floor)
            throw PreconditionFailed("Re[conj(omega) u] < 0 at x = " + format_g(t.xs[j]));
        max_u = std::max(max_u, std::abs(t.u[j]));
        max_du = std::max(max_du, std::abs(t.du[j]));
    }
    const double len = t.xs[iy] - t.xs[ix];
    const double m = len > 0.0 ? max_u * (1.0 + h * max_du / max_u) : max_u;
    const double lhs = (w * t.u[iy]).real();
    const double rhs = (w * t.u[ix]).real() + len * (w * t.du[ix]).real() - k.c2 * len * (len + 1.0) * std::abs(omega) * m;
    const double slack = lhs - rhs;
    return {1.0 - slack / (std::abs(omega) * max_u), slack};
}

} // namespace

CheckOutcome check_lemma31(const SolutionTrace& trace, const EstimateConstants& k, cplx omega, double x, double y,
                           double tolerance) {
    validate_trace(trace);
    if (!(x <= y))
        throw InvalidArgument("lemma31 needs x <= y");
    if (x < trace.front() || y > trace.back())
        throw InvalidArgument("lemma31 interval outside the trace");
    if (omega == cplx{0.0})
        throw InvalidArgument("omega must be nonzero");
    const std::size_t ix = nearest_node(trace.xs, x);
    const std::size_t iy = std::max(ix, nearest_node(trace.xs, y));
    if (std::abs(trace.u[ix]) == 0.0)
        throw PreconditionFailed("u(x) = 0");
    const auto ev = evaluate_lemma(trace, k, omega, ix, iy, max_abs(trace.u), grid_step(trace));
    CheckOutcome o = start("lemma31", tolerance);
    record(o, ev.ratio, trace.xs[ix]);
    o.margin_notes = "x, y snapped to " + format_g(trace.xs[ix]) + ", " + format_g(trace.xs[iy]) + "; slack " +
                     format_g(ev.slack);
    return finish(o);
}

CheckOutcome check_lemma31_sampled(const SolutionTrace& trace, const EstimateConstants& k, int samples,
                                   std::uint64_t seed, double max_length, double tolerance) {
    validate_trace(trace);
    if (samples < 1)
        throw InvalidArgument("lemma31 sampling needs at least one sample");
    if (!(max_length > 0.0))
        throw InvalidArgument("lemma31 max_length must be positive");
    const double trace_max = max_abs(trace.u);
    const double h = grid_step(trace);
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i + 1 < trace.size(); ++i)
        if (std::abs(trace.u[i]) > 1e-3 * trace_max)
            starts.push_back(i);
    if (starts.empty())
        throw NoEligiblePoints("lemma31: no grid point with u(x) != 0");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    std::uniform_real_distribution<double> angle(-0.49 * std::numbers::pi, 0.49 * std::numbers::pi);
    std::uniform_real_distribution<double> log_modulus(std::log(0.5), std::log(2.0));

    CheckOutcome o = start("lemma31", tolerance);
    double worst_slack = std::numeric_limits<double>::infinity();
    int drawn = 0;
    for (int attempt = 0; drawn < samples && attempt < 100 * samples; ++attempt) {
        const std::size_t ix = starts[pick(rng)];
        const cplx omega = trace.u[ix] / std::abs(trace.u[ix]) * std::polar(std::exp(log_modulus(rng)), angle(rng));
        const cplx w = std::conj(omega);
        std::size_t last = ix;
        while (last + 1 < trace.size() && trace.xs[last + 1] - trace.xs[ix] <= max_length &&
               (w * trace.u[last + 1]).real() >= 0.0)
            ++last;
        if (last == ix)
            continue;
        std::uniform_int_distribution<std::size_t> end(ix + 1, last);
        const std::size_t iy = end(rng);
        const auto ev = evaluate_lemma(trace, k, omega, ix, iy, trace_max, h);
        record(o, ev.ratio, trace.xs[ix]);
        worst_slack = std::min(worst_slack, ev.slack / (std::abs(omega) * trace_max));
        ++drawn;
    }
    if (drawn == 0)
        throw NoEligiblePoints("lemma31: could not draw any admissible (omega, x, y)");
    o.margin_notes = std::to_string(drawn) + " sampled triples, max length " + format_g(max_length) +
                     ", smallest slack/(|omega| max|u|) " + format_g(worst_slack);
    return finish(o);
}

void sort_outcomes(std::vector<CheckOutcome>& outcomes) {
    std::stable_sort(outcomes.begin(), outcomes.end(), [](const CheckOutcome& a, const CheckOutcome& b) {
        if (a.name != b.name)
            return a.name < b.name;
        return a.witness_x < b.witness_x;
    });
}

} // namespace schro1d
