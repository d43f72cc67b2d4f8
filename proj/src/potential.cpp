#include "schro1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "schro1d/errors.hpp"

namespace schro1d {

PiecewisePotential::PiecewisePotential(std::vector<double> breakpoints, std::vector<double> values,
                                       bool discretization_surrogate)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), surrogate_(discretization_surrogate) {
    if (values_.empty())
        throw InvalidArgument("potential needs at least one cell");
    if (breakpoints_.size() != values_.size() + 1)
        throw InvalidArgument("potential needs exactly one more breakpoint than values (got " +
                              std::to_string(breakpoints_.size()) + " breakpoints, " +
                              std::to_string(values_.size()) + " values)");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i]))
            throw InvalidArgument("breakpoint " + std::to_string(i) + " is not finite");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
            throw InvalidArgument("breakpoints must be strictly increasing (index " + std::to_string(i) + ")");
    }
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw InvalidArgument("value " + std::to_string(i) + " is not finite");

    prefix_.assign(breakpoints_.size(), 0.0);
    for (std::size_t i = 0; i < values_.size(); ++i)
        prefix_[i + 1] = prefix_[i] + std::max(-values_[i], 0.0) * (breakpoints_[i + 1] - breakpoints_[i]);
}

double PiecewisePotential::operator()(double x) const noexcept {
    if (!(x >= left()) || !(x < right()))
        return 0.0;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double PiecewisePotential::negative_part(double x) const noexcept {
    return std::max(-(*this)(x), 0.0);
}

double PiecewisePotential::negative_part_antiderivative(double x) const noexcept {
    if (x <= left())
        return 0.0;
    if (x >= right())
        return prefix_.back();
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return prefix_[i] + std::max(-values_[i], 0.0) * (x - breakpoints_[i]);
}

PiecewisePotential PiecewisePotential::translated(double shift) const {
    std::vector<double> b(breakpoints_);
    for (auto& x : b)
        x += shift;
    return PiecewisePotential(std::move(b), values_, surrogate_);
}

PiecewisePotential PiecewisePotential::scaled(double factor) const {
    std::vector<double> v(values_);
    for (auto& y : v)
        y *= factor;
    return PiecewisePotential(breakpoints_, std::move(v), surrogate_);
}

PiecewisePotential PiecewisePotential::reflected() const {
    std::vector<double> b(breakpoints_.rbegin(), breakpoints_.rend());
    for (auto& x : b)
        x = -x;
    return PiecewisePotential(std::move(b), std::vector<double>(values_.rbegin(), values_.rend()), surrogate_);
}

double negative_part_integral(const PiecewisePotential& v, double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw InvalidArgument("integration endpoints must be finite");
    if (a > b)
        throw InvalidArgument("integration interval has a > b");
    // Cells fully inside [a, b] contribute exactly via the prefix table;
    // the partial end cells are handled by the antiderivative.
    return std::max(v.negative_part_antiderivative(b) - v.negative_part_antiderivative(a), 0.0);
}

WindowIntegralProfile c1_sup(const PiecewisePotential& v) {
    WindowIntegralProfile profile;
    const auto bp = v.breakpoints();
    profile.candidates.reserve(2 * bp.size());
    for (double x : bp) {
        profile.candidates.push_back(x - 1.0);
        profile.candidates.push_back(x);
    }
    std::sort(profile.candidates.begin(), profile.candidates.end());
    profile.candidates.erase(std::unique(profile.candidates.begin(), profile.candidates.end()),
                             profile.candidates.end());

    profile.integrals.reserve(profile.candidates.size());
    for (double x : profile.candidates)
        profile.integrals.push_back(negative_part_integral(v, x, x + 1.0));

    profile.supremum = *std::max_element(profile.integrals.begin(), profile.integrals.end());
    // Equal plateaus differ only by rounding; pick the leftmost.
    const double tie = 1e-12 * std::max(1.0, profile.supremum);
    for (std::size_t i = 0; i < profile.candidates.size(); ++i) {
        if (profile.integrals[i] >= profile.supremum - tie) {
            profile.argmax = profile.candidates[i];
            break;
        }
    }
    return profile;
}

namespace {

// Odd antiderivative of t -> min(g / sqrt|t|, cap).
double truncated_spike_antiderivative(double t, double g, double cap) {
    const double at = std::abs(t);
    const double cut = (g / cap) * (g / cap);
    const double mag = at <= cut ? cap * at : cap * cut + 2.0 * g * (std::sqrt(at) - std::sqrt(cut));
    return t < 0 ? -mag : mag;
}

PiecewisePotential build(const SquareWellParams& p, std::uint64_t) {
    if (!std::isfinite(p.depth) || !std::isfinite(p.offset))
        throw InvalidArgument("square_well: depth and offset must be finite");
    if (!(p.width > 0) || !std::isfinite(p.width))
        throw InvalidArgument("square_well: width must be positive");
    return PiecewisePotential({p.offset, p.offset + p.width}, {-p.depth});
}

PiecewisePotential build(const SpikeLatticeParams& p, std::uint64_t) {
    if (!(p.g > 0) || !(p.cap > 0) || !std::isfinite(p.g) || !std::isfinite(p.cap))
        throw InvalidArgument("spike_lattice: g and cap must be positive");
    if (!(p.period > 0) || !(p.cell > 0) || !std::isfinite(p.period))
        throw InvalidArgument("spike_lattice: period and cell must be positive");
    if (!std::isfinite(p.start) || !std::isfinite(p.end) || !(p.end > p.start))
        throw InvalidArgument("spike_lattice: need start < end");

    const long periods = std::lround((p.end - p.start) / p.period);
    const long per_period = std::lround(p.period / p.cell);
    if (periods < 1)
        throw InvalidArgument("spike_lattice: range shorter than one period");
    if (per_period < 1)
        throw InvalidArgument("spike_lattice: cell wider than period");

    const double width = p.period / static_cast<double>(per_period);
    const long total = periods * per_period;
    std::vector<double> breakpoints(static_cast<std::size_t>(total) + 1);
    std::vector<double> values(static_cast<std::size_t>(total));
    for (long j = 0; j <= total; ++j)
        breakpoints[static_cast<std::size_t>(j)] = p.start + static_cast<double>(j) * width;
    for (long j = 0; j < total; ++j) {
        const long period_index = j / per_period;
        const double centre = p.start + (static_cast<double>(period_index) + 0.5) * p.period;
        const double a = breakpoints[static_cast<std::size_t>(j)] - centre;
        const double b = breakpoints[static_cast<std::size_t>(j) + 1] - centre;
        const double mass = truncated_spike_antiderivative(b, p.g, p.cap) -
                            truncated_spike_antiderivative(a, p.g, p.cap);
        values[static_cast<std::size_t>(j)] = -mass / (b - a);
    }
    return PiecewisePotential(std::move(breakpoints), std::move(values), true);
}

PiecewisePotential build(const RandomStepParams& p, std::uint64_t seed) {
    if (p.cells < 1)
        throw InvalidArgument("random_step: need at least one cell");
    if (!std::isfinite(p.value_min) || !std::isfinite(p.value_max) || p.value_min > p.value_max)
        throw InvalidArgument("random_step: empty value range");
    if (!(p.width_min > 0) || !std::isfinite(p.width_max) || p.width_min > p.width_max)
        throw InvalidArgument("random_step: widths must satisfy 0 < width_min <= width_max");
    if (!std::isfinite(p.start))
        throw InvalidArgument("random_step: start must be finite");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width(p.width_min, p.width_max);
    std::uniform_real_distribution<double> value(p.value_min, p.value_max);
    std::vector<double> breakpoints{p.start};
    std::vector<double> values;
    for (int i = 0; i < p.cells; ++i) {
        breakpoints.push_back(breakpoints.back() + width(rng));
        values.push_back(value(rng));
    }
    return PiecewisePotential(std::move(breakpoints), std::move(values));
}

PiecewisePotential build(const QuadraticWellParams& p, std::uint64_t) {
    if (!std::isfinite(p.curvature))
        throw InvalidArgument("quadratic_well: curvature must be finite");
    if (!(p.half_width > 0) || !std::isfinite(p.half_width) || !(p.cell > 0))
        throw InvalidArgument("quadratic_well: half_width and cell must be positive");
    const long cells = std::max(1L, std::lround(2.0 * p.half_width / p.cell));
    const double width = 2.0 * p.half_width / static_cast<double>(cells);
    std::vector<double> breakpoints(static_cast<std::size_t>(cells) + 1);
    std::vector<double> values(static_cast<std::size_t>(cells));
    for (long j = 0; j <= cells; ++j)
        breakpoints[static_cast<std::size_t>(j)] = -p.half_width + static_cast<double>(j) * width;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double a = breakpoints[j];
        const double b = breakpoints[j + 1];
        values[j] = p.curvature * (a * a + a * b + b * b) / 3.0;
    }
    return PiecewisePotential(std::move(breakpoints), std::move(values), true);
}

} // namespace

PiecewisePotential make_family(const FamilyParams& params, std::uint64_t seed) {
    return std::visit([seed](const auto& p) { return build(p, seed); }, params);
}

} // namespace schro1d
