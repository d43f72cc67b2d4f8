#include "schro1d/constants.hpp"

#include <algorithm>
#include <cmath>

#include "schro1d/errors.hpp"

namespace schro1d {

double Energy::modulus() const noexcept { return std::hypot(re, im); }

namespace {

EstimateConstants from_c2(double c1, Energy e, double c2) {
    EstimateConstants k;
    k.c1 = c1;
    k.e = e;
    k.c2 = c2;
    const double root = std::sqrt(c2);
    k.c_bound = c2 + 2.0 * root;
    k.k_radius = 1.0 / root;
    // -1/2 + sqrt(1/4 + s) rewritten as s / (1/2 + sqrt(1/4 + s)) to avoid
    // cancellation for large c2.
    const double s = 0.5 / c2;
    k.delta = s / (0.5 + std::sqrt(0.25 + s));
    return k;
}

void validate(double c1, Energy e) {
    if (!std::isfinite(c1) || c1 < 0.0)
        throw InvalidArgument("c1 must be finite and nonnegative");
    if (!std::isfinite(e.re) || !std::isfinite(e.im))
        throw InvalidArgument("energy must be finite");
}

} // namespace

EstimateConstants constants_for(double c1, Energy e) {
    validate(c1, e);
    const double c2 = c1 + e.modulus();
    if (!(c2 > 0.0))
        throw DegenerateConstants("c2 = c1 + |E| is zero; K and delta are undefined (use a c2 floor to override)");
    return from_c2(c1, e, c2);
}

EstimateConstants constants_with_floor(double c1, Energy e, double c2_floor) {
    validate(c1, e);
    if (!(c2_floor > 0.0) || !std::isfinite(c2_floor))
        throw InvalidArgument("c2 floor must be positive and finite");
    return from_c2(c1, e, std::max(c1 + e.modulus(), c2_floor));
}

double constants_residual(const EstimateConstants& k) {
    auto rel = [](double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
    double r = 0.0;
    r = std::max(r, rel(k.c_bound, k.c2 + 2.0 * std::sqrt(k.c2)));
    r = std::max(r, rel(k.k_radius, 1.0 / std::sqrt(k.c2)));
    r = std::max(r, rel(k.delta, -0.5 + std::sqrt(0.25 + 0.5 / k.c2)));
    r = std::max(r, rel(k.c_bound, k.c2 * (1.0 + 2.0 * k.k_radius)));
    r = std::max(r, rel(k.c2 * k.delta * (k.delta + 1.0), 0.5));
    return r;
}

} // namespace schro1d
