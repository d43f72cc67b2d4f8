#pragma once

#include <complex>

namespace schro1d {

struct Energy {
    double re = 0.0;
    double im = 0.0;

    std::complex<double> value() const noexcept { return {re, im}; }
    double modulus() const noexcept;
    bool is_real() const noexcept { return im == 0.0; }
};

/// Constants of the eigenfunction estimates for a given C1 and energy:
///   c2 = c1 + |E|, c_bound = c2 + 2 sqrt(c2), k_radius = 1 / sqrt(c2),
///   delta = -1/2 + sqrt(1/4 + 1 / (2 c2)).
struct EstimateConstants {
    double c1 = 0.0;
    Energy e;
    double c2 = 0.0;
    double c_bound = 0.0;
    double k_radius = 0.0;
    double delta = 0.0;
};

/// Throws DegenerateConstants when c1 + |E| == 0 and InvalidArgument for
/// negative or non-finite input.
EstimateConstants constants_for(double c1, Energy e);

/// Same as constants_for but with c2 raised to at least `c2_floor`. The
/// floor is an explicit opt-in for the V_- = 0, E = 0 case.
EstimateConstants constants_with_floor(double c1, Energy e, double c2_floor);

/// Largest deviation from the closed-form relations between the fields
/// (absolute, scaled by max(1, |value|)).
double constants_residual(const EstimateConstants& k);

} // namespace schro1d
