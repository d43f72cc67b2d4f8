#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schro1d/constants.hpp"
#include "schro1d/solver.hpp"

namespace schro1d {

inline constexpr double default_tolerance = 1e-6;

/// Result of checking one inequality on a trace. worst_ratio is LHS/RHS at
/// the worst point (or a normalised equivalent), so pass == (worst_ratio <= 1 + tolerance).
struct CheckOutcome {
    std::string name;
    std::size_t points_checked = 0;
    double worst_ratio = 0.0;
    double witness_x = 0.0;
    bool pass = false;
    double tolerance = default_tolerance;
    std::string margin_notes;
};

enum class WeightKind { exponential, polynomial, custom_samples };

const char* to_string(WeightKind k) noexcept;

/// Weight w > 0 together with sup w(x)/w(y) over |x - y| <= radius.
///   exponential: w = exp(a |x|),      bound = exp(|a| radius)
///   polynomial:  w = (1 + |x|)^alpha, bound = (1 + radius)^|alpha|
///   custom:      piecewise-linear through samples, bound by sliding minimum
struct WeightSpec {
    WeightKind kind = WeightKind::exponential;
    double parameter = 0.0;
    double radius = 0.0;
    double admissibility_bound = 1.0;
    std::vector<double> sample_xs;
    std::vector<double> sample_ws;

    /// Throws InadmissibleWeight outside the sampled range of a custom weight.
    double operator()(double x) const;
};

WeightSpec exponential_weight(double a, double radius);
WeightSpec polynomial_weight(double alpha, double radius);
/// Throws InadmissibleWeight for nonpositive or non-finite samples or a
/// non-finite bound.
WeightSpec custom_weight(std::vector<double> xs, std::vector<double> ws, double radius);

/// |u'(x)| <= C max_{[x-K, x+K]} |u| at every grid x with the window inside
/// the trace. Window maxima are grid maxima inflated by (1 + eps_grid),
/// eps_grid = h * max|u'| / max|u| over the window.
CheckOutcome check_derivative_bound(const SolutionTrace& trace, const EstimateConstants& k,
                                    double tolerance = default_tolerance);

/// |u(y)| > |u(x)| / 2 on grid y in [x, x + delta) for every grid x with
/// |u(x)| > 1e-3 max|u| and Re[conj(u) u'] >= 0. worst_ratio = |u(x)| / (2 min)
/// over those grid y. Throws NoEligiblePoints.
CheckOutcome check_persistence(const SolutionTrace& trace, const EstimateConstants& k,
                               double tolerance = default_tolerance);

/// |u(x)|^p <= (2^p / delta) * int_{x-delta}^{x+delta} |u|^p, trapezoid with
/// the window snapped outward to grid nodes. Throws TraceTooShort.
CheckOutcome check_local_lp(const SolutionTrace& trace, const EstimateConstants& k, double p,
                            double tolerance = default_tolerance);

/// |u'(x)|^p <= (2^p C^p / delta) * int_{x-K-delta}^{x+K+delta} |u|^p.
CheckOutcome check_derivative_lp(const SolutionTrace& trace, const EstimateConstants& k, double p,
                                 double tolerance = default_tolerance);

/// Finite-window weighted form:
///   int_a^b |u'|^p w <= (2^p C^p / delta) * A * 2 (K + delta) * int_{a-K-delta}^{b+K+delta} |u|^p w,
/// with A the admissibility bound of w at radius K + delta.
CheckOutcome check_weighted(const SolutionTrace& trace, const EstimateConstants& k, double p,
                            const WeightSpec& w, double a, double b, double tolerance = default_tolerance);

/// Trend surrogate for decay at infinity: factor * max(|u|, |u'|) over the
/// last tail_fraction of the grid must not exceed the same maximum over the
/// first tail_fraction.
CheckOutcome check_decay(const SolutionTrace& trace, double tail_fraction, double factor = 10.0,
                         double tolerance = default_tolerance);

/// Re[conj(w) u(y)] >= Re[conj(w) u(x)] + (y - x) Re[conj(w) u'(x)]
///                     - C2 (y - x)(y - x + 1) |w| max_{[x,y]} |u|
/// with x, y snapped to the nearest grid nodes. worst_ratio = 1 - slack / (|w| max|u|).
/// Throws PreconditionFailed if u(x) = 0 or Re[conj(w) u] < 0 somewhere on [x, y].
CheckOutcome check_lemma31(const SolutionTrace& trace, const EstimateConstants& k, cplx omega, double x,
                           double y, double tolerance = default_tolerance);

/// Runs check_lemma31 on `samples` random (omega, x, y) triples that satisfy
/// its preconditions: omega is u(x) rotated by less than pi/2 and y stays
/// inside the first run where Re[conj(omega) u] >= 0, at most max_length
/// past x. Aggregates the worst sample.
CheckOutcome check_lemma31_sampled(const SolutionTrace& trace, const EstimateConstants& k, int samples,
                                   std::uint64_t seed, double max_length = 1.0,
                                   double tolerance = default_tolerance);

/// Sorts by name, then witness_x.
void sort_outcomes(std::vector<CheckOutcome>& outcomes);

} // namespace schro1d
