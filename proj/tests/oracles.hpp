#pragma once

// Independent reference implementations used only by the test suites.
// Everything here is deliberately written the slow, obvious way and shares
// no code with the library paths it checks.

#include <cstddef>
#include <optional>
#include <vector>

#include "ratekit/optimize.hpp"
#include "ratekit/signal.hpp"

namespace oracle {

/// One-sided magnitude spectrum by the O(N^2) definition of the DFT.
std::vector<double> naive_dft_magnitude(const std::vector<double>& x);

/// Natural cubic spline over uniform knots: dense Gaussian elimination for
/// the second derivatives, per-interval polynomial coefficients for the
/// evaluation. Constant extrapolation outside the knot span.
class NaturalSpline {
public:
  NaturalSpline(std::vector<double> knot_values, double t0, double h);
  double eval(double t) const;

private:
  std::vector<double> y_, b_, c_, d_;  // per-interval cubic coefficients
  double t0_, h_;
};

/// The aliasing metric recomputed from scratch: naive DFTs, explicit
/// in-band bin collection, hand trapezoid, normalized by the plain
/// root-sum-of-squares of the original.
double aliasing_metric(const ratekit::Signal& original, const ratekit::Signal& rebuilt,
                       double f_s_new_hz, double f_max_hz);

/// Independently coded scan of an optimizer table: cheapest feasible
/// requested row, ties to the larger factor.
std::optional<std::size_t> brute_force_best(const std::vector<ratekit::RateReport>& table);

}  // namespace oracle
