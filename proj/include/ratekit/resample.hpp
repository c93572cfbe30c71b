#pragma once

#include "ratekit/signal.hpp"

namespace ratekit {

/// Settings for the compensated reconstruction path: outlier filtering on
/// the decimated stream followed by cubic spline reconstruction.
struct CompensationConfig {
  int hampel_window = 5;  ///< samples per window, odd and >= 3
  double hampel_k = 5.0;  ///< MAD multiplier
  enum class Boundary { natural } boundary = Boundary::natural;
};

/// Throws BadConfig when the window is even/too small or k is not positive.
void validate(const CompensationConfig& config);

/// Keep every factor-th sample starting at `phase`.
struct DecimationPlan {
  int factor = 1;
  int phase = 0;  ///< in [0, factor)
};

/// Subsample: keeps indices phase, phase + factor, ...; the interval grows
/// by the factor. Throws ResultTooShort when fewer than 2 samples survive.
Signal decimate(const Signal& signal, const DecimationPlan& plan);

/// Zero-order hold onto the target grid: each target timestamp takes the
/// most recent decimated value at or before it. Throws GridMismatch when the
/// target grid starts before the decimated series.
Signal reconstruct_hold(const Signal& decimated, const GridSpec& target);

/// Hampel outlier filter: replaces a sample by its centered-window median
/// when it deviates from that median by more than k * 1.4826 * MAD. Windows
/// are truncated at the edges.
Signal hampel_filter(const Signal& signal, const CompensationConfig& config);

/// Natural cubic spline through the decimated samples, evaluated on the
/// target grid. Outside the knot span the nearest endpoint value is held.
/// With exactly 2 knots falls back to linear interpolation and reports it
/// through linear_fallback.
Signal reconstruct_cubic(const Signal& decimated, const GridSpec& target,
                         bool* linear_fallback = nullptr);

/// The compensated pipeline: decimate, Hampel-filter the decimated stream,
/// then cubic-reconstruct onto the original grid.
Signal compensate(const Signal& signal, const DecimationPlan& plan,
                  const CompensationConfig& config);

}  // namespace ratekit
