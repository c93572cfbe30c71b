#pragma once

#include <optional>

#include "ratekit/signal.hpp"

namespace ratekit {

/// The three reconstruction-quality measures. A metric whose precondition
/// failed (zero-norm or zero-mean original) is absent, never reported as 0.
struct ErrorReport {
  std::optional<double> l2_relative;    ///< shape error, ||orig - rebuilt|| / ||orig||
  std::optional<double> mean_relative;  ///< |mean(orig) - mean(rebuilt)| / |mean(orig)|
  std::optional<double> aliasing;       ///< band-integrated spectral gap, relative to ||orig||
};

/// Euclidean norm of the pointwise difference over the norm of the original.
/// Identical signals give exactly 0, even when the original is all zeros.
/// Throws GridMismatch, ZeroNormOriginal.
double relative_l2_error(const Signal& original, const Signal& rebuilt);

/// Absolute mean difference over the absolute original mean. Identical means
/// give exactly 0, even when the original mean vanishes.
/// Throws GridMismatch, ZeroMeanOriginal.
double mean_relative_error(const Signal& original, const Signal& rebuilt);

/// Trapezoid integral of |magnitude-spectrum difference| over the band
/// [f_s_new, min(2 * f_max, original Nyquist)], divided by the Euclidean
/// norm of the original so the metric is invariant under common scaling.
/// An empty band gives 0. Throws GridMismatch, ZeroNormOriginal, BadConfig.
double aliasing_error(const Signal& original, const Signal& rebuilt, double f_s_new_hz,
                      double f_max_hz);

/// All three metrics on identical inputs; failed preconditions become
/// absent fields. Throws GridMismatch.
ErrorReport error_report(const Signal& original, const Signal& rebuilt, double f_s_new_hz,
                         double f_max_hz);

}  // namespace ratekit
