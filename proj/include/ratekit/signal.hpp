#pragma once

#include <cstddef>
#include <vector>

#include "ratekit/errors.hpp"

namespace ratekit {

/// Uniformly sampled time series. The canonical unit is the sampling
/// interval in seconds; the rate in Hz is derived from it.
struct Signal {
  double start_time = 0.0;  ///< epoch seconds of the first sample
  double interval = 1.0;    ///< seconds between samples, > 0
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double rate_hz() const { return 1.0 / interval; }
  double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * interval; }
  double duration() const { return static_cast<double>(values.size() - 1) * interval; }
};

/// Validates and builds a Signal. Timestamps are implied as
/// start_time + i * interval.
///
/// Throws IntervalNotPositive, TooShort, NonFiniteValue.
Signal make_signal(double start_time, double interval, std::vector<double> values);

/// Shape of a uniform sampling grid, used to target reconstructions and to
/// detect mismatched comparisons.
struct GridSpec {
  double start_time = 0.0;
  double interval = 1.0;
  std::size_t n = 0;

  static GridSpec of(const Signal& s) { return {s.start_time, s.interval, s.size()}; }
  double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * interval; }
};

/// True when two signals live on the same grid (length, start, interval)
/// up to floating-point noise.
bool same_grid(const Signal& a, const Signal& b);

/// Arithmetic mean. Summation is pairwise (midpoint splits) so that
/// mean(s ++ s) == mean(s) holds exactly.
double mean(const Signal& s);

/// Pairwise sum of a value range; shared by mean and the norms.
double pairwise_sum(const double* data, std::size_t n);

/// Euclidean norm of the sample vector.
double l2_norm(const std::vector<double>& values);

/// One-sided discrete magnitude spectrum, bins 0..floor(N/2).
struct Spectrum {
  double bin_width = 0.0;    ///< Hz between bins, source_rate / N
  double source_rate = 0.0;  ///< Hz of the source signal
  std::vector<double> magnitudes;

  std::size_t bins() const { return magnitudes.size(); }
  double frequency_at(std::size_t k) const { return static_cast<double>(k) * bin_width; }
  double nyquist() const { return source_rate / 2.0; }
};

/// Magnitude spectrum |X_k| of the DFT, no window, k = 0..floor(N/2).
/// Satisfies Parseval against the time-domain energy.
Spectrum dft_magnitude(const Signal& s);

/// Smallest bin frequency at which the cumulative non-DC squared magnitude
/// reaches power_fraction of the total non-DC squared magnitude.
/// Returns 0 when there is no non-DC power.
double estimate_f_max(const Spectrum& spectrum, double power_fraction = 0.99);

}  // namespace ratekit
