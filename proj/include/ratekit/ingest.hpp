#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ratekit/signal.hpp"

namespace ratekit {

/// Raw field series before regularization: timestamps need not be uniform,
/// only strictly increasing.
struct RawSeries {
  std::vector<double> timestamps;  ///< epoch seconds, strictly increasing
  std::vector<double> values;
};

/// Reads a CSV stream with a header row. The time column accepts ISO-8601
/// (e.g. 2020-01-01T00:00:01Z) or numeric epoch seconds; the value column is
/// a decimal real.
///
/// Throws EmptyInput, MalformedRow (with line number), NonMonotonicTime.
RawSeries parse_csv(std::istream& in, const std::string& time_column,
                    const std::string& value_column);

/// Convenience overload over an in-memory document.
RawSeries parse_csv(const std::string& text, const std::string& time_column,
                    const std::string& value_column);

struct RegularizeResult {
  Signal signal;                                   ///< longest contiguous segment on the grid
  std::vector<std::pair<double, double>> segments; ///< [first, last] timestamps per segment
  std::size_t chosen_segment = 0;                  ///< index into segments
  std::size_t filled = 0;                          ///< grid points created by interpolation
};

/// Places a raw series on a uniform grid. The target interval is the median
/// of successive timestamp differences; gaps up to max_gap_factor * interval
/// are filled by linear interpolation, larger gaps split the series and the
/// longest segment wins.
///
/// Throws GapTooSparse when no segment yields at least 2 grid samples.
RegularizeResult regularize(const RawSeries& raw, double max_gap_factor = 3.0);

enum class SignalKind { sum_of_sines, step, spike_train };

struct SineComponent {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
  double phase_rad = 0.0;
};

struct StepParams {
  double time_s = 0.0;  ///< samples at t >= time_s take the `after` value
  double before = 0.0;
  double after = 0.0;
};

struct SpikeParams {
  double period_s = 0.0;  ///< one spike every period_s seconds, first at t = 0
  double amplitude = 0.0;
};

/// Recipe for a deterministic synthetic signal (stand-in for field data).
struct SyntheticSpec {
  SignalKind kind = SignalKind::sum_of_sines;
  double duration_s = 0.0;
  double rate_hz = 0.0;
  std::vector<SineComponent> components;  ///< used by sum_of_sines and spike_train
  StepParams step;
  SpikeParams spikes;
  double offset = 0.0;     ///< constant baseline added to every sample
  double noise_std = 0.0;  ///< Gaussian noise sigma, 0 disables the RNG entirely
  std::uint64_t seed = 0;
  bool alias_test = false;  ///< permits components at or above rate/2
};

/// Validates a spec; throws SpecInvalid with the offending field named.
void validate(const SyntheticSpec& spec);

/// Builds the signal described by the spec. Deterministic given the seed;
/// with noise_std == 0 fully reproducible across platforms.
Signal generate(const SyntheticSpec& spec);

/// Writes a signal as CSV with a header row. Values round-trip exactly
/// through parse_csv; timestamps round-trip within 1 ms.
void write_csv(const Signal& s, std::ostream& out,
               const std::string& time_column = "time",
               const std::string& value_column = "value");

}  // namespace ratekit
