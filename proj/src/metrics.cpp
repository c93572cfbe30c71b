#include "ratekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ratekit {

namespace {

void require_same_grid(const Signal& original, const Signal& rebuilt, const char* who) {
  if (!same_grid(original, rebuilt)) {
    throw GridMismatch(std::string(who) + ": signals are not on the same grid");
  }
}

}  // namespace

double relative_l2_error(const Signal& original, const Signal& rebuilt) {
  require_same_grid(original, rebuilt, "relative_l2_error");
  std::vector<double> diff(original.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = original.values[i] - rebuilt.values[i];
  }
  const double diff_norm = l2_norm(diff);
  const double orig_norm = l2_norm(original.values);
  if (orig_norm == 0.0) {
    if (diff_norm == 0.0) return 0.0;
    throw ZeroNormOriginal("relative_l2_error: original signal has zero norm");
  }
  return diff_norm / orig_norm;
}

double mean_relative_error(const Signal& original, const Signal& rebuilt) {
  require_same_grid(original, rebuilt, "mean_relative_error");
  const double mean_orig = mean(original);
  const double gap = std::abs(mean_orig - mean(rebuilt));
  if (mean_orig == 0.0) {
    if (gap == 0.0) return 0.0;
    throw ZeroMeanOriginal("mean_relative_error: original signal has zero mean");
  }
  return gap / std::abs(mean_orig);
}

double aliasing_error(const Signal& original, const Signal& rebuilt, double f_s_new_hz,
                      double f_max_hz) {
  require_same_grid(original, rebuilt, "aliasing_error");
  if (!(f_s_new_hz > 0.0)) throw BadConfig("aliasing_error: f_s_new must be positive");
  if (!(f_max_hz >= 0.0)) throw BadConfig("aliasing_error: f_max must be >= 0");

  const Spectrum spec_orig = dft_magnitude(original);
  const Spectrum spec_rebuilt = dft_magnitude(rebuilt);

  // No spectral content exists above the original Nyquist.
  const double upper = std::min(2.0 * f_max_hz, spec_orig.nyquist());
  if (f_s_new_hz >= upper) return 0.0;

  const double bw = spec_orig.bin_width;
  const double tol = 1e-9 * bw;
  // Bin 0 is DC and never part of the band (f_s_new > 0).
  const double lo_bin = std::ceil((f_s_new_hz - tol) / bw);
  const std::size_t k_lo = lo_bin < 1.0 ? 1 : static_cast<std::size_t>(lo_bin);
  std::size_t k_hi = static_cast<std::size_t>(std::floor((upper + tol) / bw));
  k_hi = std::min(k_hi, spec_orig.bins() - 1);
  if (k_hi <= k_lo) return 0.0;  // fewer than two bins in the band

  double integral = 0.0;
  double prev = std::abs(spec_orig.magnitudes[k_lo] - spec_rebuilt.magnitudes[k_lo]);
  for (std::size_t k = k_lo + 1; k <= k_hi; ++k) {
    const double cur = std::abs(spec_orig.magnitudes[k] - spec_rebuilt.magnitudes[k]);
    integral += 0.5 * (prev + cur) * bw;
    prev = cur;
  }

  const double orig_norm = l2_norm(original.values);
  if (orig_norm == 0.0) {
    if (integral == 0.0) return 0.0;
    throw ZeroNormOriginal("aliasing_error: original signal has zero norm");
  }
  return integral / orig_norm;
}

ErrorReport error_report(const Signal& original, const Signal& rebuilt, double f_s_new_hz,
                         double f_max_hz) {
  require_same_grid(original, rebuilt, "error_report");
  ErrorReport report;
  try {
    report.l2_relative = relative_l2_error(original, rebuilt);
  } catch (const ZeroNormOriginal&) {
  }
  try {
    report.mean_relative = mean_relative_error(original, rebuilt);
  } catch (const ZeroMeanOriginal&) {
  }
  try {
    report.aliasing = aliasing_error(original, rebuilt, f_s_new_hz, f_max_hz);
  } catch (const ZeroNormOriginal&) {
  }
  return report;
}

}  // namespace ratekit
