#include "ratekit/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace ratekit {

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffers {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  ~FftwBuffers() {
    if (plan) {
      std::scoped_lock lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  }
};

}  // namespace

Signal make_signal(double start_time, double interval, std::vector<double> values) {
  if (!(interval > 0.0) || !std::isfinite(interval)) {
    throw IntervalNotPositive("make_signal: interval must be positive and finite");
  }
  if (!std::isfinite(start_time)) {
    throw NonFiniteValue("make_signal: start_time is not finite");
  }
  if (values.size() < 2) {
    throw TooShort("make_signal: need at least 2 samples, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NonFiniteValue("make_signal: non-finite value at index " + std::to_string(i));
    }
  }
  Signal s;
  s.start_time = start_time;
  s.interval = interval;
  s.values = std::move(values);
  return s;
}

bool same_grid(const Signal& a, const Signal& b) {
  if (a.size() != b.size()) return false;
  // Alignment matters at the scale of one sample, not of the epoch.
  const double start_tol = 1e-6 * std::min(a.interval, b.interval);
  if (std::abs(a.start_time - b.start_time) > start_tol) return false;
  const double step_tol = 1e-9 * std::max(a.interval, b.interval);
  return std::abs(a.interval - b.interval) <= step_tol;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return data[0];
  const std::size_t mid = n / 2;
  return pairwise_sum(data, mid) + pairwise_sum(data + mid, n - mid);
}

double mean(const Signal& s) {
  return pairwise_sum(s.values.data(), s.values.size()) / static_cast<double>(s.values.size());
}

double l2_norm(const std::vector<double>& values) {
  std::vector<double> squares(values.size());
  std::transform(values.begin(), values.end(), squares.begin(), [](double v) { return v * v; });
  return std::sqrt(pairwise_sum(squares.data(), squares.size()));
}

Spectrum dft_magnitude(const Signal& s) {
  const std::size_t n = s.size();
  if (n < 2) throw TooShort("dft_magnitude: need at least 2 samples");
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw TooShort("dft_magnitude: signal too long for the transform backend");
  }

  const std::size_t bins = n / 2 + 1;
  FftwBuffers buf;
  buf.in = fftw_alloc_real(n);
  buf.out = fftw_alloc_complex(bins);
  {
    // Plan before filling the input: FFTW_ESTIMATE planning may scribble on it.
    std::scoped_lock lock(planner_mutex());
    buf.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.in, buf.out, FFTW_ESTIMATE);
  }
  std::copy(s.values.begin(), s.values.end(), buf.in);
  fftw_execute(buf.plan);

  Spectrum spectrum;
  spectrum.source_rate = s.rate_hz();
  spectrum.bin_width = spectrum.source_rate / static_cast<double>(n);
  spectrum.magnitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    spectrum.magnitudes[k] = std::hypot(buf.out[k][0], buf.out[k][1]);
  }
  return spectrum;
}

double estimate_f_max(const Spectrum& spectrum, double power_fraction) {
  if (!(power_fraction > 0.0) || power_fraction > 1.0) {
    throw BadConfig("estimate_f_max: power_fraction must be in (0, 1]");
  }
  double total = 0.0;
  for (std::size_t k = 1; k < spectrum.bins(); ++k) {
    total += spectrum.magnitudes[k] * spectrum.magnitudes[k];
  }
  if (total == 0.0) return 0.0;

  const double threshold = power_fraction * total;
  double cumulative = 0.0;
  for (std::size_t k = 1; k < spectrum.bins(); ++k) {
    cumulative += spectrum.magnitudes[k] * spectrum.magnitudes[k];
    if (cumulative >= threshold) return spectrum.frequency_at(k);
  }
  return spectrum.frequency_at(spectrum.bins() - 1);
}

}  // namespace ratekit
