#include "ratekit/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ratekit {

namespace {

void validate_plan(const DecimationPlan& plan) {
  if (plan.factor < 1) throw BadConfig("decimate: factor must be >= 1");
  if (plan.phase < 0 || plan.phase >= plan.factor) {
    throw BadConfig("decimate: phase must lie in [0, factor)");
  }
}

double median_of(std::vector<double>& scratch) {
  std::sort(scratch.begin(), scratch.end());
  const std::size_t n = scratch.size();
  return n % 2 == 1 ? scratch[n / 2] : 0.5 * (scratch[n / 2 - 1] + scratch[n / 2]);
}

// Second derivatives of the natural cubic spline on a uniform grid,
// Thomas-solved tridiagonal system; ends pinned to zero.
std::vector<double> natural_spline_moments(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;

  const std::size_t rows = n - 2;
  std::vector<double> diag(rows, 4.0), rhs(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    rhs[i] = 6.0 * (y[i] - 2.0 * y[i + 1] + y[i + 2]) / (h * h);
  }
  for (std::size_t i = 1; i < rows; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  m[rows] = rhs[rows - 1] / diag[rows - 1];
  for (std::size_t i = rows - 1; i-- > 0;) {
    m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
  }
  return m;
}

}  // namespace

void validate(const CompensationConfig& config) {
  if (config.hampel_window < 3 || config.hampel_window % 2 == 0) {
    throw BadConfig("compensation: hampel_window must be odd and >= 3");
  }
  if (!(config.hampel_k > 0.0)) {
    throw BadConfig("compensation: hampel_k must be positive");
  }
}

Signal decimate(const Signal& signal, const DecimationPlan& plan) {
  validate_plan(plan);
  const std::size_t n = signal.size();
  const std::size_t phase = static_cast<std::size_t>(plan.phase);
  const std::size_t factor = static_cast<std::size_t>(plan.factor);
  const std::size_t n_out = phase < n ? (n - phase + factor - 1) / factor : 0;
  if (n_out < 2) {
    throw ResultTooShort("decimate: factor " + std::to_string(plan.factor) + " leaves " +
                         std::to_string(n_out) + " samples");
  }
  std::vector<double> values(n_out);
  for (std::size_t k = 0; k < n_out; ++k) values[k] = signal.values[phase + k * factor];

  Signal out;
  out.start_time = signal.time_at(phase);
  out.interval = signal.interval * static_cast<double>(factor);
  out.values = std::move(values);
  return out;
}

Signal reconstruct_hold(const Signal& decimated, const GridSpec& target) {
  const double tol = 1e-9 * decimated.interval;
  if (target.start_time < decimated.start_time - tol) {
    throw GridMismatch("reconstruct_hold: target grid starts before the decimated series");
  }
  Signal out;
  out.start_time = target.start_time;
  out.interval = target.interval;
  out.values.resize(target.n);
  const std::size_t last = decimated.size() - 1;
  for (std::size_t j = 0; j < target.n; ++j) {
    const double u = (target.time_at(j) - decimated.start_time) / decimated.interval;
    // The nudge keeps timestamps that coincide with a knot on that knot.
    const double idx = std::floor(u + 1e-9);
    out.values[j] = decimated.values[static_cast<std::size_t>(std::clamp(
        idx, 0.0, static_cast<double>(last)))];
  }
  return out;
}

Signal hampel_filter(const Signal& signal, const CompensationConfig& config) {
  validate(config);
  const std::size_t n = signal.size();
  const std::size_t window = static_cast<std::size_t>(config.hampel_window);
  if (n < window) {
    throw TooShortForWindow("hampel_filter: " + std::to_string(n) + " samples, window " +
                            std::to_string(window));
  }
  const std::size_t half = window / 2;
  const double mad_scale = 1.4826;  // MAD-to-sigma under normality

  Signal out = signal;
  std::vector<double> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    scratch.assign(signal.values.begin() + static_cast<std::ptrdiff_t>(lo),
                   signal.values.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    const double med = median_of(scratch);
    for (double& v : scratch) v = std::abs(v - med);
    const double mad = median_of(scratch);
    if (std::abs(signal.values[i] - med) > config.hampel_k * mad_scale * mad) {
      out.values[i] = med;
    }
  }
  return out;
}

Signal reconstruct_cubic(const Signal& decimated, const GridSpec& target,
                         bool* linear_fallback) {
  const std::size_t n = decimated.size();
  if (n < 2) throw TooFewKnots("reconstruct_cubic: need at least 2 knots");
  if (linear_fallback) *linear_fallback = n == 2;

  const double h = decimated.interval;
  const std::vector<double>& y = decimated.values;
  const std::vector<double> m = natural_spline_moments(y, h);

  Signal out;
  out.start_time = target.start_time;
  out.interval = target.interval;
  out.values.resize(target.n);
  for (std::size_t j = 0; j < target.n; ++j) {
    const double u = (target.time_at(j) - decimated.start_time) / h;
    if (u <= 0.0) {
      out.values[j] = y.front();
      continue;
    }
    if (u >= static_cast<double>(n - 1)) {
      out.values[j] = y.back();
      continue;
    }
    std::size_t i = static_cast<std::size_t>(u);
    if (i > n - 2) i = n - 2;
    const double s = u - static_cast<double>(i);
    if (s <= 1e-9) {  // exactly on a knot, up to grid-arithmetic noise
      out.values[j] = y[i];
      continue;
    }
    if (s >= 1.0 - 1e-9) {
      out.values[j] = y[i + 1];
      continue;
    }
    const double a = 1.0 - s;
    const double b = s;
    out.values[j] = a * y[i] + b * y[i + 1] +
                    ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
  }
  return out;
}

Signal compensate(const Signal& signal, const DecimationPlan& plan,
                  const CompensationConfig& config) {
  const Signal decimated = decimate(signal, plan);
  const Signal filtered = hampel_filter(decimated, config);
  return reconstruct_cubic(filtered, GridSpec::of(signal));
}

}  // namespace ratekit
