#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

std::vector<double> naive_dft_magnitude(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const std::size_t bins = n / 2 + 1;
  std::vector<double> magnitudes(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(i) / static_cast<double>(n);
      re += x[i] * std::cos(angle);
      im += x[i] * std::sin(angle);
    }
    magnitudes[k] = std::sqrt(re * re + im * im);
  }
  return magnitudes;
}

NaturalSpline::NaturalSpline(std::vector<double> knot_values, double t0, double h)
    : y_(std::move(knot_values)), t0_(t0), h_(h) {
  const std::size_t n = y_.size();
  if (n < 2) throw std::invalid_argument("NaturalSpline: need at least 2 knots");

  // Dense system A * m = r for the second derivatives, natural ends.
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    const std::size_t rows = n - 2;
    std::vector<std::vector<double>> a(rows, std::vector<double>(rows, 0.0));
    std::vector<double> r(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      a[i][i] = 2.0 * h / 3.0;
      if (i > 0) a[i][i - 1] = h / 6.0;
      if (i + 1 < rows) a[i][i + 1] = h / 6.0;
      r[i] = (y_[i + 2] - y_[i + 1]) / h - (y_[i + 1] - y_[i]) / h;
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < rows; ++col) {
      std::size_t pivot = col;
      for (std::size_t row = col + 1; row < rows; ++row) {
        if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
      }
      std::swap(a[col], a[pivot]);
      std::swap(r[col], r[pivot]);
      for (std::size_t row = col + 1; row < rows; ++row) {
        const double f = a[row][col] / a[col][col];
        for (std::size_t j = col; j < rows; ++j) a[row][j] -= f * a[col][j];
        r[row] -= f * r[col];
      }
    }
    for (std::size_t i = rows; i-- > 0;) {
      double s = r[i];
      for (std::size_t j = i + 1; j < rows; ++j) s -= a[i][j] * m[j + 1];
      m[i + 1] = s / a[i][i];
    }
  }

  b_.resize(n - 1);
  c_.resize(n - 1);
  d_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    b_[i] = (y_[i + 1] - y_[i]) / h - h / 6.0 * (2.0 * m[i] + m[i + 1]);
    c_[i] = m[i] / 2.0;
    d_[i] = (m[i + 1] - m[i]) / (6.0 * h);
  }
}

double NaturalSpline::eval(double t) const {
  const std::size_t n = y_.size();
  const double u = (t - t0_) / h_;
  if (u <= 0.0) return y_.front();
  if (u >= static_cast<double>(n - 1)) return y_.back();
  std::size_t i = static_cast<std::size_t>(u);
  if (i > n - 2) i = n - 2;
  const double dx = t - (t0_ + static_cast<double>(i) * h_);
  return y_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
}

double aliasing_metric(const ratekit::Signal& original, const ratekit::Signal& rebuilt,
                       double f_s_new_hz, double f_max_hz) {
  const std::vector<double> mag_orig = naive_dft_magnitude(original.values);
  const std::vector<double> mag_rebuilt = naive_dft_magnitude(rebuilt.values);

  const double n = static_cast<double>(original.values.size());
  const double bin_width = original.rate_hz() / n;
  const double nyquist = original.rate_hz() / 2.0;
  const double upper = std::min(2.0 * f_max_hz, nyquist);
  if (f_s_new_hz >= upper) return 0.0;

  std::vector<double> in_band;
  for (std::size_t k = 1; k < mag_orig.size(); ++k) {  // bin 0 is DC, below any band
    const double f = static_cast<double>(k) * bin_width;
    const double tol = 1e-9 * bin_width;
    if (f >= f_s_new_hz - tol && f <= upper + tol) {
      in_band.push_back(std::abs(mag_orig[k] - mag_rebuilt[k]));
    }
  }
  if (in_band.size() < 2) return 0.0;

  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < in_band.size(); ++k) {
    integral += (in_band[k] + in_band[k + 1]) / 2.0 * bin_width;
  }

  double sum_sq = 0.0;
  for (double v : original.values) sum_sq += v * v;
  return integral / std::sqrt(sum_sq);
}

std::optional<std::size_t> brute_force_best(const std::vector<ratekit::RateReport>& table) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i].requested || !table[i].feasible) continue;
    if (!best) {
      best = i;
      continue;
    }
    const bool cheaper = table[i].cost < table[*best].cost;
    const bool tie_larger =
        table[i].cost == table[*best].cost && table[i].factor > table[*best].factor;
    if (cheaper || tie_larger) best = i;
  }
  return best;
}

}  // namespace oracle
