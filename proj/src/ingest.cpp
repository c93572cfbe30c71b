#include "ratekit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace ratekit {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<long long>(era) * 146097 + static_cast<long long>(doe) - 719468;
}

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + text.size() && !text.empty() && std::isfinite(out);
}

// Accepts "YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM|-HH:MM|+HHMM]".
bool parse_iso8601(const std::string& text, double& out) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double sec = 0.0;
  char sep = 0;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%lf%n", &y, &mo, &d, &sep, &h, &mi, &sec,
                  &consumed) != 7) {
    return false;
  }
  if (sep != 'T' && sep != 't' && sep != ' ') return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec < 0.0 || sec >= 61.0) {
    return false;
  }

  double tz_offset = 0.0;
  const std::string rest = text.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest != "Z" && rest != "z") {
    int th = 0, tm = 0;
    if (std::sscanf(rest.c_str(), "+%2d:%2d", &th, &tm) == 2 ||
        std::sscanf(rest.c_str(), "+%2d%2d", &th, &tm) == 2) {
      tz_offset = th * 3600.0 + tm * 60.0;
    } else if (std::sscanf(rest.c_str(), "-%2d:%2d", &th, &tm) == 2 ||
               std::sscanf(rest.c_str(), "-%2d%2d", &th, &tm) == 2) {
      tz_offset = -(th * 3600.0 + tm * 60.0);
    } else {
      return false;
    }
  }

  out = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 + mi * 60.0 + sec -
        tz_offset;
  return true;
}

bool parse_time(const std::string& text, double& out) {
  return parse_number(text, out) || parse_iso8601(text, out);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Portable N(0,1) stream: explicit 53-bit uniforms plus Box-Muller, so the
// output depends only on the seed, not on the standard library.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]: keeps the log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::string shortest_repr(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

RawSeries parse_csv(std::istream& in, const std::string& time_column,
                    const std::string& value_column) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyInput("parse_csv: empty input");

  const std::vector<std::string> header = split_fields(line);
  std::size_t time_idx = header.size(), value_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == time_column) time_idx = i;
    if (header[i] == value_column) value_idx = i;
  }
  if (time_idx == header.size()) {
    throw MalformedRow("parse_csv: header has no column named '" + time_column + "'");
  }
  if (value_idx == header.size()) {
    throw MalformedRow("parse_csv: header has no column named '" + value_column + "'");
  }

  RawSeries raw;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw MalformedRow("parse_csv: line " + std::to_string(line_no) + ": expected " +
                         std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()));
    }
    double t = 0.0, v = 0.0;
    if (!parse_time(fields[time_idx], t)) {
      throw MalformedRow("parse_csv: line " + std::to_string(line_no) +
                         ": cannot parse time '" + fields[time_idx] + "'");
    }
    if (!parse_number(fields[value_idx], v)) {
      throw MalformedRow("parse_csv: line " + std::to_string(line_no) +
                         ": cannot parse value '" + fields[value_idx] + "'");
    }
    if (!raw.timestamps.empty() && t <= raw.timestamps.back()) {
      throw NonMonotonicTime("parse_csv: line " + std::to_string(line_no) +
                             ": timestamps must be strictly increasing");
    }
    raw.timestamps.push_back(t);
    raw.values.push_back(v);
  }
  if (raw.timestamps.size() < 2) {
    throw EmptyInput("parse_csv: need at least 2 data rows, got " +
                     std::to_string(raw.timestamps.size()));
  }
  return raw;
}

RawSeries parse_csv(const std::string& text, const std::string& time_column,
                    const std::string& value_column) {
  std::istringstream in(text);
  return parse_csv(in, time_column, value_column);
}

RegularizeResult regularize(const RawSeries& raw, double max_gap_factor) {
  const std::size_t n = raw.timestamps.size();
  if (n < 2 || raw.values.size() != n) {
    throw GapTooSparse("regularize: need at least 2 matching samples");
  }
  if (!(max_gap_factor > 1.0)) {
    throw BadConfig("regularize: max_gap_factor must be > 1");
  }

  std::vector<double> deltas(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    deltas[i] = raw.timestamps[i + 1] - raw.timestamps[i];
    if (!(deltas[i] > 0.0)) {
      throw NonMonotonicTime("regularize: timestamps must be strictly increasing");
    }
  }
  const double interval = median(deltas);
  const double gap_limit = max_gap_factor * interval;

  // Contiguous runs delimited by gaps beyond the limit.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t begin = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (deltas[i] > gap_limit) {
      runs.emplace_back(begin, i);
      begin = i + 1;
    }
  }
  runs.emplace_back(begin, n - 1);

  RegularizeResult result;
  for (const auto& [lo, hi] : runs) {
    result.segments.emplace_back(raw.timestamps[lo], raw.timestamps[hi]);
  }

  // Longest run by sample count, earliest on ties; fall through to shorter
  // runs when a run does not span two grid steps.
  std::vector<std::size_t> order(runs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (runs[a].second - runs[a].first) > (runs[b].second - runs[b].first);
  });

  const double snap_tol = 1e-6 * interval;
  for (std::size_t run_idx : order) {
    const auto [lo, hi] = runs[run_idx];
    if (hi - lo < 1) continue;
    const double t0 = raw.timestamps[lo];
    const double span = raw.timestamps[hi] - t0;
    const std::size_t grid_n = static_cast<std::size_t>(std::floor(span / interval + 1e-9)) + 1;
    if (grid_n < 2) continue;

    std::vector<double> grid_values(grid_n);
    std::size_t filled = 0;
    std::size_t k = lo;  // raw index with timestamps[k] <= t
    for (std::size_t j = 0; j < grid_n; ++j) {
      const double t = t0 + static_cast<double>(j) * interval;
      while (k + 1 <= hi && raw.timestamps[k + 1] <= t + snap_tol) ++k;
      if (std::abs(raw.timestamps[k] - t) <= snap_tol) {
        grid_values[j] = raw.values[k];
      } else {
        const double t_lo = raw.timestamps[k];
        const double t_hi = raw.timestamps[k + 1];
        const double w = (t - t_lo) / (t_hi - t_lo);
        grid_values[j] = raw.values[k] + w * (raw.values[k + 1] - raw.values[k]);
        ++filled;
      }
    }
    result.signal = make_signal(t0, interval, std::move(grid_values));
    result.chosen_segment = run_idx;
    result.filled = filled;
    return result;
  }
  throw GapTooSparse("regularize: no segment with at least 2 grid samples");
}

void validate(const SyntheticSpec& spec) {
  if (!(spec.rate_hz > 0.0) || !std::isfinite(spec.rate_hz)) {
    throw SpecInvalid("synthetic spec: rate_hz must be positive");
  }
  if (!(spec.duration_s > 0.0) || !std::isfinite(spec.duration_s)) {
    throw SpecInvalid("synthetic spec: duration_s must be positive");
  }
  if (spec.duration_s * spec.rate_hz < 2.0) {
    throw SpecInvalid("synthetic spec: duration_s * rate_hz must cover at least 2 samples");
  }
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
    throw SpecInvalid("synthetic spec: noise_std must be >= 0");
  }
  if (!std::isfinite(spec.offset)) throw SpecInvalid("synthetic spec: offset must be finite");
  for (const SineComponent& c : spec.components) {
    if (!std::isfinite(c.frequency_hz) || c.frequency_hz < 0.0) {
      throw SpecInvalid("synthetic spec: component frequency must be >= 0");
    }
    if (!std::isfinite(c.amplitude) || !std::isfinite(c.phase_rad)) {
      throw SpecInvalid("synthetic spec: component amplitude/phase must be finite");
    }
    if (!spec.alias_test && c.frequency_hz >= spec.rate_hz / 2.0) {
      throw SpecInvalid("synthetic spec: component frequency above Nyquist; set alias_test");
    }
  }
  if (spec.kind == SignalKind::spike_train && !(spec.spikes.period_s > 0.0)) {
    throw SpecInvalid("synthetic spec: spike period_s must be positive");
  }
  if (spec.kind == SignalKind::step &&
      (!std::isfinite(spec.step.time_s) || !std::isfinite(spec.step.before) ||
       !std::isfinite(spec.step.after))) {
    throw SpecInvalid("synthetic spec: step parameters must be finite");
  }
}

Signal generate(const SyntheticSpec& spec) {
  validate(spec);
  const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.rate_hz));
  const double interval = 1.0 / spec.rate_hz;

  std::vector<double> values(n, spec.offset);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * interval;
    switch (spec.kind) {
      case SignalKind::sum_of_sines:
      case SignalKind::spike_train:
        for (const SineComponent& c : spec.components) {
          values[i] += c.amplitude * std::sin(two_pi * c.frequency_hz * t + c.phase_rad);
        }
        break;
      case SignalKind::step:
        values[i] += t >= spec.step.time_s ? spec.step.after : spec.step.before;
        break;
    }
  }
  if (spec.kind == SignalKind::spike_train) {
    const std::size_t period =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.spikes.period_s *
                                                                       spec.rate_hz)));
    for (std::size_t i = 0; i < n; i += period) values[i] += spec.spikes.amplitude;
  }
  if (spec.noise_std > 0.0) {
    GaussianStream noise(spec.seed);
    for (double& v : values) v += spec.noise_std * noise.next();
  }
  return make_signal(0.0, interval, std::move(values));
}

void write_csv(const Signal& s, std::ostream& out, const std::string& time_column,
               const std::string& value_column) {
  out << time_column << ',' << value_column << '\n';
  char time_buf[40];
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(time_buf, sizeof(time_buf), "%.6f", s.time_at(i));
    out << time_buf << ',' << shortest_repr(s.values[i]) << '\n';
  }
}

}  // namespace ratekit
