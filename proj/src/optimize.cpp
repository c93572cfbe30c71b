#include "ratekit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <string>

namespace ratekit {

void validate(const CostModel& model) {
  const double constants[] = {model.k_a, model.k_t, model.lambda,
                              model.e_unit, model.e_b, model.e_t};
  for (double c : constants) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw BadConfig("cost model: constants must be finite and >= 0");
    }
  }
  if (!(model.e_target > 0.0) || !(model.e_target < 1.0)) {
    throw BadConfig("cost model: e_target must lie in (0, 1)");
  }
}

double transmissions_per_hour(double interval_s) {
  if (!(interval_s > 0.0)) {
    throw IntervalNotPositive("transmissions_per_hour: interval must be positive");
  }
  return 3600.0 / interval_s;
}

double transmission_ratio(double interval_a, double interval_b) {
  return transmissions_per_hour(interval_a) / transmissions_per_hour(interval_b);
}

double energy_per_hour(double interval_s, const CostModel& model) {
  return model.e_b + transmissions_per_hour(interval_s) * model.e_t;
}

double battery_life(double interval_new_s, double interval_ref_s, double life_ref_hours,
                    const CostModel& model) {
  if (!(life_ref_hours > 0.0)) {
    throw IntervalNotPositive("battery_life: reference life must be positive");
  }
  return life_ref_hours * energy_per_hour(interval_ref_s, model) /
         energy_per_hour(interval_new_s, model);
}

double cost(double rate_hz, double e_relative, const CostModel& model) {
  if (!(rate_hz > 0.0)) throw IntervalNotPositive("cost: rate must be positive");
  if (!(e_relative >= 0.0)) throw BadConfig("cost: e_relative must be >= 0");
  return model.k_a * rate_hz + model.k_t * rate_hz * model.e_unit + model.lambda * e_relative;
}

OptimizeResult optimize_rate(const Signal& signal, const std::vector<int>& factors,
                             const CompensationConfig& config, const CostModel& model) {
  if (factors.empty()) throw BadConfig("optimize_rate: factor list is empty");
  validate(config);
  validate(model);

  std::set<int> requested(factors.begin(), factors.end());
  for (int f : requested) {
    if (f < 1) throw BadConfig("optimize_rate: factors must be >= 1");
    const std::size_t n_dec = (signal.size() + static_cast<std::size_t>(f) - 1) /
                              static_cast<std::size_t>(f);
    if (n_dec < 3) {
      throw ResultTooShort("optimize_rate: factor " + std::to_string(f) +
                           " leaves fewer than 3 decimated samples");
    }
  }

  std::set<int> evaluated = requested;
  evaluated.insert(1);  // baseline row

  const double f_max = estimate_f_max(dft_magnitude(signal));
  const GridSpec grid = GridSpec::of(signal);

  const auto evaluate = [&](int f) {
    RateReport row;
    row.factor = f;
    row.interval_s = signal.interval * f;
    row.rate_hz = 1.0 / row.interval_s;
    row.requested = requested.count(f) > 0;

    if (f == 1) {
      // Transmitting every sample reproduces the signal; both paths are the
      // identity and all metrics are exactly zero.
      row.compensated = ErrorReport{0.0, 0.0, 0.0};
      row.uncompensated = ErrorReport{0.0, 0.0, 0.0};
    } else {
      const Signal decimated = decimate(signal, {f, 0});
      const Signal held = reconstruct_hold(decimated, grid);
      const Signal rebuilt = reconstruct_cubic(hampel_filter(decimated, config), grid);
      row.uncompensated = error_report(signal, held, row.rate_hz, f_max);
      row.compensated = error_report(signal, rebuilt, row.rate_hz, f_max);
    }

    row.transmissions_per_hour = transmissions_per_hour(row.interval_s);
    row.energy_per_hour_j = energy_per_hour(row.interval_s, model);
    const ErrorReport& judged = model.use_compensated_error ? row.compensated : row.uncompensated;
    // An absent error leaves the lambda term out; such a row is never
    // feasible, so its cost is informational only.
    row.cost = cost(row.rate_hz, judged.l2_relative.value_or(0.0), model);
    row.feasible = judged.l2_relative && *judged.l2_relative <= model.e_target;
    return row;
  };

  // Per-factor evaluations are independent; run them concurrently and
  // assemble the table in factor order regardless of completion order.
  std::vector<std::future<RateReport>> pending;
  pending.reserve(evaluated.size());
  for (int f : evaluated) {
    pending.push_back(std::async(std::launch::async, evaluate, f));
  }
  OptimizeResult result;
  for (auto& future : pending) result.table.push_back(future.get());

  for (std::size_t i = 0; i < result.table.size(); ++i) {
    const RateReport& row = result.table[i];
    if (!row.requested || !row.feasible) continue;
    if (!result.best_index) {
      result.best_index = i;
      continue;
    }
    const RateReport& incumbent = result.table[*result.best_index];
    if (row.cost < incumbent.cost ||
        (row.cost == incumbent.cost && row.factor > incumbent.factor)) {
      result.best_index = i;
    }
  }
  return result;
}

}  // namespace ratekit
