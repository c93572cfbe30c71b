#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ratekit/metrics.hpp"
#include "ratekit/resample.hpp"
#include "ratekit/signal.hpp"

namespace ratekit {

/// Constants of the cost function C(f_s) = k_a f_s + k_t f_s E_unit
/// + lambda * E_relative and of the sensor energy model
/// E_total = E_b + n * E_t, plus the feasibility bound E_target.
///
/// With the defaults (lambda = 0) the optimization reduces to picking the
/// lowest feasible rate.
struct CostModel {
  double k_a = 1.0;       ///< storage cost per Hz
  double k_t = 1.0;       ///< cost per Joule transmitted
  double lambda = 0.0;    ///< weight of the relative error in the cost
  double e_unit = 1.0;    ///< Joules per transmission (cost function)
  double e_b = 0.0;       ///< standby Joules per hour (energy model)
  double e_t = 1.0;       ///< Joules per transmission (energy model)
  double e_target = 0.02; ///< feasibility bound on the relative L2 error

  /// Which pipeline's L2 error feeds the cost term and the feasibility
  /// test: the compensated one (the recommended operating mode) or the
  /// plain hold reconstruction, for sensitivity studies.
  bool use_compensated_error = true;
};

/// Throws BadConfig on negative constants or e_target outside (0, 1).
void validate(const CostModel& model);

/// 3600 / interval, not rounded. Throws IntervalNotPositive.
double transmissions_per_hour(double interval_s);

/// How many times more often interval_a transmits than interval_b.
double transmission_ratio(double interval_a, double interval_b);

/// E_b + transmissions_per_hour * E_t, in Joules per hour.
double energy_per_hour(double interval_s, const CostModel& model);

/// Battery life at a new interval, scaled from a measured reference by the
/// hourly-energy ratio. With E_b = 0 this is linear in the new interval.
double battery_life(double interval_new_s, double interval_ref_s, double life_ref_hours,
                    const CostModel& model);

/// k_a * rate + k_t * rate * E_unit + lambda * e_relative.
double cost(double rate_hz, double e_relative, const CostModel& model);

/// One row of the optimizer's search table.
struct RateReport {
  int factor = 1;
  double interval_s = 0.0;
  double rate_hz = 0.0;
  ErrorReport compensated;
  ErrorReport uncompensated;
  double transmissions_per_hour = 0.0;
  double energy_per_hour_j = 0.0;
  double cost = 0.0;
  bool feasible = false;  ///< compensated l2_relative present and <= e_target
  bool requested = true;  ///< factor was in the caller's candidate list
};

struct OptimizeResult {
  std::vector<RateReport> table;  ///< ascending factor; always contains factor 1
  std::optional<std::size_t> best_index;

  /// Feasible requested row with minimum cost, or nullptr when no candidate
  /// is feasible (the NoFeasibleRate condition).
  const RateReport* best() const {
    return best_index ? &table[*best_index] : nullptr;
  }
};

/// Evaluates every candidate factor with both reconstruction paths and picks
/// the cheapest feasible one; cost ties go to the larger factor. Factor 1 is
/// always evaluated as the baseline (rebuilt = original, errors exactly 0)
/// and is a candidate only when the caller listed it.
///
/// Throws BadConfig on an empty/invalid factor list, ResultTooShort when a
/// factor leaves fewer than 3 decimated samples; stage errors propagate.
OptimizeResult optimize_rate(const Signal& signal, const std::vector<int>& factors,
                             const CompensationConfig& config, const CostModel& model);

}  // namespace ratekit
