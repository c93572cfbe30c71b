#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ratekit/ingest.hpp"
#include "ratekit/optimize.hpp"

namespace ratekit {

/// Nearest double to the %.9g rendering of v. All numbers stored in a run
/// report go through this, so serialized output is stable and human-sized.
double round_sig9(double v);

/// %.9g rendering used by the curve files.
std::string format_sig9(double v);

/// Settings document shared by the CLI subcommands: compensation settings,
/// cost model, and the battery reference. Every key is optional.
struct ToolConfig {
  CompensationConfig compensation;
  CostModel cost_model;
  double battery_ref_life_hours = 1440.0;  // two months
};

ToolConfig tool_config_from_json(const nlohmann::json& doc);
ToolConfig load_tool_config(const std::string& path);  // throws BadConfig

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& doc);  // throws SpecInvalid
SyntheticSpec load_synthetic_spec(const std::string& path);

nlohmann::ordered_json to_json(const SyntheticSpec& spec);

/// Everything one run produced, sufficient to reproduce it bit-for-bit.
struct RunReport {
  // Input descriptor.
  std::string input_kind;  ///< "csv" or "synthetic"
  std::string input_path;
  std::string time_column;   ///< CSV runs only
  std::string value_column;  ///< CSV runs only
  std::optional<SyntheticSpec> synthetic;  ///< inline echo of the generator recipe
  std::size_t signal_samples = 0;
  double signal_interval_s = 0.0;

  // Configuration echo.
  CompensationConfig compensation;
  CostModel cost_model;
  std::vector<int> factors;
  double battery_ref_life_hours = 1440.0;

  // Results.
  std::vector<RateReport> table;
  std::optional<RateReport> best;

  struct CurvePoint {
    int factor = 1;
    double rate_hz = 0.0;
    std::optional<double> l2_uncompensated;
    std::optional<double> l2_compensated;
    std::optional<double> mean_error;  ///< compensated pipeline
    std::optional<double> aliasing;    ///< compensated pipeline
  };
  std::vector<CurvePoint> curves;  ///< one row per table entry

  struct BatteryProjection {
    int factor = 1;
    double interval_s = 0.0;
    double projected_life_hours = 0.0;
  };
  double reference_interval_s = 0.0;
  std::vector<BatteryProjection> battery;
};

/// Assembles a report from an optimizer result; every float is rounded to
/// 9 significant digits on the way in. Set keep_best = false for analyze
/// runs (error curves only, no optimization).
RunReport build_run_report(const OptimizeResult& result, const Signal& signal,
                           const ToolConfig& config, const std::vector<int>& factors,
                           bool keep_best);

nlohmann::ordered_json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& doc);  // throws BadConfig

void write_run_report(const RunReport& report, const std::string& path);
RunReport read_run_report(const std::string& path);  // throws BadConfig

/// Writes the per-figure flat CSV curve files into `dir`:
/// l2_vs_rate_uncompensated.csv, l2_vs_rate_compensated.csv,
/// mean_error_vs_rate.csv, aliasing_vs_rate.csv. Deterministic.
void write_curve_files(const RunReport& report, const std::string& dir);

/// Human-readable run summary; states "no feasible rate" when best is absent.
void write_summary(const RunReport& report, std::ostream& out);

}  // namespace ratekit
