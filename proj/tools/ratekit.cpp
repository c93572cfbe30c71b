#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratekit/ingest.hpp"
#include "ratekit/optimize.hpp"
#include "ratekit/report.hpp"

namespace {

struct RunOptions {
  std::string input_path;
  std::string synthetic_path;
  std::string time_col = "time";
  std::string value_col = "value";
  std::vector<int> factors = {1, 5, 10, 15, 20};
  std::string config_path;
  std::string out_dir = ".";
  double e_target = -1.0;       // < 0 means "not given"
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  auto* input = cmd->add_option("--input", opts.input_path, "CSV time-series file");
  auto* synthetic =
      cmd->add_option("--synthetic", opts.synthetic_path, "synthetic signal spec (JSON)");
  input->excludes(synthetic);
  synthetic->excludes(input);
  cmd->add_option("--time-col", opts.time_col, "CSV time column name")->capture_default_str();
  cmd->add_option("--value-col", opts.value_col, "CSV value column name")->capture_default_str();
  cmd->add_option("--factors", opts.factors, "decimation factors to evaluate")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--e-target", opts.e_target, "relative-error bound (overrides config)");
  cmd->add_option("--config", opts.config_path, "compensation + cost-model config (JSON)");
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "override the synthetic spec seed")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
}

ratekit::RunReport run_analysis(const RunOptions& opts, bool keep_best) {
  ratekit::ToolConfig config;
  if (!opts.config_path.empty()) config = ratekit::load_tool_config(opts.config_path);
  if (opts.e_target >= 0.0) config.cost_model.e_target = opts.e_target;
  ratekit::validate(config.cost_model);

  ratekit::Signal signal;
  std::optional<ratekit::SyntheticSpec> synthetic;
  if (!opts.synthetic_path.empty()) {
    ratekit::SyntheticSpec spec = ratekit::load_synthetic_spec(opts.synthetic_path);
    if (opts.seed_given) spec.seed = opts.seed;
    synthetic = spec;
    signal = ratekit::generate(spec);
  } else if (!opts.input_path.empty()) {
    std::ifstream in(opts.input_path);
    if (!in) throw ratekit::EmptyInput("parse_csv: cannot open '" + opts.input_path + "'");
    const ratekit::RawSeries raw = ratekit::parse_csv(in, opts.time_col, opts.value_col);
    const ratekit::RegularizeResult regular = ratekit::regularize(raw);
    if (regular.segments.size() > 1) {
      std::cerr << "note: input split into " << regular.segments.size()
                << " segments; using the longest (" << regular.signal.size() << " samples)\n";
    }
    signal = regular.signal;
  } else {
    throw ratekit::BadConfig("either --input or --synthetic is required");
  }

  const ratekit::OptimizeResult result =
      ratekit::optimize_rate(signal, opts.factors, config.compensation, config.cost_model);

  ratekit::RunReport report =
      ratekit::build_run_report(result, signal, config, opts.factors, keep_best);
  report.input_kind = synthetic ? "synthetic" : "csv";
  report.input_path = synthetic ? opts.synthetic_path : opts.input_path;
  if (!synthetic) {
    report.time_column = opts.time_col;
    report.value_column = opts.value_col;
  }
  report.synthetic = synthetic;

  std::filesystem::create_directories(opts.out_dir);
  const std::string report_path =
      (std::filesystem::path(opts.out_dir) / "run_report.json").string();
  ratekit::write_run_report(report, report_path);
  ratekit::write_summary(report, std::cout);
  std::cout << "report: " << report_path << '\n';
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampling-interval analysis and optimization for telemetry signals"};
  app.require_subcommand(1);

  RunOptions analyze_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "evaluate reconstruction errors per decimation factor (no optimization)");
  add_run_options(analyze, analyze_opts);

  RunOptions optimize_opts;
  CLI::App* optimize =
      app.add_subcommand("optimize", "pick the cheapest feasible sampling interval");
  add_run_options(optimize, optimize_opts);

  double interval_new = 0.0, interval_ref = 0.0, life_ref = 0.0;
  std::string battery_config_path;
  CLI::App* battery = app.add_subcommand("battery", "project battery life for a new interval");
  battery->add_option("interval_new", interval_new, "new sampling interval, seconds")->required();
  battery->add_option("interval_ref", interval_ref, "reference sampling interval, seconds")
      ->required();
  battery->add_option("life_ref", life_ref, "measured battery life at the reference, hours")
      ->required();
  battery->add_option("--config", battery_config_path, "cost-model config (JSON), for E_b/E_t");

  std::string report_path, report_out = ".";
  CLI::App* report_cmd =
      app.add_subcommand("report", "write per-figure curve CSVs and a text summary");
  report_cmd->add_option("run_report", report_path, "run report JSON produced by analyze/optimize")
      ->required();
  report_cmd->add_option("--out", report_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) {
      run_analysis(analyze_opts, false);
      return 0;
    }
    if (optimize->parsed()) {
      const ratekit::RunReport run = run_analysis(optimize_opts, true);
      if (!run.best) {
        std::cerr << "no feasible rate: every candidate factor exceeds e_target "
                  << ratekit::format_sig9(run.cost_model.e_target) << '\n';
        return 3;
      }
      return 0;
    }
    if (battery->parsed()) {
      ratekit::ToolConfig config;
      if (!battery_config_path.empty()) config = ratekit::load_tool_config(battery_config_path);
      const double life =
          ratekit::battery_life(interval_new, interval_ref, life_ref, config.cost_model);
      std::cout << "transmissions per hour at " << ratekit::format_sig9(interval_ref)
                << " s: " << ratekit::format_sig9(ratekit::transmissions_per_hour(interval_ref))
                << '\n';
      std::cout << "transmissions per hour at " << ratekit::format_sig9(interval_new)
                << " s: " << ratekit::format_sig9(ratekit::transmissions_per_hour(interval_new))
                << '\n';
      std::cout << "transmission ratio: "
                << ratekit::format_sig9(ratekit::transmission_ratio(interval_ref, interval_new))
                << '\n';
      std::cout << "projected battery life: " << ratekit::format_sig9(life) << " hours ("
                << ratekit::format_sig9(life / 24.0) << " days)\n";
      return 0;
    }
    if (report_cmd->parsed()) {
      const ratekit::RunReport run = ratekit::read_run_report(report_path);
      std::filesystem::create_directories(report_out);
      ratekit::write_curve_files(run, report_out);
      std::ostringstream summary;
      ratekit::write_summary(run, summary);
      std::ofstream out((std::filesystem::path(report_out) / "summary.txt").string(),
                        std::ios::binary);
      out << summary.str();
      std::cout << summary.str();
      return 0;
    }
  } catch (const ratekit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
