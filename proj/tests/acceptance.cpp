// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line each. Exits non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "ratekit/metrics.hpp"
#include "ratekit/optimize.hpp"
#include "ratekit/report.hpp"
#include "ratekit/resample.hpp"

using namespace ratekit;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

int g_failures = 0;

void run_criterion(int id, const std::string& label, double budget_seconds,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto started = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  check.require(elapsed < budget_seconds,
                "runtime " + std::to_string(elapsed) + " s exceeds " +
                    std::to_string(budget_seconds) + " s");
  if (!check.ok) ++g_failures;
  std::printf("%s %d: %s (%.3f s)%s%s\n", check.ok ? "PASS" : "FAIL", id, label.c_str(), elapsed,
              check.ok ? "" : " -- ", check.ok ? "" : check.detail.c_str());
  std::fflush(stdout);
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string command = std::string(RATEKIT_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return -1;
  char buffer[4096];
  std::string captured;
  while (std::fgets(buffer, sizeof(buffer), pipe)) captured += buffer;
  if (output) *output = captured;
  const int status = ::pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<Signal> acceptance_corpus() {
  std::vector<Signal> signals = corpus::band_limited_corpus(5, 4096.0);
  signals.push_back(corpus::spiky_signal(41, 4000.0));
  signals.push_back(corpus::aliased_sine(0.3, 2000));
  SyntheticSpec step;
  step.kind = SignalKind::step;
  step.duration_s = 3000.0;
  step.rate_hz = 1.0;
  step.offset = 5.0;
  step.step = {900.0, 0.0, 10.0};
  signals.push_back(generate(step));
  return signals;
}

// Criterion 4's desk-scale stand-in for a full day of 1 Hz field data.
SyntheticSpec day_scale_spec() {
  SyntheticSpec spec;
  spec.kind = SignalKind::sum_of_sines;
  spec.duration_s = 86400.0;
  spec.rate_hz = 1.0;
  spec.offset = 15.0;
  spec.components = {{0.0003, 2.0, 0.0}, {0.004, 1.2, 0.7}, {0.02, 0.6, 1.9}};
  spec.seed = 4;
  return spec;
}

void criterion_1(Check& check) {
  check.require(transmissions_per_hour(1.0) == 3600.0, "tph(1 s) != 3600");
  check.require(transmissions_per_hour(5.0) == 720.0, "tph(5 s) != 720");
  check.require(transmission_ratio(1.0, 5.0) == 5.0, "ratio(1,5) != 5");
  CostModel model;  // e_b = 0, e_t = 1
  check.require(battery_life(5.0, 1.0, 1440.0, model) == 7200.0, "battery_life != 7200 h");
}

void criterion_2(Check& check) {
  for (const Signal& s : acceptance_corpus()) {
    const Signal d = decimate(s, {1, 0});
    check.require(d.values == s.values, "factor-1 decimation altered values");

    const Signal held = reconstruct_hold(d, GridSpec::of(s));
    const double f_max = estimate_f_max(dft_magnitude(s));
    const ErrorReport held_report = error_report(s, held, s.rate_hz(), f_max);
    check.require(held_report.l2_relative == 0.0, "hold l2 not exactly 0");
    check.require(held_report.mean_relative == 0.0, "hold mean error not exactly 0");
    check.require(held_report.aliasing == 0.0, "hold aliasing not exactly 0");

    const OptimizeResult result = optimize_rate(s, {1}, {}, {});
    const RateReport& row = result.table.front();
    check.require(row.compensated.l2_relative == 0.0 && row.uncompensated.l2_relative == 0.0,
                  "baseline table row l2 not exactly 0");
    check.require(row.compensated.mean_relative == 0.0 && row.compensated.aliasing == 0.0,
                  "baseline table row not exactly 0");
  }
}

void criterion_3(Check& check) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> value(-20.0, 20.0);

  // Knot reproduction on random data.
  {
    std::vector<double> values(400);
    for (double& v : values) v = value(rng);
    const Signal s = make_signal(0.0, 1.0, values);
    const Signal d = decimate(s, {5, 0});
    const Signal r = reconstruct_cubic(d, GridSpec::of(s));
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double want = d.values[k];
      check.require(std::abs(r.values[k * 5] - want) <= 1e-9 * std::max(1.0, std::abs(want)),
                    "knot value not reproduced within 1e-9");
    }
  }

  // Linear reproduction at every grid point (knots span the grid).
  {
    std::vector<double> values(401);
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = 2.0 * static_cast<double>(i) + 1.0;
    }
    const Signal s = make_signal(0.0, 1.0, values);
    for (int factor : {2, 4, 5, 8, 10, 20}) {
      const Signal r = reconstruct_cubic(decimate(s, {factor, 0}), GridSpec::of(s));
      for (std::size_t i = 0; i < s.size(); ++i) {
        check.require(std::abs(r.values[i] - s.values[i]) <= 1e-9 * std::abs(s.values[i]),
                      "linear signal not reproduced within 1e-9 at factor " +
                          std::to_string(factor));
      }
    }
  }

  // Dense-grid oracle bound on a sine corpus.
  for (double freq : {0.002, 0.005, 0.01}) {
    const std::size_t n = 2001;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i));
    }
    const Signal s = make_signal(0.0, 1.0, std::move(values));
    const Signal d = decimate(s, {5, 0});
    const Signal r = reconstruct_cubic(d, GridSpec::of(s));

    double impl_max = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      impl_max = std::max(impl_max, std::abs(r.values[i] - s.values[i]));
    }
    const oracle::NaturalSpline reference(d.values, d.start_time, d.interval);
    double bound = 0.0;
    for (double t = 0.0; t <= s.duration(); t += s.interval / 100.0) {
      const double truth = std::sin(2.0 * std::numbers::pi * freq * t);
      bound = std::max(bound, std::abs(reference.eval(t) - truth));
    }
    check.require(impl_max <= bound * (1.0 + 1e-9) + 1e-12,
                  "reconstruction exceeds the dense-oracle bound at f = " + std::to_string(freq));
  }
}

void criterion_4(Check& check) {
  const SyntheticSpec spec = day_scale_spec();
  const Signal s = generate(spec);
  check.require(s.size() == 86400, "corpus signal is not a full day at 1 Hz");

  const Signal rebuilt = compensate(s, {5, 0}, {});
  const double l2 = relative_l2_error(s, rebuilt);
  check.require(l2 <= 0.02, "factor-5 compensated l2 " + std::to_string(l2) + " > 0.02");

  // The CLI, with defaults, must pick at least an 80% reduction.
  const fs::path dir = fs::temp_directory_path() / "ratekit_acceptance_c4";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "spec.json") << nlohmann::json(to_json(spec)).dump(2);
  const int exit_code = run_cli("optimize --synthetic " + (dir / "spec.json").string() +
                                " --out " + (dir / "out").string());
  check.require(exit_code == 0, "cmd_optimize exited " + std::to_string(exit_code));
  if (exit_code == 0) {
    std::ifstream in(dir / "out" / "run_report.json");
    const nlohmann::json report = nlohmann::json::parse(in);
    check.require(report["best"].is_object() && report["best"]["factor"].get<int>() >= 5,
                  "cmd_optimize best factor below 5");
  }
  fs::remove_all(dir);
}

void criterion_5(Check& check) {
  const Signal s = corpus::aliased_sine(0.3, 2000);
  const Signal held = reconstruct_hold(decimate(s, {5, 0}), GridSpec::of(s));
  const double f_max = estimate_f_max(dft_magnitude(s));
  const double f_s_new = s.rate_hz() / 5.0;  // 0.2 Hz

  const double got = aliasing_error(s, held, f_s_new, f_max);
  const double want = oracle::aliasing_metric(s, held, f_s_new, f_max);
  check.require(got > 0.0, "aliasing error is not positive");
  check.require(std::abs(got - want) <= 1e-6 * want, "aliasing error disagrees with the oracle");

  const OptimizeResult result = optimize_rate(s, {1, 5, 10, 15, 20}, {}, {});
  for (const RateReport& row : result.table) {
    if (row.factor == 5) check.require(!row.feasible, "aliased factor 5 not rejected");
  }
  check.require(result.best() && result.best()->factor == 1, "optimizer did not fall back to 1");
}

void criterion_6(Check& check) {
  for (const Signal& s : corpus::band_limited_corpus(8, 8192.0)) {
    for (int factor : {5, 10, 15, 20}) {
      const Signal d = decimate(s, {factor, 0});
      const double held = relative_l2_error(s, reconstruct_hold(d, GridSpec::of(s)));
      const double comp =
          relative_l2_error(s, reconstruct_cubic(hampel_filter(d, {}), GridSpec::of(s)));
      check.require(comp <= held, "compensated " + std::to_string(comp) + " > hold " +
                                      std::to_string(held) + " at factor " +
                                      std::to_string(factor));
    }
  }
}

void criterion_7(Check& check) {
  // DFT against the naive O(N^2) definition for every length up to 256.
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  for (std::size_t n = 2; n <= 256; ++n) {
    std::vector<double> values(n);
    for (double& v : values) v = value(rng);
    const Signal s = make_signal(0.0, 1.0, values);
    const Spectrum spectrum = dft_magnitude(s);
    const std::vector<double> reference = oracle::naive_dft_magnitude(s.values);
    double scale = 0.0;
    for (double m : reference) scale = std::max(scale, m);
    for (std::size_t k = 0; k < reference.size(); ++k) {
      check.require(std::abs(spectrum.magnitudes[k] - reference[k]) <= 1e-9 * scale,
                    "DFT bin differs from the naive oracle at N = " + std::to_string(n));
    }
  }

  // Optimizer against an independent table scan on randomized corpora.
  for (int trial = 0; trial < 20; ++trial) {
    Signal s = [&]() {
      switch (trial % 3) {
        case 0: return generate(corpus::band_limited_spec(7000 + trial, 2048.0));
        case 1: return corpus::spiky_signal(7100 + trial, 2048.0);
        default: return corpus::aliased_sine(0.2 + 0.02 * (trial % 6), 2048);
      }
    }();
    std::vector<int> factors = {1, 5, 10, 15, 20};
    if (trial % 4 == 1) factors = {1, 2, 4, 8};
    if (trial % 4 == 3) factors = {5, 10, 15};
    CostModel model;
    if (trial % 5 == 2) model.lambda = 3.0;
    const OptimizeResult result = optimize_rate(s, factors, {}, model);
    check.require(result.best_index == oracle::brute_force_best(result.table),
                  "optimizer best disagrees with the brute-force scan on trial " +
                      std::to_string(trial));
  }
}

void criterion_8(Check& check) {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_real_distribution<double> scale_dist(1e-3, 1e3);
  std::uniform_real_distribution<double> fraction(0.01, 1.0);

  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 32 + rng() % 128;
    std::vector<double> values(n);
    for (double& v : values) v = value(rng);
    const Signal s = make_signal(0.0, 1.0, values);

    // Scale invariance of all three metrics.
    const int factor = 2 + static_cast<int>(rng() % 4);
    const Signal rebuilt = reconstruct_hold(decimate(s, {factor, 0}), GridSpec::of(s));
    const double c = scale_dist(rng);
    std::vector<double> so = s.values, sr = rebuilt.values;
    for (double& v : so) v *= c;
    for (double& v : sr) v *= c;
    const Signal scaled_orig = make_signal(s.start_time, s.interval, so);
    const Signal scaled_rebuilt = make_signal(s.start_time, s.interval, sr);

    const double f_max = estimate_f_max(dft_magnitude(s));
    const double f_s_new = s.rate_hz() / factor;
    const double l2_a = relative_l2_error(s, rebuilt);
    const double l2_b = relative_l2_error(scaled_orig, scaled_rebuilt);
    check.require(std::abs(l2_a - l2_b) <= 1e-12 * std::max(1.0, l2_a), "l2 not scale-invariant");
    if (mean(s) != 0.0) {
      const double me_a = mean_relative_error(s, rebuilt);
      const double me_b = mean_relative_error(scaled_orig, scaled_rebuilt);
      check.require(std::abs(me_a - me_b) <= 1e-12 * std::max(1.0, me_a),
                    "mean error not scale-invariant");
    }
    const double al_a = aliasing_error(s, rebuilt, f_s_new, f_max);
    const double al_b = aliasing_error(scaled_orig, scaled_rebuilt, f_s_new, f_max);
    check.require(std::abs(al_a - al_b) <= 1e-12 * std::max(1.0, al_a),
                  "aliasing not scale-invariant");

    // Parseval within 1e-9.
    const Spectrum spectrum = dft_magnitude(s);
    double time_energy = 0.0;
    for (double v : s.values) time_energy += v * v;
    double freq_energy = spectrum.magnitudes[0] * spectrum.magnitudes[0];
    if (n % 2 == 0) freq_energy += spectrum.magnitudes.back() * spectrum.magnitudes.back();
    const std::size_t mirrored_end = n % 2 == 0 ? spectrum.bins() - 1 : spectrum.bins();
    for (std::size_t k = 1; k < mirrored_end; ++k) {
      freq_energy += 2.0 * spectrum.magnitudes[k] * spectrum.magnitudes[k];
    }
    freq_energy /= static_cast<double>(n);
    check.require(std::abs(time_energy - freq_energy) <= 1e-9 * time_energy, "Parseval violated");

    // estimate_f_max monotone in the power fraction.
    double lo = fraction(rng), hi = fraction(rng);
    if (lo > hi) std::swap(lo, hi);
    check.require(estimate_f_max(spectrum, lo) <= estimate_f_max(spectrum, hi),
                  "estimate_f_max not monotone");
  }
}

}  // namespace

int main() {
  std::printf("ratekit acceptance suite\n");
  run_criterion(1, "battery arithmetic matches the published equations exactly", 0.001,
                criterion_1);
  run_criterion(2, "factor-1 baseline has exactly zero error on every corpus signal", 1.0,
                criterion_2);
  run_criterion(3, "cubic reconstruction honors knots, linear data, and the dense oracle", 30.0,
                criterion_3);
  run_criterion(4, "day-scale corpus: factor 5 within 2% and cmd_optimize picks >= 5", 30.0,
                criterion_4);
  run_criterion(5, "0.3 Hz tone at 0.2 Hz: aliasing detected, factor 5 rejected", 5.0,
                criterion_5);
  run_criterion(6, "compensated error <= hold error on the band-limited corpus", 60.0,
                criterion_6);
  run_criterion(7, "DFT and optimizer match their independent oracles", 60.0, criterion_7);
  run_criterion(8, "metric properties: scale invariance, Parseval, monotone f_max", 60.0,
                criterion_8);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
