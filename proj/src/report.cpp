#include "ratekit/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ratekit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json_file(const std::string& path, const char* who) {
  std::ifstream in(path);
  if (!in) throw BadConfig(std::string(who) + ": cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw BadConfig(std::string(who) + ": '" + path + "' is not valid JSON: " + e.what());
  }
}

// Unknown keys are configuration typos; better loud than silently ignored.
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw BadConfig(where + ": unknown key '" + item.key() + "'");
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw BadConfig(std::string("expected a number for '") + key + "'");
  return obj[key].get<double>();
}

std::optional<double> get_optional(const json& obj, const char* key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_number()) throw BadConfig(std::string("expected a number for '") + key + "'");
  return obj[key].get<double>();
}

json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::optional<double> rounded(const std::optional<double>& v) {
  if (!v) return std::nullopt;
  return round_sig9(*v);
}

ordered_json error_report_to_json(const ErrorReport& report) {
  ordered_json doc;
  doc["l2_relative"] = optional_to_json(rounded(report.l2_relative));
  doc["mean_relative"] = optional_to_json(rounded(report.mean_relative));
  doc["aliasing"] = optional_to_json(rounded(report.aliasing));
  return doc;
}

ErrorReport error_report_from_json(const json& doc) {
  ErrorReport report;
  report.l2_relative = get_optional(doc, "l2_relative");
  report.mean_relative = get_optional(doc, "mean_relative");
  report.aliasing = get_optional(doc, "aliasing");
  return report;
}

ordered_json rate_report_to_json(const RateReport& row) {
  ordered_json doc;
  doc["factor"] = row.factor;
  doc["interval_s"] = round_sig9(row.interval_s);
  doc["rate_hz"] = round_sig9(row.rate_hz);
  doc["compensated"] = error_report_to_json(row.compensated);
  doc["uncompensated"] = error_report_to_json(row.uncompensated);
  doc["transmissions_per_hour"] = round_sig9(row.transmissions_per_hour);
  doc["energy_per_hour_j"] = round_sig9(row.energy_per_hour_j);
  doc["cost"] = round_sig9(row.cost);
  doc["feasible"] = row.feasible;
  doc["requested"] = row.requested;
  return doc;
}

RateReport rate_report_from_json(const json& doc) {
  RateReport row;
  row.factor = doc.at("factor").get<int>();
  row.interval_s = doc.at("interval_s").get<double>();
  row.rate_hz = doc.at("rate_hz").get<double>();
  row.compensated = error_report_from_json(doc.at("compensated"));
  row.uncompensated = error_report_from_json(doc.at("uncompensated"));
  row.transmissions_per_hour = doc.at("transmissions_per_hour").get<double>();
  row.energy_per_hour_j = doc.at("energy_per_hour_j").get<double>();
  row.cost = doc.at("cost").get<double>();
  row.feasible = doc.at("feasible").get<bool>();
  row.requested = doc.value("requested", true);
  return row;
}

const char* kind_name(SignalKind kind) {
  switch (kind) {
    case SignalKind::sum_of_sines: return "sum_of_sines";
    case SignalKind::step: return "step";
    case SignalKind::spike_train: return "spike_train";
  }
  return "sum_of_sines";
}

SignalKind kind_from_name(const std::string& name) {
  if (name == "sum_of_sines") return SignalKind::sum_of_sines;
  if (name == "step") return SignalKind::step;
  if (name == "spike_train") return SignalKind::spike_train;
  throw SpecInvalid("synthetic spec: unknown kind '" + name + "'");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadConfig("cannot write '" + path + "'");
  out << content;
}

std::string csv_cell(const std::optional<double>& v) {
  return v ? format_sig9(*v) : std::string();
}

}  // namespace

double round_sig9(double v) {
  return std::strtod(format_sig9(v).c_str(), nullptr);
}

std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

ToolConfig tool_config_from_json(const json& doc) {
  if (!doc.is_object()) throw BadConfig("config: document must be a JSON object");
  check_keys(doc, {"compensation", "cost_model", "battery"}, "config");

  ToolConfig config;
  if (doc.contains("compensation")) {
    const json& c = doc["compensation"];
    check_keys(c, {"hampel_window", "hampel_k", "boundary"}, "config.compensation");
    config.compensation.hampel_window =
        static_cast<int>(get_number(c, "hampel_window", config.compensation.hampel_window));
    config.compensation.hampel_k = get_number(c, "hampel_k", config.compensation.hampel_k);
    if (c.contains("boundary") && c["boundary"] != "natural") {
      throw BadConfig("config.compensation: only the 'natural' boundary is supported");
    }
    validate(config.compensation);
  }
  if (doc.contains("cost_model")) {
    const json& m = doc["cost_model"];
    check_keys(m,
               {"k_a", "k_t", "lambda", "e_unit", "e_b", "e_t", "e_target",
                "use_compensated_error"},
               "config.cost_model");
    config.cost_model.k_a = get_number(m, "k_a", config.cost_model.k_a);
    config.cost_model.k_t = get_number(m, "k_t", config.cost_model.k_t);
    config.cost_model.lambda = get_number(m, "lambda", config.cost_model.lambda);
    config.cost_model.e_unit = get_number(m, "e_unit", config.cost_model.e_unit);
    config.cost_model.e_b = get_number(m, "e_b", config.cost_model.e_b);
    config.cost_model.e_t = get_number(m, "e_t", config.cost_model.e_t);
    config.cost_model.e_target = get_number(m, "e_target", config.cost_model.e_target);
    config.cost_model.use_compensated_error =
        m.value("use_compensated_error", config.cost_model.use_compensated_error);
    validate(config.cost_model);
  }
  if (doc.contains("battery")) {
    const json& b = doc["battery"];
    check_keys(b, {"reference_life_hours"}, "config.battery");
    config.battery_ref_life_hours =
        get_number(b, "reference_life_hours", config.battery_ref_life_hours);
    if (!(config.battery_ref_life_hours > 0.0)) {
      throw BadConfig("config.battery: reference_life_hours must be positive");
    }
  }
  return config;
}

ToolConfig load_tool_config(const std::string& path) {
  return tool_config_from_json(parse_json_file(path, "config"));
}

SyntheticSpec synthetic_spec_from_json(const json& doc) {
  if (!doc.is_object()) throw SpecInvalid("synthetic spec: document must be a JSON object");
  try {
    check_keys(doc,
               {"kind", "duration_s", "rate_hz", "components", "step", "spikes", "offset",
                "noise_std", "seed", "alias_test"},
               "synthetic spec");
  } catch (const BadConfig& e) {
    throw SpecInvalid(e.what());
  }

  SyntheticSpec spec;
  spec.kind = kind_from_name(doc.value("kind", "sum_of_sines"));
  spec.duration_s = get_number(doc, "duration_s", 0.0);
  spec.rate_hz = get_number(doc, "rate_hz", 0.0);
  if (doc.contains("components")) {
    for (const json& c : doc["components"]) {
      SineComponent component;
      component.frequency_hz = get_number(c, "frequency_hz", 0.0);
      component.amplitude = get_number(c, "amplitude", 0.0);
      component.phase_rad = get_number(c, "phase_rad", 0.0);
      spec.components.push_back(component);
    }
  }
  if (doc.contains("step")) {
    const json& s = doc["step"];
    spec.step.time_s = get_number(s, "time_s", 0.0);
    spec.step.before = get_number(s, "before", 0.0);
    spec.step.after = get_number(s, "after", 0.0);
  }
  if (doc.contains("spikes")) {
    const json& s = doc["spikes"];
    spec.spikes.period_s = get_number(s, "period_s", 0.0);
    spec.spikes.amplitude = get_number(s, "amplitude", 0.0);
  }
  spec.offset = get_number(doc, "offset", 0.0);
  spec.noise_std = get_number(doc, "noise_std", 0.0);
  spec.seed = doc.value("seed", std::uint64_t{0});
  spec.alias_test = doc.value("alias_test", false);
  validate(spec);
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  json doc;
  try {
    doc = parse_json_file(path, "synthetic spec");
  } catch (const BadConfig& e) {
    throw SpecInvalid(e.what());
  }
  return synthetic_spec_from_json(doc);
}

ordered_json to_json(const SyntheticSpec& spec) {
  ordered_json doc;
  doc["kind"] = kind_name(spec.kind);
  doc["duration_s"] = round_sig9(spec.duration_s);
  doc["rate_hz"] = round_sig9(spec.rate_hz);
  ordered_json components = ordered_json::array();
  for (const SineComponent& c : spec.components) {
    components.push_back({{"frequency_hz", round_sig9(c.frequency_hz)},
                          {"amplitude", round_sig9(c.amplitude)},
                          {"phase_rad", round_sig9(c.phase_rad)}});
  }
  doc["components"] = components;
  if (spec.kind == SignalKind::step) {
    doc["step"] = {{"time_s", round_sig9(spec.step.time_s)},
                   {"before", round_sig9(spec.step.before)},
                   {"after", round_sig9(spec.step.after)}};
  }
  if (spec.kind == SignalKind::spike_train) {
    doc["spikes"] = {{"period_s", round_sig9(spec.spikes.period_s)},
                     {"amplitude", round_sig9(spec.spikes.amplitude)}};
  }
  doc["offset"] = round_sig9(spec.offset);
  doc["noise_std"] = round_sig9(spec.noise_std);
  doc["seed"] = spec.seed;
  doc["alias_test"] = spec.alias_test;
  return doc;
}

RunReport build_run_report(const OptimizeResult& result, const Signal& signal,
                           const ToolConfig& config, const std::vector<int>& factors,
                           bool keep_best) {
  RunReport report;
  report.signal_samples = signal.size();
  report.signal_interval_s = round_sig9(signal.interval);
  report.compensation = config.compensation;
  report.cost_model = config.cost_model;
  report.factors = factors;
  report.battery_ref_life_hours = round_sig9(config.battery_ref_life_hours);
  report.table = result.table;
  if (keep_best && result.best()) report.best = *result.best();

  for (const RateReport& row : result.table) {
    RunReport::CurvePoint point;
    point.factor = row.factor;
    point.rate_hz = round_sig9(row.rate_hz);
    point.l2_uncompensated = rounded(row.uncompensated.l2_relative);
    point.l2_compensated = rounded(row.compensated.l2_relative);
    point.mean_error = rounded(row.compensated.mean_relative);
    point.aliasing = rounded(row.compensated.aliasing);
    report.curves.push_back(point);
  }

  report.reference_interval_s = round_sig9(signal.interval);
  for (const RateReport& row : result.table) {
    RunReport::BatteryProjection projection;
    projection.factor = row.factor;
    projection.interval_s = round_sig9(row.interval_s);
    projection.projected_life_hours = round_sig9(battery_life(
        row.interval_s, signal.interval, config.battery_ref_life_hours, config.cost_model));
    report.battery.push_back(projection);
  }
  return report;
}

ordered_json to_json(const RunReport& report) {
  ordered_json doc;

  ordered_json input;
  input["kind"] = report.input_kind;
  input["path"] = report.input_path;
  if (report.input_kind == "csv") {
    input["time_column"] = report.time_column;
    input["value_column"] = report.value_column;
  }
  input["synthetic"] = report.synthetic ? to_json(*report.synthetic) : ordered_json(nullptr);
  input["signal"] = {{"samples", report.signal_samples},
                     {"interval_s", round_sig9(report.signal_interval_s)}};
  doc["input"] = input;

  ordered_json config;
  config["compensation"] = {{"hampel_window", report.compensation.hampel_window},
                            {"hampel_k", round_sig9(report.compensation.hampel_k)},
                            {"boundary", "natural"}};
  config["cost_model"] = {{"k_a", round_sig9(report.cost_model.k_a)},
                          {"k_t", round_sig9(report.cost_model.k_t)},
                          {"lambda", round_sig9(report.cost_model.lambda)},
                          {"e_unit", round_sig9(report.cost_model.e_unit)},
                          {"e_b", round_sig9(report.cost_model.e_b)},
                          {"e_t", round_sig9(report.cost_model.e_t)},
                          {"e_target", round_sig9(report.cost_model.e_target)},
                          {"use_compensated_error", report.cost_model.use_compensated_error}};
  config["factors"] = report.factors;
  config["battery_reference_life_hours"] = round_sig9(report.battery_ref_life_hours);
  doc["config"] = config;

  ordered_json table = ordered_json::array();
  for (const RateReport& row : report.table) table.push_back(rate_report_to_json(row));
  doc["table"] = table;
  doc["best"] = report.best ? rate_report_to_json(*report.best) : ordered_json(nullptr);

  ordered_json curves = ordered_json::array();
  for (const RunReport::CurvePoint& point : report.curves) {
    ordered_json row;
    row["factor"] = point.factor;
    row["rate_hz"] = round_sig9(point.rate_hz);
    row["l2_uncompensated"] = optional_to_json(rounded(point.l2_uncompensated));
    row["l2_compensated"] = optional_to_json(rounded(point.l2_compensated));
    row["mean_error"] = optional_to_json(rounded(point.mean_error));
    row["aliasing"] = optional_to_json(rounded(point.aliasing));
    curves.push_back(row);
  }
  doc["curves"] = curves;

  ordered_json battery;
  battery["reference_interval_s"] = round_sig9(report.reference_interval_s);
  battery["reference_life_hours"] = round_sig9(report.battery_ref_life_hours);
  ordered_json projections = ordered_json::array();
  for (const RunReport::BatteryProjection& projection : report.battery) {
    projections.push_back({{"factor", projection.factor},
                           {"interval_s", round_sig9(projection.interval_s)},
                           {"projected_life_hours", round_sig9(projection.projected_life_hours)}});
  }
  battery["projections"] = projections;
  doc["battery"] = battery;
  return doc;
}

RunReport run_report_from_json(const json& doc) {
  try {
    RunReport report;
    const json& input = doc.at("input");
    report.input_kind = input.at("kind").get<std::string>();
    report.input_path = input.at("path").get<std::string>();
    report.time_column = input.value("time_column", "");
    report.value_column = input.value("value_column", "");
    if (input.contains("synthetic") && !input["synthetic"].is_null()) {
      report.synthetic = synthetic_spec_from_json(input["synthetic"]);
    }
    const json& signal = input.at("signal");
    report.signal_samples = signal.at("samples").get<std::size_t>();
    report.signal_interval_s = signal.at("interval_s").get<double>();

    const json& config = doc.at("config");
    const json& compensation = config.at("compensation");
    report.compensation.hampel_window = compensation.at("hampel_window").get<int>();
    report.compensation.hampel_k = compensation.at("hampel_k").get<double>();
    const json& model = config.at("cost_model");
    report.cost_model.k_a = model.at("k_a").get<double>();
    report.cost_model.k_t = model.at("k_t").get<double>();
    report.cost_model.lambda = model.at("lambda").get<double>();
    report.cost_model.e_unit = model.at("e_unit").get<double>();
    report.cost_model.e_b = model.at("e_b").get<double>();
    report.cost_model.e_t = model.at("e_t").get<double>();
    report.cost_model.e_target = model.at("e_target").get<double>();
    report.cost_model.use_compensated_error = model.value("use_compensated_error", true);
    report.factors = config.at("factors").get<std::vector<int>>();
    report.battery_ref_life_hours = config.at("battery_reference_life_hours").get<double>();

    for (const json& row : doc.at("table")) report.table.push_back(rate_report_from_json(row));
    if (doc.contains("best") && !doc["best"].is_null()) {
      report.best = rate_report_from_json(doc["best"]);
    }

    for (const json& row : doc.at("curves")) {
      RunReport::CurvePoint point;
      point.factor = row.at("factor").get<int>();
      point.rate_hz = row.at("rate_hz").get<double>();
      point.l2_uncompensated = get_optional(row, "l2_uncompensated");
      point.l2_compensated = get_optional(row, "l2_compensated");
      point.mean_error = get_optional(row, "mean_error");
      point.aliasing = get_optional(row, "aliasing");
      report.curves.push_back(point);
    }
    if (report.curves.size() != report.table.size()) {
      throw BadConfig("run report: curves rows must match table entries 1:1");
    }

    const json& battery = doc.at("battery");
    report.reference_interval_s = battery.at("reference_interval_s").get<double>();
    for (const json& row : battery.at("projections")) {
      RunReport::BatteryProjection projection;
      projection.factor = row.at("factor").get<int>();
      projection.interval_s = row.at("interval_s").get<double>();
      projection.projected_life_hours = row.at("projected_life_hours").get<double>();
      report.battery.push_back(projection);
    }
    return report;
  } catch (const json::exception& e) {
    throw BadConfig(std::string("run report: malformed document: ") + e.what());
  } catch (const SpecInvalid& e) {
    throw BadConfig(std::string("run report: malformed document: ") + e.what());
  }
}

void write_run_report(const RunReport& report, const std::string& path) {
  write_text_file(path, to_json(report).dump(2) + "\n");
}

RunReport read_run_report(const std::string& path) {
  return run_report_from_json(parse_json_file(path, "run report"));
}

void write_curve_files(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = [&dir](const char* name) {
    return (std::filesystem::path(dir) / name).string();
  };

  std::ostringstream l2_unc, l2_comp, mean_err, aliasing;
  l2_unc << "factor,interval_s,rate_hz,l2_relative\n";
  l2_comp << "factor,interval_s,rate_hz,l2_relative\n";
  mean_err << "factor,interval_s,rate_hz,mean_uncompensated,mean_compensated\n";
  aliasing << "factor,interval_s,rate_hz,aliasing_uncompensated,aliasing_compensated\n";
  for (const RateReport& row : report.table) {
    const std::string prefix = std::to_string(row.factor) + ',' + format_sig9(row.interval_s) +
                               ',' + format_sig9(row.rate_hz) + ',';
    l2_unc << prefix << csv_cell(row.uncompensated.l2_relative) << '\n';
    l2_comp << prefix << csv_cell(row.compensated.l2_relative) << '\n';
    mean_err << prefix << csv_cell(row.uncompensated.mean_relative) << ','
             << csv_cell(row.compensated.mean_relative) << '\n';
    aliasing << prefix << csv_cell(row.uncompensated.aliasing) << ','
             << csv_cell(row.compensated.aliasing) << '\n';
  }
  write_text_file(path("l2_vs_rate_uncompensated.csv"), l2_unc.str());
  write_text_file(path("l2_vs_rate_compensated.csv"), l2_comp.str());
  write_text_file(path("mean_error_vs_rate.csv"), mean_err.str());
  write_text_file(path("aliasing_vs_rate.csv"), aliasing.str());
}

void write_summary(const RunReport& report, std::ostream& out) {
  out << "input: " << report.input_kind << ' ' << report.input_path;
  if (report.synthetic) out << " (seed " << report.synthetic->seed << ')';
  out << '\n';
  out << "signal: " << report.signal_samples << " samples at " << format_sig9(report.signal_interval_s)
      << " s\n";
  out << "e_target: " << format_sig9(report.cost_model.e_target) << "\n\n";

  out << std::left << std::setw(8) << "factor" << std::setw(12) << "interval_s" << std::setw(16)
      << "rate_hz" << std::setw(16) << "l2_comp" << std::setw(16) << "l2_unc" << std::setw(16)
      << "mean_comp" << std::setw(16) << "alias_comp" << std::setw(12) << "trans/h"
      << std::setw(16) << "J/h" << std::setw(16) << "cost" << "feasible\n";
  for (const RateReport& row : report.table) {
    out << std::left << std::setw(8) << row.factor << std::setw(12) << format_sig9(row.interval_s)
        << std::setw(16) << format_sig9(row.rate_hz) << std::setw(16)
        << csv_cell(row.compensated.l2_relative) << std::setw(16)
        << csv_cell(row.uncompensated.l2_relative) << std::setw(16)
        << csv_cell(row.compensated.mean_relative) << std::setw(16)
        << csv_cell(row.compensated.aliasing) << std::setw(12)
        << format_sig9(row.transmissions_per_hour) << std::setw(16)
        << format_sig9(row.energy_per_hour_j) << std::setw(16) << format_sig9(row.cost)
        << (row.feasible ? "yes" : "no") << '\n';
  }
  out << '\n';

  if (report.best) {
    out << "best: factor " << report.best->factor << ", interval "
        << format_sig9(report.best->interval_s) << " s, rate " << format_sig9(report.best->rate_hz)
        << " Hz, compensated l2 " << csv_cell(report.best->compensated.l2_relative) << ", cost "
        << format_sig9(report.best->cost) << '\n';
    for (const RunReport::BatteryProjection& projection : report.battery) {
      if (projection.factor != report.best->factor) continue;
      out << "battery: " << format_sig9(report.battery_ref_life_hours) << " h at "
          << format_sig9(report.reference_interval_s) << " s -> "
          << format_sig9(projection.projected_life_hours) << " h at "
          << format_sig9(projection.interval_s) << " s\n";
    }
  } else {
    out << "no feasible rate among the candidate factors at e_target "
        << format_sig9(report.cost_model.e_target) << '\n';
  }
}

}  // namespace ratekit
