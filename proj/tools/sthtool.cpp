// sthtool: tilt-angle sweeps, oracle verification and design reports for
// star-shaped tilted hexarotors.
//
// Exit codes: 0 success, 1 validation or I/O error, 2 oracle disagreement.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sth/actuation.hpp"
#include "sth/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;

struct Overrides {
  std::string config_path;
  std::optional<double> alpha_min, alpha_max, alpha_step;
  bool oracle = false;
  std::optional<int> resolution;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::vector<double> candidates;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Config file (key = value, or JSON)");
  cmd->add_option("--alpha-min", o.alpha_min, "Lowest tilt angle [deg]");
  cmd->add_option("--alpha-max", o.alpha_max, "Highest tilt angle [deg], < 90");
  cmd->add_option("--alpha-step", o.alpha_step, "Grid step [deg]");
  cmd->add_option("--resolution", o.resolution, "Oracle resolution (slice lattice and volume grid)");
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "Seed for the Monte Carlo cross-check");
}

sth::SweepConfig resolve(const Overrides& o) {
  sth::SweepConfig cfg = o.config_path.empty() ? sth::SweepConfig{} : sth::load_config(o.config_path);
  if (o.alpha_min) cfg.alpha_min = *o.alpha_min;
  if (o.alpha_max) cfg.alpha_max = *o.alpha_max;
  if (o.alpha_step) cfg.alpha_step = *o.alpha_step;
  if (o.oracle) cfg.oracle_enabled = true;
  if (o.resolution) cfg.slice_resolution = cfg.volume_resolution = *o.resolution;
  if (o.out) cfg.out_path = *o.out;
  if (o.format) cfg.format = *o.format;
  if (o.seed) cfg.seed = *o.seed;
  if (!o.candidates.empty()) cfg.candidates = o.candidates;
  cfg.validate();
  return cfg;
}

void emit(const sth::SweepConfig& cfg, const std::string& payload) {
  if (cfg.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << payload) || !out.flush()) {
    throw std::runtime_error("cannot write output file '" + cfg.out_path + "'");
  }
}

// Run metadata goes next to the data file so the data stays byte-identical
// across runs.
void write_metadata(const sth::SweepConfig& cfg, const std::string& verb) {
  if (cfg.out_path.empty()) return;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  const auto& p = cfg.platform;
  nlohmann::json meta = {
      {"command", verb},
      {"generated_utc", stamp},
      {"platform",
       {{"mass", p.mass},
        {"arm_length", p.arm_length},
        {"thrust_coeff", p.thrust_coeff},
        {"drag_coeff", p.drag_coeff},
        {"input_max", p.input_max},
        {"gravity", p.gravity}}},
      {"alpha_deg", {{"min", cfg.alpha_min}, {"max", cfg.alpha_max}, {"step", cfg.alpha_step}}},
      {"oracle", cfg.oracle_enabled},
      {"slice_resolution", cfg.slice_resolution},
      {"volume_resolution", cfg.volume_resolution},
  };
  std::ofstream out(cfg.out_path + ".meta.json", std::ios::trunc);
  if (!out || !(out << meta.dump(2) << '\n')) {
    throw std::runtime_error("cannot write metadata next to '" + cfg.out_path + "'");
  }
}

void summarize(const sth::VerificationResult& v) {
  for (const auto& c : v.comparisons) {
    if (c.reports.empty()) continue;
    std::size_t skipped = 0;
    for (const auto& r : c.reports) skipped += r.skipped;
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.reports.front().metric
              << "  worst rel_err = " << c.worst_rel_err << "  (" << c.reports.size() - skipped
              << " angles, " << skipped << " skipped)\n";
  }
}

int cmd_sweep(const sth::SweepConfig& cfg) {
  const auto records = sth::run_sweep(cfg);
  std::string payload;
  bool ok = true;
  if (!cfg.oracle_enabled) {
    payload = cfg.format == "json" ? sth::records_to_json(records) : sth::records_to_csv(records);
  } else {
    const auto grid = sth::alpha_grid(cfg);
    const auto v = sth::verify(cfg, grid);
    summarize(v);
    ok = v.passed;
    const auto reports = sth::flatten(v);
    if (cfg.format == "json") {
      payload = "{\"records\": " + sth::records_to_json(records) +
                ", \"oracle\": " + sth::reports_to_json(reports) + "}\n";
    } else {
      payload = sth::records_to_csv(records) + "\n# oracle\n" + sth::reports_to_csv(reports);
    }
  }
  emit(cfg, payload);
  write_metadata(cfg, "sweep");
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const sth::SweepConfig& cfg) {
  const auto v = sth::verify(cfg, sth::alpha_grid(cfg));
  summarize(v);
  const auto reports = sth::flatten(v);
  emit(cfg, cfg.format == "json" ? sth::reports_to_json(reports) : sth::reports_to_csv(reports));
  write_metadata(cfg, "verify");
  return v.passed ? kExitOk : kExitVerifyFailed;
}

int cmd_report(const sth::SweepConfig& cfg) {
  const auto rep = sth::design_report(cfg, cfg.candidates);
  emit(cfg, cfg.format == "json" ? sth::design_report_to_json(rep) : sth::format_design_report(rep));
  return kExitOk;
}

int cmd_info(const sth::SweepConfig& cfg) {
  const auto& p = cfg.platform;
  const auto b = sth::case_boundaries(p);
  const auto deg = [](const std::optional<double>& x) {
    return x ? std::to_string(sth::rad2deg(*x)) : std::string("none");
  };
  std::ostringstream out;
  out << "mass          " << p.mass << " kg\n"
      << "arm_length    " << p.arm_length << " m\n"
      << "thrust_coeff  " << p.thrust_coeff << " N/Hz^2\n"
      << "drag_coeff    " << p.drag_coeff << " N m/Hz^2\n"
      << "input_max     " << p.input_max << " Hz^2\n"
      << "gravity       " << p.gravity << " m/s^2\n"
      << "weight        " << p.weight() << " N\n\n"
      << "case boundaries [deg]\n"
      << "  A|B  " << deg(b.a_to_b) << "\n"
      << "  B|C  " << deg(b.b_to_c) << "\n"
      << "  C|D  " << deg(b.c_to_d) << "\n\n"
      << "V_FB maximizer [deg]  " << sth::rad2deg(std::atan(std::numbers::sqrt2)) << "\n";
  emit(cfg, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maneuverability metrics of star-shaped tilted hexarotors"};
  app.require_subcommand(1);

  Overrides o;
  auto* sweep = app.add_subcommand("sweep", "Metrics over a tilt-angle grid");
  add_common(sweep, o);
  sweep->add_flag("--oracle", o.oracle, "Append brute-force oracle comparisons");

  auto* report = app.add_subcommand("report", "Design comparison of candidate tilt angles");
  add_common(report, o);
  report->add_option("--candidates", o.candidates, "Candidate angles [deg]")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Closed forms against brute-force oracles");
  add_common(verify, o);

  auto* info = app.add_subcommand("info", "Platform summary and case boundaries");
  add_common(info, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const sth::SweepConfig cfg = resolve(o);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (report->parsed()) return cmd_report(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_info(cfg);
  } catch (const sth::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const sth::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitInvalid;
}
