#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sth/geometry_oracle.hpp"
#include "sth/hover_metrics.hpp"
#include "sth/params.hpp"

namespace sth {

/// Config parse failure. `line()` is 0 when the error is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/// Metric order used by weights and report columns.
enum class Metric { ZeroMomentVolume, HoverArea, InnerRadius, OuterRadius, ExtraHoverVolume };
inline constexpr std::array<Metric, 5> kAllMetrics = {
    Metric::ZeroMomentVolume, Metric::HoverArea, Metric::InnerRadius, Metric::OuterRadius,
    Metric::ExtraHoverVolume};

const char* metric_name(Metric m);  // CSV column name, e.g. "V_FB"
double metric_value(const MetricsRecord& rec, Metric m);

/// How the "conservative" row of a design report is chosen.
enum class ConservativeRule {
  MinNormalized,  // maximize the smallest metric/max(metric) over weighted metrics
  WeightedSum,    // maximize sum of weight * metric/max(metric)
};

struct SweepConfig {
  PlatformParams platform;
  double alpha_min = 0.0;   // [deg]
  double alpha_max = 89.9;  // [deg]
  double alpha_step = 0.1;  // [deg]
  bool oracle_enabled = false;
  int slice_resolution = 400;
  int volume_resolution = 200;
  double exact_tolerance = 1e-9;  // closed forms vs exact oracles
  double sampled_tolerance = 0.02;  // closed forms vs sampled oracles
  std::optional<std::uint64_t> seed;  // enables the Monte Carlo cross-check
  std::size_t monte_carlo_samples = 1'000'000;
  std::vector<double> candidates = {42.0, 49.5, 54.5, 55.0, 60.5};  // [deg]
  ConservativeRule conservative_rule = ConservativeRule::MinNormalized;
  std::array<double, 5> weights = {1.0, 1.0, 1.0, 1.0, 1.0};
  std::string out_path;  // empty: stdout
  std::string format = "csv";

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Parses the key-value format (or JSON when the text starts with '{').
/// Unknown keys and malformed values raise ConfigError with the line number.
SweepConfig parse_config(const std::string& text);

/// Reads and parses a file, then validates.
SweepConfig load_config(const std::filesystem::path& path);

/// Ascending grid alpha_min, alpha_min + step, ... <= alpha_max [deg].
/// Values are snapped to 1e-9 deg so they print cleanly.
std::vector<double> alpha_grid(const SweepConfig& config);

std::vector<MetricsRecord> run_sweep(const SweepConfig& config);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

std::string records_to_csv(std::span<const MetricsRecord> records);
std::string records_to_json(std::span<const MetricsRecord> records);
std::string reports_to_csv(std::span<const oracle::OracleReport> reports);
std::string reports_to_json(std::span<const oracle::OracleReport> reports);

struct VerificationResult {
  std::vector<oracle::ComparisonResult> comparisons;
  bool passed;
};

/// Closed forms against the brute-force oracles on the given grid:
/// V_FB vs corner hull (exact tolerance), A_FBh, r_i, r_o vs the sampled
/// slice and V_FBh vs grid counting (sampled tolerance). With a seed, adds a
/// Monte Carlo V_FBh cross-check.
VerificationResult verify(const SweepConfig& config, std::span<const double> alphas_deg);

std::vector<oracle::OracleReport> flatten(const VerificationResult& result);

struct DesignReport {
  std::vector<MetricsRecord> rows;  // one per candidate, in the given order
  /// Row index maximizing each metric over feasible rows; empty when no row
  /// is feasible.
  std::array<std::optional<std::size_t>, 5> maximizers;
  std::optional<std::size_t> conservative;
  CaseBoundaries boundaries;
};

/// Throws std::invalid_argument on an empty candidate list and
/// ValidationError on candidates outside [0, 90).
DesignReport design_report(const SweepConfig& config, std::span<const double> candidates_deg);

/// Plain-text table with maxima marked by '*' and the conservative row by
/// '<'.
std::string format_design_report(const DesignReport& report);
std::string design_report_to_json(const DesignReport& report);

}  // namespace sth
