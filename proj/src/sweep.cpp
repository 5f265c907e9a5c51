#include "sth/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sth/actuation.hpp"
#include "sth/decomposition.hpp"

namespace sth {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& key, int line) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'", line);
  }
  return value;
}

long long parse_integer(const std::string& text, const std::string& key, int line) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'", line);
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& key, int line) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("'" + key + "' expects true/false, got '" + text + "'", line);
}

std::vector<double> parse_list(const std::string& text, const std::string& key, int line) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), key, line));
  return out;
}

ConservativeRule parse_rule(const std::string& text, int line) {
  if (text == "min_normalized") return ConservativeRule::MinNormalized;
  if (text == "weighted_sum") return ConservativeRule::WeightedSum;
  throw ConfigError("'conservative_rule' must be min_normalized or weighted_sum", line);
}

// Applies one key. Values arrive as text; JSON scalars are stringified first.
void apply(SweepConfig& cfg, const std::string& key, const std::string& value, int line) {
  using Setter = std::function<void(const std::string&)>;
  const auto num = [&](double& field) {
    return Setter([&field, &key, line](const std::string& v) { field = parse_double(v, key, line); });
  };
  const auto integer = [&](int& field) {
    return Setter([&field, &key, line](const std::string& v) {
      const long long n = parse_integer(v, key, line);
      if (n < 0 || n > 1'000'000) throw ConfigError("'" + key + "' out of range", line);
      field = static_cast<int>(n);
    });
  };

  const std::map<std::string, Setter> setters = {
      {"mass", num(cfg.platform.mass)},
      {"arm_length", num(cfg.platform.arm_length)},
      {"thrust_coeff", num(cfg.platform.thrust_coeff)},
      {"drag_coeff", num(cfg.platform.drag_coeff)},
      {"input_max", num(cfg.platform.input_max)},
      {"max_rotor_speed",
       [&](const std::string& v) {
         const double w = parse_double(v, key, line);
         cfg.platform.input_max = w * w;
       }},
      {"gravity", num(cfg.platform.gravity)},
      {"alpha_min", num(cfg.alpha_min)},
      {"alpha_max", num(cfg.alpha_max)},
      {"alpha_step", num(cfg.alpha_step)},
      {"oracle", [&](const std::string& v) { cfg.oracle_enabled = parse_bool(v, key, line); }},
      {"slice_resolution", integer(cfg.slice_resolution)},
      {"volume_resolution", integer(cfg.volume_resolution)},
      {"resolution",
       [&](const std::string& v) {
         integer(cfg.slice_resolution)(v);
         cfg.volume_resolution = cfg.slice_resolution;
       }},
      {"exact_tolerance", num(cfg.exact_tolerance)},
      {"sampled_tolerance", num(cfg.sampled_tolerance)},
      {"seed",
       [&](const std::string& v) {
         const long long s = parse_integer(v, key, line);
         if (s < 0) throw ConfigError("'seed' must be >= 0", line);
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"monte_carlo_samples",
       [&](const std::string& v) {
         const long long s = parse_integer(v, key, line);
         if (s <= 0) throw ConfigError("'monte_carlo_samples' must be > 0", line);
         cfg.monte_carlo_samples = static_cast<std::size_t>(s);
       }},
      {"candidates", [&](const std::string& v) { cfg.candidates = parse_list(v, key, line); }},
      {"conservative_rule", [&](const std::string& v) { cfg.conservative_rule = parse_rule(v, line); }},
      {"weights",
       [&](const std::string& v) {
         const auto w = parse_list(v, key, line);
         if (w.size() != cfg.weights.size()) {
           throw ConfigError("'weights' expects 5 values (V_FB, A_FBh, r_i, r_o, V_FBh)", line);
         }
         std::copy(w.begin(), w.end(), cfg.weights.begin());
       }},
      {"out", [&](const std::string& v) { cfg.out_path = v; }},
      {"format", [&](const std::string& v) { cfg.format = v; }},
  };

  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown key '" + key + "'", line);
  it->second(value);
}

std::string json_scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!item.is_number()) throw ConfigError("'" + key + "' expects a list of numbers", 0);
      if (!out.empty()) out += ',';
      out += format_number(item.get<double>());
    }
    return out;
  }
  throw ConfigError("'" + key + "' has an unsupported JSON type", 0);
}

SweepConfig parse_json_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ConfigError(std::string("invalid JSON: ") + e.what(), line);
  }
  if (!doc.is_object()) throw ConfigError("JSON config must be an object", 1);
  SweepConfig cfg;
  for (const auto& [key, value] : doc.items()) apply(cfg, key, json_scalar_text(value, key), 0);
  return cfg;
}

std::string alpha_text(double rad) { return format_number(std::round(rad2deg(rad) * 1e9) / 1e9); }

}  // namespace

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::ZeroMomentVolume:
      return "V_FB";
    case Metric::HoverArea:
      return "A_FBh";
    case Metric::InnerRadius:
      return "r_i";
    case Metric::OuterRadius:
      return "r_o";
    case Metric::ExtraHoverVolume:
      return "V_FBh";
  }
  return "?";
}

double metric_value(const MetricsRecord& rec, Metric m) {
  switch (m) {
    case Metric::ZeroMomentVolume:
      return rec.zero_moment_volume;
    case Metric::HoverArea:
      return rec.hover_area;
    case Metric::InnerRadius:
      return rec.inner_radius;
    case Metric::OuterRadius:
      return rec.outer_radius;
    case Metric::ExtraHoverVolume:
      return rec.extra_hover_volume;
  }
  return 0.0;
}

void SweepConfig::validate() const {
  platform.validate();
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(alpha_min) || alpha_min < 0.0) throw ValidationError("alpha_min must be >= 0 deg");
  if (!finite(alpha_max) || alpha_max >= 90.0) {
    throw ValidationError("alpha_max must be < 90 deg (tilt domain is [0, 90))");
  }
  if (alpha_min > alpha_max) throw ValidationError("alpha_min must not exceed alpha_max");
  if (!finite(alpha_step) || alpha_step <= 0.0) throw ValidationError("alpha_step must be > 0");
  if (slice_resolution < 1) throw ValidationError("slice_resolution must be >= 1");
  if (volume_resolution < 1) throw ValidationError("volume_resolution must be >= 1");
  if (!(exact_tolerance > 0.0)) throw ValidationError("exact_tolerance must be > 0");
  if (!(sampled_tolerance > 0.0)) throw ValidationError("sampled_tolerance must be > 0");
  if (monte_carlo_samples == 0) throw ValidationError("monte_carlo_samples must be > 0");
  for (const double c : candidates) {
    if (!finite(c) || c < 0.0 || c >= 90.0) {
      throw ValidationError("candidates must lie in [0, 90) deg");
    }
  }
  double total = 0.0;
  for (const double w : weights) {
    if (!finite(w) || w < 0.0) throw ValidationError("weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("at least one weight must be positive");
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
}

SweepConfig parse_config(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json_config(text);

  SweepConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    apply(cfg, key, value, line);
  }
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  SweepConfig cfg = parse_config(buf.str());
  cfg.validate();
  return cfg;
}

std::vector<double> alpha_grid(const SweepConfig& config) {
  config.validate();
  const auto steps =
      static_cast<std::size_t>(std::floor((config.alpha_max - config.alpha_min) / config.alpha_step + 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double raw = config.alpha_min + static_cast<double>(i) * config.alpha_step;
    grid.push_back(std::min(std::round(raw * 1e9) / 1e9, config.alpha_max));
  }
  return grid;
}

std::vector<MetricsRecord> run_sweep(const SweepConfig& config) {
  std::vector<MetricsRecord> out;
  for (const double deg : alpha_grid(config)) {
    out.push_back(metrics_record(config.platform, TiltAngle::from_degrees(deg)));
  }
  return out;
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string records_to_csv(std::span<const MetricsRecord> records) {
  std::string out =
      "# units: alpha_deg [deg], V_FB [N^3], A_FBh [N^2], r_i [N], r_o [N], V_FBh [N^3]\n"
      "alpha_deg,case,V_FB,A_FBh,r_i,r_o,V_FBh,feasible\n";
  for (const auto& r : records) {
    out += alpha_text(r.alpha);
    out += ',';
    out += to_char(r.hover_case);
    for (const Metric m : kAllMetrics) {
      out += ',';
      out += format_number(metric_value(r, m));
    }
    out += r.feasible ? ",true\n" : ",false\n";
  }
  return out;
}

std::string records_to_json(std::span<const MetricsRecord> records) {
  // Numbers are written through format_number so JSON and CSV agree digit
  // for digit.
  std::string out = "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += i ? ",\n  {" : "\n  {";
    out += "\"alpha_deg\": " + alpha_text(r.alpha);
    out += std::string(", \"case\": \"") + to_char(r.hover_case) + "\"";
    for (const Metric m : kAllMetrics) {
      out += std::string(", \"") + metric_name(m) + "\": " + format_number(metric_value(r, m));
    }
    out += std::string(", \"feasible\": ") + (r.feasible ? "true" : "false") + "}";
  }
  out += records.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string reports_to_csv(std::span<const oracle::OracleReport> reports) {
  std::string out = "metric,alpha_deg,closed_form,oracle,rel_err,resolution\n";
  for (const auto& r : reports) {
    out += r.metric + ',' + format_number(r.alpha_deg) + ',';
    if (r.skipped) {
      out += ",,,";
    } else {
      out += format_number(r.closed_form) + ',' + format_number(r.oracle) + ',' +
             format_number(r.rel_err) + ',';
    }
    out += std::to_string(r.resolution) + '\n';
  }
  return out;
}

std::string reports_to_json(std::span<const oracle::OracleReport> reports) {
  std::string out = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out += i ? ",\n  {" : "\n  {";
    out += "\"metric\": \"" + r.metric + "\", \"alpha_deg\": " + format_number(r.alpha_deg);
    if (r.skipped) {
      out += ", \"closed_form\": null, \"oracle\": null, \"rel_err\": null";
    } else {
      out += ", \"closed_form\": " + format_number(r.closed_form) +
             ", \"oracle\": " + format_number(r.oracle) +
             ", \"rel_err\": " + format_number(r.rel_err);
    }
    out += ", \"resolution\": " + std::to_string(r.resolution) + "}";
  }
  out += reports.empty() ? "]\n" : "\n]\n";
  return out;
}

VerificationResult verify(const SweepConfig& config, std::span<const double> alphas_deg) {
  config.validate();
  const PlatformParams& p = config.platform;
  const auto basis_at = [&p](TiltAngle a) {
    return zero_moment_basis(build_actuation_matrices(p, a));
  };
  const auto feasible = [&p](TiltAngle a) { return classify_hover_case(p, a) != HoverCase::D; };
  using Opt = std::optional<double>;

  // The slice oracle is shared by three metrics; cache it per angle.
  std::map<double, oracle::SliceEstimate> slices;
  const auto slice_at = [&](TiltAngle a) -> const oracle::SliceEstimate& {
    auto it = slices.find(a.radians());
    if (it == slices.end()) {
      it = slices.emplace(a.radians(), oracle::oracle_slice(basis_at(a), p, config.slice_resolution))
               .first;
    }
    return it->second;
  };
  const auto closed_radii = [&p](TiltAngle a) {
    return radii_for_case(p, a, classify_hover_case(p, a));
  };

  VerificationResult result{{}, true};
  const auto run = [&](const std::string& name, const oracle::MetricFn& closed,
                       const oracle::MetricFn& sampled, double tol, int resolution) {
    result.comparisons.push_back(oracle::compare(name, closed, sampled, alphas_deg, tol, resolution));
    result.passed = result.passed && result.comparisons.back().passed;
  };

  run("V_FB", [&](TiltAngle a) -> Opt { return zero_moment_volume(p, a); },
      [&](TiltAngle a) -> Opt {
        return oracle::oracle_volume(oracle::sample_zero_moment_forces(basis_at(a), p.input_max, 2));
      },
      config.exact_tolerance, 2);

  run("A_FBh",
      [&](TiltAngle a) -> Opt {
        if (!feasible(a)) return std::nullopt;
        return hover_area_for_case(p, a, classify_hover_case(p, a));
      },
      [&](TiltAngle a) -> Opt { return slice_at(a).area; }, config.sampled_tolerance,
      config.slice_resolution);

  run("r_i",
      [&](TiltAngle a) -> Opt {
        if (!feasible(a)) return std::nullopt;
        return closed_radii(a).inner;
      },
      [&](TiltAngle a) -> Opt { return slice_at(a).inner_radius; }, config.sampled_tolerance,
      config.slice_resolution);

  run("r_o",
      [&](TiltAngle a) -> Opt {
        if (!feasible(a)) return std::nullopt;
        return closed_radii(a).outer;
      },
      [&](TiltAngle a) -> Opt { return slice_at(a).outer_radius; }, config.sampled_tolerance,
      config.slice_resolution);

  run("V_FBh",
      [&](TiltAngle a) -> Opt {
        if (!feasible(a)) return std::nullopt;
        return extra_hover_volume(p, a);
      },
      [&](TiltAngle a) -> Opt {
        return oracle::oracle_extra_hover_volume(basis_at(a), p, config.volume_resolution);
      },
      config.sampled_tolerance, config.volume_resolution);

  if (config.seed) {
    const auto samples = config.monte_carlo_samples;
    const auto seed = *config.seed;
    run("V_FBh_monte_carlo",
        [&](TiltAngle a) -> Opt {
          if (!feasible(a)) return std::nullopt;
          return extra_hover_volume(p, a);
        },
        [&](TiltAngle a) -> Opt {
          return oracle::monte_carlo_extra_hover_volume(basis_at(a), p, samples, seed);
        },
        config.sampled_tolerance, static_cast<int>(std::min<std::size_t>(samples, 2147483647)));
  }
  return result;
}

std::vector<oracle::OracleReport> flatten(const VerificationResult& result) {
  std::vector<oracle::OracleReport> out;
  for (const auto& c : result.comparisons) {
    out.insert(out.end(), c.reports.begin(), c.reports.end());
  }
  return out;
}

DesignReport design_report(const SweepConfig& config, std::span<const double> candidates_deg) {
  if (candidates_deg.empty()) throw std::invalid_argument("design report needs at least one candidate");
  config.platform.validate();

  DesignReport rep;
  rep.boundaries = case_boundaries(config.platform);
  for (const double deg : candidates_deg) {
    rep.rows.push_back(metrics_record(config.platform, TiltAngle::from_degrees(deg)));
  }

  std::array<double, 5> best{};
  for (std::size_t k = 0; k < kAllMetrics.size(); ++k) {
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      if (!rep.rows[i].feasible) continue;
      const double v = metric_value(rep.rows[i], kAllMetrics[k]);
      if (!rep.maximizers[k] || v > best[k]) {
        rep.maximizers[k] = i;
        best[k] = v;
      }
    }
  }

  double best_score = -1.0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (!rep.rows[i].feasible) continue;
    double score = config.conservative_rule == ConservativeRule::MinNormalized
                       ? std::numeric_limits<double>::infinity()
                       : 0.0;
    for (std::size_t k = 0; k < kAllMetrics.size(); ++k) {
      const double w = config.weights[k];
      if (w == 0.0) continue;
      const double norm = best[k] > 0.0 ? metric_value(rep.rows[i], kAllMetrics[k]) / best[k] : 0.0;
      if (config.conservative_rule == ConservativeRule::MinNormalized) {
        score = std::min(score, norm);
      } else {
        score += w * norm;
      }
    }
    if (score > best_score) {
      best_score = score;
      rep.conservative = i;
    }
  }
  return rep;
}

std::string format_design_report(const DesignReport& report) {
  std::ostringstream out;
  out << "Case boundaries [deg]:";
  const auto bound = [&](const char* name, const std::optional<double>& b) {
    out << "  " << name << " = ";
    if (b) {
      out << std::fixed;
      out.precision(4);
      out << rad2deg(*b);
      out.unsetf(std::ios::floatfield);
    } else {
      out << "none";
    }
  };
  bound("A|B", report.boundaries.a_to_b);
  bound("B|C", report.boundaries.b_to_c);
  bound("C|D", report.boundaries.c_to_d);
  out << "\n\n";

  char line[160];
  std::snprintf(line, sizeof line, "%10s %4s %12s %12s %10s %10s %12s\n", "alpha[deg]", "case",
                "V_FB[N^3]", "A_FBh[N^2]", "r_i[N]", "r_o[N]", "V_FBh[N^3]");
  out << line;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const auto mark = [&](std::size_t k) {
      return report.maximizers[k] && *report.maximizers[k] == i ? '*' : ' ';
    };
    std::snprintf(line, sizeof line, "%10.2f %4c %11.0f%c %11.0f%c %9.2f%c %9.2f%c %11.0f%c%s%s\n",
                  rad2deg(r.alpha), to_char(r.hover_case), r.zero_moment_volume, mark(0),
                  r.hover_area, mark(1), r.inner_radius, mark(2), r.outer_radius, mark(3),
                  r.extra_hover_volume, mark(4),
                  report.conservative && *report.conservative == i ? "  < conservative" : "",
                  r.feasible ? "" : "  (cannot hover)");
    out << line;
  }
  out << "\n'*' marks the per-metric maximum over feasible candidates.\n";
  return out.str();
}

std::string design_report_to_json(const DesignReport& report) {
  json doc;
  const auto opt_deg = [](const std::optional<double>& b) {
    return b ? json(rad2deg(*b)) : json(nullptr);
  };
  doc["boundaries_deg"] = {{"a_to_b", opt_deg(report.boundaries.a_to_b)},
                           {"b_to_c", opt_deg(report.boundaries.b_to_c)},
                           {"c_to_d", opt_deg(report.boundaries.c_to_d)}};
  doc["rows"] = json::parse(records_to_json(report.rows));
  json maxima = json::object();
  for (std::size_t k = 0; k < kAllMetrics.size(); ++k) {
    const auto& m = report.maximizers[k];
    maxima[metric_name(kAllMetrics[k])] =
        m ? json(std::round(rad2deg(report.rows[*m].alpha) * 1e9) / 1e9) : json(nullptr);
  }
  doc["argmax_deg"] = maxima;
  doc["conservative_deg"] =
      report.conservative
          ? json(std::round(rad2deg(report.rows[*report.conservative].alpha) * 1e9) / 1e9)
          : json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace sth
