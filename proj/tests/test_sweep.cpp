#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "sth/sweep.hpp"
#include "test_support.hpp"

using namespace sth;

namespace {

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("alpha grid") {
  SweepConfig cfg;
  const auto full = alpha_grid(cfg);
  CHECK(full.size() == 900);
  CHECK(full.front() == 0.0);
  CHECK(full.back() == 89.9);
  CHECK(full[123] == 12.3);

  cfg.alpha_min = 1;
  cfg.alpha_max = 89;
  cfg.alpha_step = 8;
  const auto coarse = alpha_grid(cfg);
  REQUIRE(coarse.size() == 12);
  CHECK(coarse.back() == 89.0);

  cfg.alpha_min = cfg.alpha_max = 42;
  CHECK(alpha_grid(cfg) == std::vector<double>{42.0});
}

TEST_CASE("config validation") {
  SweepConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha_max = 90;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha_max"), ValidationError);
  cfg = {};
  cfg.alpha_step = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha_step"), ValidationError);
  cfg = {};
  cfg.alpha_min = 50;
  cfg.alpha_max = 40;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.alpha_min = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.platform.mass = -1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("mass"), ValidationError);
  cfg = {};
  cfg.weights = {0, 0, 0, 0, 0};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.candidates = {30, 95};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("config parsing") {
  SUBCASE("key-value") {
    const auto cfg = parse_config(
        "# platform\n"
        "mass = 4.0\n"
        "max_rotor_speed = 100   # Hz\n"
        "\n"
        "alpha_min = 10\n"
        "alpha_max = 60\n"
        "alpha_step = 0.5\n"
        "resolution = 250\n"
        "seed = 9\n"
        "oracle = true\n"
        "candidates = 40, 50\n"
        "conservative_rule = weighted_sum\n"
        "weights = 1, 0, 0, 0, 2\n"
        "format = json\n");
    CHECK(cfg.platform.mass == 4.0);
    CHECK(cfg.platform.input_max == 10000.0);
    CHECK(cfg.alpha_min == 10.0);
    CHECK(cfg.alpha_step == 0.5);
    CHECK(cfg.slice_resolution == 250);
    CHECK(cfg.volume_resolution == 250);
    REQUIRE(cfg.seed);
    CHECK(*cfg.seed == 9u);
    CHECK(cfg.oracle_enabled);
    CHECK(cfg.candidates == std::vector<double>{40, 50});
    CHECK(cfg.conservative_rule == ConservativeRule::WeightedSum);
    CHECK(cfg.weights[4] == 2.0);
    CHECK(cfg.format == "json");
  }

  SUBCASE("json") {
    const auto cfg = parse_config(
        R"({"mass": 3.0, "alpha_max": 80, "candidates": [42, 55], "oracle": false, "seed": 3})");
    CHECK(cfg.platform.mass == 3.0);
    CHECK(cfg.alpha_max == 80.0);
    CHECK(cfg.candidates == std::vector<double>{42, 55});
    CHECK_FALSE(cfg.oracle_enabled);
    CHECK(*cfg.seed == 3u);
  }

  SUBCASE("errors carry the line number") {
    try {
      parse_config("mass = 3\nalpha_max = abc\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
      parse_config("mass = 3\n\nbogus_key = 1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("mass 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("weights = 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed = -4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"mass\": \n"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"candidates\": [\"a\"]}"), ConfigError);
  }

  SUBCASE("load_config validates") {
    const auto dir = std::filesystem::temp_directory_path() / "sth_test_sweep";
    std::filesystem::create_directories(dir);
    const auto path = dir / "bad.cfg";
    std::ofstream(path) << "alpha_max = 90\n";
    CHECK_THROWS_AS(load_config(path), ValidationError);
    CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(12.3) == "12.3");
  for (const double v : {1.0 / 3.0, 41801.66979, 1e-300, 2.155267681}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("sweep output") {
  SweepConfig cfg;
  cfg.alpha_min = 0;
  cfg.alpha_max = 80;
  cfg.alpha_step = 10;
  const auto records = run_sweep(cfg);
  REQUIRE(records.size() == 9);
  CHECK(records[0].degenerate);
  CHECK_FALSE(records[8].feasible);

  const std::string csv = records_to_csv(records);
  CHECK(count_lines(csv) == 11);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# units:", 0) == 0);
  std::getline(in, line);
  CHECK(line == "alpha_deg,case,V_FB,A_FBh,r_i,r_o,V_FBh,feasible");
  std::getline(in, line);
  CHECK(line == "0,A,0,0,0,0,0,true");
  std::getline(in, line);
  CHECK(line.rfind("10,A,3305.59", 0) == 0);
  CHECK(csv.find("80,D,") != std::string::npos);
  CHECK(csv.substr(csv.size() - 7) == ",false\n");
  CHECK(csv == records_to_csv(run_sweep(cfg)));

  const auto doc = nlohmann::json::parse(records_to_json(records));
  REQUIRE(doc.size() == 9);
  CHECK(doc[1]["alpha_deg"] == 10);
  CHECK(doc[1]["case"] == "A");
  CHECK(sth::test::rel_err(doc[3]["V_FB"].get<double>(), 24100.65378) < 1e-8);
  CHECK(doc[8]["feasible"] == false);
}

TEST_CASE("verification") {
  SweepConfig cfg;
  cfg.slice_resolution = 200;
  cfg.volume_resolution = 100;
  const std::vector<double> grid = {5.0, 30.0, 54.5, 65.0, 80.0};
  const auto v = verify(cfg, grid);
  CHECK(v.passed);
  REQUIRE(v.comparisons.size() == 5);
  CHECK(v.comparisons[0].worst_rel_err < 1e-9);
  for (const auto& c : v.comparisons) {
    CAPTURE(c.reports.front().metric);
    CHECK(c.passed);
    CHECK(c.reports.size() == grid.size());
  }
  const auto flat = flatten(v);
  CHECK(flat.size() == 25);
  CHECK(flat[9].metric == "A_FBh");
  CHECK(flat[9].skipped);  // 80 deg cannot hover
  CHECK_FALSE(flat[4].skipped);  // V_FB exists everywhere

  const std::string csv = reports_to_csv(flat);
  CHECK(csv.rfind("metric,alpha_deg,closed_form,oracle,rel_err,resolution\n", 0) == 0);
  CHECK(csv.find("A_FBh,80,,,,200\n") != std::string::npos);
  const auto doc = nlohmann::json::parse(reports_to_json(flat));
  CHECK(doc[9]["oracle"].is_null());

  cfg.seed = 4;
  cfg.monte_carlo_samples = 200'000;
  const auto with_mc = verify(cfg, grid);
  REQUIRE(with_mc.comparisons.size() == 6);
  CHECK(with_mc.comparisons[5].reports.front().metric == "V_FBh_monte_carlo");

  cfg.sampled_tolerance = 1e-12;
  CHECK_FALSE(verify(cfg, grid).passed);
}

TEST_CASE("design report") {
  SweepConfig cfg;
  const auto rep = design_report(cfg, cfg.candidates);
  REQUIRE(rep.rows.size() == 5);
  // Candidates: 42, 49.5, 54.5, 55, 60.5
  CHECK(*rep.maximizers[0] == 2);
  CHECK(*rep.maximizers[1] == 3);
  CHECK(*rep.maximizers[2] == 1);
  CHECK(*rep.maximizers[3] == 4);
  CHECK(*rep.maximizers[4] == 0);
  REQUIRE(rep.conservative);
  CHECK(*rep.conservative == 1);

  const auto text = format_design_report(rep);
  CHECK(text.find("< conservative") != std::string::npos);
  CHECK(text.find("11.1203") != std::string::npos);
  const auto doc = nlohmann::json::parse(design_report_to_json(rep));
  CHECK(doc["argmax_deg"]["V_FBh"] == 42.0);
  CHECK(doc["conservative_deg"] == 49.5);

  SUBCASE("weighted sum favouring one metric picks its maximizer") {
    cfg.conservative_rule = ConservativeRule::WeightedSum;
    cfg.weights = {0, 0, 0, 1, 0};
    CHECK(*design_report(cfg, cfg.candidates).conservative == 4);
  }

  SUBCASE("infeasible candidates are never maxima") {
    const std::vector<double> cands = {80.0, 85.0};
    const auto none = design_report(cfg, cands);
    for (const auto& m : none.maximizers) CHECK_FALSE(m);
    CHECK_FALSE(none.conservative);
    CHECK(format_design_report(none).find("cannot hover") != std::string::npos);
  }

  CHECK_THROWS_AS(design_report(cfg, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(design_report(cfg, std::vector<double>{91.0}), ValidationError);
  CHECK(metric_name(Metric::InnerRadius) == std::string("r_i"));
}
