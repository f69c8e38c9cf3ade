#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcorr/experiment.hpp"
#include "qcorr/statefile.hpp"
#include "test_support.hpp"

using namespace qcorr;
using testsup::random_density;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string csv_string(const TrajectoryTable& table) {
  std::stringstream out;
  write_csv(out, table);
  return out.str();
}

ExperimentConfig small_ghz_config() {
  ExperimentConfig cfg;
  cfg.initial = "GHZ";
  cfg.channel = ChannelKind::PhaseDamping;
  cfg.grid = SweepGrid::from_points({0.0, 0.5, 1.0});
  cfg.seed = 7;
  cfg.workers = 1;
  return cfg;
}

}  // namespace

TEST_CASE("initial state lookup") {
  const DensityMatrix w = build_initial("W");
  CHECK(w.labels() == std::vector<std::string>{"A", "B", "C"});
  CHECK(w.data()(1, 1).real() == doctest::Approx(1.0 / 3.0));
  const DensityMatrix ghz = build_initial("GHZ");
  CHECK(ghz.data()(0, 7).real() == doctest::Approx(0.5));

  std::mt19937_64 g(107);
  const DensityMatrix rho = random_density({2, 2, 2}, {"A", "B", "C"}, 2, g);
  const auto path = temp_file("qcorr_state_roundtrip.txt");
  write_state_file(path.string(), rho);
  const DensityMatrix back = build_initial("file:" + path.string());
  CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-14);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(build_initial("ghz2"), ValidationError);
  CHECK_THROWS_AS(build_initial("file:/nonexistent/state.txt"), IoError);
}

TEST_CASE("a sweep fills one row per grid point") {
  const TrajectoryTable table = run_experiment(small_ghz_config());
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].p == 0.0);
  CHECK(table.rows[2].p == 1.0);

  const TrajectoryRow& first = table.rows[0];
  REQUIRE(first.eof.has_value());
  REQUIRE(first.qd.has_value());
  REQUIRE(first.gqd.has_value());
  CHECK(first.eof->total == doctest::Approx(6.0).epsilon(2e-4));
  CHECK(first.qd->total == doctest::Approx(6.0).epsilon(2e-4));
  CHECK(first.gqd->terms.size() == 6);  // pairwise set by default
  CHECK(first.gqd->total <= 1e-6);
  CHECK(first.converged());

  const TrajectoryRow& last = table.rows[2];
  CHECK(last.eof->total <= 1e-8);
  CHECK(last.qd->total <= 1e-6);

  // every row's correlations decrease along this trajectory
  CHECK(table.rows[1].eof->total < first.eof->total);
  CHECK(table.rows[1].eof->total > last.eof->total);
}

TEST_CASE("sweeps run identically across seeds of parallelism") {
  ExperimentConfig cfg = small_ghz_config();
  cfg.want_gqd = false;
  const std::string serial = csv_string(run_experiment(cfg));
  cfg.workers = 4;
  const std::string threaded = csv_string(run_experiment(cfg));
  CHECK(serial == threaded);
  cfg.workers = 1;
  const std::string again = csv_string(run_experiment(cfg));
  CHECK(serial == again);
}

TEST_CASE("csv output carries totals, terms and convergence") {
  const TrajectoryTable table = run_experiment(small_ghz_config());
  std::stringstream buf(csv_string(table));
  const CsvTable csv = read_csv(buf);

  REQUIRE(csv.rows.size() == 3);
  CHECK(csv.columns.front() == "p");
  CHECK(csv.columns.back() == "converged");
  CHECK(csv.column_index("Q_EOF") == 1);
  CHECK(csv.column_index("Q_QD") == 2);
  CHECK(csv.column_index("Q_GQD") == 3);
  CHECK(csv.column_index("eof_A(B)") > 0);
  CHECK(csv.column_index("eof_BC(A)") > 0);
  CHECK(csv.column_index("qd_AB(C)") > 0);
  CHECK(csv.column_index("gqd2d_A(B)") > 0);
  CHECK(csv.column_index("gqdraw_A(BC)") == -1);  // pairwise set only
  CHECK(csv.column_index("t") == -1);             // no decay rate configured

  // totals equal the sum of their term columns
  for (int r = 0; r < 3; ++r) {
    for (const auto& [total, prefix] : {std::pair<std::string, std::string>{"Q_EOF", "eof_"},
                                        {"Q_QD", "qd_"},
                                        {"Q_GQD", "gqd2d_"}}) {
      double sum = 0.0;
      for (std::size_t c = 0; c < csv.columns.size(); ++c)
        if (csv.columns[c].rfind(prefix, 0) == 0) sum += csv.number(r, static_cast<int>(c));
      CHECK(csv.number(r, csv.column_index(total)) == doctest::Approx(sum).epsilon(1e-9));
    }
    CHECK(csv.number(r, csv.column_index("converged")) == 1.0);
  }
}

TEST_CASE("csv omits columns for absent measures and adds time when rated") {
  ExperimentConfig cfg = small_ghz_config();
  cfg.want_eof = false;
  cfg.want_gqd = false;
  cfg.grid.gamma = 2.0;
  std::stringstream buf(csv_string(run_experiment(cfg)));
  const CsvTable csv = read_csv(buf);

  CHECK(csv.column_index("t") == 1);
  CHECK(csv.column_index("Q_QD") > 0);
  CHECK(csv.column_index("Q_EOF") > 0);   // column stays, cells are empty
  CHECK(csv.column_index("eof_A(B)") == -1);
  CHECK_THROWS_AS(csv.number(0, csv.column_index("Q_EOF")), ValidationError);
  CHECK(csv.number(1, csv.column_index("t")) == doctest::Approx(-std::log(0.5) / 2.0));
}

TEST_CASE("json output mirrors the table") {
  ExperimentConfig cfg = small_ghz_config();
  cfg.want_gqd = false;
  cfg.grid.gamma = 1.0;
  const TrajectoryTable table = run_experiment(cfg);

  const auto path = temp_file("qcorr_table.json");
  write_table_file(path.string(), table, TableFormat::Json);
  const nlohmann::json doc = read_json_file(path.string());
  std::filesystem::remove(path);

  CHECK(doc["initial"] == "GHZ");
  CHECK(doc["channel"] == "pd");
  CHECK(doc["seed"] == 7);
  CHECK(doc["gqd_terms"] == "two-qubit");
  CHECK(doc["gamma"] == 1.0);
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["p"] == 0.0);
  CHECK(doc["rows"][0].contains("t"));
  CHECK(doc["rows"][0]["EOF"]["total"].get<double>() == doctest::Approx(6.0).epsilon(2e-4));
  CHECK(doc["rows"][0]["EOF"]["terms"].size() == 12);
  CHECK_FALSE(doc["rows"][0].contains("GQD"));
  CHECK(doc["rows"][0]["converged"] == true);
}

TEST_CASE("error paths surface as typed failures") {
  ExperimentConfig cfg = small_ghz_config();
  cfg.want_eof = cfg.want_qd = cfg.want_gqd = false;
  CHECK_THROWS_AS(run_experiment(cfg), ValidationError);

  // a brightly-populated state dephases into rank three: the spectral paths
  // must name the offending grid point
  ExperimentConfig bad = small_ghz_config();
  bad.initial = "W";
  bad.want_gqd = false;
  bad.grid = SweepGrid::from_points({0.0, 0.5});
  try {
    run_experiment(bad);
    FAIL("expected a rank failure");
  } catch (const RankError& e) {
    CHECK(std::string(e.what()).find("p=0.5") != std::string::npos);
  }

  const TrajectoryTable table = run_experiment(small_ghz_config());
  CHECK_THROWS_AS(write_table_file("/nonexistent/dir/out.csv", table, TableFormat::Csv),
                  IoError);
  CHECK_THROWS_AS(read_csv_file("/nonexistent/table.csv"), IoError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/table.json"), IoError);

  std::stringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), ValidationError);

  const auto bad_json = temp_file("qcorr_bad.json");
  std::ofstream(bad_json) << "{ not json";
  CHECK_THROWS_AS(read_json_file(bad_json.string()), ValidationError);
  std::filesystem::remove(bad_json);
}

TEST_CASE("file-backed states run through the pipeline") {
  const DensityMatrix deph = [] {
    Matrix m = Matrix::Zero(8, 8);
    m(0, 0) = m(7, 7) = 0.5;
    m(0, 7) = m(7, 0) = 0.25;
    return DensityMatrix(std::move(m), {2, 2, 2}, {"A", "B", "C"});
  }();
  const auto path = temp_file("qcorr_initial.txt");
  write_state_file(path.string(), deph);

  ExperimentConfig cfg;
  cfg.initial = "file:" + path.string();
  cfg.channel = ChannelKind::PhaseDamping;
  cfg.grid = SweepGrid::from_points({0.0, 0.6});
  cfg.want_gqd = false;
  cfg.seed = 7;
  cfg.workers = 1;
  const TrajectoryTable table = run_experiment(cfg);
  std::filesystem::remove(path);

  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].eof->method == MmqcMethod::Rank2Monogamy);
  CHECK(table.rows[0].eof->total > table.rows[1].eof->total);
  CHECK(table.rows[1].qd->total > 0.0);
}
