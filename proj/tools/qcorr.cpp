#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcorr/experiment.hpp"
#include "qcorr/statefile.hpp"

namespace {

using namespace qcorr;

struct Options {
  std::string initial = "W";
  std::string channel = "ad";
  std::string measures = "eof,qd,gqd";
  std::string out;
  std::string format = "csv";
  int points = 101;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  int workers = 0;
  bool gqd_full = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--points", o.points, "number of uniform damping points in [0,1]")
      ->check(CLI::Range(1, 100001))
      ->capture_default_str();
  cmd->add_option("--measures", o.measures, "comma list from eof,qd,gqd")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "optimizer seed")->capture_default_str();
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "decay rate; adds a time column t = -ln(1-p)/gamma")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--workers", o.workers, "worker threads (0 = hardware)");
  cmd->add_flag("--gqd-full", o.gqd_full,
                "include one-vs-two geometric terms (dim-4 measured sides are un-normalized)");
}

ExperimentConfig to_config(const Options& o) {
  ExperimentConfig c;
  c.initial = o.initial;
  if (o.channel == "ad")
    c.channel = ChannelKind::AmplitudeDamping;
  else if (o.channel == "pd")
    c.channel = ChannelKind::PhaseDamping;
  else
    throw ValidationError("unknown channel '" + o.channel + "' (use ad or pd)");
  c.grid = SweepGrid::uniform(o.points);
  c.grid.gamma = o.gamma;
  c.want_eof = c.want_qd = c.want_gqd = false;
  std::string token;
  for (std::size_t i = 0; i <= o.measures.size(); ++i) {
    if (i < o.measures.size() && o.measures[i] != ',') {
      token += o.measures[i];
      continue;
    }
    if (token == "eof")
      c.want_eof = true;
    else if (token == "qd")
      c.want_qd = true;
    else if (token == "gqd")
      c.want_gqd = true;
    else if (!token.empty())
      throw ValidationError("unknown measure '" + token + "' (use eof, qd, gqd)");
    token.clear();
  }
  if (!c.want_eof && !c.want_qd && !c.want_gqd)
    throw ValidationError("at least one measure must be requested");
  c.gqd_terms = o.gqd_full ? GqdTermSet::Full : GqdTermSet::TwoQubitOnly;
  c.seed = o.seed;
  c.workers = o.workers;
  if (c.workers == 0) {
    if (const char* env = std::getenv("QCORR_WORKERS")) c.workers = std::atoi(env);
  }
  return c;
}

int run_and_emit(const Options& o, const std::string& default_out) {
  ExperimentConfig config = to_config(o);
  std::string out = o.out.empty() ? default_out : o.out;
  if (out.empty()) throw ValidationError("--out is required");
  TrajectoryTable table = run_experiment(config);
  write_table_file(out, table, o.format == "json" ? TableFormat::Json : TableFormat::Csv);
  std::cout << out << ": " << table.rows.size() << " rows\n";
  return 0;
}

int g_checks = 0;

bool expect(bool ok, const std::string& what, int& failures) {
  ++g_checks;
  std::cout << (ok ? "ok" : "FAIL") << ": " << what << '\n';
  if (!ok) ++failures;
  return ok;
}

int run_check(std::uint64_t seed) {
  int failures = 0;

  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    expect(completeness_gap(amplitude_damping(p).operators) <= 1e-10 &&
               completeness_gap(phase_damping(p).operators) <= 1e-10,
           "Kraus completeness at p=" + std::to_string(p), failures);
  }

  const DensityMatrix bell = [] {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return PureState(v, {2, 2}, {"A", "B"}).to_density();
  }();
  expect(std::abs(quantum_discord(bell, "B", seed).value - 1.0) < 1e-6,
         "Bell-pair discord = 1", failures);
  expect(std::abs(gqd_closed_form(bell).value - 1.0) < 1e-8, "Bell-pair 2D = 1", failures);
  expect(std::abs(gqd_variational(bell, {"A"}, seed).value - gqd_closed_form(bell).value) < 1e-6,
         "variational matches closed-form geometric discord", failures);

  const DensityMatrix ghz = ghz_state().to_density();
  const DensityMatrix w = w_state().to_density();
  expect(std::abs(compute_mmqc(ghz, MeasureKind::Eof, seed).total - 6.0) < 2e-4,
         "GHZ entanglement total = 6", failures);
  expect(std::abs(compute_mmqc(ghz, MeasureKind::Discord, seed).total - 6.0) < 2e-4,
         "GHZ discord total = 6", failures);
  expect(std::abs(compute_mmqc(w, MeasureKind::Eof, seed).total - 8.8101) < 2e-4,
         "W entanglement total = 8.8101", failures);

  const auto dephased = sweep(ghz, ChannelKind::PhaseDamping, SweepGrid::uniform(11));
  bool rank_ok = true;
  for (const auto& [p, state] : dephased)
    rank_ok = rank_ok && eig_hermitian(state.data()).rank <= 2;
  expect(rank_ok, "dephased GHZ stays rank <= 2", failures);

  const DensityMatrix w1 = evolve(w, std::vector<KrausChannel>(3, amplitude_damping(1.0)));
  expect(std::abs(w1.data()(0, 0).real() - 1.0) < 1e-12, "fully damped W is the ground state",
         failures);

  if (failures)
    std::cout << failures << " of " << g_checks << " checks failed\n";
  else
    std::cout << "all " << g_checks << " checks passed\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-correlation trajectories of damped three-qubit states"};
  app.require_subcommand(1);

  Options run_o, fig1_o, fig2_o;
  CLI::App* run = app.add_subcommand("run", "custom initial state, channel, and grid");
  run->add_option("--initial", run_o.initial, "W, GHZ, or file:<path>")->capture_default_str();
  run->add_option("--channel", run_o.channel, "ad or pd")->capture_default_str();
  add_common(run, run_o);

  CLI::App* fig1 = app.add_subcommand("fig1", "W state under amplitude damping");
  add_common(fig1, fig1_o);
  CLI::App* fig2 = app.add_subcommand("fig2", "GHZ state under phase damping");
  add_common(fig2, fig2_o);

  std::uint64_t check_seed = 0;
  CLI::App* check = app.add_subcommand("check", "run the built-in invariant suite");
  check->add_option("--seed", check_seed, "optimizer seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_and_emit(run_o, "");
    if (fig1->parsed()) {
      fig1_o.initial = "W";
      fig1_o.channel = "ad";
      return run_and_emit(fig1_o, fig1_o.format == "json" ? "fig1.json" : "fig1.csv");
    }
    if (fig2->parsed()) {
      fig2_o.initial = "GHZ";
      fig2_o.channel = "pd";
      return run_and_emit(fig2_o, fig2_o.format == "json" ? "fig2.json" : "fig2.csv");
    }
    if (check->parsed()) return run_check(check_seed);
  } catch (const qcorr::RankError& e) {
    std::cerr << "rank error: " << e.what() << '\n';
    return 2;
  } catch (const qcorr::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const qcorr::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
