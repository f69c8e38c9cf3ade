#include "qcorr/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "qcorr/statefile.hpp"

namespace qcorr {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string term_column(const std::string& prefix, const CorrelationValue& t) {
  return prefix + join_labels(t.unmeasured) + "(" + join_labels(t.measured) + ")";
}

std::string gqd_prefix(const CorrelationValue& t) {
  return t.normalized ? "gqd2d_" : "gqdraw_";
}

}  // namespace

DensityMatrix build_initial(const std::string& name_or_path) {
  if (name_or_path == "W") return w_state().to_density();
  if (name_or_path == "GHZ") return ghz_state().to_density();
  if (name_or_path.rfind("file:", 0) == 0) return read_state_file(name_or_path.substr(5));
  throw ValidationError("unknown initial state '" + name_or_path +
                        "' (use W, GHZ, or file:<path>)");
}

bool TrajectoryRow::converged() const {
  for (const auto& r : {&eof, &qd, &gqd})
    if (r->has_value() && !(*r)->all_converged()) return false;
  return true;
}

TrajectoryTable run_experiment(const ExperimentConfig& config) {
  if (!config.want_eof && !config.want_qd && !config.want_gqd)
    throw ValidationError("at least one measure must be requested");
  const DensityMatrix rho0 = build_initial(config.initial);
  const auto states = sweep(rho0, config.channel, config.grid);

  TrajectoryTable table;
  table.config = config;
  table.rows.resize(states.size());

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(states.size());
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= states.size()) return;
      TrajectoryRow& row = table.rows[i];
      row.p = states[i].first;
      const DensityMatrix& state = states[i].second;
      try {
        if (config.want_eof)
          row.eof = compute_mmqc(state, MeasureKind::Eof, config.seed, config.gqd_terms);
        if (config.want_qd)
          row.qd = compute_mmqc(state, MeasureKind::Discord, config.seed, config.gqd_terms);
        if (config.want_gqd)
          row.gqd = compute_mmqc(state, MeasureKind::Gqd, config.seed, config.gqd_terms);
      } catch (const RankError& e) {
        errors[i] = std::make_exception_ptr(
            RankError("at p=" + num(row.p) + ": " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  int workers = config.workers;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(states.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

void write_csv(std::ostream& out, const TrajectoryTable& table) {
  const bool with_time = table.config.grid.gamma > 0.0;
  std::vector<std::string> header = {"p"};
  if (with_time) header.push_back("t");
  header.insert(header.end(), {"Q_EOF", "Q_QD", "Q_GQD"});
  const TrajectoryRow* first = table.rows.empty() ? nullptr : &table.rows.front();
  if (first) {
    if (first->eof)
      for (const auto& t : first->eof->terms) header.push_back(term_column("eof_", t));
    if (first->qd)
      for (const auto& t : first->qd->terms) header.push_back(term_column("qd_", t));
    if (first->gqd)
      for (const auto& t : first->gqd->terms) header.push_back(term_column(gqd_prefix(t), t));
  }
  header.push_back("converged");
  out << join_labels(header, ",") << '\n';

  for (const auto& row : table.rows) {
    std::vector<std::string> cells = {num(row.p)};
    if (with_time) cells.push_back(num(table.config.grid.time_for(row.p)));
    for (const auto& r : {&row.eof, &row.qd, &row.gqd})
      cells.push_back(r->has_value() ? num((*r)->total) : "");
    for (const auto& r : {&row.eof, &row.qd, &row.gqd}) {
      if (!r->has_value()) continue;
      for (const auto& t : (*r)->terms) cells.push_back(num(t.value));
    }
    cells.push_back(row.converged() ? "1" : "0");
    out << join_labels(cells, ",") << '\n';
  }
}

void write_json(std::ostream& out, const TrajectoryTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  const bool with_time = table.config.grid.gamma > 0.0;
  for (const auto& row : table.rows) {
    nlohmann::json r = {{"p", row.p}};
    if (with_time) r["t"] = table.config.grid.time_for(row.p);
    if (row.eof) r["EOF"] = report_json(*row.eof);
    if (row.qd) r["QD"] = report_json(*row.qd);
    if (row.gqd) r["GQD"] = report_json(*row.gqd);
    r["converged"] = row.converged();
    rows.push_back(std::move(r));
  }
  nlohmann::json doc = {
      {"initial", table.config.initial},
      {"channel", channel_cli_name(table.config.channel)},
      {"seed", table.config.seed},
      {"gqd_terms", table.config.gqd_terms == GqdTermSet::Full ? "full" : "two-qubit"},
      {"rows", std::move(rows)}};
  if (with_time) doc["gamma"] = table.config.grid.gamma;
  out << doc.dump(2) << '\n';
}

void write_table_file(const std::string& path, const TrajectoryTable& table, TableFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == TableFormat::Csv)
    write_csv(out, table);
  else
    write_json(out, table);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

double CsvTable::number(int row, int col) const {
  if (row < 0 || row >= static_cast<int>(rows.size()) || col < 0 ||
      col >= static_cast<int>(columns.size()))
    throw ValidationError("cell index out of range");
  const std::string& cell = rows[row][col];
  if (cell.empty()) throw ValidationError("empty cell at row " + std::to_string(row));
  return std::strtod(cell.c_str(), nullptr);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  if (!std::getline(in, line)) throw ValidationError("empty table");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size())
      throw ValidationError("row has " + std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(t.columns.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("'" + path + "' is not valid JSON");
  return doc;
}

std::string channel_cli_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      return "ad";
    case ChannelKind::PhaseDamping:
      return "pd";
    case ChannelKind::Identity:
      return "id";
  }
  return "?";
}

}  // namespace qcorr
