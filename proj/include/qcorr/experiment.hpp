#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/mmqc.hpp"

namespace qcorr {

enum class TableFormat { Csv, Json };

struct ExperimentConfig {
  std::string initial = "W";  // "W", "GHZ", or "file:<path>"
  ChannelKind channel = ChannelKind::AmplitudeDamping;
  SweepGrid grid = SweepGrid::uniform(101);
  bool want_eof = true;
  bool want_qd = true;
  bool want_gqd = true;
  GqdTermSet gqd_terms = GqdTermSet::TwoQubitOnly;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 picks the hardware thread count
};

DensityMatrix build_initial(const std::string& name_or_path);

struct TrajectoryRow {
  double p = 0.0;
  std::optional<MmqcReport> eof, qd, gqd;
  bool converged() const;
};

struct TrajectoryTable {
  ExperimentConfig config;
  std::vector<TrajectoryRow> rows;
};

// Evolve the initial state across the grid and compute every requested
// measure per point. Grid points run on a worker pool; per-term seeds keep the
// result independent of scheduling. A rank failure aborts with the offending
// p in the message.
TrajectoryTable run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& out, const TrajectoryTable& table);
void write_json(std::ostream& out, const TrajectoryTable& table);
void write_table_file(const std::string& path, const TrajectoryTable& table, TableFormat format);

// Round-trip readers for the two emitted formats.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
  double number(int row, int col) const;
};
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

std::string channel_cli_name(ChannelKind kind);

}  // namespace qcorr
