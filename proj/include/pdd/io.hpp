#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pdd/constants.hpp"
#include "pdd/geometry.hpp"
#include "pdd/orchestrator.hpp"
#include "pdd/scheduler.hpp"

namespace pdd {

using Metadata = std::map<std::string, std::string>;

/// All emitted files carry '# key=value' metadata lines, a column header and
/// '%.17g' numeric fields, so they round-trip losslessly through the readers
/// below.

struct ConstantsFile {
  Metadata metadata;
  GlobalConstants globals;
  std::vector<NodalConstants> nodes;
};

void write_constants_csv(std::ostream& os, const ConstantsFile& file);
ConstantsFile read_constants_csv(std::istream& is);

struct ScheduleFile {
  Metadata metadata;
  Schedule schedule;
};

void write_schedule_csv(std::ostream& os, const ScheduleFile& file);
ScheduleFile read_schedule_csv(std::istream& is);

struct SolutionRow {
  int node_id = 0;
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  double ci_half_width = 0.0;
  long n_paths = 0;
  double h = 0.0;
  long work_steps = 0;
};

struct SolutionFile {
  Metadata metadata;
  std::vector<SolutionRow> rows;
};

SolutionFile make_solution_file(const Partition& partition, const PddSolution& solution,
                                Metadata metadata);
void write_solution_csv(std::ostream& os, const SolutionFile& file);
SolutionFile read_solution_csv(std::istream& is);

struct SweepRow {
  double a1 = 0.0;
  double predicted_pair_cost = 0.0;
  double predicted_rho_abs = 0.0;
  double predicted_speedup = 0.0;
};

struct SweepFile {
  Metadata metadata;
  std::vector<SweepRow> rows;
};

void write_sweep_csv(std::ostream& os, const SweepFile& file);
SweepFile read_sweep_csv(std::istream& is);

struct NsrTable {
  Metadata metadata;
  std::vector<double> ratios;       // K'/K'' rows
  std::vector<long> node_counts;    // s columns
  MatX values;                      // ratios.size() x node_counts.size()
};

void write_nsr_table_csv(std::ostream& os, const NsrTable& table);
NsrTable read_nsr_table_csv(std::istream& is);

std::string ledger_to_json(const CostLedger& ledger);
CostLedger ledger_from_json(const std::string& text);

std::string format_double(double v);

}  // namespace pdd
