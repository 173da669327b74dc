#include "pdd/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pdd {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("csv: malformed number '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::runtime_error("csv: malformed integer '" + s + "'");
  return v;
}

void write_metadata(std::ostream& os, const Metadata& metadata) {
  for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
}

// Reads '# key=value' lines, then the column-header line.
Metadata read_preamble(std::istream& is, std::string* header) {
  Metadata meta;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("csv: malformed metadata line");
      meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    *header = line;
    return meta;
  }
  throw std::runtime_error("csv: missing column header");
}

void expect_header(const std::string& got, const std::string& want) {
  if (got != want) throw std::runtime_error("csv: unexpected header '" + got + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- constants ---

namespace {
const std::string kConstantsHeader =
    "node_id,x,y,e_phi,se_e_phi,beta,se_beta,v_phi,se_v_phi,alpha,se_alpha,e_tau,se_e_tau,"
    "tau_slope,se_tau_slope,k_cost,cov_phi_psibar,se_cov_phi_psibar,v_psibar,se_v_psibar,"
    "rho_phi_psibar,psi_valid,valid";
}  // namespace

void write_constants_csv(std::ostream& os, const ConstantsFile& file) {
  Metadata meta = file.metadata;
  meta["delta"] = format_double(file.globals.delta);
  meta["kappa"] = format_double(file.globals.kappa);
  write_metadata(os, meta);
  os << kConstantsHeader << "\n";
  for (const auto& c : file.nodes) {
    os << c.node_id << ',' << format_double(c.x) << ',' << format_double(c.y) << ','
       << format_double(c.e_phi) << ',' << format_double(c.se_e_phi) << ','
       << format_double(c.beta) << ',' << format_double(c.se_beta) << ','
       << format_double(c.v_phi) << ',' << format_double(c.se_v_phi) << ','
       << format_double(c.alpha) << ',' << format_double(c.se_alpha) << ','
       << format_double(c.e_tau) << ',' << format_double(c.se_e_tau) << ','
       << format_double(c.tau_slope) << ',' << format_double(c.se_tau_slope) << ','
       << format_double(c.k_cost) << ',' << format_double(c.cov_phi_psibar) << ','
       << format_double(c.se_cov_phi_psibar) << ',' << format_double(c.v_psibar) << ','
       << format_double(c.se_v_psibar) << ',' << format_double(c.rho_phi_psibar) << ','
       << (c.psi_valid ? 1 : 0) << ',' << (c.valid ? 1 : 0) << "\n";
  }
}

ConstantsFile read_constants_csv(std::istream& is) {
  ConstantsFile file;
  std::string header;
  file.metadata = read_preamble(is, &header);
  expect_header(header, kConstantsHeader);
  if (auto it = file.metadata.find("delta"); it != file.metadata.end()) {
    file.globals.delta = to_double(it->second);
  }
  if (auto it = file.metadata.find("kappa"); it != file.metadata.end()) {
    file.globals.kappa = to_double(it->second);
  }
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 23) throw std::runtime_error("constants csv: bad column count");
    NodalConstants c;
    c.node_id = static_cast<int>(to_long(f[0]));
    c.x = to_double(f[1]);
    c.y = to_double(f[2]);
    c.e_phi = to_double(f[3]);
    c.se_e_phi = to_double(f[4]);
    c.beta = to_double(f[5]);
    c.se_beta = to_double(f[6]);
    c.v_phi = to_double(f[7]);
    c.se_v_phi = to_double(f[8]);
    c.alpha = to_double(f[9]);
    c.se_alpha = to_double(f[10]);
    c.e_tau = to_double(f[11]);
    c.se_e_tau = to_double(f[12]);
    c.tau_slope = to_double(f[13]);
    c.se_tau_slope = to_double(f[14]);
    c.k_cost = to_double(f[15]);
    c.cov_phi_psibar = to_double(f[16]);
    c.se_cov_phi_psibar = to_double(f[17]);
    c.v_psibar = to_double(f[18]);
    c.se_v_psibar = to_double(f[19]);
    c.rho_phi_psibar = to_double(f[20]);
    c.psi_valid = to_long(f[21]) != 0;
    c.valid = to_long(f[22]) != 0;
    file.nodes.push_back(c);
  }
  return file;
}

// --- schedule ---

namespace {
const std::string kScheduleHeader = "level,a,level_cost,pair_cost,mean_rho_abs,pair_speedup";
}  // namespace

void write_schedule_csv(std::ostream& os, const ScheduleFile& file) {
  Metadata meta = file.metadata;
  meta["plain_cost_a0"] = format_double(file.schedule.plain_cost_a0);
  meta["cumulative_cost"] = format_double(file.schedule.cumulative_cost);
  meta["cumulative_speedup"] = format_double(file.schedule.cumulative_speedup);
  meta["degenerate"] = file.schedule.degenerate ? "1" : "0";
  write_metadata(os, meta);
  os << kScheduleHeader << "\n";
  for (std::size_t i = 0; i < file.schedule.levels.size(); ++i) {
    const auto& l = file.schedule.levels[i];
    os << i << ',' << format_double(l.a) << ',' << format_double(l.level_cost) << ','
       << format_double(l.pair_cost) << ',' << format_double(l.mean_rho_abs) << ','
       << format_double(l.pair_speedup) << "\n";
  }
}

ScheduleFile read_schedule_csv(std::istream& is) {
  ScheduleFile file;
  std::string header;
  file.metadata = read_preamble(is, &header);
  expect_header(header, kScheduleHeader);
  auto meta_double = [&](const char* key) {
    const auto it = file.metadata.find(key);
    if (it == file.metadata.end()) throw std::runtime_error("schedule csv: missing metadata");
    return to_double(it->second);
  };
  file.schedule.plain_cost_a0 = meta_double("plain_cost_a0");
  file.schedule.cumulative_cost = meta_double("cumulative_cost");
  file.schedule.cumulative_speedup = meta_double("cumulative_speedup");
  file.schedule.degenerate = meta_double("degenerate") != 0.0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw std::runtime_error("schedule csv: bad column count");
    ScheduleLevel l;
    l.a = to_double(f[1]);
    l.level_cost = to_double(f[2]);
    l.pair_cost = to_double(f[3]);
    l.mean_rho_abs = to_double(f[4]);
    l.pair_speedup = to_double(f[5]);
    file.schedule.levels.push_back(l);
  }
  return file;
}

// --- solution ---

namespace {
const std::string kSolutionHeader = "node_id,x,y,value,ci_half_width,n_paths,h,work_steps";
}  // namespace

SolutionFile make_solution_file(const Partition& partition, const PddSolution& solution,
                                Metadata metadata) {
  SolutionFile file;
  file.metadata = std::move(metadata);
  file.metadata["a"] = format_double(solution.a);
  for (std::size_t i = 0; i < solution.estimates.size(); ++i) {
    const auto& e = solution.estimates[i];
    const auto& node = partition.nodes[i];
    file.rows.push_back(SolutionRow{node.id, node.position[0], node.position[1], e.value,
                                    e.ci_half_width, e.n_paths, e.h, e.work_steps});
  }
  return file;
}

void write_solution_csv(std::ostream& os, const SolutionFile& file) {
  write_metadata(os, file.metadata);
  os << kSolutionHeader << "\n";
  for (const auto& r : file.rows) {
    os << r.node_id << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
       << format_double(r.value) << ',' << format_double(r.ci_half_width) << ',' << r.n_paths
       << ',' << format_double(r.h) << ',' << r.work_steps << "\n";
  }
}

SolutionFile read_solution_csv(std::istream& is) {
  SolutionFile file;
  std::string header;
  file.metadata = read_preamble(is, &header);
  expect_header(header, kSolutionHeader);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw std::runtime_error("solution csv: bad column count");
    SolutionRow r;
    r.node_id = static_cast<int>(to_long(f[0]));
    r.x = to_double(f[1]);
    r.y = to_double(f[2]);
    r.value = to_double(f[3]);
    r.ci_half_width = to_double(f[4]);
    r.n_paths = to_long(f[5]);
    r.h = to_double(f[6]);
    r.work_steps = to_long(f[7]);
    file.rows.push_back(r);
  }
  return file;
}

// --- speedup sweep ---

namespace {
const std::string kSweepHeader = "a1,predicted_pair_cost,predicted_rho_abs,predicted_speedup";
}  // namespace

void write_sweep_csv(std::ostream& os, const SweepFile& file) {
  write_metadata(os, file.metadata);
  os << kSweepHeader << "\n";
  for (const auto& r : file.rows) {
    os << format_double(r.a1) << ',' << format_double(r.predicted_pair_cost) << ','
       << format_double(r.predicted_rho_abs) << ',' << format_double(r.predicted_speedup)
       << "\n";
  }
}

SweepFile read_sweep_csv(std::istream& is) {
  SweepFile file;
  std::string header;
  file.metadata = read_preamble(is, &header);
  expect_header(header, kSweepHeader);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw std::runtime_error("sweep csv: bad column count");
    file.rows.push_back(
        SweepRow{to_double(f[0]), to_double(f[1]), to_double(f[2]), to_double(f[3])});
  }
  return file;
}

// --- NSR table ---

void write_nsr_table_csv(std::ostream& os, const NsrTable& table) {
  write_metadata(os, table.metadata);
  os << "kprime_over_kpp";
  for (long s : table.node_counts) os << ",s=" << s;
  os << "\n";
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    os << format_double(table.ratios[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      os << ',' << format_double(table.values(i, j));
    }
    os << "\n";
  }
}

NsrTable read_nsr_table_csv(std::istream& is) {
  NsrTable table;
  std::string header;
  table.metadata = read_preamble(is, &header);
  const auto cols = split_csv(header);
  if (cols.size() < 2 || cols[0] != "kprime_over_kpp") {
    throw std::runtime_error("nsr csv: unexpected header");
  }
  for (std::size_t j = 1; j < cols.size(); ++j) {
    if (cols[j].rfind("s=", 0) != 0) throw std::runtime_error("nsr csv: bad column label");
    table.node_counts.push_back(to_long(cols[j].substr(2)));
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != cols.size()) throw std::runtime_error("nsr csv: bad column count");
    table.ratios.push_back(to_double(f[0]));
    std::vector<double> row;
    for (std::size_t j = 1; j < f.size(); ++j) row.push_back(to_double(f[j]));
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.node_counts.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

// --- ledger ---

std::string ledger_to_json(const CostLedger& ledger) {
  json j;
  j["kappa"] = ledger.kappa;
  j["fit_steps"] = ledger.fit_steps;
  j["levels"] = json::array();
  for (const auto& l : ledger.levels) {
    j["levels"].push_back({{"a", l.a},
                           {"cv_mode", l.cv_mode},
                           {"fell_back_to_plain", l.fell_back_to_plain},
                           {"mc_steps_plain", l.mc_steps_plain},
                           {"mc_steps_cv", l.mc_steps_cv},
                           {"pi", l.pi},
                           {"pi_tilde", l.pi_tilde},
                           {"mean_abs_rho", l.mean_abs_rho},
                           {"flagged_paths", l.flagged_paths},
                           {"weighted_cost", l.weighted_cost(ledger.kappa)}});
  }
  j["total_mc_steps"] = ledger.total_mc_steps();
  j["total_weighted_cost"] = ledger.total_weighted_cost();
  return j.dump(2);
}

CostLedger ledger_from_json(const std::string& text) {
  const json j = json::parse(text);
  CostLedger ledger;
  ledger.kappa = j.at("kappa").get<double>();
  ledger.fit_steps = j.at("fit_steps").get<long>();
  for (const auto& jl : j.at("levels")) {
    LevelLedger l;
    l.a = jl.at("a").get<double>();
    l.cv_mode = jl.at("cv_mode").get<bool>();
    l.fell_back_to_plain = jl.at("fell_back_to_plain").get<bool>();
    l.mc_steps_plain = jl.at("mc_steps_plain").get<long>();
    l.mc_steps_cv = jl.at("mc_steps_cv").get<long>();
    l.pi = jl.at("pi").get<double>();
    l.pi_tilde = jl.at("pi_tilde").get<double>();
    l.mean_abs_rho = jl.at("mean_abs_rho").get<double>();
    l.flagged_paths = jl.at("flagged_paths").get<long>();
    ledger.levels.push_back(l);
  }
  return ledger;
}

}  // namespace pdd
