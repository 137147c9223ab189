#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aaipp/ipp.hpp"

namespace aaipp::cli {

/// Exit codes of the benchmark CLI.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

/// Parses "full" or a nonnegative integer.
int parse_depth(const std::string& text);
std::string format_depth(int depth);

ipp::ResidualMode parse_residual_mode(const std::string& text);
ipp::ResidualNorm parse_residual_norm(const std::string& text);
std::string to_string(ipp::ResidualMode mode);
std::string to_string(ipp::ResidualNorm norm);

struct RunSpec {
  std::string subcommand = "cavity";  ///< cavity | mms | transient-mms | sweep
  int n = 16;
  bool barycentric = true;
  double re = 100.0;
  double eps = 1.0;
  int depth = 0;  ///< anderson::kFullDepth for "full"
  double beta = 1.0;
  double tol = 1e-8;
  int max_iters = 500;
  ipp::ResidualMode residual_mode = ipp::ResidualMode::Relative;
  ipp::ResidualNorm residual_norm = ipp::ResidualNorm::L2;
  std::filesystem::path out_dir;  ///< empty: no files written

  // mms / transient-mms
  std::string solution = "smooth";  ///< smooth | polynomial
  int levels = 3;
  double dt = 0.1;
  double t_end = 1.0;

  // sweep axes; cross product of the three lists
  std::vector<double> re_list;
  std::vector<int> depth_list;
  std::vector<double> beta_list;
  int jobs = 1;

  void validate() const;
  bool operator==(const RunSpec&) const = default;
};

struct RunSummary {
  RunSpec spec;
  Index dofs = 0;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double final_divergence = 0.0;
  double theta_min = 1.0;
  double theta_median = 1.0;
  double wall_time = 0.0;

  bool operator==(const RunSummary&) const = default;
};

std::string summary_to_json(const RunSummary& s);
RunSummary summary_from_json(const std::string& text);

/// One row per iteration: iter,residual,theta,effective_depth.
struct ResidualRow {
  int iter = 0;
  double residual = 0.0;
  double theta = 1.0;
  int effective_depth = 0;
};
void write_residual_csv(std::ostream& os, const std::vector<ResidualRow>& rows);
std::vector<ResidualRow> read_residual_csv(std::istream& is);

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

mesh::TriMesh cavity_mesh(int n, bool barycentric);

struct CavityRun {
  RunSummary summary;
  std::vector<ResidualRow> residuals;
  ipp::IppState state;
};

/// Driven cavity with lid velocity (1, 0), nu = 1/Re. Writes residuals.csv,
/// summary.json and (on convergence) fields.vtk under spec.out_dir.
CavityRun run_cavity(const RunSpec& spec);

struct MmsRow {
  int n = 0;
  double h = 0.0;
  Index dofs = 0;
  int iterations = 0;
  bool converged = false;
  double l2_error = 0.0;
  double h1_error = 0.0;
  double l2_rate = 0.0;  ///< against the previous row; 0 on the first
  double h1_rate = 0.0;
};

/// Steady manufactured solution on levels n, 2n, 4n, ...; writes mms.csv.
std::vector<MmsRow> run_mms(const RunSpec& spec);
void write_mms_csv(std::ostream& os, const std::vector<MmsRow>& rows);

struct TransientMmsRow {
  double dt = 0.0;
  int steps = 0;
  int total_iterations = 0;
  double l2_error = 0.0;  ///< at t_end
  double rate = 0.0;
};

/// BDF2 on the space-exact transient manufactured solution for dt, dt/2, ...;
/// writes transient_mms.csv.
std::vector<TransientMmsRow> run_transient_mms(const RunSpec& spec);
void write_transient_mms_csv(std::ostream& os, const std::vector<TransientMmsRow>& rows);

/// Cross product of re_list x depth_list x beta_list on a worker pool;
/// writes sweep.csv plus per-run subdirectories. Throws before solving if
/// any list is empty.
std::vector<RunSummary> run_sweep(const RunSpec& spec);
void write_sweep_csv(std::ostream& os, const std::vector<RunSummary>& rows);

}  // namespace aaipp::cli
