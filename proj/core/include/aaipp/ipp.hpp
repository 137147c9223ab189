#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aaipp/anderson.hpp"
#include "aaipp/assembly.hpp"

namespace aaipp::ipp {

using fem::CsrMatrix;

enum class ResidualMode { Absolute, Relative };
enum class ResidualNorm { L2, H1Semi };

struct ProblemConfig {
  double nu = 1.0;
  double eps = 1.0;                 ///< penalty parameter
  fem::VectorField body_force;      ///< empty means f = 0
  fem::DirichletData bc;
  double tol = 1e-8;
  int max_iters = 500;
  ResidualMode residual_mode = ResidualMode::Relative;
  ResidualNorm residual_norm = ResidualNorm::L2;
  bool convection = true;           ///< false freezes the convecting field at zero (Stokes)

  void validate() const;
};

/// Operators cached for the whole solve; only N(u_k) is rebuilt per iteration.
struct Operators {
  const fem::FeSpace* space = nullptr;
  CsrMatrix mass;
  CsrMatrix stiffness;
  CsrMatrix graddiv;
  CsrMatrix p1_divergence;
  std::vector<double> load;
  fem::PressureProjector projector;
};

Operators assemble_operators(const fem::FeSpace& s, const ProblemConfig& cfg);

/// Fixed-point state. `acc` is eps^{-1} sum_j D u_j tested against the
/// velocity space; `acc_p` the same sum tested against P1 hat functions,
/// used only for pressure recovery. The discrete pressure is
/// p_k = -eps^{-1} sum_{j<=k} div u_j.
struct IppState {
  std::vector<double> u;
  std::vector<double> acc;
  std::vector<double> acc_p;
  int k = 0;

  static IppState initial(std::vector<double> u0, const Operators& ops);
  std::vector<double> pack() const;
  static IppState unpack(std::span<const double> packed, std::size_t nvec, std::size_t np1, int k);
};

struct IterationRecord {
  int k = 0;
  double residual = 0.0;  ///< as used by the stopping test (relative in relative mode)
  double theta = 1.0;
  int effective_depth = 0;
};

using IterationObserver = std::function<void(const IterationRecord&, const IppState&)>;

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> theta_history;
  std::vector<int> depth_history;
  double final_divergence = 0.0;
  double wall_time = 0.0;  ///< seconds
};

/// The IPP solution operator G: one velocity-only penalty solve
///   (nu A + eps^{-1} D + N(u_k) + c M) u_{k+1} = F + r - acc_k
/// with Dirichlet elimination, followed by the accumulator update.
/// Holds the LU symbolic analysis across calls.
class PenaltyPicardMap {
 public:
  PenaltyPicardMap(const ProblemConfig& cfg, const Operators& ops);
  ~PenaltyPicardMap();
  PenaltyPicardMap(PenaltyPicardMap&&) noexcept;
  PenaltyPicardMap& operator=(PenaltyPicardMap&&) noexcept;

  IppState operator()(const IppState& st);

  /// Adds c M to the system matrix and r to the right side (time stepping).
  void set_time_terms(double mass_coefficient, std::vector<double> extra_rhs);
  void set_dirichlet(fem::DirichletData bc);
  void set_load(std::vector<double> load);

  const ProblemConfig& config() const { return cfg_; }
  const Operators& operators() const { return *ops_; }

 private:
  void rebuild_base();

  ProblemConfig cfg_;
  const Operators* ops_;
  CsrMatrix base_;
  double mass_coefficient_ = 0.0;
  std::vector<double> extra_rhs_;
  std::vector<double> load_;
  std::unique_ptr<linalg::SparseLu> lu_;
};

IppState apply_G(const ProblemConfig& cfg, const Operators& ops, const IppState& st);

/// Residual norm of a velocity difference, in the configured norm.
double velocity_residual(const ProblemConfig& cfg, const Operators& ops, std::span<const double> du);

std::pair<IppState, SolveReport> ipp_solve(const ProblemConfig& cfg, const Operators& ops,
                                           std::vector<double> u0, const IterationObserver& observer = {});

std::pair<IppState, SolveReport> aaipp_solve(const ProblemConfig& cfg, const Operators& ops,
                                             std::vector<double> u0, const anderson::AndersonConfig& aa_cfg,
                                             const IterationObserver& observer = {});

/// Drivers over an explicit map (used by the time stepper). With aa_cfg
/// empty the plain iteration is run.
std::pair<IppState, SolveReport> solve_fixed_point(PenaltyPicardMap& g, IppState init,
                                                   const std::optional<anderson::AndersonConfig>& aa_cfg,
                                                   const IterationObserver& observer = {});

fem::PressureField recover_pressure(const IppState& st, const Operators& ops);

// ---------------------------------------------------------------------------
// BDF2 time stepping

class TransientError : public std::runtime_error {
 public:
  TransientError(int step, const std::string& what) : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct TransientConfig {
  double dt = 0.0;
  double t_end = 0.0;
  /// Optional time-dependent data evaluated at the new time level; when
  /// empty the static ProblemConfig data and Operators::load are used.
  std::function<fem::DirichletData(double)> dirichlet;
  std::function<std::vector<double>(double)> load;
};

struct TransientResult {
  std::vector<double> u_final;
  std::vector<double> times;         ///< t^n for every completed step
  std::vector<int> iterations;       ///< nonlinear iterations per step
  std::vector<SolveReport> reports;
};

using StepObserver = std::function<void(int step, double t, const IppState& st)>;

/// Backward Euler on the first step, BDF2 afterwards; each step solves the
/// nonlinear system by IPP (or AAIPP when aa_cfg is given) starting from the
/// previous step's velocity with a fresh accumulator and empty AA history.
TransientResult bdf2_transient_solve(const ProblemConfig& cfg, const Operators& ops,
                                     std::vector<double> u_init, const TransientConfig& tc,
                                     const std::optional<anderson::AndersonConfig>& aa_cfg,
                                     const StepObserver& observer = {});

}  // namespace aaipp::ipp
