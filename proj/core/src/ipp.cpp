#include "aaipp/ipp.hpp"

#include <chrono>
#include <cmath>

namespace aaipp::ipp {

void ProblemConfig::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("penalty parameter must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (bc.dofs.size() != bc.values.size()) throw std::invalid_argument("Dirichlet data length mismatch");
}

Operators assemble_operators(const fem::FeSpace& s, const ProblemConfig& cfg) {
  cfg.validate();
  Operators ops{&s,
                fem::assemble_mass(s),
                fem::assemble_stiffness(s),
                fem::assemble_graddiv(s),
                fem::assemble_p1_divergence(s),
                cfg.body_force ? fem::assemble_load(s, cfg.body_force)
                               : std::vector<double>(static_cast<std::size_t>(s.num_vector()), 0.0),
                fem::PressureProjector(s)};
  return ops;
}

IppState IppState::initial(std::vector<double> u0, const Operators& ops) {
  IppState st;
  st.u = std::move(u0);
  st.acc.assign(static_cast<std::size_t>(ops.space->num_vector()), 0.0);
  st.acc_p.assign(static_cast<std::size_t>(ops.space->num_vertices()), 0.0);
  if (st.u.size() != st.acc.size()) throw linalg::DimensionError("initial velocity has the wrong length");
  return st;
}

std::vector<double> IppState::pack() const {
  std::vector<double> x;
  x.reserve(u.size() + acc.size() + acc_p.size());
  x.insert(x.end(), u.begin(), u.end());
  x.insert(x.end(), acc.begin(), acc.end());
  x.insert(x.end(), acc_p.begin(), acc_p.end());
  return x;
}

IppState IppState::unpack(std::span<const double> packed, std::size_t nvec, std::size_t np1, int k) {
  if (packed.size() != 2 * nvec + np1) throw linalg::DimensionError("packed state has the wrong length");
  IppState st;
  st.u.assign(packed.begin(), packed.begin() + nvec);
  st.acc.assign(packed.begin() + nvec, packed.begin() + 2 * nvec);
  st.acc_p.assign(packed.begin() + 2 * nvec, packed.end());
  st.k = k;
  return st;
}

PenaltyPicardMap::PenaltyPicardMap(const ProblemConfig& cfg, const Operators& ops)
    : cfg_(cfg), ops_(&ops), load_(ops.load) {
  cfg_.validate();
  rebuild_base();
}

PenaltyPicardMap::~PenaltyPicardMap() = default;
PenaltyPicardMap::PenaltyPicardMap(PenaltyPicardMap&&) noexcept = default;
PenaltyPicardMap& PenaltyPicardMap::operator=(PenaltyPicardMap&&) noexcept = default;

void PenaltyPicardMap::rebuild_base() {
  base_ = ops_->stiffness;
  base_.scale(cfg_.nu);
  base_.add_scaled(1.0 / cfg_.eps, ops_->graddiv);
  if (mass_coefficient_ != 0.0) base_.add_scaled(mass_coefficient_, ops_->mass);
}

void PenaltyPicardMap::set_time_terms(double mass_coefficient, std::vector<double> extra_rhs) {
  if (!extra_rhs.empty() && extra_rhs.size() != load_.size())
    throw linalg::DimensionError("time right-hand side has the wrong length");
  mass_coefficient_ = mass_coefficient;
  extra_rhs_ = std::move(extra_rhs);
  rebuild_base();
}

void PenaltyPicardMap::set_dirichlet(fem::DirichletData bc) { cfg_.bc = std::move(bc); }

void PenaltyPicardMap::set_load(std::vector<double> load) {
  if (load.size() != load_.size()) throw linalg::DimensionError("load vector has the wrong length");
  load_ = std::move(load);
}

IppState PenaltyPicardMap::operator()(const IppState& st) {
  const auto& s = *ops_->space;
  CsrMatrix k = base_;
  if (cfg_.convection) fem::add_convection(s, st.u, 1.0, k);

  std::vector<double> rhs(load_.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = load_[i] - st.acc[i];
  if (!extra_rhs_.empty())
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += extra_rhs_[i];
  fem::apply_dirichlet_in_place(k, rhs, cfg_.bc);

  if (lu_) {
    lu_->refactor(k);
  } else {
    lu_ = std::make_unique<linalg::SparseLu>(k);
  }

  IppState next;
  next.u = lu_->solve(rhs);
  next.k = st.k + 1;
  const double inv_eps = 1.0 / cfg_.eps;
  const auto du = ops_->graddiv * next.u;
  const auto dp = ops_->p1_divergence * next.u;
  next.acc = st.acc;
  next.acc_p = st.acc_p;
  for (std::size_t i = 0; i < du.size(); ++i) next.acc[i] += inv_eps * du[i];
  for (std::size_t i = 0; i < dp.size(); ++i) next.acc_p[i] += inv_eps * dp[i];
  return next;
}

IppState apply_G(const ProblemConfig& cfg, const Operators& ops, const IppState& st) {
  PenaltyPicardMap g(cfg, ops);
  return g(st);
}

double velocity_residual(const ProblemConfig& cfg, const Operators& ops, std::span<const double> du) {
  const auto& norm_op = cfg.residual_norm == ResidualNorm::L2 ? ops.mass : ops.stiffness;
  return fem::energy_norm(norm_op, du);
}

std::pair<IppState, SolveReport> solve_fixed_point(PenaltyPicardMap& g, IppState init,
                                                   const std::optional<anderson::AndersonConfig>& aa_cfg,
                                                   const IterationObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  const auto& cfg = g.config();
  const auto& ops = g.operators();
  const std::size_t nvec = init.u.size();
  const std::size_t np1 = init.acc_p.size();

  std::optional<anderson::AndersonAccelerator> aa;
  if (aa_cfg) aa.emplace(init.pack(), *aa_cfg, linalg::InnerProduct{&ops.mass, nvec});

  SolveReport report;
  IppState x = std::move(init);
  IppState result;
  double reference = 0.0;
  std::vector<double> du(nvec);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    IppState gx = g(x);
    for (std::size_t i = 0; i < nvec; ++i) du[i] = gx.u[i] - x.u[i];
    const double abs_res = velocity_residual(cfg, ops, du);
    if (it == 1) reference = abs_res;
    const double res = (cfg.residual_mode == ResidualMode::Relative && reference > 0.0) ? abs_res / reference : abs_res;
    const bool converged = abs_res == 0.0 || res < cfg.tol;

    IterationRecord rec{it, res, 1.0, 0};
    IppState next;
    if (aa) {
      const auto& xn = aa->step(gx.pack());
      rec.theta = aa->last_report().theta;
      rec.effective_depth = aa->last_report().effective_depth;
      next = IppState::unpack(xn, nvec, np1, it);
    } else {
      next = gx;
    }

    report.iterations = it;
    report.residual_history.push_back(res);
    report.theta_history.push_back(rec.theta);
    report.depth_history.push_back(rec.effective_depth);
    if (observer) observer(rec, gx);

    if (converged) {
      report.converged = true;
      result = std::move(gx);
      break;
    }
    result = std::move(gx);
    x = std::move(next);
  }

  report.final_divergence = fem::divergence_l2(*ops.space, result.u);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(result), std::move(report)};
}

std::pair<IppState, SolveReport> ipp_solve(const ProblemConfig& cfg, const Operators& ops,
                                           std::vector<double> u0, const IterationObserver& observer) {
  PenaltyPicardMap g(cfg, ops);
  return solve_fixed_point(g, IppState::initial(std::move(u0), ops), std::nullopt, observer);
}

std::pair<IppState, SolveReport> aaipp_solve(const ProblemConfig& cfg, const Operators& ops,
                                             std::vector<double> u0, const anderson::AndersonConfig& aa_cfg,
                                             const IterationObserver& observer) {
  PenaltyPicardMap g(cfg, ops);
  return solve_fixed_point(g, IppState::initial(std::move(u0), ops), aa_cfg, observer);
}

fem::PressureField recover_pressure(const IppState& st, const Operators& ops) {
  return ops.projector.project(st.acc_p);
}

}  // namespace aaipp::ipp
