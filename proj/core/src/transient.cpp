#include <cmath>
#include <string>

#include "aaipp/ipp.hpp"

namespace aaipp::ipp {

TransientResult bdf2_transient_solve(const ProblemConfig& cfg, const Operators& ops,
                                     std::vector<double> u_init, const TransientConfig& tc,
                                     const std::optional<anderson::AndersonConfig>& aa_cfg,
                                     const StepObserver& observer) {
  if (!(tc.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(tc.t_end > 0.0)) throw std::invalid_argument("end time must be positive");
  const auto nsteps = static_cast<int>(std::llround(tc.t_end / tc.dt));
  if (nsteps < 1) throw std::invalid_argument("end time shorter than one time step");

  PenaltyPicardMap g(cfg, ops);
  TransientResult out;
  std::vector<double> u_prev;              // u^{n-1}
  std::vector<double> u_curr = std::move(u_init);  // u^n
  const std::size_t n = u_curr.size();

  for (int step = 1; step <= nsteps; ++step) {
    const double t = step * tc.dt;
    std::vector<double> hist(n);
    double c = 0.0;
    if (step == 1) {
      c = 1.0 / tc.dt;
      hist = u_curr;
    } else {
      c = 3.0 / (2.0 * tc.dt);
      for (std::size_t i = 0; i < n; ++i) hist[i] = (4.0 * u_curr[i] - u_prev[i]) / 3.0;
    }
    // c M hist equals (1/dt) M u^n for Euler and (1/(2 dt)) M (4u^n - u^{n-1}) for BDF2.
    auto rhs = ops.mass * hist;
    for (double& v : rhs) v *= c;
    g.set_time_terms(c, std::move(rhs));
    if (tc.load) g.set_load(tc.load(t));

    std::vector<double> guess = u_curr;
    if (tc.dirichlet) {
      auto bc = tc.dirichlet(t);
      for (std::size_t k = 0; k < bc.dofs.size(); ++k) guess[bc.dofs[k]] = bc.values[k];
      g.set_dirichlet(std::move(bc));
    }

    auto [st, report] = solve_fixed_point(g, IppState::initial(std::move(guess), ops), aa_cfg);
    if (!report.converged)
      throw TransientError(step, "nonlinear iteration did not converge at time step " + std::to_string(step));

    u_prev = std::move(u_curr);
    u_curr = st.u;
    out.times.push_back(t);
    out.iterations.push_back(report.iterations);
    out.reports.push_back(std::move(report));
    if (observer) observer(step, t, st);
  }
  out.u_final = std::move(u_curr);
  return out;
}

}  // namespace aaipp::ipp
