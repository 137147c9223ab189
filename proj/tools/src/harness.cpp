#include "aaipp/cli/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "aaipp/cli/manufactured.hpp"
#include "aaipp/vtk.hpp"

namespace aaipp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int parse_depth(const std::string& text) {
  if (text == "full") return anderson::kFullDepth;
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || v < 0)
    throw std::invalid_argument("depth must be a nonnegative integer or \"full\": " + text);
  return v;
}

std::string format_depth(int depth) { return depth == anderson::kFullDepth ? "full" : std::to_string(depth); }

ipp::ResidualMode parse_residual_mode(const std::string& text) {
  if (text == "relative") return ipp::ResidualMode::Relative;
  if (text == "absolute") return ipp::ResidualMode::Absolute;
  throw std::invalid_argument("residual mode must be relative or absolute: " + text);
}

ipp::ResidualNorm parse_residual_norm(const std::string& text) {
  if (text == "l2") return ipp::ResidualNorm::L2;
  if (text == "h1") return ipp::ResidualNorm::H1Semi;
  throw std::invalid_argument("residual norm must be l2 or h1: " + text);
}

std::string to_string(ipp::ResidualMode mode) { return mode == ipp::ResidualMode::Relative ? "relative" : "absolute"; }
std::string to_string(ipp::ResidualNorm norm) { return norm == ipp::ResidualNorm::L2 ? "l2" : "h1"; }

void RunSpec::validate() const {
  static const char* kinds[] = {"cavity", "mms", "transient-mms", "sweep"};
  if (std::find(std::begin(kinds), std::end(kinds), subcommand) == std::end(kinds))
    throw std::invalid_argument("unknown subcommand: " + subcommand);
  if (n < 1) throw std::invalid_argument("mesh level n must be positive");
  if (!(re > 0.0)) throw std::invalid_argument("Re must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (depth < 0 && depth != anderson::kFullDepth) throw std::invalid_argument("invalid depth");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (solution != "smooth" && solution != "polynomial") throw std::invalid_argument("unknown solution: " + solution);
  if (levels < 1) throw std::invalid_argument("levels must be positive");
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
  if (jobs < 1) throw std::invalid_argument("jobs must be positive");
  if (subcommand == "sweep") {
    if (re_list.empty() || depth_list.empty() || beta_list.empty())
      throw std::invalid_argument("sweep needs nonempty Re, depth and beta lists");
    for (double r : re_list)
      if (!(r > 0.0)) throw std::invalid_argument("Re must be positive");
    for (int m : depth_list)
      if (m < 0 && m != anderson::kFullDepth) throw std::invalid_argument("invalid depth");
    for (double b : beta_list)
      if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json spec_to_json(const RunSpec& s) {
  json depths = json::array();
  for (int m : s.depth_list) depths.push_back(format_depth(m));
  return json{{"subcommand", s.subcommand},
              {"n", s.n},
              {"barycentric", s.barycentric},
              {"re", s.re},
              {"eps", s.eps},
              {"depth", format_depth(s.depth)},
              {"beta", s.beta},
              {"tol", s.tol},
              {"max_iters", s.max_iters},
              {"residual_mode", to_string(s.residual_mode)},
              {"residual_norm", to_string(s.residual_norm)},
              {"out_dir", s.out_dir.string()},
              {"solution", s.solution},
              {"levels", s.levels},
              {"dt", s.dt},
              {"t_end", s.t_end},
              {"re_list", s.re_list},
              {"depth_list", depths},
              {"beta_list", s.beta_list},
              {"jobs", s.jobs}};
}

RunSpec spec_from_json(const json& j) {
  RunSpec s;
  s.subcommand = j.at("subcommand").get<std::string>();
  s.n = j.at("n").get<int>();
  s.barycentric = j.at("barycentric").get<bool>();
  s.re = j.at("re").get<double>();
  s.eps = j.at("eps").get<double>();
  s.depth = parse_depth(j.at("depth").get<std::string>());
  s.beta = j.at("beta").get<double>();
  s.tol = j.at("tol").get<double>();
  s.max_iters = j.at("max_iters").get<int>();
  s.residual_mode = parse_residual_mode(j.at("residual_mode").get<std::string>());
  s.residual_norm = parse_residual_norm(j.at("residual_norm").get<std::string>());
  s.out_dir = j.at("out_dir").get<std::string>();
  s.solution = j.at("solution").get<std::string>();
  s.levels = j.at("levels").get<int>();
  s.dt = j.at("dt").get<double>();
  s.t_end = j.at("t_end").get<double>();
  s.re_list = j.at("re_list").get<std::vector<double>>();
  for (const auto& d : j.at("depth_list")) s.depth_list.push_back(parse_depth(d.get<std::string>()));
  s.beta_list = j.at("beta_list").get<std::vector<double>>();
  s.jobs = j.at("jobs").get<int>();
  return s;
}

}  // namespace

std::string summary_to_json(const RunSummary& s) {
  const json j{{"spec", spec_to_json(s.spec)},
               {"dofs", s.dofs},
               {"converged", s.converged},
               {"iterations", s.iterations},
               {"final_residual", s.final_residual},
               {"final_divergence", s.final_divergence},
               {"theta_min", s.theta_min},
               {"theta_median", s.theta_median},
               {"wall_time", s.wall_time}};
  return j.dump(2);
}

RunSummary summary_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunSummary s;
  s.spec = spec_from_json(j.at("spec"));
  s.dofs = j.at("dofs").get<Index>();
  s.converged = j.at("converged").get<bool>();
  s.iterations = j.at("iterations").get<int>();
  s.final_residual = j.at("final_residual").get<double>();
  s.final_divergence = j.at("final_divergence").get<double>();
  s.theta_min = j.at("theta_min").get<double>();
  s.theta_median = j.at("theta_median").get<double>();
  s.wall_time = j.at("wall_time").get<double>();
  return s;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("cannot format value");
  return {buf, ptr};
}

namespace {

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::runtime_error("bad number in CSV: " + s);
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::runtime_error("bad integer in CSV: " + s);
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  return os;
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_output(path);
  os << text;
  if (!os) throw std::ios_base::failure("write failed: " + path.string());
}

}  // namespace

void write_residual_csv(std::ostream& os, const std::vector<ResidualRow>& rows) {
  os << "iter,residual,theta,effective_depth\n";
  for (const auto& r : rows)
    os << r.iter << ',' << format_real(r.residual) << ',' << format_real(r.theta) << ',' << r.effective_depth << '\n';
}

std::vector<ResidualRow> read_residual_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "iter,residual,theta,effective_depth")
    throw std::runtime_error("residual CSV header missing");
  std::vector<ResidualRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 4) throw std::runtime_error("residual CSV row has wrong arity: " + line);
    rows.push_back({parse_int(cells[0]), parse_real(cells[1]), parse_real(cells[2]), parse_int(cells[3])});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Runs

mesh::TriMesh cavity_mesh(int n, bool barycentric) {
  auto m = mesh::structured_unit_square(n);
  if (barycentric) m = mesh::barycentric_refine(m);
  return mesh::tag_cavity_boundary(std::move(m));
}

namespace {

ipp::ProblemConfig base_config(const RunSpec& spec) {
  ipp::ProblemConfig cfg;
  cfg.nu = 1.0 / spec.re;
  cfg.eps = spec.eps;
  cfg.tol = spec.tol;
  cfg.max_iters = spec.max_iters;
  cfg.residual_mode = spec.residual_mode;
  cfg.residual_norm = spec.residual_norm;
  return cfg;
}

anderson::AndersonConfig aa_config(const RunSpec& spec) {
  anderson::AndersonConfig aa;
  aa.depth = spec.depth;
  aa.damping = {spec.beta};
  return aa;
}

void fill_theta_stats(RunSummary& s, std::vector<double> thetas) {
  if (thetas.empty()) return;
  std::sort(thetas.begin(), thetas.end());
  s.theta_min = thetas.front();
  const std::size_t mid = thetas.size() / 2;
  s.theta_median = thetas.size() % 2 ? thetas[mid] : 0.5 * (thetas[mid - 1] + thetas[mid]);
}

double rate(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return 0.0;
  return std::log2(coarse / fine);
}

}  // namespace

CavityRun run_cavity(const RunSpec& spec) {
  spec.validate();
  const auto space = fem::build_space(cavity_mesh(spec.n, spec.barycentric));
  auto cfg = base_config(spec);
  cfg.bc = fem::cavity_dirichlet(space);
  const auto ops = ipp::assemble_operators(space, cfg);
  auto u0 = fem::boundary_lift(space, cfg.bc);
  auto [state, report] = ipp::aaipp_solve(cfg, ops, std::move(u0), aa_config(spec));

  CavityRun run;
  run.summary.spec = spec;
  run.summary.dofs = space.num_vector();
  run.summary.converged = report.converged;
  run.summary.iterations = report.iterations;
  run.summary.final_residual = report.residual_history.empty() ? 0.0 : report.residual_history.back();
  run.summary.final_divergence = report.final_divergence;
  run.summary.wall_time = report.wall_time;
  // theta is only informative where the optimization had history to use.
  std::vector<double> thetas;
  for (std::size_t i = 0; i < report.theta_history.size(); ++i) {
    run.residuals.push_back({static_cast<int>(i + 1), report.residual_history[i], report.theta_history[i],
                             report.depth_history[i]});
    if (report.depth_history[i] > 0) thetas.push_back(report.theta_history[i]);
  }
  fill_theta_stats(run.summary, std::move(thetas));

  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    {
      auto os = open_output(spec.out_dir / "residuals.csv");
      write_residual_csv(os, run.residuals);
    }
    write_text(spec.out_dir / "summary.json", summary_to_json(run.summary) + "\n");
    if (report.converged) {
      const auto p = ipp::recover_pressure(state, ops);
      auto os = open_output(spec.out_dir / "fields.vtk");
      fem::write_vtk_fields(space, state.u, &p, os);
    }
  }
  run.state = std::move(state);
  return run;
}

std::vector<MmsRow> run_mms(const RunSpec& spec) {
  spec.validate();
  const auto sol = spec.solution == "smooth" ? smooth_flow() : quadratic_flow();
  const double nu = 1.0 / spec.re;
  std::vector<MmsRow> rows;
  int n = spec.n;
  for (int level = 0; level < spec.levels; ++level, n *= 2) {
    auto m = mesh::structured_unit_square(n);
    if (spec.barycentric) m = mesh::barycentric_refine(m);
    const auto space = fem::build_space(m);
    auto cfg = base_config(spec);
    const fem::VectorField exact = [&](double x, double y) { return sol.velocity(x, y, 0.0); };
    cfg.bc = fem::boundary_dirichlet(space, exact);
    cfg.body_force = [&](double x, double y) { return sol.forcing(x, y, 0.0, nu); };
    const auto ops = ipp::assemble_operators(space, cfg);
    auto [state, report] = ipp::aaipp_solve(cfg, ops, fem::boundary_lift(space, cfg.bc), aa_config(spec));

    MmsRow row;
    row.n = n;
    row.h = 1.0 / n;
    row.dofs = space.num_vector();
    row.iterations = report.iterations;
    row.converged = report.converged;
    row.l2_error = fem::l2_error(space, state.u, exact);
    row.h1_error = fem::h1_error(space, state.u, [&](double x, double y) { return sol.gradient(x, y, 0.0); });
    if (!rows.empty()) {
      row.l2_rate = rate(rows.back().l2_error, row.l2_error);
      row.h1_rate = rate(rows.back().h1_error, row.h1_error);
    }
    rows.push_back(row);
  }
  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    auto os = open_output(spec.out_dir / "mms.csv");
    write_mms_csv(os, rows);
  }
  return rows;
}

void write_mms_csv(std::ostream& os, const std::vector<MmsRow>& rows) {
  os << "n,h,dofs,iterations,converged,l2_error,h1_error,l2_rate,h1_rate\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_real(r.h) << ',' << r.dofs << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
       << ',' << format_real(r.l2_error) << ',' << format_real(r.h1_error) << ',' << format_real(r.l2_rate) << ','
       << format_real(r.h1_rate) << '\n';
}

std::vector<TransientMmsRow> run_transient_mms(const RunSpec& spec) {
  spec.validate();
  const auto sol = transient_quadratic_flow();
  const double nu = 1.0 / spec.re;
  auto m = mesh::structured_unit_square(spec.n);
  if (spec.barycentric) m = mesh::barycentric_refine(m);
  const auto space = fem::build_space(m);
  auto cfg = base_config(spec);
  cfg.bc = fem::boundary_dirichlet(space, [&](double x, double y) { return sol.velocity(x, y, 0.0); });
  const auto ops = ipp::assemble_operators(space, cfg);
  const auto at = [&](double t) { return fem::VectorField([&sol, t](double x, double y) { return sol.velocity(x, y, t); }); };

  std::vector<TransientMmsRow> rows;
  double dt = spec.dt;
  for (int level = 0; level < spec.levels; ++level, dt *= 0.5) {
    ipp::TransientConfig tc;
    tc.dt = dt;
    tc.t_end = spec.t_end;
    tc.dirichlet = [&](double t) { return fem::boundary_dirichlet(space, at(t)); };
    tc.load = [&](double t) {
      return fem::assemble_load(space, [&sol, t, nu](double x, double y) { return sol.forcing(x, y, t, nu); });
    };
    std::optional<anderson::AndersonConfig> aa;
    if (spec.depth != 0) aa = aa_config(spec);
    const auto res = ipp::bdf2_transient_solve(cfg, ops, fem::interpolate(space, at(0.0)), tc, aa);

    TransientMmsRow row;
    row.dt = dt;
    row.steps = static_cast<int>(res.times.size());
    for (int it : res.iterations) row.total_iterations += it;
    row.l2_error = fem::l2_error(space, res.u_final, at(res.times.back()));
    if (!rows.empty()) row.rate = rate(rows.back().l2_error, row.l2_error);
    rows.push_back(row);
  }
  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    auto os = open_output(spec.out_dir / "transient_mms.csv");
    write_transient_mms_csv(os, rows);
  }
  return rows;
}

void write_transient_mms_csv(std::ostream& os, const std::vector<TransientMmsRow>& rows) {
  os << "dt,steps,total_iterations,l2_error,rate\n";
  for (const auto& r : rows)
    os << format_real(r.dt) << ',' << r.steps << ',' << r.total_iterations << ',' << format_real(r.l2_error) << ','
       << format_real(r.rate) << '\n';
}

std::vector<RunSummary> run_sweep(const RunSpec& spec) {
  spec.validate();
  std::vector<RunSpec> runs;
  for (double re : spec.re_list)
    for (int m : spec.depth_list)
      for (double beta : spec.beta_list) {
        RunSpec r = spec;
        r.subcommand = "cavity";
        r.re = re;
        r.depth = m;
        r.beta = beta;
        r.re_list.clear();
        r.depth_list.clear();
        r.beta_list.clear();
        r.jobs = 1;
        if (!spec.out_dir.empty()) {
          std::ostringstream name;
          name << "run" << runs.size() << "_re" << format_real(re) << "_m" << format_depth(m) << "_beta"
               << format_real(beta);
          r.out_dir = spec.out_dir / name.str();
        }
        runs.push_back(std::move(r));
      }

  std::vector<RunSummary> out(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        out[i] = run_cavity(runs[i]).summary;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), runs.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    auto os = open_output(spec.out_dir / "sweep.csv");
    write_sweep_csv(os, out);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<RunSummary>& rows) {
  os << "re,depth,beta,n,barycentric,eps,tol,dofs,converged,iterations,final_residual,final_divergence,"
        "theta_min,theta_median,wall_time\n";
  for (const auto& r : rows)
    os << format_real(r.spec.re) << ',' << format_depth(r.spec.depth) << ',' << format_real(r.spec.beta) << ','
       << r.spec.n << ',' << (r.spec.barycentric ? 1 : 0) << ',' << format_real(r.spec.eps) << ','
       << format_real(r.spec.tol) << ',' << r.dofs << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ','
       << format_real(r.final_residual) << ',' << format_real(r.final_divergence) << ',' << format_real(r.theta_min)
       << ',' << format_real(r.theta_median) << ',' << format_real(r.wall_time) << '\n';
}

}  // namespace aaipp::cli
