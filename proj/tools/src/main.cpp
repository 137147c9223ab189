#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aaipp/cli/harness.hpp"

using namespace aaipp::cli;

namespace {

void print_summary(const RunSummary& s) {
  std::cout << "dofs " << s.dofs << "  iterations " << s.iterations << "  converged " << (s.converged ? "yes" : "no")
            << "  residual " << format_real(s.final_residual) << "  ||div u|| " << format_real(s.final_divergence)
            << "  time " << s.wall_time << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson-accelerated iterated penalty Picard solver for 2D Navier-Stokes"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  RunSpec spec;
  std::string depth = "0", mode = "relative", norm = "l2";
  std::vector<std::string> depth_list;
  std::string out;

  app.add_option("--n", spec.n, "Cells per side of the structured mesh")->capture_default_str();
  app.add_flag("--barycentric,!--no-barycentric", spec.barycentric, "Barycentric (Alfeld) refinement")
      ->capture_default_str();
  app.add_option("--re", spec.re, "Reynolds number (nu = 1/Re)")->capture_default_str();
  app.add_option("--eps", spec.eps, "Penalty parameter")->capture_default_str();
  app.add_option("--m", depth, "Anderson depth: integer or \"full\"")->capture_default_str();
  app.add_option("--beta", spec.beta, "Anderson damping factor")->capture_default_str();
  app.add_option("--tol", spec.tol, "Stopping tolerance")->capture_default_str();
  app.add_option("--max-iters", spec.max_iters, "Iteration limit")->capture_default_str();
  app.add_option("--residual-mode", mode, "relative | absolute")->capture_default_str();
  app.add_option("--norm", norm, "Residual norm: l2 | h1")->capture_default_str();
  app.add_option("--out", out, "Output directory");
  app.add_option("--solution", spec.solution, "Manufactured solution: smooth | polynomial")->capture_default_str();
  app.add_option("--levels", spec.levels, "Number of refinement levels")->capture_default_str();
  app.add_option("--dt", spec.dt, "Coarsest time step")->capture_default_str();
  app.add_option("--t-end", spec.t_end, "Final time")->capture_default_str();
  app.add_option("--re-list", spec.re_list, "Sweep: Reynolds numbers")->delimiter(',');
  app.add_option("--m-list", depth_list, "Sweep: depths")->delimiter(',');
  app.add_option("--beta-list", spec.beta_list, "Sweep: damping factors")->delimiter(',');
  app.add_option("--jobs", spec.jobs, "Sweep: concurrent runs")->capture_default_str();

  for (const char* name : {"cavity", "mms", "transient-mms", "sweep"})
    app.add_subcommand(name)->fallthrough();
  app.get_subcommand("cavity")->description("Lid-driven cavity");
  app.get_subcommand("mms")->description("Steady manufactured-solution convergence study");
  app.get_subcommand("transient-mms")->description("BDF2 temporal convergence study");
  app.get_subcommand("sweep")->description("Cavity runs over Re x depth x beta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    spec.subcommand = app.get_subcommands().front()->get_name();
    spec.depth = parse_depth(depth);
    spec.residual_mode = parse_residual_mode(mode);
    spec.residual_norm = parse_residual_norm(norm);
    for (const auto& d : depth_list) spec.depth_list.push_back(parse_depth(d));
    spec.out_dir = out;
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (spec.subcommand == "cavity") {
      const auto run = run_cavity(spec);
      print_summary(run.summary);
      return run.summary.converged ? kExitConverged : kExitNotConverged;
    }
    if (spec.subcommand == "mms") {
      const auto rows = run_mms(spec);
      write_mms_csv(std::cout, rows);
      for (const auto& r : rows)
        if (!r.converged) return kExitNotConverged;
      return kExitConverged;
    }
    if (spec.subcommand == "transient-mms") {
      write_transient_mms_csv(std::cout, run_transient_mms(spec));
      return kExitConverged;
    }
    const auto rows = run_sweep(spec);
    write_sweep_csv(std::cout, rows);
    for (const auto& r : rows)
      if (!r.converged) return kExitNotConverged;
    return kExitConverged;
  } catch (const aaipp::ipp::TransientError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
