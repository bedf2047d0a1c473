// Command-line front end: graph flux report, ground-state solves, tadpole
// thresholds, competitor profiles, phase-diagram scans and self-checks.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

#include "magnls/checks.hpp"
#include "magnls/closed_form.hpp"
#include "magnls/functional.hpp"
#include "magnls/magnetics.hpp"
#include "magnls/scan.hpp"
#include "magnls/solver.hpp"

using namespace magnls;

namespace {

// Output goes to stdout unless --out names a file.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
    stream() << std::setprecision(12);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

MetricGraph resolve_graph(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_graph(arg);
  return generators::from_spec(arg);
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--h", cfg.h, "mesh spacing");
  cmd->add_option("--trunc", cfg.truncation, "half-line truncation length (default from the mass)");
  cmd->add_option("--tol-e", cfg.tol_energy, "relative energy stall tolerance");
  cmd->add_option("--tol-res", cfg.tol_residual, "relative Euler-Lagrange residual tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "iteration cap per start");
  cmd->add_option("--seeds", cfg.seeds, "number of initial guesses (1-4)")->check(CLI::Range(1, 4));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of the magnetic NLS on metric graphs"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write CSV output to FILE instead of stdout");

  // flux
  std::string flux_graph;
  auto* flux_cmd = app.add_subcommand("flux", "per-cycle flux and effective potential");
  flux_cmd->add_option("graph", flux_graph, "graph file or generator spec")->required();

  // solve
  std::string solve_graph, profile_path;
  double solve_mass = 1.0, solve_p = 4.0;
  SolverConfig solve_cfg;
  auto* solve_cmd = app.add_subcommand("solve", "mass-constrained ground state");
  solve_cmd->add_option("--graph", solve_graph, "graph file or generator spec")->required();
  solve_cmd->add_option("--mass", solve_mass, "prescribed mass")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--p", solve_p, "nonlinearity power in (2, 6)");
  solve_cmd->add_option("--profile", profile_path, "write the profile CSV to FILE");
  add_solver_flags(solve_cmd, solve_cfg);

  // threshold
  double thr_mu = 1.0, thr_L = 1.0;
  auto* thr_cmd = app.add_subcommand("threshold", "tadpole existence thresholds (p = 4)");
  thr_cmd->alias("tadpole-threshold");
  thr_cmd->add_option("--mu", thr_mu, "mass")->check(CLI::PositiveNumber);
  thr_cmd->add_option("--L", thr_L, "half loop length")->check(CLI::PositiveNumber);

  // competitor
  double comp_mu = 1.0, comp_L = 1.0, comp_h = 0.01, comp_tail = 10.0;
  auto* comp_cmd = app.add_subcommand("competitor", "sample the sech competitor on the tadpole");
  comp_cmd->add_option("--mu", comp_mu, "mass")->check(CLI::PositiveNumber);
  comp_cmd->add_option("--L", comp_L, "half loop length")->check(CLI::PositiveNumber);
  comp_cmd->add_option("--h", comp_h, "sampling spacing")->check(CLI::PositiveNumber);
  comp_cmd->add_option("--tail", comp_tail, "sampled half-line length")->check(CLI::PositiveNumber);

  // scan
  ScanConfig scan;
  auto* scan_cmd = app.add_subcommand("scan", "tadpole existence phase diagram in the (mu, phi) plane");
  scan_cmd->add_option("--L", scan.half_loop, "half loop length");
  scan_cmd->add_option("--mu-min", scan.mu_min);
  scan_cmd->add_option("--mu-max", scan.mu_max);
  scan_cmd->add_option("--mu-steps", scan.mu_steps);
  scan_cmd->add_flag("--log-mu", scan.mu_log, "logarithmic mass grid");
  scan_cmd->add_option("--phi-min", scan.phi_min);
  scan_cmd->add_option("--phi-max", scan.phi_max);
  scan_cmd->add_option("--phi-steps", scan.phi_steps);
  scan_cmd->add_option("--p", scan.p);
  scan_cmd->add_flag("--full-solver", scan.full_solver, "certify with the numerical solver");
  add_solver_flags(scan_cmd, scan.solver);

  // check
  std::string suite = "all";
  unsigned seed = 7;
  auto* check_cmd = app.add_subcommand("check", "run numerical self-checks");
  check_cmd->add_option("--suite", suite, "gn | gauge | diamagnetic | gradient | all");
  check_cmd->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error,usage," << e.what() << '\n';
    return 2;
  }

  try {
    Output out(out_path);
    auto& os = out.stream();

    if (*flux_cmd) {
      const auto g = resolve_graph(flux_graph);
      const auto basis = cycle_basis(g);
      os << "# graph=" << flux_graph << "\n# betti=" << basis.betti << '\n';
      os << "cycle_id,length,alpha,m,phi\n";
      for (const auto& row : flux_report(g, basis))
        os << row.cycle << ',' << row.length << ',' << row.alpha << ',' << row.winding << ',' << row.phi << '\n';
      return 0;
    }

    if (*solve_cmd) {
      const auto g = resolve_graph(solve_graph);
      if (solve_cfg.truncation <= 0.0) solve_cfg.truncation = default_truncation(solve_mass, solve_p);
      const auto r = minimize(g, solve_mass, solve_p, solve_cfg);
      os << "# graph=" << solve_graph << "\n# mass=" << solve_mass << "\n# p=" << solve_p << "\n# h=" << solve_cfg.h
         << "\n# trunc=" << solve_cfg.truncation << "\n# seeds=" << solve_cfg.seeds << '\n';
      os << "energy,omega,status,loop_mass,kinetic,magnetic,nonlinear,residual,vertex_defect,iterations\n";
      double loop_mass = 0.0;
      for (double m : r.loop_mass) loop_mass += m;
      os << r.energy.total << ',' << r.omega << ',' << to_string(r.status) << ',' << loop_mass << ','
         << r.energy.kinetic << ',' << r.energy.magnetic << ',' << r.energy.nonlinear << ',' << r.residual.discrete
         << ',' << r.residual.vertex_max << ',' << r.iterations << '\n';
      if (!profile_path.empty()) {
        std::ofstream profile(profile_path);
        if (!profile) throw std::runtime_error("cannot open profile file '" + profile_path + "'");
        write_profile_csv(profile, r.profile);
      }
      return 0;
    }

    if (*thr_cmd) {
      const auto t = existence_threshold(thr_mu, thr_L);
      os << "# mu=" << thr_mu << "\n# L=" << thr_L << '\n';
      os << "mu,L,m,T,soliton_energy,competitor_nls,threshold_direct,threshold_paper\n";
      os << thr_mu << ',' << thr_L << ',' << t.m << ',' << t.T << ',' << t.soliton_energy << ',' << t.competitor_nls
         << ',' << t.direct << ',' << t.paper << '\n';
      return 0;
    }

    if (*comp_cmd) {
      const auto c = competitor(comp_mu, comp_L);
      os << "# mu=" << comp_mu << "\n# L=" << comp_L << "\n# m=" << c.m << "\n# vertex_value=" << c.vertex_value()
         << "\n# peak_value=" << c.peak_value() << "\n# loop_mass=" << c.loop_mass()
         << "\n# tail_mass=" << c.tail_mass() << '\n';
      os << "edge_id,arclength,value\n";
      const auto loop_n = static_cast<long>(std::ceil(2.0 * comp_L / comp_h));
      for (long k = 0; k <= loop_n; ++k) {
        const double s = 2.0 * comp_L * static_cast<double>(k) / static_cast<double>(loop_n);
        os << "loop," << s << ',' << c.loop(s - comp_L) << '\n';
      }
      const auto tail_n = static_cast<long>(std::ceil(comp_tail / comp_h));
      for (long k = 0; k <= tail_n; ++k) {
        const double y = comp_tail * static_cast<double>(k) / static_cast<double>(tail_n);
        os << "tail," << y << ',' << c.tail(y) << '\n';
      }
      return 0;
    }

    if (*scan_cmd) {
      const auto grid = run_scan(scan);
      os << "# L=" << scan.half_loop << "\n# p=" << scan.p << "\n# mu=[" << scan.mu_min << ',' << scan.mu_max << "] x "
         << scan.mu_steps << (scan.mu_log ? " log" : "") << "\n# phi=[" << scan.phi_min << ',' << scan.phi_max
         << "] x " << scan.phi_steps << "\n# mode=" << (scan.full_solver ? "full-solver" : "closed-form") << '\n';
      write_scan_csv(os, grid);
      return 0;
    }

    if (*check_cmd) {
      const auto results = run_checks(suite, seed);
      int failed = 0;
      os << "suite,check,result,detail\n";
      for (const auto& r : results) {
        os << r.suite << ',' << r.name << ',' << (r.passed ? "pass" : "FAIL") << ',' << r.detail << '\n';
        if (!r.passed) ++failed;
      }
      os << "# " << results.size() - static_cast<std::size_t>(failed) << '/' << results.size() << " passed\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error," << e.what() << '\n';
    return 1;
  }
  return 0;
}
