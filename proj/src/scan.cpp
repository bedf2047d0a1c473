#include "magnls/scan.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "magnls/closed_form.hpp"
#include "parallel.hpp"

namespace magnls {

namespace {

std::vector<double> linspace(double lo, double hi, int n, bool log_spaced) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
  }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::exists_by_certificate: return "exists-by-certificate";
    case Verdict::no_witness: return "no-witness";
    case Verdict::solver_vanishing: return "solver-vanishing";
  }
  return "unknown";
}

void ScanConfig::validate() const {
  if (!(mu_min > 0.0) || !(mu_max >= mu_min) || mu_steps < 1) throw DomainError("invalid mass range");
  if (!(phi_min >= 0.0) || !(phi_max >= phi_min) || phi_steps < 1) throw DomainError("invalid potential range");
  if (!(half_loop > 0.0)) throw DomainError("L must be positive");
  if (p != 4.0 && !full_solver) throw DomainError("closed-form scan needs p = 4; use the full solver otherwise");
}

std::vector<double> ScanConfig::mu_values() const { return linspace(mu_min, mu_max, mu_steps, mu_log); }
std::vector<double> ScanConfig::phi_values() const { return linspace(phi_min, phi_max, phi_steps, false); }

const ScanCell& ScanGrid::at(std::size_t mu_index, std::size_t phi_index) const {
  return cells.at(mu_index * static_cast<std::size_t>(config.phi_steps) + phi_index);
}

Verdict certificate_verdict(double mu, double phi, double half_loop) {
  const auto t = existence_threshold(mu, half_loop);
  return phi < t.direct ? Verdict::exists_by_certificate : Verdict::no_witness;
}

ScanGrid run_scan(const ScanConfig& config) {
  config.validate();
  ScanGrid grid{config, {}};
  const auto g = generators::tadpole(config.half_loop);
  const auto loop = cycle_basis(g).cycles.at(0);
  const auto mus = config.mu_values();
  const auto phis = config.phi_values();
  std::vector<std::vector<ScanCell>> rows(mus.size());
  // Rows are independent; within a row the cells run in order of phi.
  detail::parallel_for(mus.size(), [&](std::size_t i) {
    const double mu = mus[i];
    ExistenceThreshold t;
    if (config.p == 4.0) t = existence_threshold(mu, config.half_loop);
    MeshPtr mesh;
    if (config.full_solver) {
      const double R = config.solver.truncation > 0.0 ? config.solver.truncation : default_truncation(mu, config.p);
      mesh = build_mesh(g, config.solver.h, R);
    }
    // Once a row stops certifying, larger phi cannot certify again.
    bool certified = true;
    for (double phi : phis) {
      ScanCell cell{mu, phi, Verdict::no_witness, t.direct, t.paper};
      if (!config.full_solver) {
        cell.verdict = phi < t.direct ? Verdict::exists_by_certificate : Verdict::no_witness;
      } else if (certified) {
        const auto cert = existence_certificate(mesh, cycle_potential(g, loop, phi), mu, config.p, config.solver);
        if (cert.exists) cell.verdict = Verdict::exists_by_certificate;
        else cell.verdict = cert.status == SolverStatus::vanishing_suspected ? Verdict::solver_vanishing : Verdict::no_witness;
      }
      certified = certified && cell.verdict == Verdict::exists_by_certificate;
      rows[i].push_back(cell);
    }
  });
  for (auto& row : rows) grid.cells.insert(grid.cells.end(), row.begin(), row.end());
  return grid;
}

void write_scan_csv(std::ostream& out, const ScanGrid& grid) {
  out << "mu,phi,verdict,threshold_direct,threshold_paper\n" << std::setprecision(12);
  for (const auto& c : grid.cells)
    out << c.mu << ',' << c.phi << ',' << to_string(c.verdict) << ',' << c.threshold_direct << ','
        << c.threshold_paper << '\n';
}

}  // namespace magnls
