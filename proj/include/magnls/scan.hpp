#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magnls/solver.hpp"

namespace magnls {

enum class Verdict { exists_by_certificate, no_witness, solver_vanishing };

std::string to_string(Verdict v);

struct ScanConfig {
  double mu_min = 0.05;
  double mu_max = 5.0;
  int mu_steps = 60;
  bool mu_log = false;
  double phi_min = 0.0;
  double phi_max = 0.5;
  int phi_steps = 51;
  double half_loop = 1.0;
  double p = 4.0;
  bool full_solver = false;
  SolverConfig solver;

  void validate() const;
  std::vector<double> mu_values() const;
  std::vector<double> phi_values() const;
};

struct ScanCell {
  double mu = 0.0;
  double phi = 0.0;
  Verdict verdict = Verdict::no_witness;
  double threshold_direct = 0.0;
  double threshold_paper = 0.0;
};

/// Tadpole existence scan over the (mu, phi) grid, row-major in mu.
struct ScanGrid {
  ScanConfig config;
  std::vector<ScanCell> cells;

  const ScanCell& at(std::size_t mu_index, std::size_t phi_index) const;
};

/// Closed-form verdict: the competitor certifies existence when its energy
/// is strictly below the line soliton's, i.e. phi < threshold_direct.
Verdict certificate_verdict(double mu, double phi, double half_loop);

ScanGrid run_scan(const ScanConfig& config);

void write_scan_csv(std::ostream& out, const ScanGrid& grid);

}  // namespace magnls
