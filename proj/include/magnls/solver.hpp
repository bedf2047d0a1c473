#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "magnls/functional.hpp"
#include "magnls/magnetics.hpp"
#include "magnls/mesh.hpp"

namespace magnls {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverStatus { converged, vanishing_suspected, max_iter, stalled };

std::string to_string(SolverStatus s);

struct SolverConfig {
  double h = 1e-2;
  double truncation = 0.0;  // half-line cut; <= 0 selects default_truncation(mu, p)
  double step = 1.0;        // initial step in the preconditioned metric
  double backtrack = 0.5;
  double max_step = 1.5;    // steps near 2 stop damping the stiff modes
  double tol_energy = 1e-15;  // relative energy change counted as a stall
  double tol_residual = 1e-6;  // EL residual relative to ||v||_inf * max(|omega|, ||v||_inf^{p-2})
  int max_iter = 20000;
  int escape_iter = 2000;  // budget for seeds peaking on a half-line; they mostly drift by translation
  int seeds = 4;
  double drift = 0.25;       // sup location beyond drift * R on a half-line flags vanishing
  double core_floor = 1e-2;  // core sup below core_floor * global sup flags vanishing
  int trace_every = 10;

  void validate() const;
};

/// Snapshot used by the vanishing detector.
struct TraceSample {
  int iteration = 0;
  double energy = 0.0;
  double sup = 0.0;
  bool sup_on_half_line = false;
  double sup_arclength = 0.0;  // along the half-line holding the maximum
  double core_sup = 0.0;
};

struct GroundStateResult {
  RealField profile;
  EnergyBreakdown energy;
  double omega = 0.0;
  ELResidual residual;
  double relative_residual = 0.0;
  std::vector<double> loop_mass;  // per basis cycle
  SolverStatus status = SolverStatus::max_iter;
  int iterations = 0;
  std::size_t seed = 0;
  std::vector<double> seed_energies;
  std::vector<double> energy_history;
  std::vector<TraceSample> trace;
};

/// Seeds: soliton centred at the first vertex, soliton centred at the middle
/// of the longest finite edge (or one width down a half-line), the tadpole
/// competitor when the graph is a tadpole (a soliton of twice the width
/// otherwise), and a soliton halfway down the first half-line.
std::vector<RealField> initial_guesses(const MeshPtr& mesh, double mu, double p, int count);

/// Projected descent from one initial guess.
GroundStateResult minimize_from(const MeshPtr& mesh, const EffectivePotential& W, double mu, double p,
                                const SolverConfig& cfg, const RealField& initial);

/// Multi-start minimization on a given mesh and effective potential; the
/// lowest final energy wins, ties going to the first seed.
GroundStateResult minimize(const MeshPtr& mesh, const EffectivePotential& W, double mu, double p,
                           const SolverConfig& cfg);

/// Meshes g, derives W from its magnetic potential and minimizes.
GroundStateResult minimize(const MetricGraph& g, double mu, double p, const SolverConfig& cfg);

bool detect_vanishing(const std::vector<TraceSample>& trace, const GraphMesh& mesh, double drift,
                      double core_floor);

struct ExistenceCertificate {
  bool exists = false;
  double witness_energy = 0.0;
  double threshold = 0.0;  // soliton energy on the line
  double margin = 0.0;     // quadrature error allowance
  SolverStatus status = SolverStatus::max_iter;
  RealField witness;
};

/// Quadrature error of the line soliton at the given spacing, used as the
/// certificate margin.
double quadrature_margin(double mu, double p, double h, double truncation);

ExistenceCertificate existence_certificate(const MeshPtr& mesh, const EffectivePotential& W, double mu,
                                           double p, const SolverConfig& cfg);
ExistenceCertificate existence_certificate(const MetricGraph& g, double mu, double p, const SolverConfig& cfg);

/// R(mu, G) = E_R(mu) - E_G(mu) for a graph without magnetic potential.
double numeric_R(const MetricGraph& g, double mu, double p, const SolverConfig& cfg);

}  // namespace magnls
