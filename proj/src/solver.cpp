#include "magnls/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "magnls/closed_form.hpp"
#include "parallel.hpp"

namespace magnls {

namespace {

using Index = Eigen::Index;

void pin_and_normalize(RealField& v, double mu) {
  for (auto dof = v.mesh->free_count(); dof < v.mesh->dof_count(); ++dof) v.values[static_cast<Index>(dof)] = 0.0;
  const double current = mass(v);
  if (!(current > 0.0)) throw SolverError("iterate lost all mass");
  v.values *= std::sqrt(mu / current);
}

std::optional<std::size_t> tadpole_loop(const MetricGraph& g) {
  if (g.vertex_count() != 1 || g.edge_count() != 2) return std::nullopt;
  for (std::size_t e = 0; e < 2; ++e)
    if (g.edge(e).is_loop() && g.edge(1 - e).is_half_line()) return e;
  return std::nullopt;
}

RealField soliton_around(const MeshPtr& mesh, const SolitonParams& s, std::size_t edge, double x) {
  const auto dist = distance_from(*mesh, edge, x);
  RealField v(mesh);
  for (std::size_t dof = 0; dof < mesh->dof_count(); ++dof) v.values[static_cast<Index>(dof)] = s(dist[dof]);
  return v;
}

TraceSample sample(const RealField& v, int iteration, double energy) {
  const auto& mesh = *v.mesh;
  TraceSample t;
  t.iteration = iteration;
  t.energy = energy;
  Index best = 0;
  t.sup = v.values.cwiseAbs().maxCoeff(&best);
  const auto [edge, s] = mesh.location(static_cast<std::size_t>(best));
  t.sup_on_half_line = !mesh.on_core(static_cast<std::size_t>(best)) && mesh.edge(edge).half_line;
  t.sup_arclength = t.sup_on_half_line ? s : 0.0;
  for (std::size_t dof = 0; dof < mesh.dof_count(); ++dof)
    if (mesh.on_core(dof)) t.core_sup = std::max(t.core_sup, std::abs(v.values[static_cast<Index>(dof)]));
  return t;
}

std::vector<double> cycle_masses(const RealField& v) {
  const auto& g = v.mesh->graph();
  std::vector<double> masses;
  for (const auto& c : cycle_basis(g).cycles) {
    std::vector<std::size_t> edges;
    for (const auto& s : c.steps) edges.push_back(s.edge);
    masses.push_back(edge_mass(v, edges));
  }
  return masses;
}

double residual_scale(const RealField& v, double omega, double p) {
  const double sup = sup_norm(v);
  return sup * std::max(std::abs(omega), std::pow(sup, p - 2.0));
}

}  // namespace

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::vanishing_suspected: return "vanishing-suspected";
    case SolverStatus::max_iter: return "max-iter";
    case SolverStatus::stalled: return "stalled";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(h > 0.0)) throw SolverError("h must be positive");
  if (!(step > 0.0) || !(max_step >= step)) throw SolverError("step sizes must be positive with max_step >= step");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw SolverError("backtracking factor must lie in (0, 1)");
  if (!(tol_energy > 0.0) || !(tol_residual > 0.0)) throw SolverError("tolerances must be positive");
  if (max_iter <= 0 || escape_iter <= 0 || seeds <= 0 || trace_every <= 0) throw SolverError("iteration counts must be positive");
  if (!(drift > 0.0 && drift < 1.0)) throw SolverError("drift threshold must lie in (0, 1)");
  if (!(core_floor > 0.0)) throw SolverError("core floor must be positive");
}

namespace {

bool peaks_on_half_line(const RealField& v) {
  Eigen::Index d = 0;
  v.values.maxCoeff(&d);
  const auto [e, x] = v.mesh->location(static_cast<std::size_t>(d));
  return v.mesh->graph().edge(e).is_half_line() && x > 0.0;
}

}  // namespace

std::vector<RealField> initial_guesses(const MeshPtr& mesh, double mu, double p, int count) {
  const auto& g = mesh->graph();
  const auto s = soliton(mu, p);
  std::vector<RealField> seeds;

  // Centred at the first vertex.
  std::size_t anchor = 0;
  double anchor_x = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (g.edge(e).from == 0) { anchor = e; break; }
    if (g.edge(e).to == 0) { anchor = e; anchor_x = g.edge(e).length; break; }
  }
  seeds.push_back(soliton_around(mesh, s, anchor, anchor_x));

  // Middle of the longest finite edge, or one soliton width down a half-line.
  if (count >= 2) {
    std::size_t longest = g.edge_count();
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (!g.edge(e).is_half_line() && (longest == g.edge_count() || g.edge(e).length > g.edge(longest).length))
        longest = e;
    if (longest < g.edge_count()) {
      seeds.push_back(soliton_around(mesh, s, longest, 0.5 * g.edge(longest).length));
    } else {
      const double width = std::min(2.0 / s.b, 0.5 * mesh->truncation());
      seeds.push_back(soliton_around(mesh, s, 0, width));
    }
  }

  if (count >= 3) {
    if (auto loop = tadpole_loop(g); loop && p == 4.0) {
      const auto c = competitor(mu, 0.5 * g.edge(*loop).length, p);
      seeds.push_back(interpolate_real(
          [&](std::size_t e, double x) { return e == *loop ? c.loop(x - c.L) : c.tail(x); }, mesh));
    } else {
      // Wide profile: half the inverse width of the soliton.
      auto wide = s;
      wide.b *= 0.5;
      seeds.push_back(soliton_around(mesh, wide, anchor, anchor_x));
    }
  }
  // Escaped profile halfway down the first half-line: the energy any
  // vanishing sequence approaches.
  if (count >= 4) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!g.edge(e).is_half_line()) continue;
      seeds.push_back(soliton_around(mesh, s, e, 0.5 * mesh->truncation()));
      break;
    }
  }
  for (auto& v : seeds) pin_and_normalize(v, mu);
  return seeds;
}

GroundStateResult minimize_from(const MeshPtr& mesh_ptr, const EffectivePotential& W, double mu, double p,
                                const SolverConfig& cfg, const RealField& initial) {
  cfg.validate();
  const auto& mesh = *mesh_ptr;
  const auto nf = static_cast<Index>(mesh.free_count());
  const Eigen::VectorXd& m = mesh.lumped_mass();
  const double divergence_floor = -10.0 * std::abs(halfline_energy(mu, p));

  // Preconditioner K + diag(M W) + sigma M on the free DOFs.
  const double sigma = std::max(std::abs(soliton(mu, p).omega), 1e-10);
  Eigen::SparseMatrix<double> P = mesh.stiffness().topLeftCorner(nf, nf);
  const Eigen::VectorXd shift = (mesh.weighted_mass(W.per_edge) + sigma * m).head(nf);
  for (Index i = 0; i < nf; ++i) P.coeffRef(i, i) += shift[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(P);
  if (solver.info() != Eigen::Success) throw SolverError("preconditioner factorization failed");

  GroundStateResult result;
  RealField v = initial;
  pin_and_normalize(v, mu);
  auto energy = energy_reduced(v, W, p);
  result.energy_history.push_back(energy.total);

  double tau = cfg.step;
  int quiet = 0;
  result.status = SolverStatus::max_iter;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const auto grad = gradient_reduced(v, W, p);
    const double omega = lagrange_multiplier(grad, v);
    double residual = 0.0;
    for (Index i = 0; i < nf; ++i) residual = std::max(residual, std::abs(grad.values[i] / m[i] - omega * v.values[i]));
    const double scale = residual_scale(v, omega, p);
    if (it % cfg.trace_every == 0) result.trace.push_back(sample(v, it, energy.total));
    if (residual <= cfg.tol_residual * scale) {
      result.status = SolverStatus::converged;
      break;
    }

    // Descent direction: preconditioned gradient projected onto the tangent
    // space of the mass sphere in the preconditioner's inner product.
    const Eigen::VectorXd mv = m.head(nf).cwiseProduct(v.values.head(nf));
    const Eigen::VectorXd z = solver.solve(grad.values.head(nf));
    const Eigen::VectorXd y = solver.solve(mv);
    const Eigen::VectorXd d = z - (z.dot(mv) / y.dot(mv)) * y;

    bool accepted = false;
    RealField trial(mesh_ptr);
    EnergyBreakdown trial_energy;
    while (tau >= 1e-14) {
      trial.values = v.values;
      trial.values.head(nf) -= tau * d;
      pin_and_normalize(trial, mu);
      trial_energy = energy_reduced(trial, W, p);
      if (trial_energy.total <= energy.total) {
        accepted = true;
        break;
      }
      tau *= cfg.backtrack;
    }
    if (!accepted) {
      result.status = SolverStatus::stalled;
      break;
    }
    if (trial_energy.total < divergence_floor)
      throw SolverError("energy fell below the divergence floor; step too large");

    const double drop = energy.total - trial_energy.total;
    quiet = drop <= cfg.tol_energy * std::abs(energy.total) ? quiet + 1 : 0;
    v = std::move(trial);
    energy = trial_energy;
    result.energy_history.push_back(energy.total);
    tau = std::min(tau * 2.0, cfg.max_step);
    if (quiet >= 50) {
      result.status = SolverStatus::stalled;
      break;
    }
  }

  // The reduced energy is even and |v| never raises it, so report the modulus.
  v.values = v.values.cwiseAbs();
  energy = energy_reduced(v, W, p);
  const auto grad = gradient_reduced(v, W, p);
  result.omega = lagrange_multiplier(grad, v);
  result.residual = el_residual(v, W, p, result.omega);
  const double scale = residual_scale(v, result.omega, p);
  result.relative_residual = scale > 0.0 ? result.residual.discrete / scale : 0.0;
  if (result.status == SolverStatus::stalled && result.relative_residual <= cfg.tol_residual)
    result.status = SolverStatus::converged;
  result.iterations = it;
  result.trace.push_back(sample(v, it, energy.total));
  result.energy = energy;
  result.loop_mass = cycle_masses(v);
  result.profile = std::move(v);
  if (detect_vanishing(result.trace, mesh, cfg.drift, cfg.core_floor))
    result.status = SolverStatus::vanishing_suspected;
  return result;
}

GroundStateResult minimize(const MeshPtr& mesh, const EffectivePotential& W, double mu, double p,
                           const SolverConfig& cfg) {
  if (!(p > 2.0 && p < 6.0)) throw DomainError("nonlinearity power must lie in (2, 6)");
  if (!(mu > 0.0)) throw DomainError("mass must be positive");
  cfg.validate();
  const auto seeds = initial_guesses(mesh, mu, p, std::min(cfg.seeds, 4));
  std::vector<GroundStateResult> runs(seeds.size());
  detail::parallel_for(seeds.size(), [&](std::size_t i) {
    SolverConfig run = cfg;
    if (peaks_on_half_line(seeds[i])) run.max_iter = std::min(cfg.max_iter, cfg.escape_iter);
    runs[i] = minimize_from(mesh, W, mu, p, run, seeds[i]);
    runs[i].seed = i;
  });
  std::optional<GroundStateResult> best;
  std::vector<double> energies;
  for (auto& r : runs) {
    energies.push_back(r.energy.total);
    if (!best || r.energy.total < best->energy.total) best = std::move(r);
  }
  best->seed_energies = std::move(energies);
  return std::move(*best);
}

GroundStateResult minimize(const MetricGraph& g, double mu, double p, const SolverConfig& cfg) {
  const double R = cfg.truncation > 0.0 ? cfg.truncation : default_truncation(mu, p);
  const auto mesh = build_mesh(g, cfg.h, R);
  return minimize(mesh, effective_field(g, cycle_basis(g)), mu, p, cfg);
}

bool detect_vanishing(const std::vector<TraceSample>& trace, const GraphMesh& mesh, double drift,
                      double core_floor) {
  if (mesh.graph().is_compact() || trace.empty()) return false;
  const auto& last = trace.back();
  if (last.sup_on_half_line && last.sup_arclength > drift * mesh.truncation()) return true;

  // Core amplitude decaying along the whole tail of the trace.
  const std::size_t window = std::min<std::size_t>(trace.size(), 5);
  if (window < 2 || !(last.core_sup < core_floor * last.sup)) return false;
  for (std::size_t i = trace.size() - window + 1; i < trace.size(); ++i)
    if (trace[i].core_sup > trace[i - 1].core_sup) return false;
  return true;
}

double quadrature_margin(double mu, double p, double h, double truncation) {
  const auto mesh = build_mesh(generators::line(), h, truncation);
  const auto s = soliton(mu, p);
  const auto v = interpolate_real([&](std::size_t, double x) { return s(x); }, mesh);
  const double discrete = energy_reduced(v, EffectivePotential{{0.0, 0.0}}, p).total;
  return 2.0 * std::abs(discrete - soliton_energy(mu, p)) + 1e-14;
}

ExistenceCertificate existence_certificate(const MeshPtr& mesh, const EffectivePotential& W, double mu,
                                           double p, const SolverConfig& cfg) {
  auto r = minimize(mesh, W, mu, p, cfg);
  ExistenceCertificate cert;
  cert.threshold = soliton_energy(mu, p);
  cert.margin = quadrature_margin(mu, p, mesh->spacing(), std::max(mesh->truncation(), default_truncation(mu, p)));
  cert.witness_energy = r.energy.total;
  cert.status = r.status;
  cert.exists = cert.witness_energy < cert.threshold - cert.margin;
  cert.witness = std::move(r.profile);
  return cert;
}

ExistenceCertificate existence_certificate(const MetricGraph& g, double mu, double p, const SolverConfig& cfg) {
  const double R = cfg.truncation > 0.0 ? cfg.truncation : default_truncation(mu, p);
  return existence_certificate(build_mesh(g, cfg.h, R), effective_field(g, cycle_basis(g)), mu, p, cfg);
}

double numeric_R(const MetricGraph& g, double mu, double p, const SolverConfig& cfg) {
  if (!effective_field(g, cycle_basis(g)).is_zero())
    throw SolverError("numeric_R needs a graph without effective magnetic potential");
  const auto r = minimize(g, mu, p, cfg);
  if (r.status != SolverStatus::converged)
    throw SolverError("ground-state solve did not converge (" + to_string(r.status) + ")");
  return soliton_energy(mu, p) - r.energy.total;
}

}  // namespace magnls
