#include "magnls/functional.hpp"

#include <cmath>

namespace magnls {

namespace {

using Index = Eigen::Index;

Index at(std::size_t dof) { return static_cast<Index>(dof); }

// Visit every interval (i, j, h, edge) of the mesh.
template <class F>
void for_each_interval(const GraphMesh& mesh, F f) {
  for (const auto& em : mesh.edges())
    for (std::size_t k = 0; k < em.intervals; ++k) f(at(em.dofs[k]), at(em.dofs[k + 1]), em.h, em.edge);
}

}  // namespace

double gradient_norm2(const RealField& v) {
  double total = 0.0;
  for_each_interval(*v.mesh, [&](Index i, Index j, double h, std::size_t) {
    const double d = v.values[j] - v.values[i];
    total += d * d / h;
  });
  return total;
}

double lp_norm_p(const RealField& v, double p) {
  return v.mesh->lumped_mass().dot(v.values.cwiseAbs().array().pow(p).matrix());
}

EnergyBreakdown energy_reduced(const RealField& v, const EffectivePotential& W, double p) {
  const auto& mesh = *v.mesh;
  EnergyBreakdown e;
  e.kinetic = 0.5 * gradient_norm2(v);
  if (!W.is_zero()) e.magnetic = 0.5 * mesh.weighted_mass(W.per_edge).dot(v.values.cwiseAbs2());
  e.nonlinear = -lp_norm_p(v, p) / p;
  e.total = e.kinetic + e.magnetic + e.nonlinear;
  e.mass = mass(v);
  return e;
}

EnergyBreakdown energy_magnetic(const ComplexField& u, double p) {
  const auto& mesh = *u.mesh;
  const auto& g = mesh.graph();
  const std::complex<double> I(0.0, 1.0);
  EnergyBreakdown e;
  for_each_interval(mesh, [&](Index i, Index j, double h, std::size_t edge) {
    const double A = g.edge(edge).A;
    const auto du = (u.values[j] - u.values[i]) / h - I * A * 0.5 * (u.values[i] + u.values[j]);
    e.kinetic += 0.5 * h * std::norm(du);
  });
  e.nonlinear = -mesh.lumped_mass().dot(u.values.cwiseAbs().array().pow(p).matrix()) / p;
  e.total = e.kinetic + e.nonlinear;
  e.mass = mass(u);
  return e;
}

RealField gradient_reduced(const RealField& v, const EffectivePotential& W, double p) {
  const auto& mesh = *v.mesh;
  RealField g(v.mesh);
  for_each_interval(mesh, [&](Index i, Index j, double h, std::size_t) {
    const double flux = (v.values[j] - v.values[i]) / h;
    g.values[i] -= flux;
    g.values[j] += flux;
  });
  if (!W.is_zero()) g.values += mesh.weighted_mass(W.per_edge).cwiseProduct(v.values);
  const auto abs_v = v.values.cwiseAbs().array();
  g.values.array() -= mesh.lumped_mass().array() * abs_v.pow(p - 2.0) * v.values.array();
  for (auto dof = mesh.free_count(); dof < mesh.dof_count(); ++dof) g.values[at(dof)] = 0.0;
  return g;
}

double lagrange_multiplier(const RealField& grad, const RealField& v) {
  return grad.values.dot(v.values) / mass(v);
}

std::vector<double> kirchhoff_defect(const RealField& v) {
  const auto& mesh = *v.mesh;
  std::vector<double> sum(mesh.graph().vertex_count(), 0.0);
  auto slope = [&](const EdgeMesh& em, bool from_start) {
    const std::size_t n = em.intervals;
    const auto node = [&](std::size_t k) { return v.values[at(em.dofs[from_start ? k : n - k])]; };
    return (-3.0 * node(0) + 4.0 * node(1) - node(2)) / (2.0 * em.h);
  };
  for (const auto& em : mesh.edges()) {
    const auto& e = mesh.graph().edge(em.edge);
    sum[e.from] += slope(em, true);
    if (!em.half_line) sum[e.to] += slope(em, false);
  }
  for (auto& s : sum) s = std::abs(s);
  return sum;
}

ELResidual el_residual(const RealField& v, const EffectivePotential& W, double p, double omega) {
  const auto& mesh = *v.mesh;
  const auto grad = gradient_reduced(v, W, p);
  const auto& m = mesh.lumped_mass();
  ELResidual r;
  for (std::size_t dof = 0; dof < mesh.free_count(); ++dof) {
    const auto i = at(dof);
    const double value = std::abs(grad.values[i] / m[i] - omega * v.values[i]);
    r.discrete = std::max(r.discrete, value);
    if (!mesh.is_vertex(dof)) r.interior = std::max(r.interior, value);
  }
  r.vertex_defect = kirchhoff_defect(v);
  for (double d : r.vertex_defect) r.vertex_max = std::max(r.vertex_max, d);
  return r;
}

GNReport gn_report(const RealField& v, double p) {
  GNReport report;
  const double l2 = std::sqrt(mass(v));
  const double grad = std::sqrt(gradient_norm2(v));
  if (!(grad > 0.0) || !(l2 > 0.0)) return report;
  report.ratio_p = lp_norm_p(v, p) / (std::pow(l2, 0.5 * p + 1.0) * std::pow(grad, 0.5 * p - 1.0));
  report.ratio_inf = sup_norm(v) / std::sqrt(l2 * grad);
  return report;
}

DiamagneticReport diamagnetic_report(const ComplexField& u) {
  const auto& mesh = *u.mesh;
  const auto& g = mesh.graph();
  const std::complex<double> I(0.0, 1.0);
  DiamagneticReport r;
  for_each_interval(mesh, [&](Index i, Index j, double h, std::size_t edge) {
    const double A = g.edge(edge).A;
    const auto du = (u.values[j] - u.values[i]) / h - I * A * 0.5 * (u.values[i] + u.values[j]);
    const double dmod = (std::abs(u.values[j]) - std::abs(u.values[i])) / h;
    r.covariant_kinetic += h * std::norm(du);
    r.modulus_kinetic += h * dmod * dmod;
  });
  return r;
}

bool diamagnetic_check(const ComplexField& u, double abs_tol, double rel_tol) {
  const auto r = diamagnetic_report(u);
  return r.modulus_kinetic <= r.covariant_kinetic + abs_tol + rel_tol * r.covariant_kinetic;
}

}  // namespace magnls
