#pragma once

#include <optional>
#include <vector>

#include "magnls/magnetics.hpp"
#include "magnls/mesh.hpp"

namespace magnls {

/// Parts of the discrete energy. The magnetic part is (1/2) int W v^2 for
/// the reduced functional and is folded into `kinetic` for the complex one.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double magnetic = 0.0;
  double nonlinear = 0.0;
  double total = 0.0;
  double mass = 0.0;
};

/// I_A(v) = 1/2 int |v'|^2 + 1/2 int W v^2 - 1/p int |v|^p with P1 gradients
/// and trapezoid quadrature.
EnergyBreakdown energy_reduced(const RealField& v, const EffectivePotential& W, double p);

/// E_A(u) = 1/2 int |Du|^2 - 1/p int |u|^p, with D = d/dx - iA discretized
/// per interval as (u_j - u_i)/h - iA (u_i + u_j)/2.
EnergyBreakdown energy_magnetic(const ComplexField& u, double p);

/// Frechet gradient of energy_reduced with respect to the nodal values:
/// K v + diag(M W) v - M |v|^{p-2} v, zero at Dirichlet DOFs.
RealField gradient_reduced(const RealField& v, const EffectivePotential& W, double p);

/// Multiplier estimate <grad(v), v> / mass(v).
double lagrange_multiplier(const RealField& grad, const RealField& v);

struct ELResidual {
  double interior = 0.0;             // max |-v'' - |v|^{p-2} v + W v - omega v| off vertices
  std::vector<double> vertex_defect;  // |sum of outgoing slopes| per graph vertex
  double vertex_max = 0.0;
  double discrete = 0.0;              // max over free DOFs of |grad_i / m_i - omega v_i|
};

ELResidual el_residual(const RealField& v, const EffectivePotential& W, double p, double omega);

/// Sum of outgoing one-sided slopes at each vertex, second-order accurate.
std::vector<double> kirchhoff_defect(const RealField& v);

/// Gagliardo-Nirenberg ratios; empty when v' vanishes identically.
struct GNReport {
  std::optional<double> ratio_p;
  std::optional<double> ratio_inf;
};

GNReport gn_report(const RealField& v, double p);

struct DiamagneticReport {
  double modulus_kinetic = 0.0;    // int |(|u|)'|^2
  double covariant_kinetic = 0.0;  // int |Du|^2
};

DiamagneticReport diamagnetic_report(const ComplexField& u);
bool diamagnetic_check(const ComplexField& u, double abs_tol = 1e-12, double rel_tol = 1e-8);

/// Squared L2 norm of v' (P1 gradient).
double gradient_norm2(const RealField& v);
double lp_norm_p(const RealField& v, double p);

}  // namespace magnls
