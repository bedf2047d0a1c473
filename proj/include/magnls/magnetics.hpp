#pragma once

#include <vector>

#include "magnls/graph.hpp"
#include "magnls/mesh.hpp"

namespace magnls {

/// Flux quantities of one basis cycle.
struct CycleFlux {
  std::size_t cycle = 0;
  double length = 0.0;
  double alpha = 0.0;  // (1/2pi) * circulation of A
  long winding = 0;    // nearest integer to alpha, ties to the smaller one
  double phi = 0.0;    // 4 pi^2 / |gamma|^2 * dist(alpha, Z)^2
};

using FluxReport = std::vector<CycleFlux>;

/// Constant effective potential per edge; zero off the cycles.
struct EffectivePotential {
  std::vector<double> per_edge;

  double max() const;
  bool is_zero() const;
};

double flux(const Cycle& cycle, const MetricGraph& g);

/// Nearest integer to alpha; at half-integers the smaller neighbour.
long nearest_winding(double alpha);

/// (4 pi^2 / length^2) * dist(alpha, Z)^2.
double effective_potential(double alpha, double length);
double effective_potential(const Cycle& cycle, const MetricGraph& g);

FluxReport flux_report(const MetricGraph& g, const CycleBasis& basis);

/// Sum of the cycle potentials over every basis cycle through each edge.
EffectivePotential effective_field(const MetricGraph& g, const CycleBasis& basis);

/// Effective potential with a single value on the edges of one cycle.
EffectivePotential cycle_potential(const MetricGraph& g, const Cycle& cycle, double phi);

/// Affine phase per edge, theta_e(x) = offset + slope * x in the edge's own
/// coordinate. Edges without a phase assigned have `defined == false`.
struct EdgePhase {
  bool defined = false;
  double offset = 0.0;
  double slope = 0.0;

  double operator()(double x) const { return offset + slope * x; }
};

struct PhaseField {
  std::vector<EdgePhase> per_edge;
};

/// Phase on the edges of one cycle minimizing the magnetic term: its
/// derivative along the cycle is A - 2 pi (alpha - m) / |gamma|, so
/// (A - theta')^2 equals the cycle potential and the total increment is
/// 2 pi m.
PhaseField optimal_phase(const Cycle& cycle, const MetricGraph& g);

/// Global optimal phase for a basis of edge-disjoint cycles: optimal on
/// every cycle and pure gauge (theta' = A) elsewhere, continuous modulo
/// 2 pi at every vertex. Throws if two basis cycles share an edge.
PhaseField optimal_gauge(const MetricGraph& g, const CycleBasis& basis);

/// u = v * exp(i theta) at every node. Edges without a defined phase get
/// theta = 0.
ComplexField gauge_lift(const RealField& v, const PhaseField& theta);

}  // namespace magnls
