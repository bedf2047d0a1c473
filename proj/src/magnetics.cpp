#include "magnls/magnetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace magnls {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Slope correction 2 pi (alpha - m) / |gamma| of the optimal phase.
double phase_defect(const Cycle& cycle, const MetricGraph& g) {
  const double alpha = flux(cycle, g);
  return two_pi * (alpha - static_cast<double>(nearest_winding(alpha))) / cycle.length;
}

}  // namespace

double EffectivePotential::max() const {
  return per_edge.empty() ? 0.0 : *std::max_element(per_edge.begin(), per_edge.end());
}

bool EffectivePotential::is_zero() const {
  return std::all_of(per_edge.begin(), per_edge.end(), [](double w) { return w == 0.0; });
}

double flux(const Cycle& cycle, const MetricGraph& g) {
  double circulation = 0.0;
  for (const auto& s : cycle.steps) {
    const auto& e = g.edge(s.edge);
    circulation += s.sign * e.A * e.length;
  }
  return circulation / two_pi;
}

long nearest_winding(double alpha) {
  return static_cast<long>(std::ceil(alpha - 0.5));
}

double effective_potential(double alpha, double length) {
  const double dist = std::abs(alpha - static_cast<double>(nearest_winding(alpha)));
  return two_pi * two_pi / (length * length) * dist * dist;
}

double effective_potential(const Cycle& cycle, const MetricGraph& g) {
  return effective_potential(flux(cycle, g), cycle.length);
}

FluxReport flux_report(const MetricGraph& g, const CycleBasis& basis) {
  FluxReport report;
  for (std::size_t i = 0; i < basis.cycles.size(); ++i) {
    const auto& c = basis.cycles[i];
    CycleFlux row;
    row.cycle = i;
    row.length = c.length;
    row.alpha = flux(c, g);
    row.winding = nearest_winding(row.alpha);
    row.phi = effective_potential(row.alpha, c.length);
    report.push_back(row);
  }
  return report;
}

EffectivePotential effective_field(const MetricGraph& g, const CycleBasis& basis) {
  EffectivePotential w{std::vector<double>(g.edge_count(), 0.0)};
  for (const auto& c : basis.cycles) {
    const double phi = effective_potential(c, g);
    for (const auto& s : c.steps) w.per_edge[s.edge] += phi;
  }
  return w;
}

EffectivePotential cycle_potential(const MetricGraph& g, const Cycle& cycle, double phi) {
  EffectivePotential w{std::vector<double>(g.edge_count(), 0.0)};
  for (const auto& s : cycle.steps) w.per_edge[s.edge] = phi;
  return w;
}

PhaseField optimal_phase(const Cycle& cycle, const MetricGraph& g) {
  PhaseField field{std::vector<EdgePhase>(g.edge_count())};
  const double defect = phase_defect(cycle, g);
  double theta = 0.0;
  for (const auto& s : cycle.steps) {
    const auto& e = g.edge(s.edge);
    EdgePhase& ph = field.per_edge[s.edge];
    ph.defined = true;
    ph.slope = e.A - s.sign * defect;
    if (s.sign > 0) {
      ph.offset = theta;
      theta = ph(e.length);
    } else {
      ph.offset = theta - ph.slope * e.length;
      theta = ph.offset;
    }
  }
  return field;
}

PhaseField optimal_gauge(const MetricGraph& g, const CycleBasis& basis) {
  PhaseField field{std::vector<EdgePhase>(g.edge_count())};
  std::vector<bool> on_cycle(g.edge_count(), false);
  for (std::size_t i = 0; i < g.edge_count(); ++i) field.per_edge[i].slope = g.edge(i).A;
  for (const auto& c : basis.cycles) {
    const double defect = phase_defect(c, g);
    for (const auto& s : c.steps) {
      if (on_cycle[s.edge]) throw GraphError("optimal_gauge needs edge-disjoint basis cycles");
      on_cycle[s.edge] = true;
      field.per_edge[s.edge].slope -= s.sign * defect;
    }
  }

  // Integrate the slopes over a BFS tree to fix vertex phases.
  const std::size_t n = g.vertex_count();
  std::vector<double> vertex_phase(n, 0.0);
  std::vector<bool> seen(n, false), tree(g.edge_count(), false);
  std::queue<std::size_t> queue;
  seen[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop();
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const auto& e = g.edge(i);
      if (e.is_half_line() || e.from == e.to) continue;
      EdgePhase& ph = field.per_edge[i];
      if (e.from == v && !seen[e.to]) {
        ph.offset = vertex_phase[v];
        vertex_phase[e.to] = ph(e.length);
        seen[e.to] = true;
        tree[i] = true;
        queue.push(e.to);
      } else if (e.to == v && !seen[e.from]) {
        ph.offset = vertex_phase[v] - ph.slope * e.length;
        vertex_phase[e.from] = ph.offset;
        seen[e.from] = true;
        tree[i] = true;
        queue.push(e.from);
      }
    }
  }
  // Non-tree edges and half-lines start from their tail vertex phase; the
  // head matches modulo 2 pi because every cycle winds by 2 pi m.
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    EdgePhase& ph = field.per_edge[i];
    ph.defined = true;
    if (!tree[i]) ph.offset = vertex_phase[g.edge(i).from];
  }
  return field;
}

ComplexField gauge_lift(const RealField& v, const PhaseField& theta) {
  const auto& mesh = *v.mesh;
  ComplexField u(v.mesh);
  for (const auto& em : mesh.edges()) {
    const auto& ph = theta.per_edge.at(em.edge);
    for (std::size_t k = 0; k < em.dofs.size(); ++k) {
      const auto dof = static_cast<Eigen::Index>(em.dofs[k]);
      const double angle = ph.defined ? ph(em.arclength(k)) : 0.0;
      u.values[dof] = std::polar(v.values[dof], angle);
    }
  }
  return u;
}

}  // namespace magnls
