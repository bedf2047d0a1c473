#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "magnls/graph.hpp"

namespace magnls {

/// Uniform P1 mesh of one edge. Node k sits at arclength k * h from the
/// edge's start; `dofs[k]` is its global degree of freedom.
struct EdgeMesh {
  std::size_t edge = 0;
  std::size_t intervals = 0;
  double h = 0.0;
  double extent = 0.0;  // edge length, or the truncation length of a half-line
  bool half_line = false;
  std::vector<std::size_t> dofs;

  double arclength(std::size_t k) const { return static_cast<double>(k) * h; }
};

/// P1 mesh of a metric graph. Every graph vertex owns one shared DOF, so
/// fields are continuous at vertices by construction. Half-lines are cut at
/// length R and end in a Dirichlet DOF.
///
/// DOF layout: graph vertices first, then interior nodes edge by edge, then
/// the Dirichlet terminals. The first `free_count()` DOFs are unconstrained.
class GraphMesh {
 public:
  GraphMesh(MetricGraph graph, double h, double truncation);

  const MetricGraph& graph() const noexcept { return graph_; }
  const std::vector<EdgeMesh>& edges() const noexcept { return edges_; }
  const EdgeMesh& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t dof_count() const noexcept { return dof_count_; }
  std::size_t free_count() const noexcept { return free_count_; }
  double spacing() const noexcept { return h_; }
  double truncation() const noexcept { return truncation_; }

  /// Lumped (trapezoid) mass weights per DOF.
  const Eigen::VectorXd& lumped_mass() const noexcept { return mass_; }
  bool is_dirichlet(std::size_t dof) const noexcept { return dof >= free_count_; }
  bool is_vertex(std::size_t dof) const noexcept { return dof < graph_.vertex_count(); }
  /// True for DOFs on finite edges or graph vertices (the compact core).
  bool on_core(std::size_t dof) const noexcept { return core_[dof]; }

  /// Edge and arclength of a DOF (first edge touching it, for vertices).
  std::pair<std::size_t, double> location(std::size_t dof) const { return location_[dof]; }

  /// P1 stiffness matrix over all DOFs.
  Eigen::SparseMatrix<double> stiffness() const;

  /// Lumped mass weights of the intervals on each edge scaled by a per-edge
  /// constant, i.e. diag(M W) for a piecewise constant W.
  Eigen::VectorXd weighted_mass(const std::vector<double>& per_edge) const;

 private:
  MetricGraph graph_;
  double h_;
  double truncation_;
  std::vector<EdgeMesh> edges_;
  std::size_t dof_count_ = 0;
  std::size_t free_count_ = 0;
  Eigen::VectorXd mass_;
  std::vector<bool> core_;
  std::vector<std::pair<std::size_t, double>> location_;
};

using MeshPtr = std::shared_ptr<const GraphMesh>;

/// Mesh with spacing at most h on every edge (nodes land on vertices).
/// Throws when h is not below the shortest finite edge or R <= 10 h.
MeshPtr build_mesh(const MetricGraph& g, double h, double truncation);

/// Half-line truncation giving an exponentially small tail for the soliton
/// of mass mu: max(20, 12/sqrt(mu), 10/b(mu)).
double default_truncation(double mu, double p = 4.0);

template <class T>
struct DiscreteField {
  using Scalar = T;
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  MeshPtr mesh;
  Vector values;

  DiscreteField() = default;
  explicit DiscreteField(MeshPtr m) : mesh(std::move(m)), values(Vector::Zero(mesh->dof_count())) {}
  DiscreteField(MeshPtr m, Vector v) : mesh(std::move(m)), values(std::move(v)) {}

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

using RealField = DiscreteField<double>;
using ComplexField = DiscreteField<std::complex<double>>;

/// Sample f(edge, arclength) at every node; Dirichlet DOFs are pinned to 0.
template <class T>
DiscreteField<T> interpolate(const std::function<T(std::size_t, double)>& f, const MeshPtr& mesh) {
  DiscreteField<T> field(mesh);
  std::vector<bool> set(mesh->dof_count(), false);
  for (const auto& em : mesh->edges()) {
    for (std::size_t k = 0; k < em.dofs.size(); ++k) {
      const auto dof = em.dofs[k];
      if (set[dof] || mesh->is_dirichlet(dof)) continue;
      field.values[static_cast<Eigen::Index>(dof)] = f(em.edge, em.arclength(k));
      set[dof] = true;
    }
  }
  return field;
}

RealField interpolate_real(const std::function<double(std::size_t, double)>& f, const MeshPtr& mesh);

/// Trapezoid-rule mass sum_i m_i |v_i|^2.
double mass(const RealField& v);
double mass(const ComplexField& u);

/// Mass carried by the given edges (vertex DOFs weighted by the adjacent
/// intervals on those edges only).
double edge_mass(const RealField& v, const std::vector<std::size_t>& edges);

double sup_norm(const RealField& v);

/// Graph distance from a point (edge, arclength) to every DOF.
std::vector<double> distance_from(const GraphMesh& mesh, std::size_t edge, double x);

/// Profile CSV: `edge_id,arclength,value` (real) or `edge_id,arclength,re,im`.
void write_profile_csv(std::ostream& out, const RealField& v);
void write_profile_csv(std::ostream& out, const ComplexField& u);

}  // namespace magnls
