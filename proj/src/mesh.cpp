#include "magnls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>

#include "magnls/closed_form.hpp"

namespace magnls {

GraphMesh::GraphMesh(MetricGraph graph, double h, double truncation)
    : graph_(std::move(graph)), h_(h), truncation_(truncation) {
  if (!(h > 0.0)) throw GraphError("mesh spacing must be positive");
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& e : graph_.edges())
    if (!e.is_half_line()) shortest = std::min(shortest, e.length);
  if (h >= shortest) throw GraphError("mesh spacing must be below the shortest edge length");
  if (graph_.half_line_count() > 0 && truncation <= 10.0 * h)
    throw GraphError("half-line truncation must exceed 10 h");

  const std::size_t nv = graph_.vertex_count();
  std::size_t next = nv;
  edges_.reserve(graph_.edge_count());
  for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
    const auto& edge = graph_.edge(e);
    EdgeMesh em;
    em.edge = e;
    em.half_line = edge.is_half_line();
    em.extent = em.half_line ? truncation : edge.length;
    em.intervals = static_cast<std::size_t>(std::ceil(em.extent / h - 1e-9));
    em.intervals = std::max<std::size_t>(em.intervals, 2);
    em.h = em.extent / static_cast<double>(em.intervals);
    em.dofs.resize(em.intervals + 1);
    em.dofs.front() = edge.from;
    for (std::size_t k = 1; k < em.intervals; ++k) em.dofs[k] = next++;
    em.dofs.back() = em.half_line ? no_vertex : edge.to;
    edges_.push_back(std::move(em));
  }
  free_count_ = next;
  for (auto& em : edges_)
    if (em.half_line) em.dofs.back() = next++;
  dof_count_ = next;

  mass_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_count_));
  core_.assign(dof_count_, false);
  location_.assign(dof_count_, {no_vertex, 0.0});
  for (const auto& em : edges_) {
    for (std::size_t k = 0; k < em.intervals; ++k) {
      mass_[static_cast<Eigen::Index>(em.dofs[k])] += 0.5 * em.h;
      mass_[static_cast<Eigen::Index>(em.dofs[k + 1])] += 0.5 * em.h;
    }
    for (std::size_t k = 0; k < em.dofs.size(); ++k) {
      const auto dof = em.dofs[k];
      if (!em.half_line || dof < nv) core_[dof] = true;
      if (location_[dof].first == no_vertex) location_[dof] = {em.edge, em.arclength(k)};
    }
  }
}

Eigen::SparseMatrix<double> GraphMesh::stiffness() const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& em : edges_) {
    const double k = 1.0 / em.h;
    for (std::size_t i = 0; i < em.intervals; ++i) {
      const auto a = static_cast<int>(em.dofs[i]);
      const auto b = static_cast<int>(em.dofs[i + 1]);
      triplets.emplace_back(a, a, k);
      triplets.emplace_back(b, b, k);
      triplets.emplace_back(a, b, -k);
      triplets.emplace_back(b, a, -k);
    }
  }
  const auto n = static_cast<Eigen::Index>(dof_count_);
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

Eigen::VectorXd GraphMesh::weighted_mass(const std::vector<double>& per_edge) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_count_));
  for (const auto& em : edges_) {
    const double value = per_edge.at(em.edge);
    if (value == 0.0) continue;
    for (std::size_t k = 0; k < em.intervals; ++k) {
      w[static_cast<Eigen::Index>(em.dofs[k])] += 0.5 * em.h * value;
      w[static_cast<Eigen::Index>(em.dofs[k + 1])] += 0.5 * em.h * value;
    }
  }
  return w;
}

MeshPtr build_mesh(const MetricGraph& g, double h, double truncation) {
  return std::make_shared<const GraphMesh>(g, h, truncation);
}

double default_truncation(double mu, double p) {
  const double b = soliton(mu, p).b;
  return std::max({20.0, 12.0 / std::sqrt(mu), 10.0 / b});
}

RealField interpolate_real(const std::function<double(std::size_t, double)>& f, const MeshPtr& mesh) {
  return interpolate<double>(f, mesh);
}

double mass(const RealField& v) {
  return v.mesh->lumped_mass().dot(v.values.cwiseAbs2());
}

double mass(const ComplexField& u) {
  return u.mesh->lumped_mass().dot(u.values.cwiseAbs2());
}

double edge_mass(const RealField& v, const std::vector<std::size_t>& edges) {
  double total = 0.0;
  for (auto e : edges) {
    const auto& em = v.mesh->edge(e);
    for (std::size_t k = 0; k < em.intervals; ++k) {
      const double a = v.values[static_cast<Eigen::Index>(em.dofs[k])];
      const double b = v.values[static_cast<Eigen::Index>(em.dofs[k + 1])];
      total += 0.5 * em.h * (a * a + b * b);
    }
  }
  return total;
}

double sup_norm(const RealField& v) {
  return v.values.size() == 0 ? 0.0 : v.values.cwiseAbs().maxCoeff();
}

std::vector<double> distance_from(const GraphMesh& mesh, std::size_t edge, double x) {
  const auto& g = mesh.graph();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dv(g.vertex_count(), inf);
  const auto& source = g.edge(edge);
  dv[source.from] = std::min(dv[source.from], x);
  if (!source.is_half_line()) dv[source.to] = std::min(dv[source.to], source.length - x);

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (std::size_t v = 0; v < dv.size(); ++v)
    if (dv[v] < inf) queue.push({dv[v], v});
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dv[v]) continue;
    for (const auto& e : g.edges()) {
      if (e.is_half_line()) continue;
      const std::size_t w = e.from == v ? e.to : (e.to == v ? e.from : no_vertex);
      if (w == no_vertex || d + e.length >= dv[w]) continue;
      dv[w] = d + e.length;
      queue.push({dv[w], w});
    }
  }

  std::vector<double> dist(mesh.dof_count(), inf);
  for (const auto& em : mesh.edges()) {
    const auto& e = g.edge(em.edge);
    for (std::size_t k = 0; k < em.dofs.size(); ++k) {
      const double s = em.arclength(k);
      double d = dv[e.from] + s;
      if (!em.half_line) d = std::min(d, dv[e.to] + em.extent - s);
      if (em.edge == edge) d = std::min(d, std::abs(s - x));
      auto& slot = dist[em.dofs[k]];
      slot = std::min(slot, d);
    }
  }
  return dist;
}

namespace {

template <class Emit>
void for_each_node(const GraphMesh& mesh, Emit emit) {
  for (const auto& em : mesh.edges())
    for (std::size_t k = 0; k < em.dofs.size(); ++k)
      emit(mesh.graph().edge(em.edge).id, em.arclength(k), static_cast<Eigen::Index>(em.dofs[k]));
}

}  // namespace

void write_profile_csv(std::ostream& out, const RealField& v) {
  out << "edge_id,arclength,value\n" << std::setprecision(12);
  for_each_node(*v.mesh, [&](const std::string& id, double s, Eigen::Index dof) {
    out << id << ',' << s << ',' << v.values[dof] << '\n';
  });
}

void write_profile_csv(std::ostream& out, const ComplexField& u) {
  out << "edge_id,arclength,re,im\n" << std::setprecision(12);
  for_each_node(*u.mesh, [&](const std::string& id, double s, Eigen::Index dof) {
    out << id << ',' << s << ',' << u.values[dof].real() << ',' << u.values[dof].imag() << '\n';
  });
}

}  // namespace magnls
