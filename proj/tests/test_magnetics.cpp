#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "magnls/closed_form.hpp"
#include "magnls/functional.hpp"
#include "magnls/magnetics.hpp"

using namespace magnls;
using std::numbers::pi;

namespace {

MetricGraph loop(double length, double A) {
  return MetricGraph({"v"}, {Edge{"loop", 0, 0, EdgeKind::finite, length, A}});
}

double wrap(double angle) { return std::remainder(angle, 2.0 * pi); }

}  // namespace

TEST_CASE("flux of a single loop") {
  const auto a = loop(2.0 * pi, 0.5);
  CHECK(flux(cycle_basis(a).cycles[0], a) == doctest::Approx(0.5).epsilon(1e-14));
  const auto b = loop(1.0, 4.0 * pi);
  CHECK(flux(cycle_basis(b).cycles[0], b) == doctest::Approx(2.0).epsilon(1e-14));
  const auto z = generators::figure_eight(1.0, 2.0);
  for (const auto& c : cycle_basis(z).cycles) CHECK(flux(c, z) == 0.0);
}

TEST_CASE("flux follows the traversal sign") {
  // Triangle a -> b -> c with the last edge stored as a -> c.
  const MetricGraph g({"a", "b", "c"}, {Edge{"ab", 0, 1, EdgeKind::finite, 1.0, 1.0},
                                         Edge{"bc", 1, 2, EdgeKind::finite, 2.0, 1.0},
                                         Edge{"ac", 0, 2, EdgeKind::finite, 3.0, 0.5}});
  const auto c = cycle_basis(g).cycles.at(0);
  double expected = 0.0;
  for (const auto& s : c.steps) expected += s.sign * g.edge(s.edge).A * g.edge(s.edge).length;
  CHECK(std::abs(flux(c, g)) == doctest::Approx(1.5 / (2.0 * pi)).epsilon(1e-14));
  CHECK(flux(c, g) == doctest::Approx(expected / (2.0 * pi)));
}

TEST_CASE("winding ties go to the smaller integer") {
  CHECK(nearest_winding(0.5) == 0);
  CHECK(nearest_winding(1.5) == 1);
  CHECK(nearest_winding(-0.5) == -1);
  CHECK(nearest_winding(0.51) == 1);
  CHECK(nearest_winding(-2.2) == -2);
}

TEST_CASE("effective potential values") {
  CHECK(effective_potential(0.5, 2.0 * pi) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(effective_potential(3.0, 2.0) == 0.0);
  CHECK(effective_potential(-1.0, 2.0) == 0.0);
  CHECK(effective_potential(0.5, 1.0) == doctest::Approx(pi * pi).epsilon(1e-14));
  const auto g = loop(2.0 * pi, 0.5);
  CHECK(effective_potential(cycle_basis(g).cycles[0], g) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("effective potential: periodicity and bounds") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> alpha(-3.0, 3.0), length(0.5, 7.0);
  std::uniform_int_distribution<int> shift(-4, 4);
  for (int k = 0; k < 1000; ++k) {
    const double a = alpha(rng), l = length(rng);
    const double phi = effective_potential(a, l);
    CHECK(phi >= 0.0);
    CHECK(phi <= pi * pi / (l * l) * (1.0 + 1e-14));
    CHECK(effective_potential(a + shift(rng), l) == doctest::Approx(phi).epsilon(1e-12));
  }
}

TEST_CASE("potential shift by 2 pi k / length leaves the loop potential unchanged") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> A(-2.0, 2.0), length(0.5, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double l = length(rng), a = A(rng);
    const auto g = loop(l, a);
    const auto h = loop(l, a + 2.0 * pi * 3 / l);
    CHECK(effective_potential(cycle_basis(h).cycles[0], h) ==
          doctest::Approx(effective_potential(cycle_basis(g).cycles[0], g)).epsilon(1e-10));
    // A single constant potential also bounds the cycle potential.
    CHECK(effective_potential(cycle_basis(g).cycles[0], g) <= a * a * (1.0 + 1e-12));
  }
}

TEST_CASE("effective field on the standard graphs") {
  const auto zero = generators::tadpole(1.0);
  CHECK(effective_field(zero, cycle_basis(zero)).is_zero());

  const auto tad = generators::tadpole(pi, 0.5);
  const auto W = effective_field(tad, cycle_basis(tad));
  CHECK(W.per_edge[tad.edge_index("loop")] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(W.per_edge[tad.edge_index("tail")] == 0.0);
  CHECK(W.max() == doctest::Approx(0.25));

  const auto fig = generators::figure_eight(2.0 * pi, 2.0 * pi, 0.5, 0.5);
  const auto F = effective_field(fig, cycle_basis(fig));
  CHECK(F.per_edge[0] == doctest::Approx(0.25));
  CHECK(F.per_edge[1] == doctest::Approx(0.25));
}

TEST_CASE("overlapping cycles add their potentials edgewise") {
  // Theta graph: three parallel edges between two vertices.
  const MetricGraph g({"a", "b"}, {Edge{"x", 0, 1, EdgeKind::finite, 1.0, 0.3},
                                   Edge{"y", 0, 1, EdgeKind::finite, 2.0, -0.7},
                                   Edge{"z", 0, 1, EdgeKind::finite, 1.5, 1.1}});
  const auto basis = cycle_basis(g);
  REQUIRE(basis.cycles.size() == 2);
  const auto W = effective_field(g, basis);
  double total = 0.0;
  for (std::size_t e = 0; e < 3; ++e) {
    double expected = 0.0;
    for (const auto& c : basis.cycles)
      if (c.contains(e)) expected += effective_potential(c, g);
    CHECK(W.per_edge[e] == doctest::Approx(expected).epsilon(1e-14));
    total = std::max(total, W.per_edge[e]);
  }
  CHECK(total <= effective_potential(basis.cycles[0], g) + effective_potential(basis.cycles[1], g) + 1e-14);
  CHECK_THROWS_AS(optimal_gauge(g, basis), GraphError);
}

TEST_CASE("optimal phase on a loop") {
  const auto g = loop(2.0 * pi, 0.5);
  const auto theta = optimal_phase(cycle_basis(g).cycles[0], g);
  REQUIRE(theta.per_edge[0].defined);
  CHECK(theta.per_edge[0].slope == doctest::Approx(0.0).epsilon(1e-14));
  const double gap = g.edge(0).A - theta.per_edge[0].slope;
  CHECK(gap * gap == doctest::Approx(0.25));

  const auto integer = loop(1.0, 2.0 * pi);
  const auto t2 = optimal_phase(cycle_basis(integer).cycles[0], integer);
  CHECK(t2.per_edge[0].slope == doctest::Approx(2.0 * pi).epsilon(1e-14));
}

TEST_CASE("optimal phase on random cycles") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const auto g = generators::random_graph(rng);
    for (const auto& c : cycle_basis(g).cycles) {
      const auto theta = optimal_phase(c, g);
      const double phi = effective_potential(c, g);
      const long m = nearest_winding(flux(c, g));
      double increment = 0.0, along = 0.0;
      for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        const auto& e = g.edge(s.edge);
        const auto& ph = theta.per_edge[s.edge];
        CHECK((e.A - ph.slope) * (e.A - ph.slope) == doctest::Approx(phi).epsilon(1e-10));
        increment += s.sign * ph.slope * e.length;
        // Continuity along the walk.
        const double start = s.sign > 0 ? ph(0.0) : ph(e.length);
        const double end = s.sign > 0 ? ph(e.length) : ph(0.0);
        if (i == 0) along = start;
        CHECK(start == doctest::Approx(along).epsilon(1e-12));
        along = end;
      }
      CHECK(increment == doctest::Approx(2.0 * pi * static_cast<double>(m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("optimal gauge is continuous modulo 2 pi at every vertex") {
  std::mt19937_64 rng(21);
  int tested = 0;
  for (int k = 0; k < 300 && tested < 60; ++k) {
    const auto g = generators::random_graph(rng);
    const auto basis = cycle_basis(g);
    PhaseField theta;
    try {
      theta = optimal_gauge(g, basis);
    } catch (const GraphError&) {
      continue;  // basis cycles share an edge
    }
    ++tested;
    std::vector<std::vector<double>> at(g.vertex_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& edge = g.edge(e);
      const auto& ph = theta.per_edge[e];
      REQUIRE(ph.defined);
      at[edge.from].push_back(ph(0.0));
      if (!edge.is_half_line()) at[edge.to].push_back(ph(edge.length));
    }
    for (const auto& phases : at)
      for (double p : phases) CHECK(std::abs(wrap(p - phases.front())) < 1e-9);
    const auto W = effective_field(g, basis);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const double gap = g.edge(e).A - theta.per_edge[e].slope;
      CHECK(gap * gap == doctest::Approx(W.per_edge[e]).epsilon(1e-10));
    }
  }
  CHECK(tested >= 30);
}

TEST_CASE("gauge lift") {
  const auto mesh = build_mesh(generators::tadpole(1.0, 0.4), 0.05, 3.0);
  const auto c = competitor(1.0, 1.0);
  const auto v = interpolate_real([&](std::size_t e, double x) { return e == 0 ? c.loop(x - 1.0) : c.tail(x); }, mesh);

  PhaseField zero{std::vector<EdgePhase>(2, EdgePhase{true, 0.0, 0.0})};
  const auto u0 = gauge_lift(v, zero);
  for (Eigen::Index i = 0; i < v.values.size(); ++i) CHECK(u0.values[i] == std::complex<double>(v.values[i], 0.0));

  const auto g = mesh->graph();
  const auto u = gauge_lift(v, optimal_gauge(g, cycle_basis(g)));
  for (Eigen::Index i = 0; i < v.values.size(); ++i) CHECK(std::abs(u.values[i]) == doctest::Approx(v.values[i]));
}

TEST_CASE("gauge identity converges at second order on the half-flux tadpole") {
  const auto g = generators::tadpole(1.0, pi / 2.0);
  const auto basis = cycle_basis(g);
  const auto W = effective_field(g, basis);
  CHECK(W.per_edge[0] == doctest::Approx(pi * pi / 4.0).epsilon(1e-12));
  const auto theta = optimal_gauge(g, basis);
  const auto c = competitor(1.0, 1.0);
  std::vector<double> gaps;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto mesh = build_mesh(g, h, 30.0);
    const auto v = interpolate_real([&](std::size_t e, double x) { return e == 0 ? c.loop(x - 1.0) : c.tail(x); }, mesh);
    gaps.push_back(std::abs(energy_magnetic(gauge_lift(v, theta), 4.0).total - energy_reduced(v, W, 4.0).total));
  }
  CHECK(std::log2(gaps[0] / gaps[1]) > 1.9);
  CHECK(std::log2(gaps[1] / gaps[2]) > 1.9);
  CHECK(gaps[2] < 1e-6);
}

TEST_CASE("optimal phase beats any phase with the same winding for constant modulus") {
  // For |u| constant on a loop the magnetic term reduces to a 1D quadratic
  // in theta', minimized exactly by the constant-defect phase.
  std::mt19937_64 rng(33);
  std::normal_distribution<double> noise(0.0, 0.5);
  const double l = 3.0, A = 1.3;
  const auto g = loop(l, A);
  const auto basis = cycle_basis(g);
  const auto mesh = build_mesh(g, 0.01, 1.0);
  const auto v = interpolate_real([](std::size_t, double) { return 0.7; }, mesh);
  const double reduced = energy_reduced(v, effective_field(g, basis), 4.0).total;
  const long m = nearest_winding(flux(basis.cycles[0], g));
  for (int k = 0; k < 20; ++k) {
    const double c1 = noise(rng), c2 = noise(rng);
    ComplexField u(mesh);
    const auto& em = mesh->edge(0);
    for (std::size_t j = 0; j < em.dofs.size(); ++j) {
      const double x = em.arclength(j);
      const double theta = 2.0 * pi * static_cast<double>(m) * x / l + c1 * std::sin(2.0 * pi * x / l) +
                           c2 * std::sin(4.0 * pi * x / l);
      u.values[static_cast<Eigen::Index>(em.dofs[j])] = std::polar(0.7, theta);
    }
    CHECK(energy_magnetic(u, 4.0).total >= reduced - 1e-6);
  }
}
