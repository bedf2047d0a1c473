#include "magnls/checks.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "magnls/closed_form.hpp"
#include "magnls/functional.hpp"
#include "magnls/magnetics.hpp"

namespace magnls {

namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

std::vector<CheckResult> check_gn() {
  std::vector<CheckResult> out;
  const auto mesh = build_mesh(generators::line(), 1e-3, 40.0);
  const auto s = soliton(1.0, 4.0);
  const auto v = interpolate_real([&](std::size_t, double x) { return s(x); }, mesh);
  const auto r = gn_report(v, 4.0);
  const double expected_p = (1.0 / 12.0) / std::sqrt(1.0 / 48.0);
  const double expected_inf = s.a / std::pow(1.0 / 48.0, 0.25);
  out.push_back({"gn", "soliton ratio_p", r.ratio_p && std::abs(*r.ratio_p - expected_p) < 1e-4,
                 "got " + fmt(r.ratio_p.value_or(NAN)) + " expected " + fmt(expected_p)});
  out.push_back({"gn", "soliton ratio_inf", r.ratio_inf && std::abs(*r.ratio_inf - expected_inf) < 1e-4,
                 "got " + fmt(r.ratio_inf.value_or(NAN)) + " expected " + fmt(expected_inf)});
  return out;
}

std::vector<CheckResult> check_gauge() {
  // Tadpole with half-integer flux and the competitor lifted by the optimal phase.
  const double L = 1.0;
  const auto g = generators::tadpole(L, std::numbers::pi / 2.0);
  const auto basis = cycle_basis(g);
  const auto W = effective_field(g, basis);
  const auto theta = optimal_gauge(g, basis);
  const auto c = competitor(1.0, L);
  std::vector<double> gaps;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto mesh = build_mesh(g, h, 30.0);
    const auto v = interpolate_real([&](std::size_t e, double x) { return e == 0 ? c.loop(x - L) : c.tail(x); }, mesh);
    const double reduced = energy_reduced(v, W, 4.0).total;
    const double lifted = energy_magnetic(gauge_lift(v, theta), 4.0).total;
    gaps.push_back(std::abs(lifted - reduced));
  }
  const double order = std::log2(gaps[1] / gaps[2]);
  return {{"gauge", "lifted energy matches reduced energy", gaps[2] < 1e-4, "gap " + fmt(gaps[2])},
          {"gauge", "gap converges at second order", order > 1.9, "observed order " + fmt(order)}};
}

std::vector<CheckResult> check_diamagnetic(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  int failures = 0, total = 0;
  for (int k = 0; k < 5; ++k) {
    const auto g = generators::random_graph(rng);
    const auto mesh = build_mesh(g, 0.1, 2.0);
    for (int j = 0; j < 20; ++j, ++total) {
      ComplexField u(mesh);
      for (auto& z : u.values) z = {normal(rng), normal(rng)};
      if (!diamagnetic_check(u, 1e-10, 0.0)) ++failures;
    }
  }
  return {{"diamagnetic", "random complex fields", failures == 0,
           std::to_string(total - failures) + "/" + std::to_string(total) + " hold"}};
}

std::vector<CheckResult> check_gradient(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto g = generators::random_graph(rng);
    const auto mesh = build_mesh(g, 0.2, 3.0);
    const auto W = effective_field(g, cycle_basis(g));
    RealField v(mesh), dir(mesh);
    for (std::size_t i = 0; i < mesh->free_count(); ++i) {
      v.values[static_cast<Eigen::Index>(i)] = normal(rng);
      dir.values[static_cast<Eigen::Index>(i)] = normal(rng);
    }
    const double eps = 1e-6;
    RealField plus = v, minus = v;
    plus.values += eps * dir.values;
    minus.values -= eps * dir.values;
    const double fd = (energy_reduced(plus, W, 4.0).total - energy_reduced(minus, W, 4.0).total) / (2.0 * eps);
    const double exact = gradient_reduced(v, W, 4.0).values.dot(dir.values);
    worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
  }
  return {{"gradient", "central differences match the gradient", worst < 1e-6, "worst relative error " + fmt(worst)}};
}

}  // namespace

std::vector<std::string> check_suites() { return {"gn", "gauge", "diamagnetic", "gradient"}; }

std::vector<CheckResult> run_checks(const std::string& suite, unsigned seed) {
  if (suite == "gn") return check_gn();
  if (suite == "gauge") return check_gauge();
  if (suite == "diamagnetic") return check_diamagnetic(seed);
  if (suite == "gradient") return check_gradient(seed);
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& s : check_suites()) {
      auto part = run_checks(s, seed);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown check suite '" + suite + "'");
}

}  // namespace magnls
