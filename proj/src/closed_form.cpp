#include "magnls/closed_form.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <string>

namespace magnls {

namespace {

void require_power(double p) {
  if (!(p > 2.0 && p < 6.0)) throw DomainError("nonlinearity power must lie in (2, 6), got " + std::to_string(p));
}

void require_cubic(double p) {
  if (p != 4.0) throw DomainError("closed-form tadpole competitor is only available for p = 4");
}

// int_R sech(x)^{2s} dx = sqrt(pi) Gamma(s) / Gamma(s + 1/2)
double sech_power_integral(double s) {
  return std::sqrt(M_PI) * std::exp(std::lgamma(s) - std::lgamma(s + 0.5));
}

double sech(double x) {
  // 1/cosh overflows gracefully to 0 for large |x|
  return 1.0 / std::cosh(x);
}

}  // namespace

double SolitonParams::operator()(double x) const {
  return a * std::pow(sech(b * x), q);
}

double SolitonParams::derivative(double x) const {
  return -a * b * q * std::pow(sech(b * x), q) * std::tanh(b * x);
}

SolitonParams soliton(double mu, double p) {
  require_power(p);
  if (mu < 0.0) throw DomainError("mass must be nonnegative");
  SolitonParams s;
  s.p = p;
  s.mu = mu;
  s.alpha = 2.0 / (6.0 - p);
  s.beta = (p - 2.0) / (6.0 - p);
  s.q = 2.0 / (p - 2.0);
  if (p == 4.0) {
    s.a = mu / (2.0 * std::sqrt(2.0));
    s.b = mu / 4.0;
  } else {
    // a^{p-2} = b^2 q (q+1) and mu = a^2 / b * I(q) give b ~ mu^beta.
    const double shape = std::pow(s.q * (s.q + 1.0), s.q) * sech_power_integral(s.q);
    s.b = std::pow(mu / shape, s.beta);
    s.a = std::pow(s.b * s.b * s.q * (s.q + 1.0), 1.0 / (p - 2.0));
  }
  s.omega = -s.b * s.b * s.q * s.q;
  return s;
}

double soliton_energy_constant(double p) {
  require_power(p);
  if (p == 4.0) return 1.0 / 96.0;
  const auto s = soliton(1.0, p);
  // (1/2) int phi'^2 = (1/2) a^2 b q^2 (I(q) - I(q+1)); int phi^p = a^p / b * I(pq/2)
  const double kinetic = 0.5 * s.a * s.a * s.b * s.q * s.q *
                         (sech_power_integral(s.q) - sech_power_integral(s.q + 1.0));
  const double potential = std::pow(s.a, p) / s.b * sech_power_integral(0.5 * p * s.q) / p;
  return potential - kinetic;
}

double soliton_energy(double mu, double p) {
  require_power(p);
  if (p == 4.0) return -mu * mu * mu / 96.0;
  const double beta = (p - 2.0) / (6.0 - p);
  return -soliton_energy_constant(p) * std::pow(mu, 2.0 * beta + 1.0);
}

double halfline_energy(double mu, double p) {
  return 0.5 * soliton_energy(2.0 * mu, p);
}

RBounds r_bounds(double mu, double p) {
  require_power(p);
  const double beta = (p - 2.0) / (6.0 - p);
  return {0.0, (std::pow(2.0, 2.0 * beta) - 1.0) * soliton_energy_constant(p) * std::pow(mu, 2.0 * beta + 1.0)};
}

double tadpole_mass_relation(double mu, double half_loop) {
  if (!(mu > 0.0) || !(half_loop > 0.0)) throw DomainError("tadpole mass relation needs mu > 0 and L > 0");
  auto f = [&](double m) { return 2.0 * m * (1.0 + std::tanh(m * half_loop)) - mu; };
  // f(0) = -mu < 0 and f(mu/2) = mu tanh(mu L / 2) > 0
  auto tol = [](double lo, double hi) { return hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi; };
  const auto [lo, hi] = boost::math::tools::bisect(f, 0.0, 0.5 * mu, tol);
  return 0.5 * (lo + hi);
}

double Competitor::loop(double x) const {
  return std::sqrt(2.0) * m * sech(m * x);
}

double Competitor::tail(double y) const {
  return std::sqrt(2.0) * m * sech(m * (y + L));
}

double Competitor::loop_slope(double x) const {
  return -std::sqrt(2.0) * m * m * sech(m * x) * std::tanh(m * x);
}

double Competitor::tail_slope(double y) const {
  return -std::sqrt(2.0) * m * m * sech(m * (y + L)) * std::tanh(m * (y + L));
}

Competitor competitor(double mu, double half_loop, double p) {
  require_cubic(p);
  Competitor c;
  c.mu = mu;
  c.L = half_loop;
  c.m = tadpole_mass_relation(mu, half_loop);
  c.T = std::tanh(c.m * half_loop);
  return c;
}

CompetitorEnergy competitor_energy(double mu, double half_loop, double phi, double p) {
  const auto c = competitor(mu, half_loop, p);
  const double T = c.T;
  CompetitorEnergy e;
  e.nls = c.m * c.m * c.m * (2.0 * T * T * T - 3.0 * T - 1.0) / 3.0;
  e.magnetic = 0.5 * phi * c.loop_mass();
  e.total = e.nls + e.magnetic;
  return e;
}

ExistenceThreshold existence_threshold(double mu, double half_loop, double p) {
  const auto c = competitor(mu, half_loop, p);
  ExistenceThreshold t;
  t.m = c.m;
  t.T = c.T;
  t.soliton_energy = soliton_energy(mu, p);
  t.competitor_nls = competitor_energy(mu, half_loop, 0.0, p).nls;
  // The magnetic energy of the competitor is phi * 2 m T. Through the mass
  // relation, E_R - E_NLS = (m^3 / 4)(1 + 3T) sech^2(mL), which avoids the
  // cancellation of the raw difference at large mass.
  const double sech_mL = sech(c.m * half_loop);
  t.direct = c.m * c.m * (1.0 + 3.0 * c.T) * sech_mL * sech_mL / (8.0 * c.T);
  t.paper = c.m * c.m * (1.0 + 3.0 * c.T) / std::sinh(2.0 * c.m * half_loop);
  return t;
}

NonexistenceVerdict nonexistence_check(double phi, double loop_mass, double R) {
  NonexistenceVerdict v;
  v.zero_loop_mass = loop_mass <= 0.0;
  v.existence_not_excluded = phi == 0.0 || 0.5 * phi * loop_mass < R;
  return v;
}

NonexistenceVerdict nonexistence_check_bound(double phi, double loop_mass, double mu, double p) {
  return nonexistence_check(phi, loop_mass, r_bounds(mu, p).upper);
}

}  // namespace magnls
