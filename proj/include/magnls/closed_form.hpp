#pragma once

#include <stdexcept>

namespace magnls {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ground state of the focusing NLS on the real line,
/// phi(x) = a * sech(b x)^q with q = 2/(p-2), solving
/// u'' + |u|^{p-2} u = -omega u and carrying mass mu.
struct SolitonParams {
  double p = 4.0;
  double mu = 0.0;
  double alpha = 0.0;  // 2/(6-p): amplitude exponent in mu
  double beta = 0.0;   // (p-2)/(6-p): inverse-width exponent in mu
  double q = 1.0;
  double a = 0.0;      // amplitude
  double b = 0.0;      // inverse width
  double omega = 0.0;  // -b^2 q^2

  double operator()(double x) const;
  double derivative(double x) const;
};

SolitonParams soliton(double mu, double p = 4.0);

/// E(phi_mu, R) = -theta_p mu^{2 beta + 1}; -mu^3/96 for p = 4.
double soliton_energy(double mu, double p = 4.0);

/// theta_p, the energy of the unit-mass soliton with reversed sign.
double soliton_energy_constant(double p);

/// Half of the line soliton at twice the mass; -mu^3/24 for p = 4.
double halfline_energy(double mu, double p = 4.0);

struct RBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// 0 <= R(mu, G) <= (2^{2 beta} - 1) theta_p mu^{2 beta + 1}.
RBounds r_bounds(double mu, double p = 4.0);

/// Unique positive root m of mu = 2 m (1 + tanh(m L)).
double tadpole_mass_relation(double mu, double half_loop);

/// sech profile competitor on the tadpole (p = 4) with loop [-L, L] and the
/// half-line attached at x = +-L.
struct Competitor {
  double mu = 0.0;
  double L = 0.0;
  double m = 0.0;
  double T = 0.0;  // tanh(m L)

  double loop(double x) const;       // x in [-L, L]
  double tail(double y) const;       // y in [0, inf)
  double loop_slope(double x) const;
  double tail_slope(double y) const;
  double vertex_value() const { return loop(L); }
  double peak_value() const { return loop(0.0); }
  double loop_mass() const { return 4.0 * m * T; }
  double tail_mass() const { return 2.0 * m * (1.0 - T); }
};

Competitor competitor(double mu, double half_loop, double p = 4.0);

struct CompetitorEnergy {
  double nls = 0.0;       // (1/3) m^3 (2T^3 - 3T - 1)
  double magnetic = 0.0;  // (1/2) phi * loop mass
  double total = 0.0;
};

CompetitorEnergy competitor_energy(double mu, double half_loop, double phi, double p = 4.0);

struct ExistenceThreshold {
  double m = 0.0;
  double T = 0.0;
  double soliton_energy = 0.0;
  double competitor_nls = 0.0;
  double direct = 0.0;  // largest phi with competitor energy <= soliton energy
  double paper = 0.0;   // m^2 (1 + 3T) / sinh(2 m L), reference value
};

ExistenceThreshold existence_threshold(double mu, double half_loop, double p = 4.0);

struct NonexistenceVerdict {
  bool existence_not_excluded = true;
  bool zero_loop_mass = false;  // ground states carry positive loop mass
};

/// Necessary condition (1/2) phi * m_loop < R for a ground state holding
/// loop mass m_loop.
NonexistenceVerdict nonexistence_check(double phi, double loop_mass, double R);

/// Same check with R replaced by its closed-form upper bound.
NonexistenceVerdict nonexistence_check_bound(double phi, double loop_mass, double mu, double p = 4.0);

}  // namespace magnls
