#include "qcav/vortex.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcav/errors.hpp"

namespace qcav {

namespace {

constexpr double kOverflowGamma = 700.0;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

}  // namespace

void SuperfluidSpec::validate() const {
  require_positive(m_s, "superfluid mass m_s");
  require_positive(r0, "core cut-off r0");
  require_positive(q_s, "superfluid charge q_s");
}

SuperconductorSpec SuperconductorSpec::from_lengths(double e_c, double lambda, double xi) {
  require_positive(xi, "coherence length xi");
  SuperconductorSpec sc{e_c, lambda, xi, lambda / xi};
  sc.validate();
  return sc;
}

SuperconductorSpec SuperconductorSpec::from_k(double e_c, double lambda, double k) {
  require_positive(k, "Ginzburg-Landau parameter k");
  SuperconductorSpec sc{e_c, lambda, lambda / k, k};
  sc.validate();
  return sc;
}

void SuperconductorSpec::validate() const {
  require_positive(e_c, "Cooper-pair charge e_c");
  require_positive(lambda, "penetration depth lambda");
  require_positive(xi, "coherence length xi");
  if (std::abs(k - lambda / xi) > 1e-12 * std::abs(k)) {
    throw DomainError("Ginzburg-Landau parameter k must equal lambda/xi");
  }
  if (!(k > 1.0 / std::numbers::sqrt2)) {
    throw DomainError("type-II condition violated: k = " + std::to_string(k) +
                      " must exceed 1/sqrt(2)");
  }
}

double circulation_quantum(int n, double m_s, const PhysicalConstants& c) {
  require_positive(m_s, "mass m_s");
  return 2.0 * std::numbers::pi * c.hbar * n / m_s;
}

double superfluid_velocity(double r, double m_s, const PhysicalConstants& c) {
  require_positive(r, "distance r");
  require_positive(m_s, "mass m_s");
  return c.hbar / (m_s * r);
}

double vorticity(double r, double m_s, const PhysicalConstants& c) {
  require_positive(r, "distance r");
  require_positive(m_s, "mass m_s");
  return 2.0 * c.hbar / (m_s * r * r);
}

VortexProfile vortex_profile(double r, double m_s, const PhysicalConstants& c) {
  return {r, superfluid_velocity(r, m_s, c), vorticity(r, m_s, c)};
}

double flux_quantum(int n, double e_c, const PhysicalConstants& c) {
  require_positive(e_c, "charge e_c");
  return 2.0 * std::numbers::pi * c.hbar * n / e_c;
}

double abrikosov_core_field(const SuperconductorSpec& sc, const PhysicalConstants& c) {
  sc.validate();
  if (!(sc.k > 1.0)) {
    throw DomainError("Abrikosov core field needs ln k > 0: k = " + std::to_string(sc.k) +
                      " must exceed 1");
  }
  return c.hbar / (sc.e_c * sc.lambda * sc.lambda) * std::log(sc.k);
}

double cyclotron_field(const SuperfluidSpec& sf, const PhysicalConstants& c) {
  sf.validate();
  return c.hbar / (sf.r0 * sf.r0 * sf.q_s);
}

double cyclotron_frequency(double B, const SuperfluidSpec& sf) {
  sf.validate();
  require_positive(B, "magnetic field B");
  return sf.q_s * B / (2.0 * std::numbers::pi * sf.m_s);
}

double eta_coupling(const SuperfluidSpec& sf) {
  sf.validate();
  return sf.r0 * sf.r0 * sf.m_s / 2.0;
}

GlMatch gl_parameter_match(const SuperfluidSpec& sf, double sc_charge, double lambda) {
  sf.validate();
  require_positive(sc_charge, "superconductor charge e_c");
  require_positive(lambda, "penetration depth lambda");
  const double delta = sc_charge * lambda * lambda;
  const double rho = sf.q_s * sf.r0 * sf.r0;
  GlMatch match;
  match.gamma = delta / rho;
  if (match.gamma <= kOverflowGamma) match.k_required = std::exp(match.gamma);
  return match;
}

double gl_inverse_match(double k, const SuperfluidSpec& sf, double sc_charge) {
  sf.validate();
  require_positive(sc_charge, "superconductor charge e_c");
  if (!(k > 1.0)) {
    throw DomainError("inverse match needs k > 1, got " + std::to_string(k));
  }
  return std::sqrt(std::log(k) * sf.q_s * sf.r0 * sf.r0 / sc_charge);
}

CouplingDerivation derive_coupling(const SuperfluidSpec& sf, const SuperconductorSpec& sc,
                                   const PhysicalConstants& c) {
  c.validate();
  sf.validate();
  sc.validate();
  CouplingDerivation d;
  d.eta = eta_coupling(sf);
  d.rho = sf.q_s * sf.r0 * sf.r0;
  d.delta = sc.e_c * sc.lambda * sc.lambda;
  const GlMatch match = gl_parameter_match(sf, sc.e_c, sc.lambda);
  d.gamma = match.gamma;
  d.k_required = match.k_required;
  d.B_cycl = cyclotron_field(sf, c);
  d.f_c = cyclotron_frequency(d.B_cycl, sf);
  d.B0_abrikosov = abrikosov_core_field(sc, c);
  return d;
}

}  // namespace qcav
