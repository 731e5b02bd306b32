#pragma once

// Closed-form superfluid and Abrikosov vortex relations. All functions are
// pure and take SI inputs; constants come from a PhysicalConstants value.

#include <optional>

#include "qcav/constants.hpp"

namespace qcav {

/// Charged superfluid particle orbiting a vortex core.
struct SuperfluidSpec {
  double m_s = codata2018.m_he3;            // kg
  double r0 = 1.0e-10;                      // core cut-off, m
  double q_s = 2.0 * codata2018.e_charge;   // C

  void validate() const;
};

/// Type-II superconductor hosting the Abrikosov lattice. `k` is always
/// lambda / xi; construct through from_lengths() or from_k().
struct SuperconductorSpec {
  double e_c = 2.0 * codata2018.e_charge;  // Cooper-pair charge, C
  double lambda = 1.0e-7;                  // penetration depth, m
  double xi = 1.0e-8;                      // coherence length, m
  double k = 10.0;                         // Ginzburg-Landau parameter

  static SuperconductorSpec from_lengths(double e_c, double lambda, double xi);
  static SuperconductorSpec from_k(double e_c, double lambda, double k);

  /// Positivity, k == lambda/xi, and the type-II condition k > 1/sqrt(2).
  void validate() const;
};

struct VortexProfile {
  double r = 0.0;  // m
  double v = 0.0;  // m/s
  double w = 0.0;  // 1/s
};

/// Result of matching the Abrikosov core field to the cyclotron field.
/// k_required = exp(gamma) is absent when gamma > 700 (overflow); gamma itself
/// is ln(k_required) and is always exact.
struct GlMatch {
  double gamma = 0.0;
  std::optional<double> k_required;

  bool overflow() const { return !k_required.has_value(); }
};

struct CouplingDerivation {
  double eta = 0.0;           // kg m^2
  double rho = 0.0;           // q_s r0^2, C m^2
  double delta = 0.0;         // e_c lambda^2, C m^2
  double gamma = 0.0;         // delta / rho
  std::optional<double> k_required;
  double B_cycl = 0.0;        // T
  double f_c = 0.0;           // Hz
  double B0_abrikosov = 0.0;  // T
};

/// 2 pi hbar n / m_s, in m^2/s.
double circulation_quantum(int n, double m_s, const PhysicalConstants& c = codata2018);

/// hbar / (m_s r).
double superfluid_velocity(double r, double m_s, const PhysicalConstants& c = codata2018);

/// 2 hbar / (m_s r^2).
double vorticity(double r, double m_s, const PhysicalConstants& c = codata2018);

VortexProfile vortex_profile(double r, double m_s, const PhysicalConstants& c = codata2018);

/// 2 pi hbar n / e_c, in Wb.
double flux_quantum(int n, double e_c, const PhysicalConstants& c = codata2018);

/// Core field (hbar / (e_c lambda^2)) ln k. Requires k > 1.
double abrikosov_core_field(const SuperconductorSpec& sc, const PhysicalConstants& c = codata2018);

/// Field at which the Lorentz force balances the centripetal force at r0:
/// hbar / (r0^2 q_s).
double cyclotron_field(const SuperfluidSpec& sf, const PhysicalConstants& c = codata2018);

/// Standard cyclotron frequency q_s B / (2 pi m_s).
double cyclotron_frequency(double B, const SuperfluidSpec& sf);

/// Spin/vorticity proportionality r0^2 m_s / 2, chosen so that
/// eta * vorticity(r0) == hbar.
double eta_coupling(const SuperfluidSpec& sf);

/// gamma = (e_c lambda^2) / (q_s r0^2); the required k is exp(gamma).
GlMatch gl_parameter_match(const SuperfluidSpec& sf, double sc_charge, double lambda);

/// Penetration depth that makes ln k equal gamma: sqrt(ln k q_s r0^2 / e_c).
double gl_inverse_match(double k, const SuperfluidSpec& sf, double sc_charge);

/// Every derived coupling quantity in one record.
CouplingDerivation derive_coupling(const SuperfluidSpec& sf, const SuperconductorSpec& sc,
                                   const PhysicalConstants& c = codata2018);

}  // namespace qcav
