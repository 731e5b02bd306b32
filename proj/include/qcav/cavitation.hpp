#pragma once

// Nucleation rate J = J0 exp(-dOmega_max / T*) and its enhancement by the
// vortex coupling, exp(sum_i b_i s_i). Everything is carried as logarithms;
// linear values are derived and flagged when they overflow a double.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "qcav/ising.hpp"
#include "qcav/lattice.hpp"

namespace qcav {

struct CavitationParams {
  double J0 = 1.0;               // bubbles / (m^3 s)
  double delta_omega_max = 0.0;  // barrier, energy units of T_star
  double T_star = 1.0;           // crossover temperature, k_B absorbed

  void validate() const;
};

enum class EnhancementSource { exact, mc };
enum class EnhancementMode { instant, thermal };

std::string_view to_string(EnhancementSource s);
std::string_view to_string(EnhancementMode m);
EnhancementSource parse_enhancement_source(std::string_view text);
EnhancementMode parse_enhancement_mode(std::string_view text);

struct EnhancementReport {
  std::optional<double> ln_factor_instant;
  double ln_factor_thermal = 0.0;
  std::optional<double> stderr_ln_factor;  // MC only, needs >= 2 samples
  EnhancementSource source = EnhancementSource::exact;
  std::size_t n_samples = 0;
};

struct RateResult {
  double ln_rate = 0.0;
  std::optional<double> rate;  // absent on overflow

  bool overflow() const { return !rate.has_value(); }
};

double base_rate(const CavitationParams& p);
double ln_base_rate(const CavitationParams& p);

/// sum_i b_i s_i for one configuration: the log of its rate enhancement.
double enhancement_instant(const TriangularLattice& lattice);

/// log <exp(sum b s)> from the exact oracle.
EnhancementReport enhancement_thermal(const ExactResult& exact);

/// log-mean-exp over sampled log factors (one span per chain) with a blocked
/// jackknife error. Throws DomainError when there are no samples.
EnhancementReport enhancement_thermal(std::span<const std::span<const double>> ln_factors,
                                      std::size_t blocks_per_chain);

/// ln_rate = ln(base_rate) + ln_factor for the chosen mode.
RateResult enhanced_rate(const CavitationParams& p, const EnhancementReport& report,
                         EnhancementMode mode);

}  // namespace qcav
