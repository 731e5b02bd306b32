#include "qcav/cavitation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qcav/errors.hpp"
#include "qcav/stats.hpp"

namespace qcav {

namespace {

// Largest x with exp(x) finite.
const double kMaxLog = std::log(std::numeric_limits<double>::max());

}  // namespace

void CavitationParams::validate() const {
  if (!(J0 >= 0.0) || !std::isfinite(J0)) throw DomainError("rate prefactor J0 must be >= 0");
  if (!(T_star > 0.0) || !std::isfinite(T_star)) throw DomainError("T_star must be positive");
  if (!(delta_omega_max >= 0.0) || !std::isfinite(delta_omega_max)) {
    throw DomainError("barrier delta_omega_max must be >= 0");
  }
}

std::string_view to_string(EnhancementSource s) {
  return s == EnhancementSource::exact ? "exact" : "mc";
}

std::string_view to_string(EnhancementMode m) {
  return m == EnhancementMode::instant ? "instant" : "thermal";
}

EnhancementSource parse_enhancement_source(std::string_view text) {
  if (text == "exact") return EnhancementSource::exact;
  if (text == "mc") return EnhancementSource::mc;
  throw ConfigError("unknown enhancement source '" + std::string(text) + "' (expected exact or mc)");
}

EnhancementMode parse_enhancement_mode(std::string_view text) {
  if (text == "instant") return EnhancementMode::instant;
  if (text == "thermal") return EnhancementMode::thermal;
  throw ConfigError("unknown enhancement mode '" + std::string(text) +
                    "' (expected instant or thermal)");
}

double ln_base_rate(const CavitationParams& p) {
  p.validate();
  return std::log(p.J0) - p.delta_omega_max / p.T_star;
}

double base_rate(const CavitationParams& p) {
  p.validate();
  return p.J0 * std::exp(-p.delta_omega_max / p.T_star);
}

double enhancement_instant(const TriangularLattice& lattice) { return field_term(lattice); }

EnhancementReport enhancement_thermal(const ExactResult& exact) {
  EnhancementReport r;
  r.ln_factor_thermal = exact.ln_mean_exp_field;
  r.source = EnhancementSource::exact;
  r.n_samples = exact.states;
  return r;
}

EnhancementReport enhancement_thermal(std::span<const std::span<const double>> ln_factors,
                                      std::size_t blocks_per_chain) {
  const BlockPartition blocks(ln_factors, blocks_per_chain);
  if (blocks.sample_count() == 0) throw DomainError("thermal enhancement: empty sample set");
  const Estimate e = blocked_log_mean_exp(blocks);
  EnhancementReport r;
  r.ln_factor_thermal = e.value;
  r.stderr_ln_factor = e.error;
  r.source = EnhancementSource::mc;
  r.n_samples = blocks.sample_count();
  return r;
}

RateResult enhanced_rate(const CavitationParams& p, const EnhancementReport& report,
                         EnhancementMode mode) {
  double ln_factor = report.ln_factor_thermal;
  if (mode == EnhancementMode::instant) {
    if (!report.ln_factor_instant) {
      throw DomainError("instant enhancement requested but the report has no configuration");
    }
    ln_factor = *report.ln_factor_instant;
  }
  p.validate();
  // J0 stays outside the exponential so that neutral combinations
  // (ln_factor == 0, or ln_factor == barrier / T*) reproduce J0 exactly.
  const double exponent = ln_factor - p.delta_omega_max / p.T_star;
  RateResult out;
  out.ln_rate = std::log(p.J0) + exponent;
  if (out.ln_rate <= kMaxLog) {
    out.rate = exponent <= kMaxLog ? p.J0 * std::exp(exponent) : std::exp(out.ln_rate);
  }
  return out;
}

}  // namespace qcav
