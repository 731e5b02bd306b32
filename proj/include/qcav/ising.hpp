#pragma once

// Reduced-unit Ising energy on the triangular lattice,
//   E = -K sum_<ab> s_a s_b - sum_i b_i s_i,
// with Metropolis sampling, observables and an exact enumeration oracle.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcav/constants.hpp"
#include "qcav/lattice.hpp"
#include "qcav/rng.hpp"
#include "qcav/stats.hpp"
#include "qcav/vortex.hpp"

namespace qcav {

/// Reduced spin-spin coupling K (ferromagnetic for K > 0) and temperature.
/// The Boltzmann factor is exp(-E / T_red).
struct CouplingSet {
  double K = 0.0;
  double T_red = 1.0;

  void validate() const;
};

enum class SweepOrder { row_major, random_site };

std::string_view to_string(SweepOrder order);
SweepOrder parse_sweep_order(std::string_view text);

struct RunConfig {
  std::uint64_t seed = 1;
  std::int64_t n_therm = 1000;
  std::int64_t n_measure = 10000;
  std::int64_t measure_every = 1;
  // Row-major sweeps are not ergodic when every proposal has dE == 0
  // (K = 0, b = 0): all spins flip together. Random-site sweeps are.
  SweepOrder order = SweepOrder::random_site;
  std::int64_t blocks = 64;
  // One whole-lattice reversal proposal after every sweep. Single flips alone
  // cross between magnetization sectors too rarely in the ordered phase.
  bool global_flip = true;

  void validate() const;
};

struct ObservableRecord {
  std::int64_t sweep = 0;
  double E_red = 0.0;
  int M = 0;
  double field_term = 0.0;  // sum_i b_i s_i, the log enhancement of the configuration
};

struct SampleSummary {
  std::size_t n_samples = 0;
  Estimate E;
  Estimate abs_M;
  Estimate M2;
  Estimate M4;
  Estimate field_term;
  Estimate ln_enhancement;     // log <exp(sum b_i s_i)>
  std::optional<double> binder_U;  // absent when <M^2> == 0
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;
};

struct SampleResult {
  std::vector<ObservableRecord> records;
  SampleSummary summary;
  TriangularLattice final_state;
};

struct ExactResult {
  double logZ = 0.0;
  double mean_E = 0.0;
  double mean_M = 0.0;
  double mean_absM = 0.0;
  double mean_M2 = 0.0;
  double mean_M4 = 0.0;
  double mean_field_term = 0.0;
  double ln_mean_exp_field = 0.0;  // log <exp(sum b_i s_i)>
  double mean_exp_field = 0.0;     // exp(ln_mean_exp_field); may be inf
  std::uint64_t states = 0;
};

inline constexpr int kExactSiteCap = 20;

double energy(const TriangularLattice& lattice, double K);

/// E(after flipping `site`) - E(before) = 2 s (K sum_nbr s_n + b_site).
double delta_energy(const TriangularLattice& lattice, double K, int site);
double delta_energy(const TriangularLattice& lattice, double K, Site site);

int magnetization(const TriangularLattice& lattice);
double field_term(const TriangularLattice& lattice);

ObservableRecord observe(const TriangularLattice& lattice, double K, std::int64_t sweep);

struct SweepCount {
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
};

/// Single-flip proposals, each accepted with probability
/// min(1, exp(-dE / T_red)). Row-major order visits every site once. Random
/// order makes lx*ly draws, each choosing one of the sites or (with
/// probability 1/(lx*ly + 1)) no proposal; only real proposals are counted.
SweepCount metropolis_sweep(TriangularLattice& lattice, const CouplingSet& couplings, Rng& rng,
                            SweepOrder order = SweepOrder::row_major);

/// Proposes reversing every spin. Bonds are unchanged, so dE = 2 * field_term
/// and the move is accepted with probability min(1, exp(-dE / T_red)).
bool global_flip_move(TriangularLattice& lattice, const CouplingSet& couplings, Rng& rng);

/// One chain: n_therm sweeps, then a record every measure_every sweeps until
/// n_measure records exist. The chain generator is seeded with
/// derive_seed(run.seed, chain_index).
SampleResult sample(TriangularLattice lattice, const CouplingSet& couplings, const RunConfig& run,
                    std::uint64_t chain_index = 0);

/// Pooled summary over independent chains (blocked jackknife errors).
SampleSummary summarize(std::span<const std::vector<ObservableRecord>> chains,
                        std::int64_t blocks_per_chain);

/// Sum over all 2^N configurations (N <= 20) in the log domain.
ExactResult exact_enumerate(const TriangularLattice& lattice, const CouplingSet& couplings);

/// U = 1 - <M^4> / (3 <M^2>^2).
double binder_cumulant(double mean_M2, double mean_M4);

/// Temperature where U_large - U_small changes sign, by linear interpolation
/// between the first bracketing pair of grid points. Absent when no sign
/// change exists.
std::optional<double> binder_crossing(std::span<const double> temperatures,
                                      std::span<const double> u_small,
                                      std::span<const double> u_large);

/// How a physical field h (T) becomes a reduced field b.
///   rho_eta:          b = rho eta w0 h u / (k_B T*), u a user unit normalization
///   cyclotron_energy: b = hbar q_s h / (m_s k_B T*), i.e. hbar omega_c / k_B T*
enum class FieldConvention { rho_eta, cyclotron_energy };

std::string_view to_string(FieldConvention c);
FieldConvention parse_field_convention(std::string_view text);

struct ReducedCouplings {
  CouplingSet couplings;
  std::vector<double> b;
};

/// Physical to reduced units. Uses eta w(r0) = hbar, so K = J hbar^2 / (k_B T*).
ReducedCouplings reduce_couplings(double J_phys, const SuperfluidSpec& sf,
                                  std::span<const double> h, double T_star,
                                  FieldConvention convention,
                                  std::optional<double> unit_norm = std::nullopt,
                                  const PhysicalConstants& c = codata2018);

}  // namespace qcav
