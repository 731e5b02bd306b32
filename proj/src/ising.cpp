#include "qcav/ising.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qcav/errors.hpp"

namespace qcav {

void CouplingSet::validate() const {
  if (!std::isfinite(K)) throw DomainError("coupling K must be finite");
  if (!(T_red > 0.0) || !std::isfinite(T_red)) {
    throw DomainError("reduced temperature T_red must be positive and finite");
  }
}

std::string_view to_string(SweepOrder order) {
  return order == SweepOrder::row_major ? "row-major" : "random";
}

SweepOrder parse_sweep_order(std::string_view text) {
  if (text == "row-major") return SweepOrder::row_major;
  if (text == "random") return SweepOrder::random_site;
  throw ConfigError("unknown sweep order '" + std::string(text) +
                    "' (expected row-major or random)");
}

void RunConfig::validate() const {
  if (n_therm < 0) throw ConfigError("n_therm must be >= 0");
  if (n_measure < 1) throw ConfigError("n_measure must be >= 1");
  if (measure_every < 1) throw ConfigError("measure_every must be >= 1");
  if (blocks < 1) throw ConfigError("blocks must be >= 1");
}

double energy(const TriangularLattice& lattice, double K) {
  long long bond_sum = 0;
  for (const Bond& b : lattice.bonds()) bond_sum += lattice.spin(b.a) * lattice.spin(b.b);
  return -K * static_cast<double>(bond_sum) - field_term(lattice);
}

double delta_energy(const TriangularLattice& lattice, double K, int site) {
  if (site < 0 || site >= lattice.site_count()) {
    throw DomainError("site index " + std::to_string(site) + " outside the lattice");
  }
  int neighbor_sum = 0;
  for (int n : lattice.neighbor_indices(site)) neighbor_sum += lattice.spin(n);
  return 2.0 * lattice.spin(site) * (K * neighbor_sum + lattice.field(site));
}

double delta_energy(const TriangularLattice& lattice, double K, Site site) {
  if (!lattice.contains(site)) {
    throw DomainError("site (" + std::to_string(site.i) + "," + std::to_string(site.j) +
                      ") outside the lattice");
  }
  return delta_energy(lattice, K, lattice.index(site));
}

int magnetization(const TriangularLattice& lattice) {
  int m = 0;
  for (auto s : lattice.spins()) m += s;
  return m;
}

double field_term(const TriangularLattice& lattice) {
  double sum = 0.0;
  const auto spins = lattice.spins();
  const auto fields = lattice.fields();
  for (std::size_t i = 0; i < spins.size(); ++i) sum += fields[i] * spins[i];
  return sum;
}

ObservableRecord observe(const TriangularLattice& lattice, double K, std::int64_t sweep) {
  return {sweep, energy(lattice, K), magnetization(lattice), field_term(lattice)};
}

namespace {

bool metropolis_step(TriangularLattice& lattice, const CouplingSet& couplings, Rng& rng, int site) {
  int neighbor_sum = 0;
  for (int n : lattice.neighbor_indices(site)) neighbor_sum += lattice.spin(n);
  const double dE = 2.0 * lattice.spin(site) * (couplings.K * neighbor_sum + lattice.field(site));
  if (dE <= 0.0 || rng.uniform() < std::exp(-dE / couplings.T_red)) {
    lattice.flip(site);
    return true;
  }
  return false;
}

}  // namespace

SweepCount metropolis_sweep(TriangularLattice& lattice, const CouplingSet& couplings, Rng& rng,
                            SweepOrder order) {
  couplings.validate();
  const int n = lattice.site_count();
  SweepCount count{n, 0};
  if (order == SweepOrder::row_major) {
    for (int site = 0; site < n; ++site) {
      count.accepted += metropolis_step(lattice, couplings, rng, site) ? 1 : 0;
    }
  } else {
    // Each draw may also land on an idle slot. Without it a sweep where every
    // flip is accepted (K = 0, b = 0) changes an even number of spins whenever
    // n is even, and the chain never leaves its parity class.
    for (int k = 0; k < n; ++k) {
      const auto site = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
      if (site == n) {
        --count.proposed;
        continue;
      }
      count.accepted += metropolis_step(lattice, couplings, rng, site) ? 1 : 0;
    }
  }
  return count;
}

bool global_flip_move(TriangularLattice& lattice, const CouplingSet& couplings, Rng& rng) {
  couplings.validate();
  const double dE = 2.0 * field_term(lattice);
  if (dE <= 0.0 || rng.uniform() < std::exp(-dE / couplings.T_red)) {
    for (int site = 0; site < lattice.site_count(); ++site) lattice.flip(site);
    return true;
  }
  return false;
}

SampleResult sample(TriangularLattice lattice, const CouplingSet& couplings, const RunConfig& run,
                    std::uint64_t chain_index) {
  couplings.validate();
  run.validate();
  Rng rng(derive_seed(run.seed, chain_index));

  const auto step = [&] {
    const SweepCount c = metropolis_sweep(lattice, couplings, rng, run.order);
    if (run.global_flip) global_flip_move(lattice, couplings, rng);
    return c;
  };

  std::int64_t sweeps = 0;
  for (; sweeps < run.n_therm; ++sweeps) step();

  std::vector<ObservableRecord> records;
  records.reserve(static_cast<std::size_t>(run.n_measure));
  SweepCount total;
  for (std::int64_t m = 0; m < run.n_measure; ++m) {
    for (std::int64_t k = 0; k < run.measure_every; ++k, ++sweeps) {
      const SweepCount c = step();
      total.proposed += c.proposed;
      total.accepted += c.accepted;
    }
    records.push_back(observe(lattice, couplings.K, sweeps));
  }

  std::vector<std::vector<ObservableRecord>> chains{std::move(records)};
  SampleSummary summary = summarize(chains, run.blocks);
  summary.acceptance_rate =
      static_cast<double>(total.accepted) / static_cast<double>(total.proposed);
  summary.seed = run.seed;
  return {std::move(chains.front()), summary, std::move(lattice)};
}

SampleSummary summarize(std::span<const std::vector<ObservableRecord>> chains,
                        std::int64_t blocks_per_chain) {
  const std::size_t nc = chains.size();
  std::vector<std::vector<double>> e(nc), abs_m(nc), m2(nc), m4(nc), f(nc);
  std::size_t total = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    for (const ObservableRecord& r : chains[c]) {
      const double m = r.M;
      e[c].push_back(r.E_red);
      abs_m[c].push_back(std::abs(m));
      m2[c].push_back(m * m);
      m4[c].push_back(m * m * m * m);
      f[c].push_back(r.field_term);
    }
    total += chains[c].size();
  }
  if (total == 0) throw DomainError("summarize: no observable records");

  const auto blocks_of = [&](const std::vector<std::vector<double>>& series) {
    std::vector<std::span<const double>> spans(series.begin(), series.end());
    return BlockPartition(spans, static_cast<std::size_t>(blocks_per_chain));
  };

  SampleSummary s;
  s.n_samples = total;
  s.E = blocked_mean(blocks_of(e));
  s.abs_M = blocked_mean(blocks_of(abs_m));
  s.M2 = blocked_mean(blocks_of(m2));
  s.M4 = blocked_mean(blocks_of(m4));
  s.field_term = blocked_mean(blocks_of(f));
  s.ln_enhancement = blocked_log_mean_exp(blocks_of(f));
  if (s.M2.value > 0.0) s.binder_U = binder_cumulant(s.M2.value, s.M4.value);
  return s;
}

ExactResult exact_enumerate(const TriangularLattice& lattice, const CouplingSet& couplings) {
  couplings.validate();
  const int n = lattice.site_count();
  if (n > kExactSiteCap) {
    throw SizeError("exact enumeration is capped at " + std::to_string(kExactSiteCap) +
                    " sites, lattice has " + std::to_string(n));
  }
  const auto& bonds = lattice.bonds();
  const auto fields = lattice.fields();
  const int bond_count = static_cast<int>(bonds.size());
  const std::uint64_t states = std::uint64_t{1} << n;

  // Bit i set <=> spin i is +1.
  struct State {
    double log_weight;
    double energy;
    double field;
    int magnetization;
  };
  const auto evaluate = [&](std::uint64_t s) {
    int disagree = 0;
    for (const Bond& b : bonds) disagree += static_cast<int>(((s >> b.a) ^ (s >> b.b)) & 1U);
    double field = 0.0;
    for (int i = 0; i < n; ++i) {
      field += ((s >> i) & 1U) ? fields[static_cast<std::size_t>(i)]
                                : -fields[static_cast<std::size_t>(i)];
    }
    const double e = -couplings.K * (bond_count - 2 * disagree) - field;
    const int m = 2 * std::popcount(s) - n;
    return State{-e / couplings.T_red, e, field, m};
  };

  double peak = -std::numeric_limits<double>::infinity();
  double peak_field = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < states; ++s) {
    const State st = evaluate(s);
    peak = std::max(peak, st.log_weight);
    peak_field = std::max(peak_field, st.log_weight + st.field);
  }

  CompensatedSum z, we, wm, wabs, wm2, wm4, wf, wexp;
  for (std::uint64_t s = 0; s < states; ++s) {
    const State st = evaluate(s);
    const double w = std::exp(st.log_weight - peak);
    const double m = st.magnetization;
    z.add(w);
    we.add(w * st.energy);
    wm.add(w * m);
    wabs.add(w * std::abs(m));
    wm2.add(w * m * m);
    wm4.add(w * m * m * m * m);
    wf.add(w * st.field);
    wexp.add(std::exp(st.log_weight + st.field - peak_field));
  }

  ExactResult r;
  r.states = states;
  r.logZ = peak + std::log(z.value());
  r.mean_E = we.value() / z.value();
  r.mean_M = wm.value() / z.value();
  r.mean_absM = wabs.value() / z.value();
  r.mean_M2 = wm2.value() / z.value();
  r.mean_M4 = wm4.value() / z.value();
  r.mean_field_term = wf.value() / z.value();
  r.ln_mean_exp_field = peak_field + std::log(wexp.value()) - r.logZ;
  r.mean_exp_field = std::exp(r.ln_mean_exp_field);
  return r;
}

double binder_cumulant(double mean_M2, double mean_M4) {
  if (!(mean_M2 > 0.0)) throw DomainError("Binder cumulant needs <M^2> > 0");
  return 1.0 - mean_M4 / (3.0 * mean_M2 * mean_M2);
}

std::optional<double> binder_crossing(std::span<const double> temperatures,
                                      std::span<const double> u_small,
                                      std::span<const double> u_large) {
  const std::size_t n = temperatures.size();
  if (u_small.size() != n || u_large.size() != n) {
    throw DomainError("binder_crossing: series lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d0 = u_large[i] - u_small[i];
    if (d0 == 0.0) return temperatures[i];
    if (i + 1 == n) break;
    const double d1 = u_large[i + 1] - u_small[i + 1];
    if ((d0 < 0.0) != (d1 < 0.0) && d1 != 0.0) {
      const double t = d0 / (d0 - d1);
      return temperatures[i] + t * (temperatures[i + 1] - temperatures[i]);
    }
  }
  return std::nullopt;
}

std::string_view to_string(FieldConvention c) {
  return c == FieldConvention::rho_eta ? "rho-eta" : "cyclotron-energy";
}

FieldConvention parse_field_convention(std::string_view text) {
  if (text == "rho-eta") return FieldConvention::rho_eta;
  if (text == "cyclotron-energy") return FieldConvention::cyclotron_energy;
  throw ConfigError("unknown field convention '" + std::string(text) +
                    "' (expected cyclotron-energy or rho-eta)");
}

ReducedCouplings reduce_couplings(double J_phys, const SuperfluidSpec& sf,
                                  std::span<const double> h, double T_star,
                                  FieldConvention convention, std::optional<double> unit_norm,
                                  const PhysicalConstants& c) {
  sf.validate();
  c.validate();
  if (!(T_star > 0.0) || !std::isfinite(T_star)) {
    throw DomainError("crossover temperature T* must be positive and finite");
  }
  if (!std::isfinite(J_phys)) throw DomainError("coupling J must be finite");
  if (convention == FieldConvention::rho_eta && !unit_norm) {
    throw ConfigError("rho-eta field convention needs a unit normalization constant");
  }

  const double eta = eta_coupling(sf);
  const double w0 = vorticity(sf.r0, sf.m_s, c);
  const double thermal = c.k_B * T_star;

  ReducedCouplings out;
  out.couplings.K = J_phys * eta * eta * w0 * w0 / thermal;
  out.couplings.T_red = 1.0;
  out.b.reserve(h.size());
  for (double field : h) {
    if (!std::isfinite(field)) throw DomainError("physical field h must be finite");
    if (convention == FieldConvention::rho_eta) {
      const double rho = sf.q_s * sf.r0 * sf.r0;
      out.b.push_back(rho * eta * w0 * field * *unit_norm / thermal);
    } else {
      out.b.push_back(c.hbar * sf.q_s * field / (sf.m_s * thermal));
    }
  }
  return out;
}

}  // namespace qcav
