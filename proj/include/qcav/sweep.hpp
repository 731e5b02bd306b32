#pragma once

#include <cstdint>
#include <vector>

#include "qcav/ising.hpp"
#include "qcav/lattice.hpp"

namespace qcav {

/// Grid over square lattices L x L, couplings K, temperatures T_red and
/// uniform fields b. Points are ordered with L outermost and b innermost.
struct SweepSpec {
  std::vector<int> L{3};
  std::vector<double> K{0.0};
  std::vector<double> T_red{1.0};
  std::vector<double> b{0.0};
  Boundary bc = Boundary::periodic;
  InitialState initial = InitialState::random;
  RunConfig run;                 // run.seed is the master seed
  std::int64_t chains = 1;       // independent chains per point
  unsigned threads = 1;          // 0 = hardware concurrency

  std::size_t point_count() const { return L.size() * K.size() * T_red.size() * b.size(); }
  void validate() const;
};

struct SweepRow {
  int L = 0;
  double K = 0.0;
  double T_red = 0.0;
  double b = 0.0;
  std::uint64_t seed = 0;  // point seed; chain c runs on derive_seed(seed, c)
  SampleSummary summary;
};

/// Seed of grid point `index` under the master seed.
std::uint64_t sweep_point_seed(std::uint64_t master, std::size_t index);

/// Runs every point (concurrently when threads > 1). Row order is grid order
/// regardless of completion order, so output is deterministic.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace qcav
