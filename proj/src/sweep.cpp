#include "qcav/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "qcav/errors.hpp"
#include "qcav/rng.hpp"

namespace qcav {

namespace {

constexpr std::uint64_t kInitStream = std::uint64_t{1} << 32;

SweepRow run_point(const SweepSpec& spec, std::size_t index) {
  const std::size_t nb = spec.b.size();
  const std::size_t nt = spec.T_red.size();
  const std::size_t nk = spec.K.size();
  SweepRow row;
  row.b = spec.b[index % nb];
  row.T_red = spec.T_red[(index / nb) % nt];
  row.K = spec.K[(index / (nb * nt)) % nk];
  row.L = spec.L[index / (nb * nt * nk)];
  row.seed = sweep_point_seed(spec.run.seed, index);

  RunConfig run = spec.run;
  run.seed = row.seed;
  const CouplingSet couplings{row.K, row.T_red};
  std::vector<std::vector<ObservableRecord>> chains;
  std::int64_t proposed = 0;
  double accepted = 0.0;
  for (std::int64_t c = 0; c < spec.chains; ++c) {
    const auto chain = static_cast<std::uint64_t>(c);
    const Initialization init{spec.initial, derive_seed(row.seed, kInitStream + chain)};
    SampleResult r = sample(build_lattice(row.L, row.L, spec.bc, init, FieldPattern::uniform(row.b)),
                            couplings, run, chain);
    accepted += r.summary.acceptance_rate;
    ++proposed;
    chains.push_back(std::move(r.records));
  }
  row.summary = summarize(chains, spec.run.blocks);
  row.summary.acceptance_rate = accepted / static_cast<double>(proposed);
  row.summary.seed = row.seed;
  return row;
}

}  // namespace

void SweepSpec::validate() const {
  if (point_count() == 0) throw ConfigError("sweep grid is empty");
  if (chains < 1) throw ConfigError("sweep needs at least one chain per point");
  for (double t : T_red) CouplingSet{0.0, t}.validate();
  for (double k : K) CouplingSet{k, 1.0}.validate();
  for (int l : L) TriangularLattice(l, l, bc);
  run.validate();
}

std::uint64_t sweep_point_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(master, static_cast<std::uint64_t>(index));
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.point_count();
  std::vector<SweepRow> rows(n);

  unsigned workers = spec.threads == 0 ? std::thread::hardware_concurrency() : spec.threads;
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = run_point(spec, i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            rows[i] = run_point(spec, i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace qcav
