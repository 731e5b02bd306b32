#include <cmath>
#include <vector>

#include <doctest.h>

#include "qcav/errors.hpp"
#include "qcav/ising.hpp"

using namespace qcav;

namespace {

TriangularLattice make(int lx, int ly, Boundary bc, double b,
                       InitialState init = InitialState::all_up, std::uint64_t seed = 0) {
  return build_lattice(lx, ly, bc, {init, seed}, FieldPattern::uniform(b));
}

// Independent oracle: plain (non-log) Boltzmann sums over every configuration,
// built through set_spin/energy rather than bit arithmetic.
struct NaiveMoments {
  double Z = 0, E = 0, M = 0, absM = 0, M2 = 0, M4 = 0, F = 0, expF = 0;
};

NaiveMoments naive_enumerate(TriangularLattice lat, double K, double T) {
  const int n = lat.site_count();
  NaiveMoments acc;
  for (long s = 0; s < (1L << n); ++s) {
    for (int i = 0; i < n; ++i) lat.set_spin(i, (s >> i) & 1 ? 1 : -1);
    const double e = energy(lat, K);
    const double w = std::exp(-e / T);
    double m = 0, f = 0;
    for (int i = 0; i < n; ++i) {
      m += lat.spin(i);
      f += lat.field(i) * lat.spin(i);
    }
    acc.Z += w;
    acc.E += w * e;
    acc.M += w * m;
    acc.absM += w * std::abs(m);
    acc.M2 += w * m * m;
    acc.M4 += w * m * m * m * m;
    acc.F += w * f;
    acc.expF += w * std::exp(f);
  }
  return acc;
}

bool within(double mc, const Estimate& e, double exact, double sigmas = 3.0) {
  if (mc == exact) return true;
  return e.error && std::abs(mc - exact) <= sigmas * *e.error;
}

}  // namespace

TEST_CASE("energy examples") {
  CHECK(energy(make(3, 3, Boundary::periodic, 0.0), 1.0) == -27.0);
  CHECK(energy(make(3, 3, Boundary::periodic, 0.5), 1.0) == -27.0 - 4.5);
  auto lat = make(4, 5, Boundary::open, 0.0, InitialState::random, 3);
  CHECK(energy(lat, 0.0) == 0.0);
  CHECK(energy(make(3, 3, Boundary::open, 0.0), 1.0) == -16.0);
}

TEST_CASE("delta energy examples") {
  const auto up = make(3, 3, Boundary::periodic, 0.0);
  for (int s = 0; s < 9; ++s) CHECK(delta_energy(up, 1.0, s) == 12.0);
  const auto field = make(3, 3, Boundary::periodic, 0.37);
  CHECK(delta_energy(field, 0.0, 4) == doctest::Approx(2 * 0.37));
  CHECK_THROWS_AS(delta_energy(up, 1.0, 9), DomainError);
  CHECK_THROWS_AS(delta_energy(up, 1.0, Site{-1, 0}), DomainError);

  auto lat = make(4, 4, Boundary::periodic, 0.2, InitialState::random, 5);
  const double there = delta_energy(lat, 0.7, 6);
  lat.flip(6);
  const double back = delta_energy(lat, 0.7, 6);
  CHECK(there + back == 0.0);
}

TEST_CASE("flip consistency on random configurations") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Boundary bc = rng.below(2) ? Boundary::periodic : Boundary::open;
    const int lx = 3 + static_cast<int>(rng.below(6));
    const int ly = 3 + static_cast<int>(rng.below(6));
    std::vector<double> fields(static_cast<std::size_t>(lx * ly));
    for (auto& f : fields) f = 4.0 * rng.uniform() - 2.0;
    auto lat = build_lattice(lx, ly, bc, {InitialState::random, rng.next_u64()},
                             FieldPattern::explicit_values(fields));
    const double K = 4.0 * rng.uniform() - 2.0;
    const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(lx * ly)));
    const double before = energy(lat, K);
    const double dE = delta_energy(lat, K, site);
    lat.flip(site);
    const double after = energy(lat, K);
    CHECK(std::abs(after - before - dE) < 1e-12 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("metropolis: infinite temperature accepts everything") {
  auto lat = make(6, 6, Boundary::periodic, 0.0, InitialState::random, 1);
  Rng rng(1);
  SweepCount total;
  for (int s = 0; s < 20; ++s) {
    const auto c = metropolis_sweep(lat, {0.0, 1e9}, rng);
    total.proposed += c.proposed;
    total.accepted += c.accepted;
  }
  CHECK(total.proposed == 20 * 36);
  CHECK(static_cast<double>(total.accepted) / total.proposed >= 0.99);
}

TEST_CASE("metropolis: downhill proposals are always accepted") {
  // All spins against a strong field with K = 0: every proposal lowers E.
  for (SweepOrder order : {SweepOrder::row_major, SweepOrder::random_site}) {
    auto lat = make(5, 5, Boundary::open, 3.0, InitialState::all_down);
    Rng rng(8);
    const auto c = metropolis_sweep(lat, {0.0, 1.0}, rng, order);
    if (order == SweepOrder::row_major) {
      CHECK(c.accepted == 25);
      CHECK(magnetization(lat) == 25);
    } else {
      CHECK(c.accepted >= 1);
    }
  }
  // Row-major at K=0, b=0: dE = 0 for every proposal, so all flip.
  auto lat = make(3, 3, Boundary::periodic, 0.0);
  Rng rng(2);
  CHECK(metropolis_sweep(lat, {0.0, 1.0}, rng).accepted == 9);
  CHECK(magnetization(lat) == -9);
}

TEST_CASE("global flip move") {
  // b = 0: dE = 0, always accepted, bonds untouched.
  auto lat = make(4, 4, Boundary::periodic, 0.0, InitialState::random, 5);
  const double e0 = energy(lat, 0.7);
  const int m0 = magnetization(lat);
  Rng rng(3);
  CHECK(global_flip_move(lat, {0.7, 1.0}, rng));
  CHECK(magnetization(lat) == -m0);
  CHECK(energy(lat, 0.7) == doctest::Approx(e0).epsilon(1e-12));

  // Against the field the move is downhill; along it the acceptance rate is
  // exp(-2 * b * N / T_red).
  auto down = make(3, 3, Boundary::periodic, 0.1, InitialState::all_down);
  CHECK(global_flip_move(down, {0.5, 1.0}, rng));
  CHECK(magnetization(down) == 9);
  int accepted = 0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    auto up = make(3, 3, Boundary::periodic, 0.1, InitialState::all_up);
    accepted += global_flip_move(up, {0.5, 1.0}, rng) ? 1 : 0;
  }
  const double p = std::exp(-1.8);
  CHECK(std::abs(static_cast<double>(accepted) / trials - p) <
        5.0 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("metropolis is deterministic for a given generator state") {
  for (SweepOrder order : {SweepOrder::row_major, SweepOrder::random_site}) {
    auto a = make(6, 5, Boundary::periodic, 0.1, InitialState::random, 3);
    auto b = a;
    Rng ra(77), rb(77);
    for (int s = 0; s < 50; ++s) {
      metropolis_sweep(a, {0.4, 1.3}, ra, order);
      metropolis_sweep(b, {0.4, 1.3}, rb, order);
    }
    CHECK(a == b);
  }
}

TEST_CASE("sample: free spins on 3x3") {
  RunConfig run;
  run.seed = 17;
  run.n_therm = 100;
  run.n_measure = 20000;
  const auto r = sample(make(3, 3, Boundary::periodic, 0.0, InitialState::random, 1),
                        {0.0, 1.0}, run);
  CHECK(r.records.size() == 20000);
  CHECK(r.summary.E.value == 0.0);
  CHECK(within(r.summary.abs_M.value, r.summary.abs_M, 1260.0 / 512.0));
  CHECK(r.summary.ln_enhancement.value == 0.0);
  CHECK(r.summary.acceptance_rate == 1.0);
  CHECK(r.summary.seed == 17);
}

TEST_CASE("sample: record bookkeeping") {
  RunConfig run;
  run.seed = 4;
  run.n_therm = 3;
  run.n_measure = 5;
  run.measure_every = 2;
  const auto r = sample(make(4, 4, Boundary::open, 0.2), {0.3, 1.0}, run);
  REQUIRE(r.records.size() == 5);
  CHECK(r.records.front().sweep == 5);
  CHECK(r.records.back().sweep == 13);
  for (const auto& rec : r.records) {
    CHECK(std::abs(rec.M) <= 16);
    CHECK((rec.M + 16) % 2 == 0);
  }
  CHECK(r.records.back().E_red == energy(r.final_state, 0.3));
}

TEST_CASE("sample: one measurement has no error bars") {
  RunConfig run;
  run.n_measure = 1;
  run.n_therm = 10;
  const auto r = sample(make(3, 3, Boundary::periodic, 0.3), {0.2, 1.0}, run);
  const auto& rec = r.records.front();
  CHECK(r.summary.E.value == rec.E_red);
  CHECK(!r.summary.E.error);
  CHECK(r.summary.abs_M.value == std::abs(rec.M));
  CHECK(!r.summary.abs_M.error);
  CHECK(r.summary.ln_enhancement.value == doctest::Approx(rec.field_term).epsilon(1e-15));
  CHECK(!r.summary.ln_enhancement.error);
}

TEST_CASE("sample: identical seeds give identical streams") {
  RunConfig run;
  run.seed = 99;
  run.n_therm = 50;
  run.n_measure = 500;
  const auto lat = make(4, 4, Boundary::periodic, 0.3, InitialState::random, 2);
  const auto a = sample(lat, {0.5, 1.0}, run);
  const auto b = sample(lat, {0.5, 1.0}, run);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].E_red == b.records[i].E_red);
    CHECK(a.records[i].M == b.records[i].M);
  }
  CHECK(a.summary.abs_M.value == b.summary.abs_M.value);
  const auto c = sample(lat, {0.5, 1.0}, run, 1);
  bool differ = false;
  for (std::size_t i = 0; i < a.records.size(); ++i) differ |= a.records[i].M != c.records[i].M;
  CHECK(differ);
}

TEST_CASE("sample rejects bad run configs") {
  RunConfig run;
  run.n_measure = 0;
  CHECK_THROWS_AS(sample(make(3, 3, Boundary::periodic, 0.0), {0.0, 1.0}, run), ConfigError);
  run.n_measure = 1;
  run.measure_every = 0;
  CHECK_THROWS_AS(sample(make(3, 3, Boundary::periodic, 0.0), {0.0, 1.0}, run), ConfigError);
  run.measure_every = 1;
  CHECK_THROWS_AS(sample(make(3, 3, Boundary::periodic, 0.0), {0.0, -1.0}, run), DomainError);
}

TEST_CASE("exact enumeration: free spins") {
  const auto r = exact_enumerate(make(3, 3, Boundary::periodic, 0.0), {0.0, 1.0});
  CHECK(r.states == 512);
  CHECK(r.logZ == doctest::Approx(9 * std::log(2.0)).epsilon(1e-14));
  CHECK(r.mean_E == 0.0);
  CHECK(r.mean_absM == doctest::Approx(2.4609375).epsilon(1e-14));
  CHECK(r.mean_M2 == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(r.mean_M4 == doctest::Approx(3 * 81.0 - 2 * 9.0).epsilon(1e-14));

  const auto one = exact_enumerate(make(1, 1, Boundary::open, 0.0), {5.0, 1.0});
  CHECK(one.logZ == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(one.mean_absM == 1.0);
}

TEST_CASE("exact enumeration: independent-spin closed form") {
  for (double b : {0.1, 0.3, 0.5, 1.0}) {
    const auto r = exact_enumerate(make(3, 3, Boundary::periodic, b), {0.0, 1.0});
    const double closed = std::pow(std::cosh(2 * b) / std::cosh(b), 9);
    CHECK(std::abs(r.mean_exp_field / closed - 1) < 1e-12);
    CHECK(r.logZ == doctest::Approx(9 * std::log(2 * std::cosh(b))).epsilon(1e-14));
    CHECK(r.mean_M == doctest::Approx(9 * std::tanh(b)).epsilon(1e-13));
  }
}

TEST_CASE("exact enumeration agrees with the naive oracle") {
  struct Case {
    int lx, ly;
    Boundary bc;
    double K, T;
  };
  const Case cases[] = {{3, 3, Boundary::periodic, 0.2, 1.0},
                        {3, 3, Boundary::periodic, 0.5, 0.7},
                        {3, 4, Boundary::open, -0.4, 1.5},
                        {2, 5, Boundary::open, 0.9, 2.0}};
  Rng rng(31);
  for (const auto& c : cases) {
    std::vector<double> fields(static_cast<std::size_t>(c.lx * c.ly));
    for (auto& f : fields) f = rng.uniform() - 0.3;
    const auto lat = build_lattice(c.lx, c.ly, c.bc, {InitialState::all_up, 0},
                                   FieldPattern::explicit_values(fields));
    const auto r = exact_enumerate(lat, {c.K, c.T});
    const auto o = naive_enumerate(lat, c.K, c.T);
    CHECK(r.logZ == doctest::Approx(std::log(o.Z)).epsilon(1e-12));
    CHECK(r.mean_E == doctest::Approx(o.E / o.Z).epsilon(1e-12));
    CHECK(r.mean_M == doctest::Approx(o.M / o.Z).epsilon(1e-12));
    CHECK(r.mean_absM == doctest::Approx(o.absM / o.Z).epsilon(1e-12));
    CHECK(r.mean_M2 == doctest::Approx(o.M2 / o.Z).epsilon(1e-12));
    CHECK(r.mean_M4 == doctest::Approx(o.M4 / o.Z).epsilon(1e-12));
    CHECK(r.mean_field_term == doctest::Approx(o.F / o.Z).epsilon(1e-12));
    CHECK(r.mean_exp_field == doctest::Approx(o.expF / o.Z).epsilon(1e-12));
  }
}

TEST_CASE("exact enumeration: invariants and symmetries") {
  const auto zero = exact_enumerate(make(4, 4, Boundary::periodic, 0.0), {0.2, 1.0});
  CHECK(std::abs(zero.mean_M) < 1e-12);
  CHECK(zero.mean_M4 >= zero.mean_M2 * zero.mean_M2);

  const auto biased = exact_enumerate(make(3, 3, Boundary::periodic, 0.3), {0.2, 1.0});
  CHECK(biased.mean_M > 0.0);
  CHECK(biased.ln_mean_exp_field >= biased.mean_field_term - 1e-12);

  const auto free = exact_enumerate(make(3, 3, Boundary::periodic, 0.0), {0.0, 1.0});
  const auto ferro = exact_enumerate(make(3, 3, Boundary::periodic, 0.0), {0.5, 1.0});
  CHECK(ferro.mean_absM > free.mean_absM);

  // Large fields stay finite in the log domain.
  const auto strong = exact_enumerate(make(4, 4, Boundary::periodic, 60.0), {0.0, 1.0});
  CHECK(std::isfinite(strong.ln_mean_exp_field));
  CHECK(strong.ln_mean_exp_field == doctest::Approx(16 * 60.0).epsilon(1e-12));
}

TEST_CASE("exact enumeration size cap") {
  CHECK_NOTHROW(exact_enumerate(make(4, 5, Boundary::open, 0.0), {0.1, 1.0}));
  CHECK_THROWS_AS(exact_enumerate(make(5, 5, Boundary::periodic, 0.0), {0.1, 1.0}), SizeError);
}

TEST_CASE("binder cumulant") {
  CHECK(binder_cumulant(4.0, 16.0) == doctest::Approx(2.0 / 3.0));
  CHECK(binder_cumulant(2.0, 12.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(binder_cumulant(0.0, 1.0), DomainError);
  const auto r = exact_enumerate(make(3, 3, Boundary::periodic, 0.0), {0.0, 1.0});
  // Free spins: <M^2> = 9, <M^4> = 3*81 - 2*9 = 225.
  CHECK(binder_cumulant(r.mean_M2, r.mean_M4) == doctest::Approx(1.0 - 225.0 / 243.0));
}

TEST_CASE("binder crossing") {
  const std::vector<double> t{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> small{0.6, 0.5, 0.4, 0.3};
  const std::vector<double> large{0.65, 0.55, 0.35, 0.2};
  const auto x = binder_crossing(t, small, large);
  REQUIRE(x);
  CHECK(*x == doctest::Approx(2.5));
  CHECK(binder_crossing(t, small, small) == 1.0);  // identical curves touch at the first point
  const std::vector<double> above{0.7, 0.6, 0.5, 0.4};
  CHECK(!binder_crossing(t, small, above));
}

TEST_CASE("reduce couplings") {
  const SuperfluidSpec sf{5.0082e-27, 1e-10, 2 * codata2018.e_charge};
  const double zero = 0.0;
  for (auto conv : {FieldConvention::cyclotron_energy, FieldConvention::rho_eta}) {
    const auto r = reduce_couplings(1.0, sf, std::span(&zero, 1), 0.01, conv, 1.0);
    CHECK(r.b.front() == 0.0);
    CHECK(r.couplings.T_red == 1.0);
  }

  // h at the cyclotron field: b = hbar^2 / (m_s r0^2 k_B T*), evaluated independently.
  const double h = cyclotron_field(sf);
  const auto cyc = reduce_couplings(0.0, sf, std::span(&h, 1), 0.01,
                                    FieldConvention::cyclotron_energy);
  CHECK(cyc.b.front() == doctest::Approx(1608.375226229913).epsilon(1e-12));

  const std::vector<double> hs{h, 2 * h};
  const auto lin = reduce_couplings(0.0, sf, hs, 0.02, FieldConvention::cyclotron_energy);
  CHECK(lin.b[0] == doctest::Approx(cyc.b.front() / 2).epsilon(1e-14));
  CHECK(lin.b[1] == doctest::Approx(cyc.b.front()).epsilon(1e-14));

  const double J = 3e40;
  const auto k = reduce_couplings(J, sf, {}, 0.5, FieldConvention::cyclotron_energy);
  const double hbar = codata2018.hbar;
  CHECK(k.couplings.K == doctest::Approx(J * hbar * hbar / (codata2018.k_B * 0.5)).epsilon(1e-12));

  const auto lit = reduce_couplings(0.0, sf, std::span(&h, 1), 0.01, FieldConvention::rho_eta, 2.0);
  const double rho = sf.q_s * sf.r0 * sf.r0;
  CHECK(lit.b.front() ==
        doctest::Approx(rho * hbar * h * 2.0 / (codata2018.k_B * 0.01)).epsilon(1e-12));

  CHECK_THROWS_AS(reduce_couplings(0.0, sf, std::span(&h, 1), 0.01, FieldConvention::rho_eta),
                  ConfigError);
  CHECK_THROWS_AS(reduce_couplings(0.0, sf, std::span(&h, 1), 0.0,
                                   FieldConvention::cyclotron_energy),
                  DomainError);
}

TEST_CASE("monte carlo matches the exact oracle on small lattices") {
  RunConfig run;
  run.seed = 123;
  run.n_therm = 1000;
  run.n_measure = 20000;
  // 4x4 at K = 0, b = 0 accepts every flip; an even site count exposes a
  // periodic chain. K = 0.5 exercises tunnelling between ordered sectors.
  for (int L : {3, 4}) {
    for (double b : {0.0, 0.3}) {
      for (double K : {0.0, 0.5}) {
        CAPTURE(L);
        CAPTURE(b);
        CAPTURE(K);
        const auto lat = make(L, L, Boundary::periodic, b, InitialState::random, 9);
        const auto exact = exact_enumerate(lat, {K, 1.0});
        const auto mc = sample(lat, {K, 1.0}, run).summary;
        CHECK(within(mc.E.value, mc.E, exact.mean_E));
        CHECK(within(mc.abs_M.value, mc.abs_M, exact.mean_absM));
        CHECK(within(mc.field_term.value, mc.field_term, exact.mean_field_term));
        CHECK(within(mc.ln_enhancement.value, mc.ln_enhancement, exact.ln_mean_exp_field));
      }
    }
  }
}
