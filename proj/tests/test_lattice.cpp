#include <algorithm>
#include <set>

#include <doctest.h>

#include "qcav/errors.hpp"
#include "qcav/lattice.hpp"

using namespace qcav;

namespace {

TriangularLattice plain(int lx, int ly, Boundary bc) {
  return build_lattice(lx, ly, bc, {InitialState::all_up, 0}, FieldPattern::uniform(0.0));
}

std::set<Site> as_set(const std::vector<Site>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("build 3x3 periodic all-up") {
  const auto lat = plain(3, 3, Boundary::periodic);
  CHECK(lat.site_count() == 9);
  for (auto s : lat.spins()) CHECK(s == 1);
  for (double f : lat.fields()) CHECK(f == 0.0);
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(plain(2, 3, Boundary::periodic), ConfigError);
  CHECK_THROWS_AS(plain(3, 2, Boundary::periodic), ConfigError);
  CHECK_NOTHROW(plain(1, 1, Boundary::open));
  CHECK_THROWS_AS(plain(0, 4, Boundary::open), ConfigError);
}

TEST_CASE("initial states") {
  const auto down = build_lattice(4, 4, Boundary::open, {InitialState::all_down, 0},
                                  FieldPattern::uniform(0.0));
  for (auto s : down.spins()) CHECK(s == -1);

  const auto r1 = build_lattice(4, 4, Boundary::open, {InitialState::random, 7},
                                FieldPattern::diluted(0.5, 0.25, 7));
  const auto r2 = build_lattice(4, 4, Boundary::open, {InitialState::random, 7},
                                FieldPattern::diluted(0.5, 0.25, 7));
  CHECK(r1 == r2);
  CHECK(snapshot_to_string(r1) == snapshot_to_string(r2));
  for (auto s : r1.spins()) CHECK((s == 1 || s == -1));
  for (double f : r1.fields()) CHECK((f == 0.0 || f == 0.5));

  const auto r3 = build_lattice(8, 8, Boundary::open, {InitialState::random, 8},
                                FieldPattern::uniform(0.0));
  const auto r4 = build_lattice(8, 8, Boundary::open, {InitialState::random, 9},
                                FieldPattern::uniform(0.0));
  CHECK(!(r3 == r4));
}

TEST_CASE("diluted pattern degenerate cases") {
  const Initialization up{InitialState::all_up, 0};
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    CHECK(build_lattice(3, 3, Boundary::periodic, up, FieldPattern::diluted(1.0, 1.0, seed)) ==
          build_lattice(3, 3, Boundary::periodic, up, FieldPattern::uniform(1.0)));
    CHECK(build_lattice(5, 4, Boundary::open, up, FieldPattern::diluted(0.7, 0.0, seed)) ==
          build_lattice(5, 4, Boundary::open, up, FieldPattern::uniform(0.0)));
  }
  CHECK_THROWS_AS(build_lattice(3, 3, Boundary::periodic, up, FieldPattern::diluted(1.0, 1.5, 0)),
                  ConfigError);

  // Occupation fraction on a large lattice.
  const auto big = build_lattice(100, 100, Boundary::open, up, FieldPattern::diluted(1.0, 0.3, 5));
  const auto occupied = std::count(big.fields().begin(), big.fields().end(), 1.0);
  CHECK(std::abs(static_cast<double>(occupied) / 10000 - 0.3) < 0.02);
}

TEST_CASE("explicit pattern") {
  std::vector<double> v(9);
  for (int i = 0; i < 9; ++i) v[static_cast<std::size_t>(i)] = 0.1 * i;
  const auto lat = build_lattice(3, 3, Boundary::periodic, {InitialState::all_up, 0},
                                 FieldPattern::explicit_values(v));
  CHECK(lat.field(lat.index({1, 2})) == v[5]);
  v.pop_back();
  CHECK_THROWS_AS(build_lattice(3, 3, Boundary::periodic, {InitialState::all_up, 0},
                                FieldPattern::explicit_values(v)),
                  ConfigError);
}

TEST_CASE("row-major indexing") {
  const auto lat = plain(4, 5, Boundary::open);
  CHECK(lat.index({0, 1}) == 1);
  CHECK(lat.index({1, 0}) == 5);
  for (int k = 0; k < lat.site_count(); ++k) CHECK(lat.index(lat.site(k)) == k);
}

TEST_CASE("neighbors of periodic 3x3 origin") {
  const auto lat = plain(3, 3, Boundary::periodic);
  // Forward bonds (0,1), (1,0), (1,1) and their reverses wrapped mod 3.
  const std::set<Site> expected{{0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}, {2, 2}};
  const auto got = neighbors(lat, {0, 0});
  CHECK(got.size() == 6);
  CHECK(as_set(got) == expected);
}

TEST_CASE("neighbors of open corner and bounds") {
  const auto lat = plain(3, 3, Boundary::open);
  CHECK(as_set(neighbors(lat, {0, 0})) == std::set<Site>{{0, 1}, {1, 0}, {1, 1}});
  CHECK(neighbors(lat, {1, 1}).size() == 6);
  CHECK(as_set(neighbors(lat, {2, 0})) == std::set<Site>{{2, 1}, {1, 0}});
  CHECK_THROWS_AS(neighbors(lat, {3, 0}), DomainError);
  CHECK_THROWS_AS(neighbors(lat, {0, -1}), DomainError);
}

TEST_CASE("adjacency is symmetric, loop free and matches the bond list") {
  for (Boundary bc : {Boundary::periodic, Boundary::open}) {
    for (int lx = 3; lx <= 6; ++lx) {
      for (int ly = 3; ly <= 6; ++ly) {
        const auto lat = plain(lx, ly, bc);
        std::set<std::pair<int, int>> adjacency;
        for (int a = 0; a < lat.site_count(); ++a) {
          const auto nb = lat.neighbor_indices(a);
          std::set<int> unique(nb.begin(), nb.end());
          CHECK(unique.size() == nb.size());
          if (bc == Boundary::periodic) CHECK(nb.size() == 6);
          for (int b : nb) {
            CHECK(a != b);
            adjacency.insert({a, b});
          }
        }
        for (auto [a, b] : adjacency) CHECK(adjacency.count({b, a}) == 1);

        std::set<std::pair<int, int>> bonds;
        for (const Bond& bd : lat.bonds()) {
          bonds.insert({std::min(bd.a, bd.b), std::max(bd.a, bd.b)});
        }
        CHECK(bonds.size() == lat.bonds().size());  // no bond twice
        CHECK(adjacency.size() == 2 * bonds.size());
      }
    }
  }
}

TEST_CASE("bond counts") {
  CHECK(bond_list(plain(3, 3, Boundary::periodic)).size() == 27);
  CHECK(bond_list(plain(3, 3, Boundary::open)).size() == 16);
  CHECK(bond_list(plain(4, 4, Boundary::periodic)).size() == 48);
  for (int lx = 1; lx <= 7; ++lx) {
    for (int ly = 1; ly <= 7; ++ly) {
      const auto open = plain(lx, ly, Boundary::open);
      CHECK(open.bonds().size() == static_cast<std::size_t>(3 * lx * ly - 2 * lx - 2 * ly + 1));
      if (lx >= 3 && ly >= 3) {
        CHECK(plain(lx, ly, Boundary::periodic).bonds().size() ==
              static_cast<std::size_t>(3 * lx * ly));
      }
    }
  }
}

TEST_CASE("snapshot round trip and schema") {
  const auto lat = build_lattice(3, 4, Boundary::open, {InitialState::random, 3},
                                 FieldPattern::diluted(0.25, 0.5, 11));
  const std::string text = snapshot_to_string(lat);
  CHECK(text.find("\"lx\"") != std::string::npos);
  CHECK(text.find("\"fields\"") != std::string::npos);
  CHECK(snapshot_from_string(text) == lat);

  CHECK_THROWS_AS(snapshot_from_string(R"({"lx":3,"ly":3,"bc":"periodic","spins":[1],"fields":[0]})"),
                  ConfigError);
  CHECK_THROWS_AS(snapshot_from_string(
                      R"({"lx":1,"ly":1,"bc":"open","spins":[2],"fields":[0]})"),
                  ConfigError);
  CHECK_THROWS_AS(snapshot_from_string(
                      R"({"lx":1,"ly":1,"bc":"open","spins":[1],"fields":[0],"extra":1})"),
                  ConfigError);
  CHECK_THROWS_AS(snapshot_from_string("not json"), ConfigError);
}

TEST_CASE("string conversions") {
  CHECK(parse_boundary("open") == Boundary::open);
  CHECK_THROWS_AS(parse_boundary("twisted"), ConfigError);
  CHECK(parse_initial_state(to_string(InitialState::random)) == InitialState::random);
  CHECK(parse_field_kind("explicit") == FieldPattern::Kind::explicit_values);
}
