#include "qcav/lattice.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcav/errors.hpp"
#include "qcav/rng.hpp"

namespace qcav {

namespace {

constexpr std::array<std::pair<int, int>, 3> kForward{{{0, 1}, {1, 0}, {1, 1}}};
constexpr std::array<std::pair<int, int>, 6> kAllDirections{
    {{0, 1}, {1, 0}, {1, 1}, {0, -1}, {-1, 0}, {-1, -1}}};

int wrap(int x, int n) { return ((x % n) + n) % n; }

}  // namespace

std::string_view to_string(Boundary bc) {
  return bc == Boundary::periodic ? "periodic" : "open";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "periodic") return Boundary::periodic;
  if (text == "open") return Boundary::open;
  throw ConfigError("unknown boundary condition '" + std::string(text) +
                    "' (expected periodic or open)");
}

std::string_view to_string(InitialState s) {
  switch (s) {
    case InitialState::all_up: return "all-up";
    case InitialState::all_down: return "all-down";
    case InitialState::random: return "random";
  }
  return "all-up";
}

InitialState parse_initial_state(std::string_view text) {
  if (text == "all-up") return InitialState::all_up;
  if (text == "all-down") return InitialState::all_down;
  if (text == "random") return InitialState::random;
  throw ConfigError("unknown initial state '" + std::string(text) +
                    "' (expected all-up, all-down or random)");
}

FieldPattern FieldPattern::uniform(double b) {
  FieldPattern p;
  p.kind = Kind::uniform;
  p.b = b;
  return p;
}

FieldPattern FieldPattern::diluted(double b, double p, std::uint64_t seed) {
  FieldPattern f;
  f.kind = Kind::diluted;
  f.b = b;
  f.p = p;
  f.seed = seed;
  return f;
}

FieldPattern FieldPattern::explicit_values(std::vector<double> values) {
  FieldPattern f;
  f.kind = Kind::explicit_values;
  f.values = std::move(values);
  return f;
}

std::string_view to_string(FieldPattern::Kind k) {
  switch (k) {
    case FieldPattern::Kind::uniform: return "uniform";
    case FieldPattern::Kind::diluted: return "diluted";
    case FieldPattern::Kind::explicit_values: return "explicit";
  }
  return "uniform";
}

FieldPattern::Kind parse_field_kind(std::string_view text) {
  if (text == "uniform") return FieldPattern::Kind::uniform;
  if (text == "diluted") return FieldPattern::Kind::diluted;
  if (text == "explicit") return FieldPattern::Kind::explicit_values;
  throw ConfigError("unknown field pattern '" + std::string(text) +
                    "' (expected uniform, diluted or explicit)");
}

TriangularLattice::TriangularLattice(int lx, int ly, Boundary bc) : lx_(lx), ly_(ly), bc_(bc) {
  const int min_size = bc == Boundary::periodic ? 3 : 1;
  if (lx < min_size || ly < min_size) {
    throw ConfigError("lattice " + std::to_string(lx) + "x" + std::to_string(ly) + " too small: " +
                      std::string(to_string(bc)) + " boundaries need lx, ly >= " +
                      std::to_string(min_size));
  }
  if (static_cast<long long>(lx) * ly > (1LL << 30)) {
    throw ConfigError("lattice too large");
  }
  const auto n = static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly);
  spins_.assign(n, 1);
  fields_.assign(n, 0.0);

  neighbor_offsets_.reserve(n + 1);
  neighbor_offsets_.push_back(0);
  for (int i = 0; i < lx; ++i) {
    for (int j = 0; j < ly; ++j) {
      for (auto [di, dj] : kAllDirections) {
        Site t{i + di, j + dj};
        if (bc == Boundary::periodic) {
          t = {wrap(t.i, lx), wrap(t.j, ly)};
        } else if (!contains(t)) {
          continue;
        }
        neighbors_.push_back(index(t));
      }
      neighbor_offsets_.push_back(static_cast<int>(neighbors_.size()));

      for (auto [di, dj] : kForward) {
        Site t{i + di, j + dj};
        if (bc == Boundary::periodic) {
          t = {wrap(t.i, lx), wrap(t.j, ly)};
        } else if (!contains(t)) {
          continue;
        }
        bonds_.push_back({index({i, j}), index(t)});
      }
    }
  }
}

int TriangularLattice::index(Site s) const { return s.i * ly_ + s.j; }

Site TriangularLattice::site(int index) const { return {index / ly_, index % ly_}; }

bool TriangularLattice::contains(Site s) const {
  return s.i >= 0 && s.i < lx_ && s.j >= 0 && s.j < ly_;
}

void TriangularLattice::set_spin(int index, int value) {
  if (value != 1 && value != -1) throw DomainError("spin must be -1 or +1");
  spins_.at(static_cast<std::size_t>(index)) = static_cast<std::int8_t>(value);
}

void TriangularLattice::set_fields(std::vector<double> fields) {
  if (fields.size() != fields_.size()) {
    throw ConfigError("field array has " + std::to_string(fields.size()) +
                      " entries, lattice has " + std::to_string(fields_.size()) + " sites");
  }
  for (double f : fields) {
    if (!std::isfinite(f)) throw ConfigError("field values must be finite");
  }
  fields_ = std::move(fields);
}

std::span<const int> TriangularLattice::neighbor_indices(int index) const {
  const auto begin = static_cast<std::size_t>(neighbor_offsets_[static_cast<std::size_t>(index)]);
  const auto end = static_cast<std::size_t>(neighbor_offsets_[static_cast<std::size_t>(index) + 1]);
  return std::span<const int>(neighbors_).subspan(begin, end - begin);
}

bool TriangularLattice::operator==(const TriangularLattice& other) const {
  return lx_ == other.lx_ && ly_ == other.ly_ && bc_ == other.bc_ && spins_ == other.spins_ &&
         fields_ == other.fields_;
}

TriangularLattice build_lattice(int lx, int ly, Boundary bc, const Initialization& initial,
                                const FieldPattern& pattern) {
  TriangularLattice lattice(lx, ly, bc);
  const int n = lattice.site_count();

  switch (initial.kind) {
    case InitialState::all_up:
      break;
    case InitialState::all_down:
      for (int s = 0; s < n; ++s) lattice.set_spin(s, -1);
      break;
    case InitialState::random: {
      Rng rng(initial.seed);
      for (int s = 0; s < n; ++s) lattice.set_spin(s, (rng.next_u64() >> 63) ? 1 : -1);
      break;
    }
  }

  std::vector<double> fields(static_cast<std::size_t>(n), 0.0);
  switch (pattern.kind) {
    case FieldPattern::Kind::uniform:
      fields.assign(fields.size(), pattern.b);
      break;
    case FieldPattern::Kind::diluted: {
      if (!(pattern.p >= 0.0 && pattern.p <= 1.0)) {
        throw ConfigError("diluted field occupation p must lie in [0, 1]");
      }
      Rng rng(pattern.seed);
      for (auto& f : fields) f = rng.uniform() < pattern.p ? pattern.b : 0.0;
      break;
    }
    case FieldPattern::Kind::explicit_values:
      if (pattern.values.size() != fields.size()) {
        throw ConfigError("explicit field pattern has " + std::to_string(pattern.values.size()) +
                          " values, lattice has " + std::to_string(n) + " sites");
      }
      fields = pattern.values;
      break;
  }
  lattice.set_fields(std::move(fields));
  return lattice;
}

std::vector<Site> neighbors(const TriangularLattice& lattice, Site s) {
  if (!lattice.contains(s)) {
    throw DomainError("site (" + std::to_string(s.i) + "," + std::to_string(s.j) +
                      ") outside the lattice");
  }
  std::vector<Site> out;
  for (int idx : lattice.neighbor_indices(lattice.index(s))) out.push_back(lattice.site(idx));
  return out;
}

std::vector<std::pair<Site, Site>> bond_list(const TriangularLattice& lattice) {
  std::vector<std::pair<Site, Site>> out;
  out.reserve(lattice.bonds().size());
  for (const Bond& b : lattice.bonds()) out.emplace_back(lattice.site(b.a), lattice.site(b.b));
  return out;
}

std::string snapshot_to_string(const TriangularLattice& lattice) {
  nlohmann::ordered_json doc;
  doc["lx"] = lattice.lx();
  doc["ly"] = lattice.ly();
  doc["bc"] = std::string(to_string(lattice.boundary()));
  auto spins = nlohmann::ordered_json::array();
  for (auto s : lattice.spins()) spins.push_back(static_cast<int>(s));
  doc["spins"] = std::move(spins);
  doc["fields"] = std::vector<double>(lattice.fields().begin(), lattice.fields().end());
  return doc.dump(2) + "\n";
}

TriangularLattice snapshot_from_string(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("snapshot: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("snapshot: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "lx" && key != "ly" && key != "bc" && key != "spins" && key != "fields") {
      throw ConfigError("snapshot: unknown key '" + key + "'");
    }
  }
  try {
    TriangularLattice lattice(doc.at("lx").get<int>(), doc.at("ly").get<int>(),
                              parse_boundary(doc.at("bc").get<std::string>()));
    const auto spins = doc.at("spins").get<std::vector<int>>();
    if (spins.size() != static_cast<std::size_t>(lattice.site_count())) {
      throw ConfigError("snapshot: spins array length does not match lx*ly");
    }
    for (std::size_t s = 0; s < spins.size(); ++s) {
      if (spins[s] != 1 && spins[s] != -1) throw ConfigError("snapshot: spins must be -1 or +1");
      lattice.set_spin(static_cast<int>(s), spins[s]);
    }
    lattice.set_fields(doc.at("fields").get<std::vector<double>>());
    return lattice;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("snapshot: ") + e.what());
  }
}

void write_snapshot(const TriangularLattice& lattice, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << snapshot_to_string(lattice);
}

TriangularLattice read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read snapshot " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return snapshot_from_string(buf.str());
}

}  // namespace qcav
