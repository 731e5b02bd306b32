#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcav {

enum class Boundary { periodic, open };

std::string_view to_string(Boundary bc);
Boundary parse_boundary(std::string_view text);

/// Lattice coordinate. Flat index is i * ly + j (row-major, j fastest).
struct Site {
  int i = 0;
  int j = 0;

  auto operator<=>(const Site&) const = default;
};

/// Undirected bond between two flat site indices.
struct Bond {
  int a = 0;
  int b = 0;
};

enum class InitialState { all_up, all_down, random };

std::string_view to_string(InitialState s);
InitialState parse_initial_state(std::string_view text);

struct Initialization {
  InitialState kind = InitialState::all_up;
  std::uint64_t seed = 0;  // used by InitialState::random only
};

/// Policy for assigning the reduced local fields b_i.
///
/// `uniform` puts b on every node (perfect superposition of the two vortex
/// lattices). `diluted` puts b on each node independently with probability p
/// and 0 elsewhere, an extension modelling partial superposition. `explicit`
/// takes one value per site in row-major order.
struct FieldPattern {
  enum class Kind { uniform, diluted, explicit_values };

  Kind kind = Kind::uniform;
  double b = 0.0;
  double p = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  static FieldPattern uniform(double b);
  static FieldPattern diluted(double b, double p, std::uint64_t seed);
  static FieldPattern explicit_values(std::vector<double> values);
};

std::string_view to_string(FieldPattern::Kind k);
FieldPattern::Kind parse_field_kind(std::string_view text);

/// Spins sigma_i in {-1,+1} and reduced fields b_i on an lx x ly triangular
/// lattice. Each site (i,j) bonds forward to (i,j+1), (i+1,j) and (i+1,j+1);
/// with the reverses that gives six neighbours in the bulk.
class TriangularLattice {
 public:
  /// All spins up, all fields zero. Periodic needs lx, ly >= 3; open needs >= 1.
  TriangularLattice(int lx, int ly, Boundary bc);

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  Boundary boundary() const { return bc_; }
  int site_count() const { return lx_ * ly_; }

  int index(Site s) const;
  Site site(int index) const;
  bool contains(Site s) const;

  int spin(int index) const { return spins_[static_cast<std::size_t>(index)]; }
  void set_spin(int index, int value);
  void flip(int index) { spins_[static_cast<std::size_t>(index)] *= -1; }
  std::span<const std::int8_t> spins() const { return spins_; }

  double field(int index) const { return fields_[static_cast<std::size_t>(index)]; }
  std::span<const double> fields() const { return fields_; }
  void set_fields(std::vector<double> fields);

  /// Neighbour flat indices of a site, in direction order
  /// (0,+1), (+1,0), (+1,+1), (0,-1), (-1,0), (-1,-1); missing ones skipped.
  std::span<const int> neighbor_indices(int index) const;

  /// Every bond exactly once, generated by the three forward directions.
  const std::vector<Bond>& bonds() const { return bonds_; }

  bool operator==(const TriangularLattice& other) const;

 private:
  int lx_;
  int ly_;
  Boundary bc_;
  std::vector<std::int8_t> spins_;
  std::vector<double> fields_;
  std::vector<int> neighbor_offsets_;
  std::vector<int> neighbors_;
  std::vector<Bond> bonds_;
};

TriangularLattice build_lattice(int lx, int ly, Boundary bc, const Initialization& initial,
                                const FieldPattern& pattern);

/// Neighbours of `s` as coordinates. Throws DomainError when `s` is out of range.
std::vector<Site> neighbors(const TriangularLattice& lattice, Site s);

std::vector<std::pair<Site, Site>> bond_list(const TriangularLattice& lattice);

/// Snapshot document: keys lx, ly, bc, spins, fields (row-major flat arrays).
std::string snapshot_to_string(const TriangularLattice& lattice);
TriangularLattice snapshot_from_string(std::string_view text);
void write_snapshot(const TriangularLattice& lattice, const std::filesystem::path& path);
TriangularLattice read_snapshot(const std::filesystem::path& path);

}  // namespace qcav
