#pragma once

// Run configuration: one YAML (or JSON) document with optional sections
// superfluid, superconductor, lattice, couplings, run, cavitation, sweep.
// Unknown keys are errors. Every error message starts with
// "<origin>:<line>:<column>:".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qcav/cavitation.hpp"
#include "qcav/ising.hpp"
#include "qcav/lattice.hpp"
#include "qcav/sweep.hpp"
#include "qcav/vortex.hpp"

namespace qcav {

/// Physical couplings converted by reduce_couplings(). When present they
/// replace couplings.K / T_red and the lattice field (uniform b).
struct PhysicalCouplings {
  double J = 0.0;
  double h = 0.0;       // T, same on every site
  double T_star = 1.0;  // K
  FieldConvention convention = FieldConvention::cyclotron_energy;
  std::optional<double> unit_norm;
};

struct LatticeSettings {
  int lx = 3;
  int ly = 3;
  Boundary bc = Boundary::periodic;
  InitialState initial = InitialState::all_up;
  std::optional<std::uint64_t> init_seed;
  FieldPattern field = FieldPattern::uniform(0.0);
  std::optional<std::uint64_t> field_seed;  // diluted only; derived from the master seed if absent
  std::optional<std::filesystem::path> snapshot;
};

struct CouplingSettings {
  CouplingSet couplings;
  std::optional<PhysicalCouplings> physical;
};

struct CavitationSettings {
  CavitationParams params;
  EnhancementSource source = EnhancementSource::exact;
  EnhancementMode mode = EnhancementMode::thermal;
};

struct SweepSettings {
  std::optional<std::vector<int>> L;
  std::optional<std::vector<double>> K;
  std::optional<std::vector<double>> T_red;
  std::optional<std::vector<double>> b;
  std::int64_t chains = 1;
};

struct Config {
  SuperfluidSpec superfluid;
  SuperconductorSpec superconductor;
  LatticeSettings lattice;
  CouplingSettings couplings;
  RunConfig run;
  unsigned threads = 0;
  CavitationSettings cavitation;
  SweepSettings sweep;
};

/// Parses a config document. `origin` prefixes error messages.
Config parse_config(std::string_view text, std::string_view origin);
Config load_config(const std::filesystem::path& path);

/// Fills every value that defaults from the master seed or other sections,
/// so the serialized form replays identically. Override run.seed first.
void resolve(Config& config);

/// Resolved config as a document accepted by parse_config().
nlohmann::ordered_json to_json(const Config& config);

/// Lattice described by the lattice section (or its snapshot), with the
/// physical-coupling field applied when configured.
TriangularLattice make_lattice(const Config& config);

/// Couplings from the couplings section, reduced from physical units if given.
CouplingSet effective_couplings(const Config& config);

/// Sweep grid with unspecified axes taken from the lattice/couplings sections.
SweepSpec make_sweep_spec(const Config& config);

}  // namespace qcav
