#include "qcav/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qcav/errors.hpp"
#include "qcav/rng.hpp"

namespace qcav {

namespace {

constexpr std::uint64_t kInitStream = 0x1a771ce;
constexpr std::uint64_t kFieldStream = 0xf1e1d;

class Reader {
 public:
  explicit Reader(std::string_view origin) : origin_(origin) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& message) const {
    const int line = mark.is_null() ? 1 : mark.line + 1;
    const int column = mark.is_null() ? 1 : mark.column + 1;
    throw ConfigError(origin_ + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                      message);
  }

  void require_map(const YAML::Node& node, std::string_view what) const {
    if (!node.IsMap()) fail(node.Mark(), std::string(what) + " must be a mapping");
  }

  void check_keys(const YAML::Node& map, std::string_view section,
                  std::initializer_list<std::string_view> allowed) const {
    require_map(map, "section '" + std::string(section) + "'");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(kv.first.Mark(), "unknown key '" + key + "' in section '" + std::string(section) +
                                  "' (allowed: " + list + ")");
      }
    }
  }

  double number(const YAML::Node& node, std::string_view key) const {
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), "'" + std::string(key) + "' must be a number");
    }
    if (!std::isfinite(v)) fail(node.Mark(), "'" + std::string(key) + "' must be finite");
    return v;
  }

  long long integer(const YAML::Node& node, std::string_view key) const {
    try {
      return node.as<long long>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), "'" + std::string(key) + "' must be an integer");
    }
  }

  std::uint64_t seed(const YAML::Node& node, std::string_view key) const {
    const std::string text = text_of(node, key);
    if (!text.empty() && text.front() == '-') {
      fail(node.Mark(), "'" + std::string(key) + "' must be a non-negative 64-bit integer");
    }
    try {
      return node.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), "'" + std::string(key) + "' must be a non-negative 64-bit integer");
    }
  }

  bool boolean(const YAML::Node& node, std::string_view key) const {
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node.Mark(), "'" + std::string(key) + "' must be true or false");
    }
  }

  std::string text_of(const YAML::Node& node, std::string_view key) const {
    if (!node.IsScalar()) fail(node.Mark(), "'" + std::string(key) + "' must be a scalar");
    return node.Scalar();
  }

  template <class T, class F>
  std::vector<T> list(const YAML::Node& node, std::string_view key, F&& element) const {
    std::vector<T> out;
    if (node.IsSequence()) {
      for (const auto& item : node) out.push_back(element(item, key));
    } else {
      out.push_back(element(node, key));
    }
    if (out.empty()) fail(node.Mark(), "'" + std::string(key) + "' must not be empty");
    return out;
  }

  /// Runs `fn`, re-raising validation failures anchored at `node`.
  template <class F>
  void anchored(const YAML::Node& node, F&& fn) const {
    try {
      fn();
    } catch (const DomainError& e) {
      fail(node.Mark(), e.what());
    } catch (const ConfigError& e) {
      fail(node.Mark(), e.what());
    }
  }

 private:
  std::string origin_;
};

double charge_of(const Reader& rd, const YAML::Node& section, double fallback,
                 std::string_view name) {
  const auto in_e = section["charge_e"];
  const auto in_c = section["charge"];
  if (in_e && in_c) {
    rd.fail(in_c.Mark(), "give either 'charge' (C) or 'charge_e' (multiples of e) in '" +
                             std::string(name) + "', not both");
  }
  if (in_e) return rd.number(in_e, "charge_e") * codata2018.e_charge;
  if (in_c) return rd.number(in_c, "charge");
  return fallback;
}

void parse_superfluid(const Reader& rd, const YAML::Node& node, SuperfluidSpec& sf) {
  rd.check_keys(node, "superfluid", {"species", "mass", "r0", "charge", "charge_e"});
  if (node["species"] && node["mass"]) {
    rd.fail(node["mass"].Mark(), "give either 'species' or 'mass' in 'superfluid', not both");
  }
  if (const auto s = node["species"]) {
    const std::string species = rd.text_of(s, "species");
    if (species == "he3") {
      sf.m_s = codata2018.m_he3;
    } else if (species == "he4") {
      sf.m_s = codata2018.m_he4;
    } else {
      rd.fail(s.Mark(), "unknown species '" + species + "' (expected he3 or he4)");
    }
  }
  if (const auto m = node["mass"]) sf.m_s = rd.number(m, "mass");
  if (const auto r = node["r0"]) sf.r0 = rd.number(r, "r0");
  sf.q_s = charge_of(rd, node, sf.q_s, "superfluid");
  rd.anchored(node, [&] { sf.validate(); });
}

void parse_superconductor(const Reader& rd, const YAML::Node& node, SuperconductorSpec& sc) {
  rd.check_keys(node, "superconductor", {"charge", "charge_e", "lambda", "xi", "k"});
  const double e_c = charge_of(rd, node, sc.e_c, "superconductor");
  const double lambda = node["lambda"] ? rd.number(node["lambda"], "lambda") : sc.lambda;
  const auto xi_node = node["xi"];
  const auto k_node = node["k"];
  const YAML::Node anchor = k_node ? k_node : (xi_node ? xi_node : node);
  rd.anchored(anchor, [&] {
    if (xi_node && k_node) {
      const double k = rd.number(k_node, "k");
      sc = SuperconductorSpec::from_lengths(e_c, lambda, rd.number(xi_node, "xi"));
      if (std::abs(sc.k - k) > 1e-12 * std::abs(k)) {
        throw ConfigError("Ginzburg-Landau parameter k = " + std::to_string(k) +
                          " disagrees with lambda/xi = " + std::to_string(sc.k));
      }
    } else if (k_node) {
      sc = SuperconductorSpec::from_k(e_c, lambda, rd.number(k_node, "k"));
    } else if (xi_node) {
      sc = SuperconductorSpec::from_lengths(e_c, lambda, rd.number(xi_node, "xi"));
    } else {
      sc = SuperconductorSpec::from_lengths(e_c, lambda, sc.xi);
    }
    if (!(sc.k > 1.0)) {
      throw DomainError("Ginzburg-Landau parameter k = " + std::to_string(sc.k) +
                        " must exceed 1 (the core-field estimate needs ln k > 0)");
    }
  });
}

void parse_field(const Reader& rd, const YAML::Node& node, LatticeSettings& lat) {
  rd.check_keys(node, "lattice.field", {"kind", "b", "p", "seed", "values"});
  const auto kind_node = node["kind"];
  FieldPattern::Kind kind = FieldPattern::Kind::uniform;
  if (kind_node) rd.anchored(kind_node, [&] { kind = parse_field_kind(rd.text_of(kind_node, "kind")); });

  const auto forbid = [&](const char* key) {
    if (node[key]) {
      rd.fail(node[key].Mark(), "'" + std::string(key) + "' does not apply to field kind '" +
                                    std::string(to_string(kind)) + "'");
    }
  };
  const double b = node["b"] ? rd.number(node["b"], "b") : 0.0;
  switch (kind) {
    case FieldPattern::Kind::uniform:
      forbid("p");
      forbid("seed");
      forbid("values");
      lat.field = FieldPattern::uniform(b);
      break;
    case FieldPattern::Kind::diluted: {
      forbid("values");
      const double p = node["p"] ? rd.number(node["p"], "p") : 1.0;
      if (!(p >= 0.0 && p <= 1.0)) rd.fail(node["p"].Mark(), "occupation p must lie in [0, 1]");
      if (node["seed"]) lat.field_seed = rd.seed(node["seed"], "seed");
      lat.field = FieldPattern::diluted(b, p, lat.field_seed.value_or(0));
      break;
    }
    case FieldPattern::Kind::explicit_values: {
      forbid("b");
      forbid("p");
      forbid("seed");
      if (!node["values"]) rd.fail(node.Mark(), "explicit field pattern needs 'values'");
      lat.field = FieldPattern::explicit_values(rd.list<double>(
          node["values"], "values",
          [&](const YAML::Node& n, std::string_view k) { return rd.number(n, k); }));
      break;
    }
  }
}

void parse_lattice(const Reader& rd, const YAML::Node& node, LatticeSettings& lat,
                   bool& field_given) {
  rd.check_keys(node, "lattice", {"lx", "ly", "bc", "initial", "init_seed", "field", "snapshot"});
  if (const auto s = node["snapshot"]) {
    for (const char* key : {"lx", "ly", "bc", "initial", "init_seed", "field"}) {
      if (node[key]) {
        rd.fail(node[key].Mark(), "'" + std::string(key) + "' conflicts with 'snapshot'");
      }
    }
    lat.snapshot = rd.text_of(s, "snapshot");
    return;
  }
  const auto size = [&](const char* key, int fallback) {
    if (!node[key]) return fallback;
    const long long v = rd.integer(node[key], key);
    if (v < 1 || v > 1 << 15) rd.fail(node[key].Mark(), "'" + std::string(key) + "' out of range");
    return static_cast<int>(v);
  };
  lat.lx = size("lx", lat.lx);
  lat.ly = size("ly", lat.ly);
  if (const auto bc = node["bc"]) rd.anchored(bc, [&] { lat.bc = parse_boundary(rd.text_of(bc, "bc")); });
  if (const auto init = node["initial"]) {
    rd.anchored(init, [&] { lat.initial = parse_initial_state(rd.text_of(init, "initial")); });
  }
  if (const auto s = node["init_seed"]) lat.init_seed = rd.seed(s, "init_seed");
  if (const auto f = node["field"]) {
    parse_field(rd, f, lat);
    field_given = true;
  }
  rd.anchored(node, [&] { TriangularLattice(lat.lx, lat.ly, lat.bc); });
  if (lat.field.kind == FieldPattern::Kind::explicit_values &&
      lat.field.values.size() != static_cast<std::size_t>(lat.lx) * lat.ly) {
    rd.fail(node["field"].Mark(), "explicit field pattern has " +
                                      std::to_string(lat.field.values.size()) +
                                      " values, lattice has " + std::to_string(lat.lx * lat.ly) +
                                      " sites");
  }
}

void parse_couplings(const Reader& rd, const YAML::Node& node, CouplingSettings& cs) {
  rd.check_keys(node, "couplings", {"K", "T_red", "physical"});
  if (const auto ph = node["physical"]) {
    for (const char* key : {"K", "T_red"}) {
      if (node[key]) {
        rd.fail(node[key].Mark(), "'" + std::string(key) + "' conflicts with 'physical'");
      }
    }
    rd.check_keys(ph, "couplings.physical", {"J", "h", "T_star", "convention", "unit_norm"});
    PhysicalCouplings p;
    if (ph["J"]) p.J = rd.number(ph["J"], "J");
    if (ph["h"]) p.h = rd.number(ph["h"], "h");
    if (ph["T_star"]) p.T_star = rd.number(ph["T_star"], "T_star");
    if (const auto c = ph["convention"]) {
      rd.anchored(c, [&] { p.convention = parse_field_convention(rd.text_of(c, "convention")); });
    }
    if (ph["unit_norm"]) p.unit_norm = rd.number(ph["unit_norm"], "unit_norm");
    cs.physical = p;
    return;
  }
  if (node["K"]) cs.couplings.K = rd.number(node["K"], "K");
  if (node["T_red"]) cs.couplings.T_red = rd.number(node["T_red"], "T_red");
  rd.anchored(node, [&] { cs.couplings.validate(); });
}

void parse_run(const Reader& rd, const YAML::Node& node, RunConfig& run, unsigned& threads) {
  rd.check_keys(node, "run",
                {"seed", "n_therm", "n_measure", "measure_every", "order", "blocks", "global_flip",
                 "threads"});
  if (node["seed"]) run.seed = rd.seed(node["seed"], "seed");
  if (node["n_therm"]) run.n_therm = rd.integer(node["n_therm"], "n_therm");
  if (node["n_measure"]) run.n_measure = rd.integer(node["n_measure"], "n_measure");
  if (node["measure_every"]) run.measure_every = rd.integer(node["measure_every"], "measure_every");
  if (node["blocks"]) run.blocks = rd.integer(node["blocks"], "blocks");
  if (node["global_flip"]) run.global_flip = rd.boolean(node["global_flip"], "global_flip");
  if (const auto o = node["order"]) rd.anchored(o, [&] { run.order = parse_sweep_order(rd.text_of(o, "order")); });
  if (const auto t = node["threads"]) {
    const long long v = rd.integer(t, "threads");
    if (v < 0 || v > 1024) rd.fail(t.Mark(), "'threads' must lie in [0, 1024]");
    threads = static_cast<unsigned>(v);
  }
  const auto anchor_of = [&](const char* key) { return node[key] ? node[key] : node; };
  if (run.n_therm < 0) rd.fail(anchor_of("n_therm").Mark(), "n_therm must be >= 0");
  if (run.n_measure < 1) rd.fail(anchor_of("n_measure").Mark(), "n_measure must be >= 1");
  if (run.measure_every < 1) {
    rd.fail(anchor_of("measure_every").Mark(), "measure_every must be >= 1");
  }
  if (run.blocks < 1) rd.fail(anchor_of("blocks").Mark(), "blocks must be >= 1");
}

void parse_cavitation(const Reader& rd, const YAML::Node& node, CavitationSettings& cav) {
  rd.check_keys(node, "cavitation", {"J0", "delta_omega_max", "T_star", "source", "mode"});
  if (node["J0"]) cav.params.J0 = rd.number(node["J0"], "J0");
  if (node["delta_omega_max"]) {
    cav.params.delta_omega_max = rd.number(node["delta_omega_max"], "delta_omega_max");
  }
  if (node["T_star"]) cav.params.T_star = rd.number(node["T_star"], "T_star");
  if (const auto s = node["source"]) {
    rd.anchored(s, [&] { cav.source = parse_enhancement_source(rd.text_of(s, "source")); });
  }
  if (const auto m = node["mode"]) {
    rd.anchored(m, [&] { cav.mode = parse_enhancement_mode(rd.text_of(m, "mode")); });
  }
  rd.anchored(node, [&] { cav.params.validate(); });
}

void parse_sweep(const Reader& rd, const YAML::Node& node, SweepSettings& sw) {
  rd.check_keys(node, "sweep", {"L", "K", "T_red", "b", "chains"});
  const auto num = [&](const YAML::Node& n, std::string_view k) { return rd.number(n, k); };
  if (const auto l = node["L"]) {
    sw.L = rd.list<int>(l, "L", [&](const YAML::Node& n, std::string_view k) {
      const long long v = rd.integer(n, k);
      if (v < 1 || v > 1 << 15) rd.fail(n.Mark(), "sweep size L out of range");
      return static_cast<int>(v);
    });
  }
  if (node["K"]) sw.K = rd.list<double>(node["K"], "K", num);
  if (node["T_red"]) {
    sw.T_red = rd.list<double>(node["T_red"], "T_red", num);
    for (double t : *sw.T_red) {
      if (!(t > 0.0)) rd.fail(node["T_red"].Mark(), "sweep temperatures must be positive");
    }
  }
  if (node["b"]) sw.b = rd.list<double>(node["b"], "b", num);
  if (const auto c = node["chains"]) {
    sw.chains = rd.integer(c, "chains");
    if (sw.chains < 1) rd.fail(c.Mark(), "'chains' must be >= 1");
  }
}

}  // namespace

Config parse_config(std::string_view text, std::string_view origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    rd.fail(e.mark, e.msg);
  }

  Config cfg;
  if (root.IsNull()) return cfg;
  rd.require_map(root, "top level");

  // A run manifest carries the resolved config under 'resolved'.
  if (root["resolved"] && root["tool_version"]) root = root["resolved"];

  rd.check_keys(root, "top level",
                {"superfluid", "superconductor", "lattice", "couplings", "run", "cavitation",
                 "sweep"});
  bool field_given = false;
  if (const auto n = root["superfluid"]) parse_superfluid(rd, n, cfg.superfluid);
  if (const auto n = root["superconductor"]) parse_superconductor(rd, n, cfg.superconductor);
  if (const auto n = root["lattice"]) parse_lattice(rd, n, cfg.lattice, field_given);
  if (const auto n = root["couplings"]) parse_couplings(rd, n, cfg.couplings);
  if (const auto n = root["run"]) parse_run(rd, n, cfg.run, cfg.threads);
  if (const auto n = root["cavitation"]) parse_cavitation(rd, n, cfg.cavitation);
  if (const auto n = root["sweep"]) parse_sweep(rd, n, cfg.sweep);

  if (cfg.couplings.physical && field_given) {
    rd.fail(root["lattice"]["field"].Mark(),
            "'lattice.field' conflicts with 'couplings.physical', which sets the field");
  }
  if (cfg.couplings.physical) {
    const auto& p = *cfg.couplings.physical;
    rd.anchored(root["couplings"]["physical"], [&] {
      const double h = p.h;
      reduce_couplings(p.J, cfg.superfluid, std::span<const double>(&h, 1), p.T_star,
                       p.convention, p.unit_norm);
    });
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ":1:1: cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void resolve(Config& config) {
  auto& lat = config.lattice;
  if (!lat.init_seed) lat.init_seed = derive_seed(config.run.seed, kInitStream);
  if (lat.field.kind == FieldPattern::Kind::diluted) {
    if (!lat.field_seed) lat.field_seed = derive_seed(config.run.seed, kFieldStream);
    lat.field.seed = *lat.field_seed;
  }
  auto& sw = config.sweep;
  if (!sw.L && lat.lx == lat.ly && !lat.snapshot) sw.L = std::vector<int>{lat.lx};
  if (!sw.K) sw.K = std::vector<double>{effective_couplings(config).K};
  if (!sw.T_red) sw.T_red = std::vector<double>{effective_couplings(config).T_red};
  if (!sw.b) {
    if (config.couplings.physical) {
      sw.b = std::vector<double>{make_lattice(config).field(0)};
    } else if (lat.field.kind == FieldPattern::Kind::uniform && !lat.snapshot) {
      sw.b = std::vector<double>{lat.field.b};
    }
  }
}

nlohmann::ordered_json to_json(const Config& config) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["superfluid"] = {{"mass", config.superfluid.m_s},
                       {"r0", config.superfluid.r0},
                       {"charge", config.superfluid.q_s}};
  doc["superconductor"] = {{"charge", config.superconductor.e_c},
                           {"lambda", config.superconductor.lambda},
                           {"xi", config.superconductor.xi}};

  const auto& lat = config.lattice;
  ordered_json lattice;
  if (lat.snapshot) {
    lattice["snapshot"] = lat.snapshot->string();
  } else {
    lattice["lx"] = lat.lx;
    lattice["ly"] = lat.ly;
    lattice["bc"] = std::string(to_string(lat.bc));
    lattice["initial"] = std::string(to_string(lat.initial));
    if (lat.init_seed) lattice["init_seed"] = *lat.init_seed;
    if (!config.couplings.physical) {
      ordered_json field;
      field["kind"] = std::string(to_string(lat.field.kind));
      switch (lat.field.kind) {
        case FieldPattern::Kind::uniform:
          field["b"] = lat.field.b;
          break;
        case FieldPattern::Kind::diluted:
          field["b"] = lat.field.b;
          field["p"] = lat.field.p;
          field["seed"] = lat.field.seed;
          break;
        case FieldPattern::Kind::explicit_values:
          field["values"] = lat.field.values;
          break;
      }
      lattice["field"] = field;
    }
  }
  doc["lattice"] = lattice;

  if (config.couplings.physical) {
    const auto& p = *config.couplings.physical;
    ordered_json phys = {{"J", p.J},
                         {"h", p.h},
                         {"T_star", p.T_star},
                         {"convention", std::string(to_string(p.convention))}};
    if (p.unit_norm) phys["unit_norm"] = *p.unit_norm;
    doc["couplings"] = {{"physical", phys}};
  } else {
    doc["couplings"] = {{"K", config.couplings.couplings.K},
                        {"T_red", config.couplings.couplings.T_red}};
  }

  const auto& run = config.run;
  doc["run"] = {{"seed", run.seed},
                {"n_therm", run.n_therm},
                {"n_measure", run.n_measure},
                {"measure_every", run.measure_every},
                {"order", std::string(to_string(run.order))},
                {"blocks", run.blocks},
                {"global_flip", run.global_flip},
                {"threads", config.threads}};

  const auto& cav = config.cavitation;
  doc["cavitation"] = {{"J0", cav.params.J0},
                       {"delta_omega_max", cav.params.delta_omega_max},
                       {"T_star", cav.params.T_star},
                       {"source", std::string(to_string(cav.source))},
                       {"mode", std::string(to_string(cav.mode))}};

  const auto& sw = config.sweep;
  ordered_json sweep;
  if (sw.L) sweep["L"] = *sw.L;
  if (sw.K) sweep["K"] = *sw.K;
  if (sw.T_red) sweep["T_red"] = *sw.T_red;
  if (sw.b) sweep["b"] = *sw.b;
  sweep["chains"] = sw.chains;
  doc["sweep"] = sweep;
  return doc;
}

TriangularLattice make_lattice(const Config& config) {
  const auto& lat = config.lattice;
  if (lat.snapshot) return read_snapshot(*lat.snapshot);
  const Initialization init{lat.initial, lat.init_seed.value_or(0)};
  if (config.couplings.physical) {
    const auto& p = *config.couplings.physical;
    const double h = p.h;
    const auto reduced = reduce_couplings(p.J, config.superfluid, std::span<const double>(&h, 1),
                                          p.T_star, p.convention, p.unit_norm);
    return build_lattice(lat.lx, lat.ly, lat.bc, init, FieldPattern::uniform(reduced.b.front()));
  }
  return build_lattice(lat.lx, lat.ly, lat.bc, init, lat.field);
}

CouplingSet effective_couplings(const Config& config) {
  if (!config.couplings.physical) return config.couplings.couplings;
  const auto& p = *config.couplings.physical;
  return reduce_couplings(p.J, config.superfluid, {}, p.T_star, p.convention, p.unit_norm)
      .couplings;
}

SweepSpec make_sweep_spec(const Config& config) {
  const auto& sw = config.sweep;
  if (!sw.L) throw ConfigError("sweep needs 'sweep.L' (lattice is not square or is a snapshot)");
  if (!sw.b) throw ConfigError("sweep needs 'sweep.b' (lattice field is not uniform)");
  SweepSpec spec;
  spec.L = *sw.L;
  spec.K = sw.K.value_or(std::vector<double>{effective_couplings(config).K});
  spec.T_red = sw.T_red.value_or(std::vector<double>{effective_couplings(config).T_red});
  spec.b = *sw.b;
  spec.bc = config.lattice.bc;
  spec.initial = config.lattice.initial;
  spec.run = config.run;
  spec.chains = sw.chains;
  spec.threads = config.threads;
  return spec;
}

}  // namespace qcav
