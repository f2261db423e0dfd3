#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ghostsim/aberration.hpp"
#include "ghostsim/errors.hpp"
#include "ghostsim/noise.hpp"
#include "ghostsim/objects.hpp"
#include "ghostsim/pump.hpp"

namespace ghostsim {

// Line-oriented scenario configuration:
//   # comment
//   schema = 1
//   [section]
//   key = value
// Every entry keeps its source line so validation messages can point at it,
// and unknown keys are rejected rather than ignored.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
  mutable bool consumed = false;
};

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
  }

  static ConfigFile parse(const std::string& text, const std::string& name) {
    ConfigFile cfg;
    cfg.name_ = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        if (s.back() != ']')
          throw ConfigError(cfg.at(lineno) + "malformed section header '" + s + "'");
        section = strip(s.substr(1, s.size() - 2));
        if (section.empty()) throw ConfigError(cfg.at(lineno) + "empty section name");
        continue;
      }
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError(cfg.at(lineno) + "expected 'key = value', got '" + s + "'");
      std::string key = strip(s.substr(0, eq));
      std::string value = strip(s.substr(eq + 1));
      if (key.empty()) throw ConfigError(cfg.at(lineno) + "missing key before '='");
      cfg.entries_.push_back(ConfigEntry{section, key, value, lineno, false});
    }
    return cfg;
  }

  const std::string& name() const { return name_; }
  std::string at(int line) const { return name_ + ":" + std::to_string(line) + ": "; }
  std::string at(const ConfigEntry& e) const { return at(e.line); }

  const ConfigEntry* find(const std::string& section, const std::string& key) const {
    const ConfigEntry* hit = nullptr;
    for (const auto& e : entries_) {
      if (e.section == section && e.key == key) {
        if (hit)
          throw ConfigError(at(e) + "duplicate key '" + key + "'" +
                            (section.empty() ? "" : " in [" + section + "]"));
        hit = &e;
      }
    }
    if (hit) hit->consumed = true;
    return hit;
  }

  std::vector<const ConfigEntry*> find_all(const std::string& section,
                                           const std::string& key) const {
    std::vector<const ConfigEntry*> hits;
    for (const auto& e : entries_) {
      if (e.section == section && e.key == key) {
        e.consumed = true;
        hits.push_back(&e);
      }
    }
    return hits;
  }

  bool has_section(const std::string& section) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const ConfigEntry& e) { return e.section == section; });
  }

  // Strict schema: after the consumer has taken what it knows, anything left
  // is a typo worth failing on.
  void reject_unconsumed() const {
    for (const auto& e : entries_) {
      if (!e.consumed)
        throw ConfigError(at(e) + "unknown key '" + e.key + "'" +
                          (e.section.empty() ? "" : " in [" + e.section + "]"));
    }
  }

  double as_double(const ConfigEntry& e) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(at(e) + "'" + e.key + "' expects a number, got '" + e.value + "'");
    }
  }

  long long as_int(const ConfigEntry& e) const {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(at(e) + "'" + e.key + "' expects an integer, got '" + e.value + "'");
    }
  }

  bool as_bool(const ConfigEntry& e) const {
    if (e.value == "true" || e.value == "on" || e.value == "1") return true;
    if (e.value == "false" || e.value == "off" || e.value == "0") return false;
    throw ConfigError(at(e) + "'" + e.key + "' expects true/false, got '" + e.value + "'");
  }

  std::vector<std::string> as_list(const ConfigEntry& e) const {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(e.value);
    while (std::getline(in, item, ',')) {
      item = strip(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(std::uint8_t(s[b]))) ++b;
    while (e > b && std::isspace(std::uint8_t(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

 private:
  std::string name_;
  std::vector<ConfigEntry> entries_;
};

enum class EngineKind { ghost_fast, ghost_oracle, classical, baseline };

inline const char* engine_name(EngineKind e) {
  switch (e) {
    case EngineKind::ghost_fast: return "ghost-fast";
    case EngineKind::ghost_oracle: return "ghost-oracle";
    case EngineKind::classical: return "classical";
    case EngineKind::baseline: return "baseline";
  }
  return "?";
}

enum class ParityFilter { none, even, odd };

struct ScenarioConfig {
  // layout
  double wavelength = 0.5e-6;
  double z1 = 0.2;
  double z2 = 0.2;
  std::optional<double> focal_length;  // validated against the imaging condition
  // grid
  int dims = 1;
  int samples = 256;
  double extent = 2e-3;
  // aberration
  AberrationSpec aberration;
  bool aperture_radius_given = false;
  ParityFilter parity_filter = ParityFilter::none;
  // object
  std::string object_name = "double-slit";
  std::string object_pgm;  // exclusive with object_name
  double object_offset = 0.0;
  // pump
  PumpModel pump = plane_pump();
  // engines
  std::vector<EngineKind> engines = {EngineKind::ghost_fast};
  long n_steer = 0;  // 0: default to grid samples
  int oracle_max_n = 512;
  bool oracle_source_chirp = false;
  // run
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
};

struct NoiseRunConfig {
  CancellationConfig cancellation;
  std::string out_dir = "out";
};

namespace config_detail {

inline AberrationTerm parse_term(const ConfigFile& cfg, const ConfigEntry& e) {
  std::istringstream in(e.value);
  std::string kind;
  in >> kind;
  auto fields = [&]() {
    std::vector<std::pair<std::string, std::string>> kv;
    std::string tok;
    while (in >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw ConfigError(cfg.at(e) + "term field '" + tok + "' expects name=value");
      kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    return kv;
  };
  auto to_double = [&](const std::string& k, const std::string& v) {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError(cfg.at(e) + "term field '" + k + "' expects a number, got '" + v + "'");
    }
  };
  auto to_int = [&](const std::string& k, const std::string& v) {
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw ConfigError(cfg.at(e) + "term field '" + k + "' expects an integer, got '" + v + "'");
    }
  };
  if (kind == "zernike") {
    ZernikeTerm z;
    bool have_j = false, have_c = false;
    for (auto& [k, v] : fields()) {
      if (k == "j") {
        z.noll_index = to_int(k, v);
        have_j = true;
      } else if (k == "coeff") {
        z.coefficient = to_double(k, v);
        have_c = true;
      } else {
        throw ConfigError(cfg.at(e) + "unknown zernike term field '" + k + "'");
      }
    }
    if (!have_j || !have_c)
      throw ConfigError(cfg.at(e) + "zernike term needs j=<noll index> coeff=<radians>");
    return z;
  }
  if (kind == "monomial") {
    MonomialTerm m;
    bool have_c = false;
    for (auto& [k, v] : fields()) {
      if (k == "px") m.px = to_int(k, v);
      else if (k == "py") m.py = to_int(k, v);
      else if (k == "coeff") {
        m.coefficient = to_double(k, v);
        have_c = true;
      } else {
        throw ConfigError(cfg.at(e) + "unknown monomial term field '" + k + "'");
      }
    }
    if (!have_c) throw ConfigError(cfg.at(e) + "monomial term needs coeff=<radians/length^p>");
    return m;
  }
  throw ConfigError(cfg.at(e) + "unknown aberration term kind '" + kind +
                    "' (expected zernike or monomial)");
}

inline void require_schema(const ConfigFile& cfg) {
  const ConfigEntry* schema = cfg.find("", "schema");
  if (!schema) throw ConfigError(cfg.name() + ": missing mandatory top-level 'schema = 1'");
  if (cfg.as_int(*schema) != 1)
    throw ConfigError(cfg.at(*schema) + "unsupported schema version '" + schema->value + "'");
}

}  // namespace config_detail

inline ScenarioConfig load_scenario_config(const ConfigFile& cfg) {
  using config_detail::parse_term;
  config_detail::require_schema(cfg);
  ScenarioConfig sc;

  if (const auto* e = cfg.find("layout", "wavelength")) sc.wavelength = cfg.as_double(*e);
  if (const auto* e = cfg.find("layout", "z1")) sc.z1 = cfg.as_double(*e);
  if (const auto* e = cfg.find("layout", "z2")) sc.z2 = cfg.as_double(*e);
  const ConfigEntry* focal = cfg.find("layout", "f");
  if (focal) sc.focal_length = cfg.as_double(*focal);

  const ConfigEntry* dims_e = cfg.find("grid", "dims");
  const ConfigEntry* samples_e = cfg.find("grid", "samples");
  const ConfigEntry* extent_e = cfg.find("grid", "extent");
  if (dims_e) sc.dims = int(cfg.as_int(*dims_e));
  if (samples_e) sc.samples = int(cfg.as_int(*samples_e));
  if (extent_e) sc.extent = cfg.as_double(*extent_e);
  if (sc.dims != 1 && sc.dims != 2)
    throw ConfigError(dims_e ? cfg.at(*dims_e) + "grid dims must be 1 or 2"
                             : cfg.name() + ": grid dims must be 1 or 2");
  if (sc.samples <= 0 || sc.samples % 2 != 0)
    throw ConfigError(samples_e ? cfg.at(*samples_e) + "grid samples must be positive and even"
                                : cfg.name() + ": grid samples must be positive and even");
  if (!(sc.extent > 0))
    throw ConfigError(extent_e ? cfg.at(*extent_e) + "grid extent must be positive"
                               : cfg.name() + ": grid extent must be positive");

  sc.aberration.aperture_radius = sc.extent / 2.0;
  if (const auto* e = cfg.find("aberration", "aperture_radius")) {
    sc.aberration.aperture_radius = cfg.as_double(*e);
    sc.aperture_radius_given = true;
    if (!(sc.aberration.aperture_radius > 0))
      throw ConfigError(cfg.at(*e) + "aperture_radius must be positive");
  }
  if (const auto* e = cfg.find("aberration", "parity_filter")) {
    if (e->value == "none") sc.parity_filter = ParityFilter::none;
    else if (e->value == "even") sc.parity_filter = ParityFilter::even;
    else if (e->value == "odd") sc.parity_filter = ParityFilter::odd;
    else throw ConfigError(cfg.at(*e) + "parity_filter must be none, even, or odd");
  }
  for (const ConfigEntry* e : cfg.find_all("aberration", "term")) {
    const AberrationTerm term = parse_term(cfg, *e);
    if (const auto* z = std::get_if<ZernikeTerm>(&term)) {
      int n, m;
      bool sine;
      try {
        noll_to_nm(z->noll_index, n, m, sine);
      } catch (const std::exception& ex) {
        throw ConfigError(cfg.at(*e) + ex.what());
      }
      if (sc.dims != 2)
        throw ConfigError(cfg.at(*e) + "Zernike terms require a 2D grid (grid dims = 2)");
    } else {
      const auto& mt = std::get<MonomialTerm>(term);
      if (mt.px < 0 || mt.py < 0)
        throw ConfigError(cfg.at(*e) + "monomial exponents must be non-negative");
      if (sc.dims == 1 && mt.py != 0)
        throw ConfigError(cfg.at(*e) + "monomial py must be absent or 0 on a 1D grid");
    }
    sc.aberration.terms.push_back(term);
  }

  const ConfigEntry* obj_name = cfg.find("object", "name");
  const ConfigEntry* obj_pgm = cfg.find("object", "pgm");
  if (obj_name && obj_pgm)
    throw ConfigError(cfg.at(*obj_pgm) + "object takes either 'name' or 'pgm', not both");
  if (obj_pgm) {
    sc.object_pgm = obj_pgm->value;
    sc.object_name.clear();
  } else if (obj_name) {
    sc.object_name = obj_name->value;
    const auto& names = standard_object_names();
    if (std::find(names.begin(), names.end(), sc.object_name) == names.end())
      throw ConfigError(cfg.at(*obj_name) + "unknown standard object '" + sc.object_name + "'");
  }
  if (const auto* e = cfg.find("object", "offset")) sc.object_offset = cfg.as_double(*e);

  if (const auto* e = cfg.find("pump", "kind")) {
    if (e->value == "plane") sc.pump = plane_pump();
    else if (e->value == "gaussian") sc.pump.kind = PumpModel::Kind::gaussian;
    else throw ConfigError(cfg.at(*e) + "pump kind must be plane or gaussian");
  }
  if (const auto* e = cfg.find("pump", "width")) {
    sc.pump.width = cfg.as_double(*e);
    if (sc.pump.kind == PumpModel::Kind::gaussian && !(sc.pump.width > 0))
      throw ConfigError(cfg.at(*e) + "gaussian pump width must be positive");
  }
  if (sc.pump.kind == PumpModel::Kind::gaussian && !(sc.pump.width > 0))
    throw ConfigError(cfg.name() + ": gaussian pump requires [pump] width > 0");

  const ConfigEntry* engines_e = cfg.find("engines", "run");
  if (engines_e) {
    sc.engines.clear();
    for (const std::string& name : cfg.as_list(*engines_e)) {
      if (name == "ghost-fast") sc.engines.push_back(EngineKind::ghost_fast);
      else if (name == "ghost-oracle") sc.engines.push_back(EngineKind::ghost_oracle);
      else if (name == "classical") sc.engines.push_back(EngineKind::classical);
      else if (name == "baseline") sc.engines.push_back(EngineKind::baseline);
      else
        throw ConfigError(cfg.at(*engines_e) + "unknown engine '" + name +
                          "' (ghost-fast, ghost-oracle, classical, baseline)");
    }
    if (sc.engines.empty())
      throw ConfigError(cfg.at(*engines_e) + "at least one engine must be requested");
  }

  if (const auto* e = cfg.find("classical", "n_steer")) {
    sc.n_steer = long(cfg.as_int(*e));
    if (sc.n_steer < 1) throw ConfigError(cfg.at(*e) + "n_steer must be >= 1");
  }
  if (const auto* e = cfg.find("oracle", "max_n")) {
    sc.oracle_max_n = int(cfg.as_int(*e));
    if (sc.oracle_max_n < 2) throw ConfigError(cfg.at(*e) + "oracle max_n must be >= 2");
  }
  if (const auto* e = cfg.find("oracle", "source_chirp"))
    sc.oracle_source_chirp = cfg.as_bool(*e);

  if (const auto* e = cfg.find("", "out")) sc.out_dir = e->value;
  if (const auto* e = cfg.find("", "seed")) sc.seed = std::uint64_t(cfg.as_int(*e));
  if (const auto* e = cfg.find("", "threads")) {
    sc.threads = int(cfg.as_int(*e));
    if (sc.threads < 1) throw ConfigError(cfg.at(*e) + "threads must be >= 1");
  }

  // cross-field guards, reported against the most specific line we have
  if (!(sc.wavelength > 0) || !(sc.z1 > 0) || !(sc.z2 > 0))
    throw ConfigError(cfg.name() + ": [layout] wavelength, z1, z2 must all be positive");
  if (sc.focal_length) {
    if (!(*sc.focal_length > 0))
      throw ConfigError(cfg.at(*focal) + "focal length must be positive");
    if (std::abs(1.0 / sc.z1 + 1.0 / sc.z2 - 1.0 / *sc.focal_length) > 1e-9 / *sc.focal_length)
      throw ConfigError(cfg.at(*focal) +
                        "z1, z2, f violate the imaging condition 1/z1 + 1/z2 = 1/f");
  }
  const bool oracle_requested =
      std::find(sc.engines.begin(), sc.engines.end(), EngineKind::ghost_oracle) !=
      sc.engines.end();
  if (oracle_requested) {
    const std::string where =
        engines_e ? cfg.at(*engines_e) : cfg.name() + ": ";
    if (sc.dims != 1)
      throw ConfigError(where + "ghost-oracle is 1D-only (grid dims must be 1)");
    if (sc.samples > sc.oracle_max_n)
      throw ConfigError(where + "ghost-oracle cost guard: grid samples " +
                        std::to_string(sc.samples) + " exceeds max_n " +
                        std::to_string(sc.oracle_max_n));
  }
  cfg.reject_unconsumed();
  return sc;
}

inline NoiseRunConfig load_noise_config(const ConfigFile& cfg) {
  config_detail::require_schema(cfg);
  NoiseRunConfig nc;
  CancellationConfig& c = nc.cancellation;
  if (const auto* e = cfg.find("noise", "n_ladder")) {
    c.n_ladder.clear();
    for (const std::string& item : cfg.as_list(*e)) {
      try {
        const long long v = std::stoll(item);
        if (v < 2) throw std::invalid_argument("");
        c.n_ladder.push_back(std::size_t(v));
      } catch (const std::exception&) {
        throw ConfigError(cfg.at(*e) + "n_ladder expects integers >= 2, got '" + item + "'");
      }
    }
    if (c.n_ladder.empty()) throw ConfigError(cfg.at(*e) + "n_ladder must not be empty");
  }
  if (const auto* e = cfg.find("noise", "replicates")) {
    c.replicates = int(cfg.as_int(*e));
    if (c.replicates < 1) throw ConfigError(cfg.at(*e) + "replicates must be >= 1");
  }
  if (const auto* e = cfg.find("noise", "signal_correlation")) {
    c.signal_correlation = cfg.as_double(*e);
    if (std::abs(c.signal_correlation) > 1.0)
      throw ConfigError(cfg.at(*e) + "signal_correlation must satisfy |rho| <= 1");
  }
  auto non_negative = [&](const char* key, double& slot) {
    if (const auto* e = cfg.find("noise", key)) {
      slot = cfg.as_double(*e);
      if (slot < 0) throw ConfigError(cfg.at(*e) + std::string(key) + " must be >= 0");
    }
  };
  non_negative("signal_std", c.signal_std);
  non_negative("dark_std_1", c.dark_std_1);
  non_negative("dark_std_2", c.dark_std_2);
  if (const auto* e = cfg.find("noise", "signal_mean_1")) c.means.signal_mean_1 = cfg.as_double(*e);
  if (const auto* e = cfg.find("noise", "dark_mean_1")) c.means.dark_mean_1 = cfg.as_double(*e);
  if (const auto* e = cfg.find("noise", "signal_mean_2")) c.means.signal_mean_2 = cfg.as_double(*e);
  if (const auto* e = cfg.find("noise", "dark_mean_2")) c.means.dark_mean_2 = cfg.as_double(*e);
  if (const auto* e = cfg.find("", "seed")) c.seed = std::uint64_t(cfg.as_int(*e));
  if (const auto* e = cfg.find("", "threads")) {
    c.threads = int(cfg.as_int(*e));
    if (c.threads < 1) throw ConfigError(cfg.at(*e) + "threads must be >= 1");
  }
  if (const auto* e = cfg.find("", "out")) nc.out_dir = e->value;
  cfg.reject_unconsumed();
  return nc;
}

}  // namespace ghostsim
