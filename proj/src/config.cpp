#include "srq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace srq {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid configuration";
  for (const auto& i : issues) os << "\n  " << i;
  return os.str();
}

class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& what) { issues.push_back(path + ": " + what); }

  bool number(const nlohmann::json& j, const std::string& path, double& out) {
    if (!j.is_number()) {
      fail(path, "expected a number");
      return false;
    }
    out = j.get<double>();
    if (!std::isfinite(out)) {
      fail(path, "must be finite");
      return false;
    }
    return true;
  }

  bool unsigned_int(const nlohmann::json& j, const std::string& path, std::uint64_t& out) {
    if (!j.is_number_integer() || (j.is_number_integer() && j.get<std::int64_t>() < 0 &&
                                   !j.is_number_unsigned())) {
      fail(path, "expected a non-negative integer");
      return false;
    }
    out = j.get<std::uint64_t>();
    return true;
  }

  bool text(const nlohmann::json& j, const std::string& path, std::string& out) {
    if (!j.is_string()) {
      fail(path, "expected a string");
      return false;
    }
    out = j.get<std::string>();
    return true;
  }

  bool amplitude(const nlohmann::json& j, const std::string& path, Amplitude& out) {
    if (j.is_number()) {
      out = j.get<double>();
      return true;
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      out = {j[0].get<double>(), j[1].get<double>()};
      return true;
    }
    fail(path, "expected a number or [re, im]");
    return false;
  }

  bool coeffs(const nlohmann::json& j, const std::string& path, SuperpositionCoeffs& out) {
    if (!j.is_array() || j.size() != 2) {
      fail(path, "expected [c0, c1]");
      return false;
    }
    bool ok = amplitude(j[0], path + "[0]", out.c0);
    ok = amplitude(j[1], path + "[1]", out.c1) && ok;
    if (ok) {
      const double n = std::norm(out.c0) + std::norm(out.c1);
      if (std::abs(n - 1.0) > 1e-9) {
        fail(path, "|c0|^2 + |c1|^2 must equal 1");
        return false;
      }
      // Absorb representation rounding so downstream 1e-12 checks hold.
      const double s = 1.0 / std::sqrt(n);
      out.c0 *= s;
      out.c1 *= s;
    }
    return ok;
  }

  template <class Parse>
  void enumeration(const nlohmann::json& j, const std::string& path, Parse&& parse) {
    std::string s;
    if (!text(j, path, s)) return;
    try {
      parse(s);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
};

const std::vector<std::string> kConfigKeys = {
    "schema_version",       "alpha",         "beta",
    "rounds",               "seed",          "run_index",
    "eta",                  "backend",       "projector_convention",
    "bell_sample_fraction", "key_sacrifice_fraction", "detection_sigma",
    "min_cell_samples",     "eve",           "forced_settings"};

SettingKind parse_setting(const std::string& s) {
  if (s == "number") return SettingKind::Number;
  if (s == "superposition") return SettingKind::Superposition;
  throw std::invalid_argument("expected \"number\" or \"superposition\"");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

Backend parse_backend(const std::string& s) {
  if (s == "ideal") return Backend::Ideal;
  if (s == "device") return Backend::OpticsDevice;
  if (s == "cavity") return Backend::Cavity;
  throw std::invalid_argument("unknown backend \"" + s + "\" (ideal|device|cavity)");
}

ProjectorConvention parse_convention(const std::string& s) {
  if (s == "operational") return ProjectorConvention::Operational;
  if (s == "literal") return ProjectorConvention::Literal;
  throw std::invalid_argument("unknown projector convention \"" + s + "\" (operational|literal)");
}

EveTargets parse_targets(const std::string& s) {
  if (s == "none") return EveTargets::None;
  if (s == "arm_A") return EveTargets::ArmA;
  if (s == "arm_B") return EveTargets::ArmB;
  if (s == "both") return EveTargets::Both;
  throw std::invalid_argument("unknown eve targets \"" + s + "\" (none|arm_A|arm_B|both)");
}

ProtocolConfig protocol_config_from_json(const nlohmann::json& root) {
  Reader r;
  ProtocolConfig c;
  if (!root.is_object()) throw ConfigError({"$: expected an object"});

  for (const auto& [key, value] : root.items()) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      r.fail("$." + key, "unknown field");
    }
  }

  if (!root.contains("schema_version")) {
    r.fail("$.schema_version", "missing");
  } else {
    std::uint64_t v = 0;
    if (r.unsigned_int(root["schema_version"], "$.schema_version", v) && v != kSchemaVersion) {
      r.fail("$.schema_version", "unsupported version " + std::to_string(v));
    }
  }

  auto opt_number = [&](const char* key, double& out) {
    if (root.contains(key)) r.number(root[key], std::string("$.") + key, out);
  };
  auto opt_uint = [&](const char* key, std::uint64_t& out) {
    if (root.contains(key)) r.unsigned_int(root[key], std::string("$.") + key, out);
  };

  const bool has_alpha = root.contains("alpha");
  const bool has_beta = root.contains("beta");
  opt_number("alpha", c.alpha);
  opt_number("beta", c.beta);
  if (has_alpha && !has_beta) c.beta = std::sqrt(std::max(0.0, 1.0 - c.alpha * c.alpha));
  if (has_beta && !has_alpha) c.alpha = std::sqrt(std::max(0.0, 1.0 - c.beta * c.beta));
  if (std::abs(c.alpha * c.alpha + c.beta * c.beta - 1.0) > 1e-12) {
    r.fail("$.beta", "alpha^2 + beta^2 must equal 1");
  }

  opt_uint("rounds", c.rounds);
  if (root.contains("rounds") && c.rounds < 1) r.fail("$.rounds", "must be >= 1");
  opt_uint("seed", c.seed);
  opt_uint("run_index", c.run_index);
  opt_number("eta", c.eta);
  if (!(c.eta > 0.0 && c.eta <= 1.0)) r.fail("$.eta", "must lie in (0, 1]");
  opt_number("bell_sample_fraction", c.bell_sample_fraction);
  if (!(c.bell_sample_fraction > 0.0 && c.bell_sample_fraction <= 1.0)) {
    r.fail("$.bell_sample_fraction", "must lie in (0, 1]");
  }
  opt_number("key_sacrifice_fraction", c.key_sacrifice_fraction);
  if (!(c.key_sacrifice_fraction >= 0.0 && c.key_sacrifice_fraction <= 1.0)) {
    r.fail("$.key_sacrifice_fraction", "must lie in [0, 1]");
  }
  opt_number("detection_sigma", c.detection_sigma);
  if (!(c.detection_sigma > 0.0)) r.fail("$.detection_sigma", "must be > 0");
  opt_uint("min_cell_samples", c.min_cell_samples);

  if (root.contains("backend")) {
    r.enumeration(root["backend"], "$.backend", [&](const std::string& s) { c.backend = parse_backend(s); });
  }
  if (root.contains("projector_convention")) {
    r.enumeration(root["projector_convention"], "$.projector_convention",
                  [&](const std::string& s) { c.convention = parse_convention(s); });
  }
  if (root.contains("forced_settings")) {
    const auto& f = root["forced_settings"];
    if (f.is_null()) {
      c.forced_settings.reset();
    } else if (!f.is_array() || f.size() != 2) {
      r.fail("$.forced_settings", "expected [alice, bob] or null");
    } else {
      std::pair<SettingKind, SettingKind> fs;
      r.enumeration(f[0], "$.forced_settings[0]", [&](const std::string& s) { fs.first = parse_setting(s); });
      r.enumeration(f[1], "$.forced_settings[1]", [&](const std::string& s) { fs.second = parse_setting(s); });
      c.forced_settings = fs;
    }
  }

  if (root.contains("eve")) {
    const auto& e = root["eve"];
    if (!e.is_object()) {
      r.fail("$.eve", "expected an object");
    } else {
      for (const auto& [key, value] : e.items()) {
        if (key != "targets" && key != "atoms") r.fail("$.eve." + key, "unknown field");
      }
      if (e.contains("targets")) {
        r.enumeration(e["targets"], "$.eve.targets",
                      [&](const std::string& s) { c.eve.targets = parse_targets(s); });
      }
      if (e.contains("atoms")) {
        const auto& atoms = e["atoms"];
        if (!atoms.is_array()) {
          r.fail("$.eve.atoms", "expected an array");
        } else {
          double total = 0.0;
          for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string p = "$.eve.atoms[" + std::to_string(i) + "]";
            const auto& a = atoms[i];
            if (!a.is_object()) {
              r.fail(p, "expected an object");
              continue;
            }
            EveAtom atom;
            if (a.contains("weight")) {
              if (r.number(a["weight"], p + ".weight", atom.weight) && !(atom.weight > 0.0)) {
                r.fail(p + ".weight", "must be > 0");
              }
            }
            if (a.contains("eA")) r.coeffs(a["eA"], p + ".eA", atom.eA);
            if (a.contains("eB")) r.coeffs(a["eB"], p + ".eB", atom.eB);
            for (const auto& [key, value] : a.items()) {
              if (key != "weight" && key != "eA" && key != "eB") r.fail(p + "." + key, "unknown field");
            }
            total += atom.weight;
            c.eve.atoms.push_back(atom);
          }
          if (!atoms.empty() && std::abs(total - 1.0) > 1e-12) {
            r.fail("$.eve.atoms", "weights must sum to 1");
          }
        }
      }
      if (c.eve.targets != EveTargets::None && c.eve.atoms.empty()) {
        r.fail("$.eve.atoms", "required when targets is not \"none\"");
      }
    }
  }

  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return c;
}

Json to_json(const SuperpositionCoeffs& u) {
  return Json::array({Json::array({u.c0.real(), u.c0.imag()}),
                      Json::array({u.c1.real(), u.c1.imag()})});
}

Json to_json(const EveStrategy& eve) {
  Json j;
  j["targets"] = to_string(eve.targets);
  Json atoms = Json::array();
  for (const auto& a : eve.atoms) {
    Json aj;
    aj["weight"] = a.weight;
    aj["eA"] = to_json(a.eA);
    aj["eB"] = to_json(a.eB);
    atoms.push_back(std::move(aj));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

Json to_json(const ProtocolConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["rounds"] = c.rounds;
  j["seed"] = c.seed;
  j["run_index"] = c.run_index;
  j["eta"] = c.eta;
  j["backend"] = to_string(c.backend);
  j["projector_convention"] = to_string(c.convention);
  j["bell_sample_fraction"] = c.bell_sample_fraction;
  j["key_sacrifice_fraction"] = c.key_sacrifice_fraction;
  j["detection_sigma"] = c.detection_sigma;
  j["min_cell_samples"] = c.min_cell_samples;
  j["eve"] = to_json(c.eve);
  if (c.forced_settings) {
    j["forced_settings"] = Json::array({to_string(c.forced_settings->first),
                                        to_string(c.forced_settings->second)});
  }
  return j;
}

ProtocolConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open"});
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  if (j.is_object() && j.contains("config")) {
    if (j.contains("schema_version") &&
        !(j["schema_version"].is_number_integer() && j["schema_version"].get<int>() == kSchemaVersion)) {
      throw ConfigError({"$.schema_version: unsupported manifest version"});
    }
    return protocol_config_from_json(j["config"]);
  }
  return protocol_config_from_json(j);
}

Json make_manifest(const std::string& command, const ProtocolConfig& config, Json extra) {
  Json m;
  m["schema_version"] = kSchemaVersion;
  m["tool_version"] = kToolVersion;
  m["command"] = command;
  m["seed"] = config.seed;
  m["projector_convention"] = to_string(config.convention);
  if (!extra.is_null()) m["parameters"] = std::move(extra);
  m["config"] = to_json(config);
  return m;
}

}  // namespace srq
