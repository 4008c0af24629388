#include "jitterpovm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace jitterpovm {

namespace {

const std::set<std::string> kSections = {"detector", "detector.A", "detector.B", "state", "grid", "run", "sweep"};

const std::map<std::string, std::set<std::string>> kKeys = {
    {"detector",
     {"jitter", "mu", "sigma", "mean", "std", "a", "b", "center", "halfwidth", "efficiency", "dark_rate"}},
    {"state", {"arrivals", "k", "t", "wavepacket", "center", "width", "std", "chi", "chi_center", "chi_width",
               "chi_std"}},
    {"grid", {"dt", "t_min", "t_max"}},
    {"run", {"trials", "seed", "threads", "out", "herald_time", "bins", "selftest_efficiency_scale_b"}},
    {"sweep", {"k", "jitter_std"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& keys_for(const std::string& section) {
  // detector.A / detector.B share the detector key set
  const std::string base = section.compare(0, 9, "detector.") == 0 ? "detector" : section;
  return kKeys.at(base);
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(name, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) throw ConfigError(name, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(name, line_no, "expected 'key = value'");
    if (section.empty()) throw ConfigError(name, line_no, "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(name, line_no, "empty key");
    if (value.empty()) throw ConfigError(name, line_no, "empty value for '" + key + "'");
    if (!keys_for(section).count(key))
      throw ConfigError(name, line_no, "unknown key '" + key + "' in section [" + section + "]");
    const std::string full = section + "." + key;
    if (!cfg.entries_.emplace(full, Entry{value, line_no}).second)
      throw ConfigError(name, line_no, "duplicate key '" + full + "'");
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const Config::Entry& Config::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(name_, 0, "missing required key '" + key + "'");
  return it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(name_, line_of(key), "key '" + key + "': " + what);
}

int Config::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_number(const std::string& key) const {
  const std::string& v = require(key).value;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) fail(key, "'" + v + "' is not a number");
  return x;
}

double Config::get_number(const std::string& key, double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = require(key).value;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) fail(key, "'" + v + "' is not an integer");
  return x;
}

std::vector<double> Config::get_number_list(const std::string& key) const {
  const std::string& v = require(key).value;
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail(key, "'" + tok + "' is not a number");
    out.push_back(x);
  }
  if (out.empty()) fail(key, "expected a list of numbers");
  return out;
}

namespace {

// Key lookup under `prefix` with fallback to the shared [detector] section.
struct ArmView {
  const Config& cfg;
  std::string prefix;

  bool has(const std::string& key) const { return cfg.has(prefix + "." + key) || cfg.has("detector." + key); }
  std::string where(const std::string& key) const {
    return cfg.has(prefix + "." + key) ? prefix + "." + key : "detector." + key;
  }
  std::string str(const std::string& key) const { return cfg.get_string(where(key)); }
  double num(const std::string& key) const { return cfg.get_number(where(key)); }
  double num(const std::string& key, double fallback) const {
    return has(key) ? cfg.get_number(where(key)) : fallback;
  }
};

}  // namespace

JitterDistribution jitter_from_config(const Config& cfg, const std::string& prefix) {
  const ArmView arm{cfg, prefix};
  if (!arm.has("jitter")) throw ConfigError(cfg.name(), 0, "missing key '" + prefix + ".jitter'");
  const std::string kind = arm.str("jitter");
  if (kind == "lognormal") return JitterDistribution::log_normal(arm.num("mu"), arm.num("sigma"));
  if (kind == "lognormal-moments")
    return JitterDistribution::log_normal_from_moments(arm.num("mean"), arm.num("std"));
  if (kind == "truncated-gaussian") return JitterDistribution::truncated_gaussian(arm.num("mean"), arm.num("std"));
  if (kind == "rectangular") return JitterDistribution::rectangular(arm.num("a"), arm.num("b"));
  if (kind == "near-delta") return JitterDistribution::near_delta(arm.num("center"), arm.num("halfwidth"));
  throw ConfigError(cfg.name(), cfg.line_of(arm.where("jitter")), "unknown jitter kind '" + kind + "'");
}

DetectorModel detector_from_config(const Config& cfg, char arm) {
  const std::string prefix = arm ? std::string("detector.") + arm : "detector";
  const ArmView view{cfg, prefix};
  return DetectorModel(view.num("efficiency", 1.0), jitter_from_config(cfg, prefix), view.num("dark_rate", 0.0));
}

TemporalAmplitude wavepacket_from_config(const Config& cfg, double max_dt) {
  const std::string kind = cfg.get_string("state.wavepacket", "rectangular");
  if (kind == "rectangular")
    return TemporalAmplitude::rectangular(cfg.get_number("state.center", 0.0), cfg.get_number("state.width", 1.0),
                                          max_dt);
  if (kind == "gaussian")
    return TemporalAmplitude::gaussian(cfg.get_number("state.center", 0.0), cfg.get_number("state.std"), max_dt);
  throw ConfigError(cfg.name(), cfg.line_of("state.wavepacket"), "unknown wavepacket kind '" + kind + "'");
}

TemporalAmplitude chi_from_config(const Config& cfg, double max_dt) {
  const std::string kind = cfg.get_string("state.chi");
  if (kind == "rectangular")
    return TemporalAmplitude::rectangular(cfg.get_number("state.chi_center", 0.0), cfg.get_number("state.chi_width"),
                                          max_dt);
  if (kind == "gaussian")
    return TemporalAmplitude::gaussian(cfg.get_number("state.chi_center", 0.0), cfg.get_number("state.chi_std"),
                                       max_dt);
  throw ConfigError(cfg.name(), cfg.line_of("state.chi"), "unknown chi kind '" + kind + "'");
}

}  // namespace jitterpovm
