#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jitterpovm/detector.hpp"
#include "jitterpovm/jitter.hpp"
#include "jitterpovm/states.hpp"

namespace jitterpovm {

/// Malformed scenario config; the message carries file and line.
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& file, int line_, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line_) + ": " + what), line(line_) {}
};

/// Flat typed key-value config with [section] headers.
///
/// Grammar: '[section]' or '[section.sub]' lines open a section; 'key =
/// value' lines define 'section.key'; '#' or ';' start a full-line comment;
/// blank lines are ignored. Keys are validated against the documented
/// schema at parse time — unknown sections, unknown keys, and duplicate
/// keys are rejected with their line number.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& name = "<config>");

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_number_list(const std::string& key) const;

  const std::string& name() const { return name_; }
  int line_of(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries_;
  std::string name_;

  const Entry& require(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

/// Jitter distribution from the keys under `prefix` (e.g. "detector.A"),
/// falling back to the shared "detector" section key by key.
JitterDistribution jitter_from_config(const Config& cfg, const std::string& prefix);

/// Detector for arm 'A' or 'B' ([detector.X] overriding [detector]), or the
/// shared section alone for arm 0.
DetectorModel detector_from_config(const Config& cfg, char arm);

/// Wavepacket from [state] (wavepacket = rectangular | gaussian) sampled at
/// the given step.
TemporalAmplitude wavepacket_from_config(const Config& cfg, double max_dt);

/// Relative-delay amplitude chi from [state] (chi = rectangular | gaussian);
/// call only when `state.chi` is present and not "simultaneous".
TemporalAmplitude chi_from_config(const Config& cfg, double max_dt);

}  // namespace jitterpovm
