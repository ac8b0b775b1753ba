#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace opp::harness {

// Minimal structured text document: `key = value` pairs grouped under
// `[section]` headers, `#` starts a comment line, lists are space separated.
// The canonical encoding sorts sections and keys so serialization is stable.
struct IniDoc {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static IniDoc parse_text(const std::string& text);
  static IniDoc load(const std::string& path);
  std::string canonical() const;

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  double get_double(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<long long> get_ints(const std::string& section, const std::string& key) const;
};

std::string format_double(double v);                 // shortest round-trip form
std::string join_doubles(const std::vector<double>& v);
std::string join_ints(const std::vector<long long>& v);

// A fully explicit experiment description. Every field the run depends on is
// spelled out in the document; nothing is read from ambient state.
struct Scenario {
  std::string family;     // mts | kserver | parking
  std::string algorithm;  // family specific, see runner
  std::string pricing;    // none | traversal | thresholds | balance2 | harmonic | monotone | min-sum
  std::string generator;  // uniform | line | tree | adversarial | file
  std::uint64_t seed = 0;
  int trials = 1;
  int jobs = 1;
  std::string tie_policy = "first";
  std::string format = "csv";  // csv | tsv
  std::string out;             // empty = stdout
  std::string instance_path;   // for generator = file
  IniDoc doc;                  // retains family specific sections

  double param_double(const std::string& key) const;
  long long param_int(const std::string& key) const;
  double param_double_or(const std::string& key, double fallback) const;
  long long param_int_or(const std::string& key, long long fallback) const;
};

Scenario scenario_parse(const std::string& text);
Scenario scenario_load(const std::string& path);
std::string scenario_canonical(const Scenario& s);

// Override a top-level field after loading (CLI flags).
void scenario_set(Scenario& s, const std::string& key, const std::string& value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace opp::harness
