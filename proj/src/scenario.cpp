#include "scenario.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace opp::harness {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      return false;
  return true;
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? key : "[" + section + "] " + key;
}

}  // namespace

IniDoc IniDoc::parse_text(const std::string& text) {
  IniDoc doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw parse_error("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!valid_key(section))
        throw parse_error("line " + std::to_string(lineno) + ": bad section name");
      doc.sections[section];
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw parse_error("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!valid_key(key)) throw parse_error("line " + std::to_string(lineno) + ": bad key");
    if (doc.sections[section].count(key))
      throw parse_error("line " + std::to_string(lineno) + ": duplicate key " + where(section, key));
    doc.sections[section][key] = value;
  }
  return doc;
}

IniDoc IniDoc::load(const std::string& path) { return parse_text(read_file(path)); }

std::string IniDoc::canonical() const {
  std::string out;
  auto emit = [&](const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  };
  auto top = sections.find("");
  if (top != sections.end()) emit(top->second);
  for (const auto& [name, kv] : sections) {
    if (name.empty()) continue;
    out += "\n[" + name + "]\n";
    emit(kv);
  }
  return out;
}

bool IniDoc::has(const std::string& section, const std::string& key) const {
  auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

const std::string& IniDoc::get(const std::string& section, const std::string& key) const {
  auto it = sections.find(section);
  if (it == sections.end() || !it->second.count(key))
    throw config_error("missing field " + where(section, key));
  return it->second.at(key);
}

std::string IniDoc::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

void IniDoc::set(const std::string& section, const std::string& key, const std::string& value) {
  sections[section][key] = value;
}

double IniDoc::get_double(const std::string& section, const std::string& key) const {
  const std::string& v = get(section, key);
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw config_error(where(section, key) + ": expected a number, got '" + v + "'");
  return d;
}

long long IniDoc::get_int(const std::string& section, const std::string& key) const {
  const std::string& v = get(section, key);
  char* end = nullptr;
  long long d = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw config_error(where(section, key) + ": expected an integer, got '" + v + "'");
  return d;
}

std::uint64_t IniDoc::get_u64(const std::string& section, const std::string& key) const {
  const std::string& v = get(section, key);
  char* end = nullptr;
  unsigned long long d = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw config_error(where(section, key) + ": expected an unsigned integer, got '" + v + "'");
  return d;
}

std::vector<double> IniDoc::get_doubles(const std::string& section, const std::string& key) const {
  std::istringstream in(get(section, key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    double d = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw config_error(where(section, key) + ": bad list element '" + tok + "'");
    out.push_back(d);
  }
  return out;
}

std::vector<long long> IniDoc::get_ints(const std::string& section, const std::string& key) const {
  std::istringstream in(get(section, key));
  std::vector<long long> out;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    long long d = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
      throw config_error(where(section, key) + ": bad list element '" + tok + "'");
    out.push_back(d);
  }
  return out;
}

std::string format_double(double v) {
  // shortest representation that parses back to the same double
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return "0";
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<long long>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

double Scenario::param_double(const std::string& key) const { return doc.get_double("params", key); }

long long Scenario::param_int(const std::string& key) const { return doc.get_int("params", key); }

double Scenario::param_double_or(const std::string& key, double fallback) const {
  return doc.has("params", key) ? doc.get_double("params", key) : fallback;
}

long long Scenario::param_int_or(const std::string& key, long long fallback) const {
  return doc.has("params", key) ? doc.get_int("params", key) : fallback;
}

Scenario scenario_parse(const std::string& text) {
  Scenario s;
  s.doc = IniDoc::parse_text(text);
  s.family = s.doc.get("", "family");
  if (s.family != "mts" && s.family != "kserver" && s.family != "parking")
    throw config_error("family: expected mts, kserver or parking, got '" + s.family + "'");
  s.algorithm = s.doc.get("", "algorithm");
  s.pricing = s.doc.get("", "pricing");
  s.generator = s.doc.get("", "generator");
  s.seed = s.doc.get_u64("", "seed");
  long long trials = s.doc.get_int("", "trials");
  if (trials < 1 || trials > 1000000) throw config_error("trials: out of range");
  s.trials = static_cast<int>(trials);
  long long jobs = s.doc.has("", "jobs") ? s.doc.get_int("", "jobs") : 1;
  if (jobs < 1 || jobs > 256) throw config_error("jobs: out of range");
  s.jobs = static_cast<int>(jobs);
  s.tie_policy = s.doc.get_or("", "tie_policy", "first");
  s.format = s.doc.get_or("", "format", "csv");
  if (s.format != "csv" && s.format != "tsv")
    throw config_error("format: expected csv or tsv, got '" + s.format + "'");
  s.out = s.doc.get_or("", "out", "");
  s.instance_path = s.doc.get_or("", "instance", "");
  if (s.generator == "file" && s.instance_path.empty())
    throw config_error("instance: required when generator = file");
  return s;
}

Scenario scenario_load(const std::string& path) {
  try {
    return scenario_parse(read_file(path));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

std::string scenario_canonical(const Scenario& s) { return s.doc.canonical(); }

void scenario_set(Scenario& s, const std::string& key, const std::string& value) {
  // validate on a copy so a rejected override leaves the scenario untouched
  IniDoc doc = s.doc;
  doc.set("", key, value);
  Scenario fresh = scenario_parse(doc.canonical());
  s = fresh;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace opp::harness
