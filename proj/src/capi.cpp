#include "opp/opp.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "demo.hpp"
#include "errors.hpp"
#include "runner.hpp"
#include "scenario.hpp"
#include "verify.hpp"

struct opp_scenario {
  opp::harness::Scenario s;
};

struct opp_report {
  opp::harness::RunReport r;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Every entry point funnels through here so the error-to-status mapping
// stays in one place.
template <class F>
opp_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const opp::config_error& e) {
    g_last_error = e.what();
    return OPP_ECONFIG;
  } catch (const opp::parse_error& e) {
    g_last_error = e.what();
    return OPP_EPARSE;
  } catch (const opp::io_error& e) {
    g_last_error = e.what();
    return OPP_EIO;
  } catch (const opp::unsupported_error& e) {
    g_last_error = e.what();
    return OPP_EUNSUPPORTED;
  } catch (const opp::input_error& e) {
    g_last_error = e.what();
    return OPP_EINVAL;
  } catch (const opp::internal_error& e) {
    g_last_error = e.what();
    return OPP_EINTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OPP_EINTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return OPP_EINTERNAL;
  }
}

opp_status require(bool ok, const char* what) {
  if (ok) {
    g_last_error.clear();
    return OPP_OK;
  }
  g_last_error = what;
  return OPP_EINVAL;
}

opp_status emit_string(const std::string& text, char** out) {
  *out = dup_string(text);
  if (!*out) {
    g_last_error = "out of memory";
    return OPP_EINTERNAL;
  }
  return OPP_OK;
}

}  // namespace

extern "C" {

const char* opp_version(void) { return "1.0.0"; }

const char* opp_last_error(void) { return g_last_error.c_str(); }

void opp_string_free(char* s) { std::free(s); }

opp_status opp_scenario_parse(const char* text, opp_scenario** out) {
  if (require(text && out, "opp_scenario_parse: null argument")) return OPP_EINVAL;
  *out = nullptr;
  return guarded([&] {
    *out = new opp_scenario{opp::harness::scenario_parse(text)};
    return OPP_OK;
  });
}

opp_status opp_scenario_load(const char* path, opp_scenario** out) {
  if (require(path && out, "opp_scenario_load: null argument")) return OPP_EINVAL;
  *out = nullptr;
  return guarded([&] {
    *out = new opp_scenario{opp::harness::scenario_load(path)};
    return OPP_OK;
  });
}

opp_status opp_scenario_set(opp_scenario* s, const char* key, const char* value) {
  if (require(s && key && value, "opp_scenario_set: null argument")) return OPP_EINVAL;
  return guarded([&] {
    opp::harness::scenario_set(s->s, key, value);
    return OPP_OK;
  });
}

opp_status opp_scenario_get(const opp_scenario* s, const char* key, char** out_value) {
  if (require(s && key && out_value, "opp_scenario_get: null argument")) return OPP_EINVAL;
  return guarded([&]() -> opp_status {
    const opp::harness::Scenario& sc = s->s;
    std::string k(key);
    std::string value;
    if (k == "family") value = sc.family;
    else if (k == "algorithm") value = sc.algorithm;
    else if (k == "pricing") value = sc.pricing;
    else if (k == "generator") value = sc.generator;
    else if (k == "seed") value = std::to_string(sc.seed);
    else if (k == "trials") value = std::to_string(sc.trials);
    else if (k == "jobs") value = std::to_string(sc.jobs);
    else if (k == "tie_policy") value = sc.tie_policy;
    else if (k == "format") value = sc.format;
    else if (k == "out") value = sc.out;
    else if (k == "instance") value = sc.instance_path;
    else throw opp::config_error("opp_scenario_get: unknown key '" + k + "'");
    return emit_string(value, out_value);
  });
}

opp_status opp_scenario_text(const opp_scenario* s, char** out_text) {
  if (require(s && out_text, "opp_scenario_text: null argument")) return OPP_EINVAL;
  return guarded([&] { return emit_string(opp::harness::scenario_canonical(s->s), out_text); });
}

void opp_scenario_free(opp_scenario* s) { delete s; }

opp_status opp_run(const opp_scenario* s, opp_report** out) {
  if (require(s && out, "opp_run: null argument")) return OPP_EINVAL;
  *out = nullptr;
  return guarded([&] {
    *out = new opp_report{opp::harness::run_scenario(s->s)};
    return OPP_OK;
  });
}

opp_status opp_report_trials(const opp_report* r, int* out_count) {
  if (require(r && out_count, "opp_report_trials: null argument")) return OPP_EINVAL;
  *out_count = static_cast<int>(r->r.rows.size());
  return OPP_OK;
}

opp_status opp_report_row(const opp_report* r, int index, opp_trial_row* out_row) {
  if (require(r && out_row, "opp_report_row: null argument")) return OPP_EINVAL;
  if (index < 0 || index >= static_cast<int>(r->r.rows.size()))
    return require(false, "opp_report_row: index out of range");
  const opp::harness::TrialRow& row = r->r.rows[static_cast<std::size_t>(index)];
  out_row->trial = row.trial;
  out_row->cost = row.cost;
  out_row->opt = row.opt;
  out_row->ratio = row.ratio;
  out_row->seed = row.seed;
  return OPP_OK;
}

opp_status opp_report_max_ratio(const opp_report* r, double* out) {
  if (require(r && out, "opp_report_max_ratio: null argument")) return OPP_EINVAL;
  *out = r->r.max_ratio;
  return OPP_OK;
}

opp_status opp_report_mean_ratio(const opp_report* r, double* out) {
  if (require(r && out, "opp_report_mean_ratio: null argument")) return OPP_EINVAL;
  *out = r->r.mean_ratio;
  return OPP_OK;
}

opp_status opp_report_std_ratio(const opp_report* r, double* out) {
  if (require(r && out, "opp_report_std_ratio: null argument")) return OPP_EINVAL;
  *out = r->r.std_ratio;
  return OPP_OK;
}

opp_status opp_report_text(const opp_report* r, const char* format, char** out_text) {
  if (require(r && format && out_text, "opp_report_text: null argument")) return OPP_EINVAL;
  return guarded([&]() -> opp_status {
    std::string fmt(format);
    if (fmt == "csv") return emit_string(r->r.csv(), out_text);
    if (fmt == "tsv") return emit_string(r->r.tsv(), out_text);
    throw opp::config_error("format: expected csv or tsv, got '" + fmt + "'");
  });
}

opp_status opp_report_summary(const opp_report* r, char** out_text) {
  if (require(r && out_text, "opp_report_summary: null argument")) return OPP_EINVAL;
  return guarded([&] { return emit_string(r->r.summary(), out_text); });
}

opp_status opp_report_write(const opp_report* r, const char* path, const char* format) {
  if (require(r && path && format, "opp_report_write: null argument")) return OPP_EINVAL;
  return guarded([&]() -> opp_status {
    std::string fmt(format);
    if (fmt != "csv" && fmt != "tsv")
      throw opp::config_error("format: expected csv or tsv, got '" + fmt + "'");
    opp::harness::write_file(path, fmt == "csv" ? r->r.csv() : r->r.tsv());
    return OPP_OK;
  });
}

void opp_report_free(opp_report* r) { delete r; }

opp_status opp_generate(const char* family, const char* generator, const char* params_text,
                        uint64_t seed, char** out_text) {
  if (require(family && generator && out_text, "opp_generate: null argument")) return OPP_EINVAL;
  return guarded([&] {
    opp::harness::IniDoc params;
    if (params_text && *params_text) params = opp::harness::IniDoc::parse_text(params_text);
    opp::harness::Instance inst = opp::harness::generate_instance(family, generator, params, seed);
    return emit_string(opp::harness::instance_text(inst), out_text);
  });
}

opp_status opp_verify_names(char** out_text) {
  if (require(out_text, "opp_verify_names: null argument")) return OPP_EINVAL;
  return guarded([&] {
    std::string text;
    for (const std::string& name : opp::harness::verify_suite_names()) text += name + "\n";
    return emit_string(text, out_text);
  });
}

opp_status opp_verify(const char* suite, const char* witness_dir, char** out_report,
                      int* out_all_passed) {
  if (require(suite && out_report && out_all_passed, "opp_verify: null argument"))
    return OPP_EINVAL;
  return guarded([&] {
    std::vector<opp::harness::VerifyResult> results =
        opp::harness::run_verify(suite, witness_dir ? witness_dir : ".");
    *out_all_passed = 1;
    for (const auto& res : results)
      if (!res.passed) *out_all_passed = 0;
    return emit_string(opp::harness::verify_report(results), out_report);
  });
}

opp_status opp_demo(const char* name, const char* args, char** out_text) {
  if (require(name && out_text, "opp_demo: null argument")) return OPP_EINVAL;
  return guarded(
      [&] { return emit_string(opp::harness::run_demo(name, args ? args : ""), out_text); });
}

}  // extern "C"
