#include "evodich.h"

#include "core/analyze.hpp"
#include "core/gallery.hpp"
#include "core/report_io.hpp"
#include "core/system_spec.hpp"
#include "core/theorems.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>

using namespace evodich;

struct evodich_system {
  std::shared_ptr<const SystemSpec> spec;
};

namespace {

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** slot, const std::string& message) {
  if (slot) *slot = copy_string(message);
}

evodich_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return EVODICH_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse: return EVODICH_ERR_PARSE;
    case ErrorCode::range: return EVODICH_ERR_RANGE;
    case ErrorCode::numeric: return EVODICH_ERR_NUMERIC;
    case ErrorCode::size: return EVODICH_ERR_SIZE;
    case ErrorCode::io: return EVODICH_ERR_IO;
  }
  return EVODICH_ERR_UNKNOWN;
}

template <typename Fn>
evodich_status guarded(char** error_message, Fn&& fn) {
  if (error_message) *error_message = nullptr;
  try {
    return fn();
  } catch (const Error& e) {
    set_error(error_message, e.what());
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    set_error(error_message, "out of memory");
    return EVODICH_ERR_UNKNOWN;
  } catch (const std::exception& e) {
    set_error(error_message, e.what());
    return EVODICH_ERR_UNKNOWN;
  }
}

RunOptions to_run_options(const evodich_options* options) {
  evodich_options defaults = evodich_options_default();
  if (!options) options = &defaults;
  RunOptions run;
  run.grid_size = options->grid_size;
  run.step = options->step;
  run.p_exponent = options->p_exponent;
  run.tol = options->tol;
  run.seed = options->seed;
  run.threads = options->threads;
  return run;
}

} // namespace

extern "C" {

evodich_options evodich_options_default(void) {
  evodich_options o;
  o.grid_size = 32;
  o.step = 0.0;
  o.p_exponent = 2.0;
  o.tol = 1e-10;
  o.seed = 0x5EED;
  o.threads = 0;
  o.format_csv = 0;
  return o;
}

const char* evodich_version(void) { return "0.1.0"; }

const char* evodich_status_name(evodich_status status) {
  switch (status) {
    case EVODICH_OK: return "ok";
    case EVODICH_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EVODICH_ERR_PARSE: return "parse error";
    case EVODICH_ERR_RANGE: return "range error";
    case EVODICH_ERR_NUMERIC: return "numeric failure";
    case EVODICH_ERR_SIZE: return "size cap exceeded";
    case EVODICH_ERR_IO: return "i/o error";
    case EVODICH_ERR_UNKNOWN: return "unknown error";
  }
  return "unknown status";
}

evodich_status evodich_system_parse_json(const char* json_text, evodich_system** out_system,
                                         char** error_message) {
  return guarded(error_message, [&]() -> evodich_status {
    if (!json_text || !out_system)
      throw Error(ErrorCode::invalid_argument, "null argument");
    auto spec = std::make_shared<const SystemSpec>(SystemSpec::from_json(json_text));
    *out_system = new evodich_system{std::move(spec)};
    return EVODICH_OK;
  });
}

evodich_status evodich_system_load_file(const char* path, evodich_system** out_system,
                                        char** error_message) {
  return guarded(error_message, [&]() -> evodich_status {
    if (!path || !out_system)
      throw Error(ErrorCode::invalid_argument, "null argument");
    auto spec = std::make_shared<const SystemSpec>(SystemSpec::from_json_file(path));
    *out_system = new evodich_system{std::move(spec)};
    return EVODICH_OK;
  });
}

void evodich_system_free(evodich_system* system) { delete system; }

int32_t evodich_system_dimension(const evodich_system* system) {
  return system ? system->spec->dimension() : 0;
}

evodich_status evodich_analyze(const evodich_system* system, const evodich_options* options,
                               char** dichotomy_json, char** spectrum_json,
                               char** projections_csv_out, int32_t* verdict_class,
                               char** error_message) {
  return guarded(error_message, [&]() -> evodich_status {
    if (!system) throw Error(ErrorCode::invalid_argument, "null system");
    AnalyzeOutcome outcome = analyze_system(system->spec, to_run_options(options));
    if (dichotomy_json) *dichotomy_json = copy_string(dichotomy_report_json(outcome));
    if (spectrum_json) *spectrum_json = copy_string(spectrum_report_json(outcome.spectrum));
    if (projections_csv_out)
      *projections_csv_out =
          copy_string(outcome.projection_built ? projections_csv(outcome.projections.family)
                                               : std::string("index,x,row,col,re,im\n"));
    if (verdict_class)
      *verdict_class = outcome.exit_class == 2 ? EVODICH_VERDICT_DEGENERATE
                                               : EVODICH_VERDICT_DEFINITE;
    return EVODICH_OK;
  });
}

evodich_status evodich_spectrum(const evodich_system* system, const evodich_options* options,
                                char** csv_out, char** metadata_json, char** error_message) {
  return guarded(error_message, [&]() -> evodich_status {
    if (!system) throw Error(ErrorCode::invalid_argument, "null system");
    RunOptions run = to_run_options(options);
    AnalyzeOutcome outcome = analyze_system(system->spec, run);
    if (csv_out) *csv_out = copy_string(eigenvalues_csv(outcome.spectrum));
    if (metadata_json) {
      JsonWriter w;
      w.begin_object();
      w.key("unit_circle_gap").value(outcome.spectrum.unit_circle_gap);
      w.key("axis_gap").value(outcome.spectrum.axis_gap);
      w.key("rotation_invariance_distance").value(outcome.spectrum.pairing_distance);
      w.key("cells").value(outcome.cells);
      w.key("dimension").value(system->spec->dimension());
      w.key("window").value(outcome.window);
      w.key("periodized").value(outcome.periodized);
      w.end_object();
      *metadata_json = copy_string(w.str());
    }
    return EVODICH_OK;
  });
}

evodich_status evodich_verify(const evodich_system* system, const evodich_options* options,
                              char** tables_json_out, char** summary_csv, int32_t* all_consistent,
                              char** error_message) {
  return guarded(error_message, [&]() -> evodich_status {
    if (!system) throw Error(ErrorCode::invalid_argument, "null system");
    RunOptions run = to_run_options(options);
    auto tables = run_applicable_checks(system->spec, run);
    if (tables_json_out)
      *tables_json_out = copy_string(tables_json(tables, system->spec->name()));
    if (summary_csv) *summary_csv = copy_string(tables_csv(tables));
    if (all_consistent) {
      bool ok = true;
      for (const auto& t : tables)
        if (t.pass.has_value() && !*t.pass) ok = false;
      *all_consistent = ok ? 1 : 0;
    }
    return EVODICH_OK;
  });
}

evodich_status evodich_gallery(const evodich_options* options, char** report_json,
                               char** summary_csv, int32_t* all_consistent,
                               char** error_message) {
  return guarded(error_message, [&]() -> evodich_status {
    RunOptions run = to_run_options(options);
    auto outcomes = run_gallery(run);
    if (report_json) *report_json = copy_string(gallery_json(outcomes, run.seed));
    if (summary_csv) *summary_csv = copy_string(gallery_csv(outcomes));
    if (all_consistent) {
      bool ok = true;
      for (const auto& o : outcomes) {
        if (o.failed || !o.verdict_matches) ok = false;
        for (const auto& f : o.facts)
          if (!f.ok) ok = false;
        for (const auto& t : o.tables)
          if (t.pass.has_value() && !*t.pass) ok = false;
      }
      *all_consistent = ok ? 1 : 0;
    }
    return EVODICH_OK;
  });
}

void evodich_string_free(char* text) { std::free(text); }

} // extern "C"
