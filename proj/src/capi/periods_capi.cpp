#include <exception>
#include <new>
#include <optional>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "error.hpp"
#include "periods/periods.h"
#include "representations.hpp"
#include "statistics.hpp"

struct pp_config {
  periods::RunConfig config;
  mutable std::string hash;  // backs the pointer returned by pp_config_hash
};

struct pp_rep {
  periods::GroupRep rep;
};

struct pp_dataset {
  periods::Dataset data;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_summary;

pp_status to_status(periods::ErrorCode code) { return static_cast<pp_status>(static_cast<int>(code)); }

// Runs f, translating exceptions into a status and the thread's last error.
template <typename F>
pp_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return PP_OK;
  } catch (const periods::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PP_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PP_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return PP_INTERNAL;
  }
}

pp_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return PP_INVALID_INPUT;
}

}  // namespace

extern "C" {

const char* pp_version(void) { return periods::kToolVersion; }

const char* pp_status_name(pp_status status) {
  if (status == PP_OK) return "ok";
  if (status == PP_INTERNAL) return "internal";
  if (status >= PP_INVALID_INPUT && status <= PP_SUITE_FAILURE) {
    return periods::error_code_name(static_cast<periods::ErrorCode>(static_cast<int>(status)));
  }
  return "unknown";
}

const char* pp_last_error(void) { return g_last_error.c_str(); }

int pp_exit_code(pp_status status) {
  switch (status) {
    case PP_OK:
      return 0;
    case PP_INVALID_INPUT:
    case PP_INVALID_CONFIG:
    case PP_EMPTY_CLASS:
      return 2;
    case PP_NUMERIC:
    case PP_NOT_PROXIMAL:
    case PP_TRANSVERSALITY:
    case PP_DUAL_CONE:
    case PP_INSUFFICIENT_DATA:
    case PP_SUITE_FAILURE:
      return 3;
    case PP_RESOURCE_LIMIT:
      return 4;
    case PP_DEGENERATE:
      return 5;
    default:
      return 1;
  }
}

pp_status pp_config_default(pp_config** out) {
  if (out == nullptr) return null_argument("out");
  return guard([&] { *out = new pp_config{}; });
}

pp_status pp_config_load(const char* path, pp_config** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guard([&] { *out = new pp_config{periods::load_config(path), {}}; });
}

pp_status pp_config_set(pp_config* cfg, const char* section, const char* key, const char* value) {
  if (cfg == nullptr || section == nullptr || key == nullptr || value == nullptr) return null_argument("config key");
  return guard([&] { periods::apply_setting(cfg->config, section, key, value); });
}

pp_status pp_config_hash(const pp_config* cfg, const char** out) {
  if (cfg == nullptr || out == nullptr) return null_argument("cfg/out");
  return guard([&] {
    cfg->hash = periods::config_hash(cfg->config);
    *out = cfg->hash.c_str();
  });
}

void pp_config_free(pp_config* cfg) { delete cfg; }

pp_status pp_run(const pp_config* cfg, const char* command) {
  if (cfg == nullptr || command == nullptr) return null_argument("cfg/command");
  g_last_summary.clear();
  return guard([&] { g_last_summary = periods::run_command(cfg->config, command).dump(); });
}

const char* pp_last_summary(void) { return g_last_summary.c_str(); }

pp_status pp_rep_schottky_sl2(double multiplier, double angle, pp_rep** out) {
  if (out == nullptr) return null_argument("out");
  return guard([&] { *out = new pp_rep{periods::schottky_sl2(multiplier, angle)}; });
}

pp_status pp_rep_load(const char* path, pp_rep** out) {
  if (path == nullptr || out == nullptr) return null_argument("path/out");
  return guard([&] { *out = new pp_rep{periods::load_representation(path)}; });
}

pp_status pp_rep_sym_power(const pp_rep* rep2, int k, pp_rep** out) {
  if (rep2 == nullptr || out == nullptr) return null_argument("rep/out");
  return guard([&] { *out = new pp_rep{periods::sym_power(rep2->rep, k)}; });
}

int pp_rep_dim(const pp_rep* rep) { return rep == nullptr ? 0 : rep->rep.dim(); }

void pp_rep_free(pp_rep* rep) { delete rep; }

pp_status pp_collect(const pp_rep* rep, int max_len, const char* mode, int workers, pp_dataset** out) {
  if (rep == nullptr || out == nullptr) return null_argument("rep/out");
  return guard([&] {
    periods::CollectOptions options;
    options.max_len = max_len;
    options.mode = periods::parse_class_mode(mode == nullptr ? "all" : mode);
    options.workers = workers;
    const int d = rep->rep.dim();
    std::vector<periods::Functional> fs = {periods::Functional::length(d), periods::Functional::chi(d, 1)};
    *out = new pp_dataset{periods::collect(rep->rep, std::move(fs), options)};
  });
}

size_t pp_dataset_size(const pp_dataset* data) { return data == nullptr ? 0 : data->data.records.size(); }

pp_status pp_dataset_period(const pp_dataset* data, size_t i, size_t f, double* out) {
  if (data == nullptr || out == nullptr) return null_argument("data/out");
  if (i >= data->data.records.size() || f >= data->data.functionals.size()) {
    g_last_error = "record or functional index out of range";
    return PP_INVALID_INPUT;
  }
  *out = data->data.records[i].jordan_period[f];
  return PP_OK;
}

pp_status pp_dataset_word(const pp_dataset* data, size_t i, const char** out) {
  if (data == nullptr || out == nullptr) return null_argument("data/out");
  if (i >= data->data.records.size()) {
    g_last_error = "record index out of range";
    return PP_INVALID_INPUT;
  }
  *out = data->data.records[i].word.c_str();
  return PP_OK;
}

void pp_dataset_free(pp_dataset* data) { delete data; }

pp_status pp_gaussian_cdf_interval(double a, double b, double* out) {
  if (out == nullptr) return null_argument("out");
  return guard([&] { *out = periods::gaussian_cdf_interval(a, b); });
}

}  // extern "C"
