// Command-line front end; talks to the library only through periods.h.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "periods/periods.h"

namespace {

struct Overrides {
  std::string config;
  std::string seed;
  std::string workers;
  std::string out;
  std::string max_len;
  std::string mode;
};

int report(pp_status status) {
  if (status == PP_OK) return 0;
  std::fprintf(stderr, "error (%s): %s\n", pp_status_name(status), pp_last_error());
  return pp_exit_code(status);
}

int run(const std::string& command, const Overrides& o) {
  pp_config* cfg = nullptr;
  pp_status st = o.config.empty() ? pp_config_default(&cfg) : pp_config_load(o.config.c_str(), &cfg);
  if (st != PP_OK) return report(st);
  const struct {
    const char* section;
    const char* key;
    const std::string& value;
  } sets[] = {{"run", "seed", o.seed},
              {"run", "workers", o.workers},
              {"run", "out", o.out},
              {"enumeration", "max_len", o.max_len},
              {"enumeration", "mode", o.mode}};
  for (const auto& s : sets) {
    if (s.value.empty()) continue;
    st = pp_config_set(cfg, s.section, s.key, s.value.c_str());
    if (st != PP_OK) break;
  }
  if (st == PP_OK) st = pp_run(cfg, command.c_str());
  pp_config_free(cfg);
  if (st == PP_OK) std::printf("%s\n", pp_last_summary());
  return report(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral periods of free-group representations"};
  app.set_version_flag("--version", pp_version());
  app.require_subcommand(1);

  Overrides o;
  // Common flags are accepted before or after the subcommand.
  app.fallthrough();
  app.add_option("--config", o.config, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "64-bit seed");
  app.add_option("--workers", o.workers, "worker threads");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--max-len", o.max_len, "maximal cyclic word length");
  app.add_option("--mode", o.mode, "all | primitive")->check(CLI::IsMember({"all", "primitive"}));

  std::string command;
  for (const char* name : {"enumerate", "spectra", "verify", "clt"}) {
    const char* help = "";
    if (std::string(name) == "enumerate") help = "list conjugacy classes (classes.csv)";
    if (std::string(name) == "spectra") help = "period dataset (dataset.csv, dataset.meta.json)";
    if (std::string(name) == "verify") help = "identity residual suites (verify.json)";
    if (std::string(name) == "clt") help = "counting and CLT statistics (clt_report.json, clt_histogram.csv)";
    app.add_subcommand(name, help)->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(command, o);
}
