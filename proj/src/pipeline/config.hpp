#pragma once

// Run configuration: an INI file with the sections documented in the README,
// plus per-key overrides from the command line.

#include <cstdint>
#include <filesystem>
#include <utility>
#include <string>
#include <vector>

#include "group_words.hpp"
#include "representations.hpp"
#include "statistics.hpp"

namespace periods {

constexpr int kSchemaVersion = 1;
extern const char* const kToolVersion;

struct RunConfig {
  // [representation]
  std::string family = "schottky_sl2";  // schottky_sl2 | file | synthetic
  double multiplier = 4.0;
  double angle = 0.78539816339744831;  // pi/4
  int sym_power = 1;
  std::string path;
  std::filesystem::path base_dir;  // resolves a relative `path`

  // [synthetic]
  SyntheticSpec synthetic;

  // [enumeration]
  int max_len = 10;
  ClassMode mode = ClassMode::all;
  EnumerationLimits limits;

  // [functionals]: name = spec, in file order.
  std::vector<std::pair<std::string, std::string>> functionals = {{"length", "length"}, {"chi1", "chi1"}};
  bool functionals_set = false;  // the first explicit entry replaces the defaults

  // [clt]
  // Empty selects the first / second functional.
  std::string order;
  std::string observe;
  std::size_t min_classes = kMinClassesPerThreshold;

  // [grid]
  int grid_points = 8;
  double grid_lo_fraction = 0.4;
  std::vector<double> grid_values;  // explicit grid; overrides points / lo_fraction

  // [proximality]
  double r = 1.2;
  double eps = 0.05;
  int contraction_samples = kDefaultContractionSamples;
  double gap_tolerance = kDefaultGapTolerance;

  // [verify]
  std::size_t verify_instances = 1000;
  std::vector<int> verify_dims = {2, 3, 4};
  int verify_max_len = 10;
  std::size_t power_elements = 100;

  // [run]
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out = "out";
};

// Throws invalid_config naming the section and key on an unknown key or a
// malformed value.
void apply_setting(RunConfig& config, const std::string& section, const std::string& key, const std::string& value);
RunConfig load_config(const std::filesystem::path& path);

// Every setting except [run] workers and out, one "section.key = value" per line.
std::string canonical_text(const RunConfig& config);
// Hex SHA-256 of canonical_text.
std::string config_hash(const RunConfig& config);
// Hex SHA-256 over the settings that determine the dataset.
std::string dataset_hash(const RunConfig& config);

// Built representation; throws invalid_config for the synthetic family.
GroupRep build_representation(const RunConfig& config);
std::vector<Functional> build_functionals(const RunConfig& config, int dim);
CollectOptions collect_options(const RunConfig& config);
// Functional names used by cmd_clt after resolving empty [clt] entries.
std::pair<std::string, std::string> clt_functionals(const RunConfig& config);

}  // namespace periods
