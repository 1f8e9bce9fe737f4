#pragma once

// Output files. Every file carries schema_version and the config hash: CSVs
// in a leading '#' comment line, JSON documents as top-level fields.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "statistics.hpp"

namespace periods {

using Json = nlohmann::ordered_json;

// Writes through a temporary sibling and renames; throws io with the path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// 17 significant digits; "inf" / "-inf" / "nan" for non-finite values.
std::string format_real(double x);

std::string csv_header_comment(const std::string& config_hash, const std::string& letter_order);

std::string classes_csv(const std::vector<CyclicWord>& classes, const Alphabet& alphabet,
                        const std::string& config_hash);

std::string dataset_csv(const Dataset& data, const std::string& config_hash, const std::string& letter_order);

// Sidecar with everything needed to read dataset.csv back.
Json dataset_meta(const Dataset& data, const std::string& config_hash, const std::string& dataset_hash,
                  const std::string& canonical_config, const std::string& letter_order);

// Rebuilds a dataset from dataset.csv and its sidecar; nullopt when either
// file is missing or the sidecar's dataset_hash differs.
std::optional<Dataset> read_dataset(const std::filesystem::path& dir, const std::string& dataset_hash);

// Pretty-printed with a trailing newline.
std::string dump_json(const Json& j);
// Non-finite reals become null.
Json real_json(double x);

}  // namespace periods
