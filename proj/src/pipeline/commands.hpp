#pragma once

// The four subcommands. Each writes its files under config.out and returns a
// short JSON summary; failures are thrown as periods::Error after any
// report describing the failure has been written.

#include <string_view>

#include "config.hpp"
#include "io.hpp"

namespace periods {

// classes.csv
Json cmd_enumerate(const RunConfig& config);
// dataset.csv + dataset.meta.json
Json cmd_spectra(const RunConfig& config);
// verify.json; suite_failure when a suite exceeds its tolerance.
Json cmd_verify(const RunConfig& config);
// clt_report.json + clt_histogram.csv, reusing dataset.csv when its hash
// matches; degenerate when the two-functional report is degenerate.
Json cmd_clt(const RunConfig& config);

// Dispatch by subcommand name; invalid_config for an unknown name.
Json run_command(const RunConfig& config, std::string_view name);

// Dataset for the configured family: synthetic, reused from disk, or
// collected (and then written like cmd_spectra).
Dataset obtain_dataset(const RunConfig& config, bool* reused = nullptr);

}  // namespace periods
