#pragma once

#include <json.hpp>

#include "speclab/asymptotics.hpp"
#include "speclab/config.hpp"
#include "speclab/svg.hpp"
#include "speclab/table.hpp"

namespace speclab {

// Subcommand pipelines. Each returns the JSON result and, when `emit` is set,
// writes the configured output files into cfg.out_dir as
// <subcommand>_<confighash>.<ext>.
nlohmann::json run_bands(const RunConfig& cfg, int threads, bool emit);
nlohmann::json run_dirac(const RunConfig& cfg, int threads, bool emit);
nlohmann::json run_effective(const RunConfig& cfg, int threads, bool emit);
nlohmann::json run_dislocated(const RunConfig& cfg, int threads, bool emit);
nlohmann::json run_sweep_cmd(const RunConfig& cfg, int threads, bool emit);

nlohmann::json sweep_report_json(const SweepReport& rep);

// CLI entry: subcommands {bands, dirac, effective, dislocated, sweep} with
// --config PATH (mandatory), --out DIR, --seed N, --threads N.
// Exit status: 0 success, 1 validation/usage error, 2 numerical-invariant
// failure (printed with the violated invariant).
int dispatch(int argc, char** argv);

}  // namespace speclab
