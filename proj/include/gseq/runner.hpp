// Drivers behind the gs command line tool.
#pragma once

#include <ostream>

#include "gseq/run_config.hpp"

namespace gseq {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNoConvergence = 2, kExitCertFailure = 3 };

/// Executes the configured mode, writing reports and fields under cfg.out.
/// Deterministic reports go to *.json; timings go to metadata.json.
int run(const RunConfig& cfg, bool verbose, std::ostream& log);

}  // namespace gseq
