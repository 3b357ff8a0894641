#pragma once

#include <string>

#include "becbell/run_config.hpp"
#include "becbell/sweep_engine.hpp"

namespace becbell {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Renders a sweep as CSV with LF line endings. Leading `#` comment lines
/// carry the canonical configuration and its hash so a result file can be
/// traced to the exact run that produced it; nothing run-dependent (wall
/// time, host, worker count) is written, so identical configurations
/// produce byte-identical files. Failed points keep their coordinates,
/// leave the measure columns empty and carry the per-point error code.
std::string sweep_to_csv(const SweepResult& result, const RunConfig& config);

}  // namespace becbell
