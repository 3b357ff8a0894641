#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "becbell/sweep_engine.hpp"

namespace becbell {

/// A parsed and fully resolved run configuration. `canonical` is the
/// normalized JSON text of the configuration with every key explicit
/// (defaults materialized, node/filter shorthands expanded); parsing the
/// canonical text yields the identical canonical text back, so it is the
/// stable identity of a run and the input to config_hash.
struct RunConfig {
    SweepSpec sweep;
    std::vector<std::string> outputs;  // subset of {"discord", "log_negativity"}
    std::string canonical;
};

/// Parses a JSON configuration document. Unknown keys, wrong value types
/// and malformed axis specifications raise StructuralError with the
/// offending path in the message.
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::string& path);

/// Built-in sweep configurations. Names: fig2, fig3, fig4, fig5, fig6.
/// fig5 pins the nodes' detuning, coupling and the filter centers to their
/// collisionless absolute values so the collision strength is the only
/// knob that moves.
RunConfig preset_config(const std::string& name);

std::vector<std::string> preset_names();

const char* axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);

/// FNV-1a 64-bit over the canonical text; stamped into CSV metadata.
std::uint64_t config_hash(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view text);

}  // namespace becbell
