#pragma once

#include "decflow/solver.hpp"

#include <filesystem>
#include <string>

namespace decflow {

struct OutputSettings {
    std::filesystem::path directory = "decflow_out";
    bool write_vtk = true;
};

struct RunConfig {
    SimulationConfig simulation;
    OutputSettings output;
};

/// Parses the line-oriented key = value format with optional [surface],
/// [solver] and [output] sections. '#' and ';' start comments. Keys are
/// unique across sections, so a section header is optional, but a key under
/// the wrong header is rejected. Unset fields take defaults; the initial
/// condition defaults per surface (Killing field on the sphere, stream
/// functions y + 0.1 z and y + z on ellipsoid and biconcave shape, the mean
/// of both harmonic fields on the torus).
///
/// Throws ConfigError on unknown keys, malformed values or failed validation.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config in the same format; parse_config of the result
/// reproduces the config exactly.
std::string format_config(const RunConfig& config);

/// Default initial condition for a surface kind.
InitialCondition default_initial_condition(SurfaceKind kind);

} // namespace decflow
