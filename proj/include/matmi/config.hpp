#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "matmi/mesh.hpp"
#include "matmi/phantoms.hpp"

namespace matmi {

enum class Command { Forward, Invert, Study, Phantom };
enum class DataMode { InCrime, FineMesh };

std::string to_string(Command c);
std::string to_string(DataMode m);
Command parse_command(std::string_view s);

struct StudySpec {
    std::vector<int> mesh_sizes;
    std::vector<double> amplitude_scales;

    bool operator==(const StudySpec&) const = default;
};

/// Everything a CLI run needs. Parsed from flat `key = value` text with
/// dotted section keys; `#` starts a comment.
struct RunConfig {
    Command command = Command::Forward;
    int mesh_n = 64;
    Bounds bounds;
    PhantomSpec phantom;
    int random_bumps = 0;
    double random_amplitude = 0.1;
    PhantomSpec initial;
    int max_iterations = 200;
    double tolerance_update = 1e-8;
    double tolerance_misfit = 1e-10;
    DataMode data_mode = DataMode::InCrime;
    std::string data_file;
    StudySpec study;
    std::string output_dir = "out";
    bool write_vtk = false;
    std::uint64_t seed = 0;

    bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the line and key on unknown keys, duplicate
/// keys or malformed values, then runs validate().
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Numeric and cross-field checks; throws ConfigError.
void validate(const RunConfig& config);

/// Phantom bumps plus the seeded random bumps.
PhantomSpec effective_phantom(const RunConfig& config);

} // namespace matmi
