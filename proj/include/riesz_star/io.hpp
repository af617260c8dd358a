#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riesz_star/steady.hpp"

namespace riesz {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal representation (std::to_chars); parsing the
// result with parse_double recovers the exact bit pattern.
std::string format_double(double v);
double parse_double(std::string_view text);

// Write-then-rename so readers never observe a partial file. The temp file
// lives in the destination directory (rename is atomic only within one
// filesystem). Parent directories are created as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// ---------------------------------------------------------------------------
// Run configuration (one per process invocation); round-trips through JSON
// losslessly, and its canonical serialization defines the run id.

struct RunConfig {
    std::string command;            // steady | evolve | verify | fit-decay
    double s = 0.45;
    double gamma = 1.2;
    int n_grid = 400;
    double tol = 1e-6;
    double relax = 0.5;
    double eps0 = 0.01;
    double t_end = 50.0;
    double dt = 0.0;                // 0 = policy default (0.25 h for imex_be)
    std::string integrator = "imex_be";  // imex_be | explicit_rk4
    int snapshot_every = 0;         // steps between snapshots; 0 = auto
    std::uint64_t seed = 12345;
    std::string out_dir = "out";
    bool strict_regime = false;

    RieszParams params() const { return RieszParams{s, gamma}; }
};

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);
std::string run_id(const RunConfig& config);

// ---------------------------------------------------------------------------
// Steady profile files: CSV table (x,rho,rho_gamma) plus a JSON header with
// the solve metadata. read_profile validates the pair against each other.

void write_profile(const std::filesystem::path& csv_path,
                   const std::filesystem::path& json_path,
                   const SteadyProfile& profile);

SteadyProfile read_profile(const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path);

// ---------------------------------------------------------------------------
// Generic column extraction from a CSV with a header row whose first column
// is t. Returns (t, value) pairs for the named column.

std::vector<std::pair<double, double>> read_series_csv(
    const std::filesystem::path& path, const std::string& column);

// ---------------------------------------------------------------------------
// Decay-fit record (external JSON contract of fit-decay).

struct FitRecord {
    std::string norm_name;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
    int n_samples = 0;
    bool pass = false;
};

std::string fit_record_to_json(const FitRecord& record);
void write_fit_json(const std::filesystem::path& path, const FitRecord& record);

// ---------------------------------------------------------------------------
// Run manifest: config, run id, hashes of produced files, completion status,
// plus optional scalar metrics (monitored quantities such as the weighted
// forcing ratio; informational, never asserted).

void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const std::vector<std::string>& outputs,
                    const std::string& profile_hash, const std::string& status,
                    double guard_time,  // < 0 = not tripped
                    const std::vector<std::pair<std::string, double>>& metrics = {});

}  // namespace riesz
