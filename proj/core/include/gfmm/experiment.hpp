#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfmm/schedule.hpp"
#include "gfmm/spectral.hpp"

namespace gfmm {

/// Row-level failure codes in the records CSV.
enum class ErrorCode : int {
    none = 0,
    coverage = 1,
    feasibility = 2,
    config = 3,
    degenerate = 4,
    numeric = 5,
    domain = 6,
    capacity = 7,
    other = 9,
};

struct ExperimentConfig {
    GegenbauerSpec model;
    /// Replace model.sigma_eps by normalized_sigma(model, dt) so that h(0) = 1.
    bool normalize_sigma = false;
    double filter_sigma = 1.0;
    std::string preset = "desk";
    ScheduleOverrides overrides;
    std::size_t replications = 1;
    std::vector<double> fractions{1.0};
    std::vector<int> levels{1};
    std::size_t series_length = 10000;
    std::uint64_t master_seed = 0;
    std::string output_path = "records.csv";
    /// Grid spacing the native samples are rescaled to.
    double dt = 1.0;
    unsigned workers = 1;

    /// Throws ConfigError on any invalid field.
    void validate() const;
    /// Innovation sd actually used by the simulator.
    double effective_sigma() const;
    /// (s0, alpha) implied by the model on the rescaled grid: (arccos(eta)/dt, mu).
    double true_s0() const;
    double true_alpha() const;
};

/// Parses the JSON config:
/// {
///   "model": {"mu": 0.1, "eta": 0.3, "sigma_eps": 1.0 | "normalized", "n_terms": 10000},
///   "filter": {"sigma": 1.0},
///   "schedule": {"preset": "desk", "overrides": {"m_cap": 64, "theta_scale": 200}},
///   "replications": 200, "fractions": [0.01, 1.0], "levels": [1, 2, 3, 4, 5],
///   "series_length": 10000, "master_seed": 20240601, "dt": 1.0, "workers": 1,
///   "output": "records.csv"
/// }
/// Missing keys keep their defaults; unknown keys are a ConfigError.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config, int indent = 2);

/// One row per (replication, j, fraction). Missing values are nullopt.
struct ExperimentRecord {
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    int j = 0;
    double fraction = 0.0;
    std::optional<double> stat1;
    std::optional<double> stat2;
    std::optional<double> s0_hat;
    std::optional<double> alpha_hat;
    std::optional<std::uint32_t> clamps;
    ErrorCode error = ErrorCode::none;
    std::int64_t wall_ms = 0;
};

inline constexpr std::string_view kRecordsHeader =
    "replication,seed,j,fraction,stat1,stat2,s0_hat,alpha_hat,clamps,error_code,wall_ms";

std::string format_record(const ExperimentRecord& r);

/// Seed of replication r.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t r);

/// Number of leading samples a fraction p of n uses: ceil(p n), at least 1.
std::size_t prefix_length(double fraction, std::size_t n);

/// All records of one replication, ordered by level then fraction.
std::vector<ExperimentRecord> run_replication(const ExperimentConfig& config, std::size_t r);

struct RunResult {
    std::size_t records = 0;
    std::size_t null_records = 0;
    std::filesystem::path records_path;
    std::filesystem::path metadata_path;
};

/// Runs every replication on config.workers threads, streaming records to
/// config.output_path in replication order, and writes "<output>.meta.json"
/// with the config, the truth, the filter constants and the materialised
/// schedule of every fraction. progress, if set, is called after each replication.
RunResult run_experiment(const ExperimentConfig& config,
                         const std::function<void(std::size_t done, std::size_t total)>& progress = {});

}  // namespace gfmm
