#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gfmm/experiment.hpp"

namespace gfmm {

/// Linear-interpolation quantile (numpy's default) of a non-empty sample; p in [0, 1].
double quantile(std::vector<double> values, double p);
double median(std::vector<double> values);

struct Truth {
    double s0 = 0.0;
    double alpha = 0.0;
};

/// Statistics of one (j, fraction) cell. Medians, means and RMSE ignore missing values.
struct CellSummary {
    int j = 0;
    double fraction = 0.0;
    std::size_t rows = 0;
    std::size_t nulls = 0;  // rows with a non-zero error code
    std::optional<double> stat1_median, stat1_iqr, stat1_mean;
    std::optional<double> stat2_median;
    std::optional<double> s0_median, s0_mean, s0_rmse;
    std::optional<double> alpha_median, alpha_mean, alpha_rmse;
};

/// Parses a records CSV. Throws ParseError with the 1-based line number on a malformed row.
std::vector<ExperimentRecord> read_records(std::istream& in);
std::vector<ExperimentRecord> read_records(const std::filesystem::path& path);

/// Cells ordered by (j, fraction). RMSE is reported only when truth is given.
std::vector<CellSummary> summarize(std::span<const ExperimentRecord> records, const std::optional<Truth>& truth);

/// Reads records_path; truth defaults to the "truth" entry of "<records_path>.meta.json" when present.
std::vector<CellSummary> summarize(const std::filesystem::path& records_path,
                                   std::optional<Truth> truth = std::nullopt);

/// CSV table, one row per cell; missing values are empty fields.
void write_summary(std::ostream& out, std::span<const CellSummary> cells);

const CellSummary* find_cell(std::span<const CellSummary> cells, int j, double fraction);

}  // namespace gfmm
