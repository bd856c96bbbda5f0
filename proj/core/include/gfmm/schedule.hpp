#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gfmm {

/// One level j: scale a, m shifts b_k = first_shift + (k-1)*spacing (k = 1..m),
/// spacing lower bound gamma, rate r, half-width theta and sampling step delta.
struct Level {
    int j = 1;
    double a = 1.0;
    std::size_t m = 1;
    double gamma = 1.0;
    double r = 1.0;
    double theta = 1.0;
    double delta = 1.0;
    double spacing = 1.0;
    double first_shift = 1.0;

    double shift(std::size_t k) const { return first_shift + static_cast<double>(k - 1) * spacing; }
    std::vector<double> shifts() const;
    /// b~_j = max_k |b_jk|.
    double max_abs_shift() const;
};

/// A change the desk preset made to a verbatim level value.
struct Repair {
    int j = 0;
    std::string field;
    double from = 0.0;
    double to = 0.0;
    std::string reason;
};

struct LevelSchedule {
    std::string preset;
    std::vector<Level> levels;  // levels[i].j == i + 1
    std::vector<Repair> repairs;

    int max_j() const noexcept { return static_cast<int>(levels.size()); }
    /// Throws ConfigError if j is outside 1..max_j().
    const Level& level(int j) const;
    /// Levels breaking an invariant: theta_j > max_k |b_jk| (equality allowed for a single
    /// shift), delta_j <= theta_j, spacing >= gamma_j, a_j increasing, m_j and theta_j
    /// non-decreasing, delta_j non-increasing. Reasons are appended to why.
    std::vector<int> violations(std::string* why = nullptr) const;
    /// Throws FeasibilityError listing violations().
    void validate() const;
};

struct ScheduleOverrides {
    std::optional<std::size_t> m_cap;    // default 256
    std::optional<double> theta_scale;  // theta_j = theta_scale * j^(13/6), default 1
    std::optional<double> gamma;        // default 1
    std::optional<double> dt;           // floor for delta_j, default 1
    std::optional<double> window;       // physical span available; caps theta_j at (window - dt)/2

    bool empty() const noexcept { return !m_cap && !theta_scale && !gamma && !dt && !window; }
};

/// "paper-theory": a_j = j, b_jk = k, gamma_j = 1, r_j = a_j^-2.5, m_j = a_j^9,
/// theta_j = j^(13/6), delta_j = j^(-22-1/6), verbatim. Raises FeasibilityError when
/// theta_j < b~_j = m_j at any level; takes no overrides.
///
/// "desk": same growth laws with theta_j = min(theta_scale j^(13/6), (window - dt)/2),
/// delta_j = max(j^(-22-1/6), dt), m_j = min(m_cap, floor(theta_j / (2 gamma))) (at least 1),
/// shifts spread evenly with spacing theta_j / m_j and centred on 0. Every change
/// from the verbatim value is listed in repairs.
LevelSchedule build_schedule(std::string_view preset, int max_j, const ScheduleOverrides& overrides = {});

/// Materialises the levels without the feasibility check, so callers can use the
/// feasible levels of a partly infeasible schedule. Config errors still throw.
LevelSchedule build_schedule_unchecked(std::string_view preset, int max_j, const ScheduleOverrides& overrides = {});

/// JSON rendering of the materialised schedule, including repairs.
std::string schedule_to_json(const LevelSchedule& schedule, int indent = 2);

/// Parses {"m_cap": .., "theta_scale": .., "gamma": .., "dt": .., "window": ..}; unknown keys are a ConfigError.
ScheduleOverrides overrides_from_json(std::string_view text);

}  // namespace gfmm
