#include "gfmm/schedule.hpp"

#include "gfmm/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfmm {

std::vector<double> Level::shifts() const {
    std::vector<double> b(m);
    for (std::size_t k = 1; k <= m; ++k) b[k - 1] = shift(k);
    return b;
}

double Level::max_abs_shift() const { return std::max(std::abs(shift(1)), std::abs(shift(m))); }

const Level& LevelSchedule::level(int j) const {
    if (j < 1 || j > max_j()) {
        std::ostringstream msg;
        msg << "schedule has levels 1.." << max_j() << ", level " << j << " requested";
        throw ConfigError(msg.str());
    }
    return levels[static_cast<std::size_t>(j - 1)];
}

std::vector<int> LevelSchedule::violations(std::string* why) const {
    std::vector<int> bad;
    std::ostringstream reasons;
    reasons.precision(6);
    auto flag = [&](int j, const std::string& what) {
        if (bad.empty() || bad.back() != j) bad.push_back(j);
        reasons << " j=" << j << ": " << what << ';';
    };
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const Level& L = levels[i];
        const double reach = L.max_abs_shift();
        if (!(L.theta > reach) && !(L.m == 1 && L.theta >= reach)) {
            std::ostringstream w;
            w << "theta_j = " << L.theta << " does not exceed b~_j = " << reach;
            flag(L.j, w.str());
        }
        if (!(L.delta <= L.theta)) flag(L.j, "delta_j exceeds theta_j");
        if (L.m > 1 && L.spacing < L.gamma) flag(L.j, "shift spacing below gamma_j");
        if (i > 0) {
            const Level& P = levels[i - 1];
            if (!(L.a > P.a)) flag(L.j, "a_j not increasing");
            if (L.m < P.m) flag(L.j, "m_j decreasing");
            if (L.theta < P.theta) flag(L.j, "theta_j decreasing");
            if (L.delta > P.delta) flag(L.j, "delta_j increasing");
        }
    }
    if (why) *why += reasons.str();
    return bad;
}

void LevelSchedule::validate() const {
    std::string why;
    auto bad = violations(&why);
    if (!bad.empty()) throw FeasibilityError("infeasible " + preset + " schedule:" + why, std::move(bad));
}

namespace {

constexpr double kThetaExponent = 13.0 / 6.0;
constexpr double kDeltaExponent = -22.0 - 1.0 / 6.0;

LevelSchedule paper_theory(int max_j) {
    LevelSchedule s{"paper-theory", {}, {}};
    for (int j = 1; j <= max_j; ++j) {
        Level L;
        L.j = j;
        L.a = j;
        L.gamma = 1.0;
        L.r = std::pow(L.a, -2.5);
        L.m = static_cast<std::size_t>(std::llround(std::pow(L.a, 9.0)));
        L.theta = std::pow(static_cast<double>(j), kThetaExponent);
        L.delta = std::pow(static_cast<double>(j), kDeltaExponent);
        L.spacing = 1.0;
        L.first_shift = 1.0;
        s.levels.push_back(L);
    }
    return s;
}

LevelSchedule desk(int max_j, const ScheduleOverrides& o) {
    const std::size_t m_cap = o.m_cap.value_or(256);
    const double theta_scale = o.theta_scale.value_or(1.0);
    const double gamma = o.gamma.value_or(1.0);
    const double dt = o.dt.value_or(1.0);
    if (m_cap < 1) throw ConfigError("desk schedule: m_cap must be at least 1");
    if (!(theta_scale > 0.0) || !(gamma > 0.0) || !(dt > 0.0))
        throw ConfigError("desk schedule: theta_scale, gamma and dt must be positive");
    std::optional<double> theta_cap;
    if (o.window) {
        if (!(*o.window > 0.0)) throw ConfigError("desk schedule: window must be positive");
        theta_cap = 0.5 * (*o.window - dt);
    }

    LevelSchedule s{"desk", {}, {}};
    for (int j = 1; j <= max_j; ++j) {
        const double jd = j;
        Level L;
        L.j = j;
        L.a = jd;
        L.gamma = gamma;
        L.r = std::pow(L.a, -2.5);

        const double theta_raw = std::pow(jd, kThetaExponent);
        L.theta = theta_scale * theta_raw;
        if (theta_cap && L.theta > *theta_cap) L.theta = *theta_cap;
        if (L.theta != theta_raw)
            s.repairs.push_back({j, "theta", theta_raw, L.theta,
                                 L.theta < theta_scale * theta_raw ? "capped at half the available window"
                                                                   : "scaled by theta_scale"});

        const double delta_raw = std::pow(jd, kDeltaExponent);
        L.delta = std::max(delta_raw, dt);
        if (L.delta != delta_raw) s.repairs.push_back({j, "delta", delta_raw, L.delta, "floored at the series dt"});

        const double m_raw = std::pow(L.a, 9.0);
        const double fit = std::floor(L.theta / (2.0 * gamma));
        L.m = static_cast<std::size_t>(std::max(1.0, std::min(static_cast<double>(m_cap), fit)));
        if (static_cast<double>(L.m) != m_raw)
            s.repairs.push_back({j, "m", m_raw, static_cast<double>(L.m),
                                 fit < 1.0 ? "window admits no spacing; single shift"
                                 : static_cast<double>(L.m) == fit ? "shrunk to floor(theta/(2 gamma))"
                                                                   : "capped at m_cap"});

        L.spacing = L.theta / static_cast<double>(L.m);
        L.first_shift = -0.5 * static_cast<double>(L.m - 1) * L.spacing;
        s.levels.push_back(L);
    }
    return s;
}

}  // namespace

LevelSchedule build_schedule(std::string_view preset, int max_j, const ScheduleOverrides& overrides) {
    LevelSchedule s = build_schedule_unchecked(preset, max_j, overrides);
    s.validate();
    return s;
}

LevelSchedule build_schedule_unchecked(std::string_view preset, int max_j, const ScheduleOverrides& overrides) {
    if (max_j < 1 || max_j > 100) throw ConfigError("schedule: max_j must lie in 1..100");
    LevelSchedule s;
    if (preset == "paper-theory") {
        if (!overrides.empty()) throw ConfigError("paper-theory schedule takes no overrides");
        s = paper_theory(max_j);
    } else if (preset == "desk") {
        s = desk(max_j, overrides);
    } else {
        throw ConfigError("unknown schedule preset '" + std::string(preset) + "'");
    }
    return s;
}

std::string schedule_to_json(const LevelSchedule& schedule, int indent) {
    nlohmann::ordered_json out;
    out["preset"] = schedule.preset;
    out["levels"] = nlohmann::ordered_json::array();
    for (const auto& L : schedule.levels) {
        out["levels"].push_back({{"j", L.j},
                                 {"a", L.a},
                                 {"m", L.m},
                                 {"gamma", L.gamma},
                                 {"r", L.r},
                                 {"theta", L.theta},
                                 {"delta", L.delta},
                                 {"shift_spacing", L.spacing},
                                 {"first_shift", L.first_shift}});
    }
    out["repairs"] = nlohmann::ordered_json::array();
    for (const auto& r : schedule.repairs)
        out["repairs"].push_back({{"j", r.j}, {"field", r.field}, {"from", r.from}, {"to", r.to}, {"reason", r.reason}});
    return out.dump(indent);
}

ScheduleOverrides overrides_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("schedule overrides: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("schedule overrides must be a JSON object");
    ScheduleOverrides o;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "m_cap") o.m_cap = v.get<std::size_t>();
            else if (key == "theta_scale") o.theta_scale = v.get<double>();
            else if (key == "gamma") o.gamma = v.get<double>();
            else if (key == "dt") o.dt = v.get<double>();
            else if (key == "window") o.window = v.get<double>();
            else throw ConfigError("schedule overrides: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("schedule overrides: ") + e.what());
    }
    return o;
}

}  // namespace gfmm
