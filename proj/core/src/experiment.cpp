#include "gfmm/experiment.hpp"

#include "gfmm/error.hpp"
#include "gfmm/estimator.hpp"
#include "gfmm/filter.hpp"
#include "gfmm/rng.hpp"
#include "gfmm/simulator.hpp"
#include "gfmm/statistics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace gfmm {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
    try {
        model.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!(filter_sigma > 0.0) || !std::isfinite(filter_sigma)) throw ConfigError("filter.sigma must be positive");
    if (preset != "desk" && preset != "paper-theory") throw ConfigError("unknown schedule preset '" + preset + "'");
    if (preset == "paper-theory" && !overrides.empty()) throw ConfigError("paper-theory schedule takes no overrides");
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (fractions.empty()) throw ConfigError("fractions must not be empty");
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (!(fractions[i] > 0.0 && fractions[i] <= 1.0)) throw ConfigError("fractions must lie in (0, 1]");
        if (i > 0 && !(fractions[i] > fractions[i - 1])) throw ConfigError("fractions must be sorted ascending");
    }
    if (levels.empty()) throw ConfigError("levels must not be empty");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 1 || levels[i] > 99) throw ConfigError("levels must lie in 1..99");
        if (i > 0 && levels[i] <= levels[i - 1]) throw ConfigError("levels must be sorted ascending without repeats");
    }
    if (series_length < 1) throw ConfigError("series_length must be at least 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (output_path.empty()) throw ConfigError("output path must not be empty");
    const double s0 = true_s0();
    if (!(s0 > 1.0)) {
        std::ostringstream msg;
        msg << "model implies s0 = arccos(eta)/dt = " << s0 << ", outside the identifiable region s0 > 1";
        throw ConfigError(msg.str());
    }
}

double ExperimentConfig::effective_sigma() const {
    return normalize_sigma ? normalized_sigma(model, dt) : model.sigma_eps;
}

double ExperimentConfig::true_s0() const { return std::acos(model.eta) / dt; }
double ExperimentConfig::true_alpha() const { return model.mu; }

namespace {

template <class T>
T get_as(const nlohmann::json& v, std::string_view key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: '" + std::string(key) + "' has the wrong type");
    }
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
    for (const auto& [key, v] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("config: unknown key '" + key + "' in " + std::string(where));
    }
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"model", "filter", "schedule", "replications", "fractions", "levels", "series_length",
                    "master_seed", "output", "dt", "workers"},
                   "top level");
    ExperimentConfig c;
    if (j.contains("model")) {
        const auto& m = j["model"];
        reject_unknown(m, {"mu", "eta", "sigma_eps", "n_terms"}, "model");
        if (m.contains("mu")) c.model.mu = get_as<double>(m["mu"], "model.mu");
        if (m.contains("eta")) c.model.eta = get_as<double>(m["eta"], "model.eta");
        if (m.contains("n_terms")) c.model.n_terms = get_as<std::size_t>(m["n_terms"], "model.n_terms");
        if (m.contains("sigma_eps")) {
            if (m["sigma_eps"].is_string()) {
                if (m["sigma_eps"].get<std::string>() != "normalized")
                    throw ConfigError("config: model.sigma_eps must be a number or \"normalized\"");
                c.normalize_sigma = true;
            } else {
                c.model.sigma_eps = get_as<double>(m["sigma_eps"], "model.sigma_eps");
            }
        }
    }
    if (j.contains("filter")) {
        reject_unknown(j["filter"], {"sigma"}, "filter");
        if (j["filter"].contains("sigma")) c.filter_sigma = get_as<double>(j["filter"]["sigma"], "filter.sigma");
    }
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        reject_unknown(s, {"preset", "overrides"}, "schedule");
        if (s.contains("preset")) c.preset = get_as<std::string>(s["preset"], "schedule.preset");
        if (s.contains("overrides")) c.overrides = overrides_from_json(s["overrides"].dump());
    }
    if (j.contains("replications")) c.replications = get_as<std::size_t>(j["replications"], "replications");
    if (j.contains("fractions")) c.fractions = get_as<std::vector<double>>(j["fractions"], "fractions");
    if (j.contains("levels")) c.levels = get_as<std::vector<int>>(j["levels"], "levels");
    if (j.contains("series_length")) c.series_length = get_as<std::size_t>(j["series_length"], "series_length");
    if (j.contains("master_seed")) c.master_seed = get_as<std::uint64_t>(j["master_seed"], "master_seed");
    if (j.contains("output")) c.output_path = get_as<std::string>(j["output"], "output");
    if (j.contains("dt")) c.dt = get_as<double>(j["dt"], "dt");
    if (j.contains("workers")) c.workers = get_as<unsigned>(j["workers"], "workers");
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return config_from_json(buf.str());
}

namespace {

ordered_json overrides_json(const ScheduleOverrides& o) {
    ordered_json j = ordered_json::object();
    if (o.m_cap) j["m_cap"] = *o.m_cap;
    if (o.theta_scale) j["theta_scale"] = *o.theta_scale;
    if (o.gamma) j["gamma"] = *o.gamma;
    if (o.dt) j["dt"] = *o.dt;
    if (o.window) j["window"] = *o.window;
    return j;
}

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["model"]["mu"] = c.model.mu;
    j["model"]["eta"] = c.model.eta;
    if (c.normalize_sigma)
        j["model"]["sigma_eps"] = "normalized";
    else
        j["model"]["sigma_eps"] = c.model.sigma_eps;
    j["model"]["n_terms"] = c.model.n_terms;
    j["filter"]["sigma"] = c.filter_sigma;
    j["schedule"]["preset"] = c.preset;
    j["schedule"]["overrides"] = overrides_json(c.overrides);
    j["replications"] = c.replications;
    j["fractions"] = c.fractions;
    j["levels"] = c.levels;
    j["series_length"] = c.series_length;
    j["master_seed"] = c.master_seed;
    j["dt"] = c.dt;
    j["workers"] = c.workers;
    j["output"] = c.output_path;
    return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config, int indent) { return config_json(config).dump(indent); }

// ---------------------------------------------------------------- records

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void put_opt(std::string& out, const std::optional<double>& v) {
    out += ',';
    if (v) out += g17(*v);
}

}  // namespace

std::string format_record(const ExperimentRecord& r) {
    std::string s = std::to_string(r.replication);
    s += ',' + std::to_string(r.seed) + ',' + std::to_string(r.j) + ',' + g17(r.fraction);
    put_opt(s, r.stat1);
    put_opt(s, r.stat2);
    put_opt(s, r.s0_hat);
    put_opt(s, r.alpha_hat);
    s += ',';
    if (r.clamps) s += std::to_string(*r.clamps);
    s += ',' + std::to_string(static_cast<int>(r.error)) + ',' + std::to_string(r.wall_ms);
    return s;
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t r) { return mix_seed(master_seed, r); }

std::size_t prefix_length(double fraction, std::size_t n) {
    // Guard against p*n landing a hair above an integer (0.07 * 100 = 7.000000000000001).
    const double x = fraction * static_cast<double>(n);
    const double r = std::round(x);
    const double k = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
    return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n);
}

// ---------------------------------------------------------------- run

namespace {

ErrorCode classify(const std::exception_ptr& ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const CoverageError&) {
        return ErrorCode::coverage;
    } catch (const FeasibilityError&) {
        return ErrorCode::feasibility;
    } catch (const DegenerateScheduleError&) {
        return ErrorCode::degenerate;
    } catch (const ConfigError&) {
        return ErrorCode::config;
    } catch (const NumericError&) {
        return ErrorCode::numeric;
    } catch (const DomainError&) {
        return ErrorCode::domain;
    } catch (const CapacityError&) {
        return ErrorCode::capacity;
    } catch (...) {
        return ErrorCode::other;
    }
}

struct FractionPlan {
    double fraction = 1.0;
    std::size_t samples = 1;
    LevelSchedule schedule;
    std::set<int> infeasible;
};

struct Plan {
    ExperimentConfig config;
    GegenbauerSpec model;  // sigma_eps resolved
    std::vector<double> coeffs;
    FilterSpec filter;
    EstimatorConstants constants;
    std::vector<FractionPlan> fractions;
    std::vector<int> needed_levels;  // levels and their successors
};

Plan make_plan(const ExperimentConfig& config) {
    config.validate();
    Plan p;
    p.config = config;
    p.model = config.model;
    p.model.sigma_eps = config.effective_sigma();
    p.coeffs = gegenbauer_coeffs(p.model, p.model.n_terms - 1);
    p.filter = mexican_hat(config.filter_sigma);
    p.constants = EstimatorConstants::of(p.filter);
    std::set<int> needed;
    for (int j : config.levels) {
        needed.insert(j);
        needed.insert(j + 1);
    }
    p.needed_levels.assign(needed.begin(), needed.end());
    const int max_j = p.needed_levels.back();
    for (double f : config.fractions) {
        FractionPlan fp;
        fp.fraction = f;
        fp.samples = prefix_length(f, config.series_length);
        ScheduleOverrides o = config.overrides;
        if (config.preset == "desk") {
            if (!o.dt) o.dt = config.dt;
            const double window = static_cast<double>(fp.samples) * config.dt;
            o.window = o.window ? std::min(*o.window, window) : window;
        }
        fp.schedule = build_schedule_unchecked(config.preset, max_j, o);
        const auto bad = fp.schedule.violations();
        fp.infeasible.insert(bad.begin(), bad.end());
        p.fractions.push_back(std::move(fp));
    }
    return p;
}

struct LevelStat {
    std::optional<double> value;
    ErrorCode error = ErrorCode::none;
    double seconds = 0.0;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<ExperimentRecord> replicate(const Plan& plan, std::size_t r) {
    const auto& cfg = plan.config;
    const std::uint64_t seed = replication_seed(cfg.master_seed, r);
    std::vector<ExperimentRecord> rows;
    rows.reserve(cfg.levels.size() * cfg.fractions.size());

    SampledSeries series;
    ErrorCode sim_error = ErrorCode::none;
    const auto t_sim = Clock::now();
    try {
        series = rescale(simulate(plan.model, plan.coeffs, cfg.series_length, seed), cfg.dt);
    } catch (...) {
        sim_error = classify(std::current_exception());
    }
    const double sim_seconds = seconds_since(t_sim);

    // by_fraction[f][j] for every needed level.
    std::vector<std::map<int, LevelStat>> by_fraction(plan.fractions.size());
    for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi) {
        const auto& fp = plan.fractions[fi];
        if (sim_error != ErrorCode::none) {
            for (int j : plan.needed_levels) by_fraction[fi][j].error = sim_error;
            continue;
        }
        const SampledSeries prefix = series.prefix(fp.samples);
        for (int j : plan.needed_levels) {
            LevelStat& s = by_fraction[fi][j];
            if (fp.infeasible.count(j)) {
                s.error = ErrorCode::feasibility;
                continue;
            }
            const auto t0 = Clock::now();
            try {
                s.value = first_statistic(prefix, plan.filter, fp.schedule, j);
            } catch (...) {
                s.error = classify(std::current_exception());
            }
            s.seconds = seconds_since(t0);
        }
    }

    const std::set<int> reported(cfg.levels.begin(), cfg.levels.end());
    const double sim_share = sim_seconds / static_cast<double>(cfg.levels.size() * cfg.fractions.size());
    for (int j : cfg.levels) {
        for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi) {
            const auto& fp = plan.fractions[fi];
            const auto& sj = by_fraction[fi].at(j);
            const auto& sj1 = by_fraction[fi].at(j + 1);
            ExperimentRecord rec;
            rec.replication = r;
            rec.seed = seed;
            rec.j = j;
            rec.fraction = fp.fraction;
            double seconds = sim_share + sj.seconds + (reported.count(j + 1) ? 0.0 : sj1.seconds);
            const auto t0 = Clock::now();
            if (!sj.value) {
                rec.error = sj.error;
            } else {
                rec.stat1 = sj.value;
                if (!sj1.value) {
                    rec.error = sj1.error;
                } else {
                    const Level& lj = fp.schedule.level(j);
                    const Level& lj1 = fp.schedule.level(j + 1);
                    try {
                        rec.stat2 = second_statistic(*sj.value, *sj1.value, lj.a, lj1.a);
                        const Estimate e = estimate_from_statistics(*sj.value, *sj1.value, lj, lj1, plan.constants);
                        rec.s0_hat = e.s0_hat;
                        rec.alpha_hat = e.alpha_hat;
                        rec.clamps = e.clamps.bits();
                    } catch (...) {
                        rec.error = classify(std::current_exception());
                    }
                }
            }
            seconds += seconds_since(t0);
            rec.wall_ms = static_cast<std::int64_t>(std::llround(seconds * 1000.0));
            rows.push_back(rec);
        }
    }
    return rows;
}

ordered_json metadata(const Plan& plan) {
    const auto& cfg = plan.config;
    ordered_json m;
    m["config"] = config_json(cfg);
    m["truth"] = {{"s0", cfg.true_s0()}, {"alpha", cfg.true_alpha()}};
    m["sigma_eps_effective"] = plan.model.sigma_eps;
    m["constants"] = {{"c2", plan.constants.c2},
                      {"kappa", plan.constants.kappa},
                      {"c3", constant_c3(plan.filter)},
                      {"stat1_limit", plan.constants.c2 * std::pow(cfg.true_s0(), -4.0 * cfg.true_alpha())}};
    m["moments"] = {{"y1", "stat1 / c2"}, {"y2", "stat2 / kappa"}, {"epsilon", "1 / m_j of the reported level j"}};
    m["clamps_bits"] = {{"1", "y1 low"}, {"2", "y1 high"}, {"4", "y2 low"}, {"8", "y2 high"}};
    m["error_codes"] = {{"0", "none"},       {"1", "coverage"}, {"2", "feasibility"}, {"3", "config"},
                        {"4", "degenerate"}, {"5", "numeric"},  {"6", "domain"},      {"7", "capacity"},
                        {"9", "other"}};
    m["fractions"] = ordered_json::array();
    for (const auto& fp : plan.fractions) {
        ordered_json f;
        f["fraction"] = fp.fraction;
        f["samples"] = fp.samples;
        f["schedule"] = ordered_json::parse(schedule_to_json(fp.schedule));
        f["infeasible_levels"] = std::vector<int>(fp.infeasible.begin(), fp.infeasible.end());
        m["fractions"].push_back(std::move(f));
    }
    return m;
}

}  // namespace

std::vector<ExperimentRecord> run_replication(const ExperimentConfig& config, std::size_t r) {
    return replicate(make_plan(config), r);
}

RunResult run_experiment(const ExperimentConfig& config,
                         const std::function<void(std::size_t, std::size_t)>& progress) {
    const Plan plan = make_plan(config);
    RunResult result;
    result.records_path = config.output_path;
    result.metadata_path = config.output_path + ".meta.json";

    {
        std::ofstream meta(result.metadata_path);
        if (!meta) throw Error("cannot open " + result.metadata_path.string() + " for writing");
        meta << metadata(plan).dump(2) << '\n';
    }
    std::ofstream out(result.records_path);
    if (!out) throw Error("cannot open " + result.records_path.string() + " for writing");
    out << kRecordsHeader << '\n';
    out.flush();

    const std::size_t total = config.replications;
    std::vector<std::optional<std::vector<ExperimentRecord>>> slots(total);
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= total) return;
            std::vector<ExperimentRecord> rows;
            try {
                rows = replicate(plan, r);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next.store(total);
                ready.notify_all();
                return;
            }
            std::lock_guard lock(mu);
            slots[r] = std::move(rows);
            ready.notify_all();
        }
    };

    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(config.workers, total));
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);

    for (std::size_t r = 0; r < total; ++r) {
        std::vector<ExperimentRecord> rows;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return slots[r].has_value() || failure; });
            if (!slots[r]) break;
            rows = std::move(*slots[r]);
            slots[r].reset();
        }
        for (const auto& rec : rows) {
            out << format_record(rec) << '\n';
            ++result.records;
            if (rec.error != ErrorCode::none) ++result.null_records;
        }
        out.flush();
        if (progress) progress(r + 1, total);
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    if (!out) throw Error("write to " + result.records_path.string() + " failed");
    return result;
}

}  // namespace gfmm
