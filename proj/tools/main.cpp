// gfmm: simulate, transform, estimate, experiment, summarize.
#include <gfmm/error.hpp>
#include <gfmm/estimator.hpp>
#include <gfmm/experiment.hpp>
#include <gfmm/filter.hpp>
#include <gfmm/series_io.hpp>
#include <gfmm/simulator.hpp>
#include <gfmm/spectral.hpp>
#include <gfmm/statistics.hpp>
#include <gfmm/summary.hpp>
#include <gfmm/transform.hpp>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

bool is_raw(const std::string& path) {
    return path.ends_with(".bin") || path.ends_with(".raw") || path.ends_with(".f64");
}

gfmm::SampledSeries load_series(const std::string& path) {
    return is_raw(path) ? gfmm::read_series_raw(path) : gfmm::read_series_csv(path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw gfmm::ConfigError("cannot open " + path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

// Writes to path, or stdout for "" / "-".
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw gfmm::Error("cannot open " + path + " for writing");
    write(f);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SimulateArgs {
    std::string config;
    double mu = 0.1, eta = 0.3, sigma_eps = 1.0, dt = 1.0;
    bool normalized = false;
    std::size_t n_terms = 10000, length = 10000;
    std::uint64_t seed = 0;
    std::string output = "-";
};

struct TransformArgs {
    std::string input;
    double a = 1.0, b = 0.0, theta = 1.0, sigma = 1.0;
    std::optional<double> delta;
    std::size_t first_index = 0;
    std::string weights;
    std::string output = "-";
};

struct EstimateArgs {
    std::string input;
    std::string config;
    std::string preset = "desk";
    std::string overrides = "{}";
    int j = 2;
    double sigma = 1.0;
    std::string output = "-";
};

struct ExperimentArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string output;
    bool quiet = false;
};

struct SummarizeArgs {
    std::string records;
    std::string config;
    std::optional<double> truth_s0, truth_alpha;
    std::string output = "-";
};

int run_simulate(const SimulateArgs& a) {
    gfmm::GegenbauerSpec spec{a.mu, a.eta, a.sigma_eps, a.n_terms};
    std::size_t length = a.length;
    double dt = a.dt;
    bool normalized = a.normalized;
    if (!a.config.empty()) {
        const auto cfg = gfmm::config_from_json(read_file(a.config));
        spec = cfg.model;
        normalized = cfg.normalize_sigma;
        length = cfg.series_length;
        dt = cfg.dt;
    }
    if (normalized) spec.sigma_eps = gfmm::normalized_sigma(spec, dt);
    const auto series = gfmm::rescale(gfmm::simulate(spec, length, a.seed), dt);
    if (!a.output.empty() && a.output != "-" && is_raw(a.output))
        gfmm::write_series_raw(a.output, series);
    else
        with_output(a.output, [&](std::ostream& out) { gfmm::write_series_csv(out, series); });
    return 0;
}

int run_transform(const TransformArgs& a) {
    const auto series = load_series(a.input);
    const auto filter = gfmm::mexican_hat(a.sigma);
    const gfmm::TransformRequest req{a.a, a.b, a.theta, a.delta.value_or(series.dt)};
    const double d = gfmm::discrete_transform(series, filter, req, a.first_index);
    if (!a.weights.empty()) {
        const auto w = gfmm::cell_weights(filter, req);
        with_output(a.weights, [&](std::ostream& out) { gfmm::write_weight_table(out, w); });
    }
    with_output(a.output, [&](std::ostream& out) { out << g17(d) << '\n'; });
    return 0;
}

int run_estimate(const EstimateArgs& a) {
    const auto series = load_series(a.input);
    std::string preset = a.preset;
    gfmm::ScheduleOverrides overrides = gfmm::overrides_from_json(a.overrides);
    double sigma = a.sigma;
    if (!a.config.empty()) {
        const auto cfg = gfmm::config_from_json(read_file(a.config));
        preset = cfg.preset;
        overrides = cfg.overrides;
        sigma = cfg.filter_sigma;
    }
    if (preset == "desk") {
        if (!overrides.dt) overrides.dt = series.dt;
        const double window = static_cast<double>(series.size()) * series.dt;
        overrides.window = overrides.window ? std::min(*overrides.window, window) : window;
    }
    const auto schedule = gfmm::build_schedule(preset, a.j + 1, overrides);
    const auto filter = gfmm::mexican_hat(sigma);
    const double s1 = gfmm::first_statistic(series, filter, schedule, a.j);
    const double s1n = gfmm::first_statistic(series, filter, schedule, a.j + 1);
    const auto& lj = schedule.level(a.j);
    const auto& lj1 = schedule.level(a.j + 1);
    const auto e = gfmm::estimate_from_statistics(s1, s1n, lj, lj1, gfmm::EstimatorConstants::of(filter));
    nlohmann::ordered_json out;
    out["j"] = a.j;
    out["stat1"] = s1;
    out["stat2"] = gfmm::second_statistic(s1, s1n, lj.a, lj1.a);
    out["s0_hat"] = e.s0_hat;
    out["alpha_hat"] = e.alpha_hat;
    out["clamps"] = e.clamps.bits();
    out["epsilon"] = e.epsilon;
    out["schedule"] = nlohmann::ordered_json::parse(gfmm::schedule_to_json(schedule));
    with_output(a.output, [&](std::ostream& o) { o << out.dump(2) << '\n'; });
    return 0;
}

int run_experiment(const ExperimentArgs& a) {
    auto cfg = gfmm::config_from_json(read_file(a.config));
    if (a.seed) cfg.master_seed = *a.seed;
    if (a.workers) cfg.workers = *a.workers;
    if (!a.output.empty()) cfg.output_path = a.output;
    cfg.validate();
    std::function<void(std::size_t, std::size_t)> progress;
    if (!a.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 10 == 0) std::cerr << "\rreplications " << done << '/' << total << std::flush;
            if (done == total) std::cerr << '\n';
        };
    }
    const auto r = gfmm::run_experiment(cfg, progress);
    std::cerr << r.records << " records (" << r.null_records << " with errors) -> " << r.records_path.string()
              << "\nmetadata -> " << r.metadata_path.string() << '\n';
    return 0;
}

int run_summarize(const SummarizeArgs& a) {
    std::optional<gfmm::Truth> truth;
    if (!a.config.empty()) {
        const auto cfg = gfmm::config_from_json(read_file(a.config));
        truth = gfmm::Truth{cfg.true_s0(), cfg.true_alpha()};
    }
    if (a.truth_s0 || a.truth_alpha) {
        if (!a.truth_s0 || !a.truth_alpha) throw gfmm::ConfigError("--truth-s0 and --truth-alpha go together");
        truth = gfmm::Truth{*a.truth_s0, *a.truth_alpha};
    }
    const auto cells = gfmm::summarize(a.records, truth);
    with_output(a.output, [&](std::ostream& out) { gfmm::write_summary(out, cells); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyclic long-memory simulation, filter-transform statistics and (s0, alpha) estimation"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Simulate a Gegenbauer MA series");
    c_sim->add_option("--config", sim.config, "Experiment config; its model, length and dt are used");
    c_sim->add_option("--mu", sim.mu, "Long-memory exponent");
    c_sim->add_option("--eta", sim.eta, "Cosine of the pole frequency");
    c_sim->add_option("--sigma-eps", sim.sigma_eps, "Innovation standard deviation");
    c_sim->add_flag("--normalized", sim.normalized, "Scale innovations so that h(0) = 1");
    c_sim->add_option("--n-terms", sim.n_terms, "MA truncation length");
    c_sim->add_option("--length", sim.length, "Number of samples");
    c_sim->add_option("--dt", sim.dt, "Grid spacing of the output");
    c_sim->add_option("--seed", sim.seed, "Generator seed");
    c_sim->add_option("--output", sim.output, "Output path (.bin/.raw for binary, '-' for stdout)");

    TransformArgs tr;
    auto* c_tr = app.add_subcommand("transform", "Discrete truncated filter transform of one series");
    c_tr->add_option("--input", tr.input, "Series file (csv, or .bin/.raw)")->required();
    c_tr->add_option("--a", tr.a, "Scale");
    c_tr->add_option("--b", tr.b, "Shift");
    c_tr->add_option("--theta", tr.theta, "Truncation half-width");
    c_tr->add_option("--delta", tr.delta, "Sampling step (default: series dt)");
    c_tr->add_option("--sigma", tr.sigma, "Mexican hat width");
    c_tr->add_option("--first-index", tr.first_index, "Series index of the first window cell");
    c_tr->add_option("--weights", tr.weights, "Write the cell weight table (l,t_lo,t_hi,w) here");
    c_tr->add_option("--output", tr.output, "Output path ('-' for stdout)");

    EstimateArgs es;
    auto* c_es = app.add_subcommand("estimate", "Estimate (s0, alpha) from one series at level j");
    c_es->add_option("--input", es.input, "Series file (csv, or .bin/.raw)")->required();
    c_es->add_option("--config", es.config, "Experiment config supplying schedule and filter");
    c_es->add_option("--preset", es.preset, "Schedule preset: desk or paper-theory");
    c_es->add_option("--overrides", es.overrides, "Schedule overrides as JSON");
    c_es->add_option("--j", es.j, "Level");
    c_es->add_option("--sigma", es.sigma, "Mexican hat width");
    c_es->add_option("--output", es.output, "Output path ('-' for stdout)");

    ExperimentArgs ex;
    auto* c_ex = app.add_subcommand("experiment", "Run a seeded Monte Carlo experiment");
    c_ex->add_option("--config", ex.config, "Experiment config (JSON)")->required();
    c_ex->add_option("--seed", ex.seed, "Override master_seed");
    c_ex->add_option("--workers", ex.workers, "Override worker count");
    c_ex->add_option("--output", ex.output, "Override records CSV path");
    c_ex->add_flag("--quiet", ex.quiet, "No progress output");

    SummarizeArgs su;
    auto* c_su = app.add_subcommand("summarize", "Per-(j, fraction) medians and RMSE of a records CSV");
    c_su->add_option("records", su.records, "Records CSV")->required();
    c_su->add_option("--config", su.config, "Experiment config supplying the truth");
    c_su->add_option("--truth-s0", su.truth_s0, "True s0");
    c_su->add_option("--truth-alpha", su.truth_alpha, "True alpha");
    c_su->add_option("--output", su.output, "Output path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_tr->parsed()) return run_transform(tr);
        if (c_es->parsed()) return run_estimate(es);
        if (c_ex->parsed()) return run_experiment(ex);
        if (c_su->parsed()) return run_summarize(su);
    } catch (const gfmm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const gfmm::FeasibilityError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
