#include "gfmm/summary.hpp"

#include "gfmm/error.hpp"
#include "gfmm/summation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <string_view>

namespace gfmm {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_field(std::string_view s, std::size_t line, std::string_view column) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("column " + std::string(column) + ": cannot parse '" + std::string(s) + "'", line);
    return v;
}

template <class T>
std::optional<T> parse_optional(std::string_view s, std::size_t line, std::string_view column) {
    if (s.empty()) return std::nullopt;
    return parse_field<T>(s, line, column);
}

}  // namespace

std::vector<ExperimentRecord> read_records(std::istream& in) {
    std::vector<ExperimentRecord> out;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != kRecordsHeader) throw ParseError("unexpected header", lineno);
            header = true;
            continue;
        }
        const auto f = split(line);
        if (f.size() != 11) throw ParseError("expected 11 columns, found " + std::to_string(f.size()), lineno);
        ExperimentRecord r;
        r.replication = parse_field<std::size_t>(f[0], lineno, "replication");
        r.seed = parse_field<std::uint64_t>(f[1], lineno, "seed");
        r.j = parse_field<int>(f[2], lineno, "j");
        r.fraction = parse_field<double>(f[3], lineno, "fraction");
        r.stat1 = parse_optional<double>(f[4], lineno, "stat1");
        r.stat2 = parse_optional<double>(f[5], lineno, "stat2");
        r.s0_hat = parse_optional<double>(f[6], lineno, "s0_hat");
        r.alpha_hat = parse_optional<double>(f[7], lineno, "alpha_hat");
        r.clamps = parse_optional<std::uint32_t>(f[8], lineno, "clamps");
        r.error = static_cast<ErrorCode>(parse_field<int>(f[9], lineno, "error_code"));
        r.wall_ms = parse_field<std::int64_t>(f[10], lineno, "wall_ms");
        out.push_back(r);
    }
    if (!header) throw ParseError("empty records file", lineno);
    return out;
}

std::vector<ExperimentRecord> read_records(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path.string());
    return read_records(f);
}

std::vector<CellSummary> summarize(std::span<const ExperimentRecord> records, const std::optional<Truth>& truth) {
    struct Acc {
        std::size_t rows = 0, nulls = 0;
        std::vector<double> stat1, stat2, s0, alpha;
    };
    std::map<std::pair<int, double>, Acc> cells;
    for (const auto& r : records) {
        Acc& a = cells[{r.j, r.fraction}];
        ++a.rows;
        if (r.error != ErrorCode::none) ++a.nulls;
        if (r.stat1) a.stat1.push_back(*r.stat1);
        if (r.stat2) a.stat2.push_back(*r.stat2);
        if (r.s0_hat) a.s0.push_back(*r.s0_hat);
        if (r.alpha_hat) a.alpha.push_back(*r.alpha_hat);
    }
    auto med = [](const std::vector<double>& v) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        return median(v);
    };
    auto mean = [](const std::vector<double>& v) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        return pairwise_sum(v) / static_cast<double>(v.size());
    };
    auto rmse = [](const std::vector<double>& v, double t) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        std::vector<double> e(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) e[i] = v[i] - t;
        return std::sqrt(pairwise_sum_squares(e) / static_cast<double>(e.size()));
    };
    std::vector<CellSummary> out;
    for (const auto& [key, a] : cells) {
        CellSummary c;
        c.j = key.first;
        c.fraction = key.second;
        c.rows = a.rows;
        c.nulls = a.nulls;
        c.stat1_median = med(a.stat1);
        if (!a.stat1.empty()) c.stat1_iqr = quantile(a.stat1, 0.75) - quantile(a.stat1, 0.25);
        c.stat1_mean = mean(a.stat1);
        c.stat2_median = med(a.stat2);
        c.s0_median = med(a.s0);
        c.s0_mean = mean(a.s0);
        c.alpha_median = med(a.alpha);
        c.alpha_mean = mean(a.alpha);
        if (truth) {
            c.s0_rmse = rmse(a.s0, truth->s0);
            c.alpha_rmse = rmse(a.alpha, truth->alpha);
        }
        out.push_back(c);
    }
    return out;
}

std::vector<CellSummary> summarize(const std::filesystem::path& records_path, std::optional<Truth> truth) {
    const auto records = read_records(records_path);
    if (!truth) {
        const auto meta_path = std::filesystem::path(records_path.string() + ".meta.json");
        std::ifstream meta(meta_path);
        if (meta) {
            try {
                const auto j = nlohmann::json::parse(meta);
                truth = Truth{j.at("truth").at("s0").get<double>(), j.at("truth").at("alpha").get<double>()};
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(meta_path.string() + ": " + e.what(), 0);
            }
        }
    }
    return summarize(records, truth);
}

void write_summary(std::ostream& out, std::span<const CellSummary> cells) {
    out << "j,fraction,rows,nulls,stat1_median,stat1_iqr,stat1_mean,stat2_median,s0_median,s0_mean,s0_rmse,"
           "alpha_median,alpha_mean,alpha_rmse\n";
    auto put = [&](const std::optional<double>& v) {
        out << ',';
        if (v) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", *v);
            out << buf;
        }
    };
    for (const auto& c : cells) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", c.fraction);
        out << c.j << ',' << buf << ',' << c.rows << ',' << c.nulls;
        put(c.stat1_median);
        put(c.stat1_iqr);
        put(c.stat1_mean);
        put(c.stat2_median);
        put(c.s0_median);
        put(c.s0_mean);
        put(c.s0_rmse);
        put(c.alpha_median);
        put(c.alpha_mean);
        put(c.alpha_rmse);
        out << '\n';
    }
}

const CellSummary* find_cell(std::span<const CellSummary> cells, int j, double fraction) {
    for (const auto& c : cells)
        if (c.j == j && std::abs(c.fraction - fraction) <= 1e-12) return &c;
    return nullptr;
}

}  // namespace gfmm
