#include "gfmm/series_io.hpp"

#include "gfmm/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace gfmm {

namespace {

constexpr std::array<char, 4> kMagic{'G', 'F', 'M', 'S'};
constexpr std::uint32_t kVersion = 1;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
T parse_number(std::string_view s, std::size_t line, std::string_view what) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("malformed " + std::string(what) + " '" + std::string(s) + "'", line);
    return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in) throw ParseError("raw series: truncated stream", 0);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream f(path, mode);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    return f;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream f(path, mode);
    if (!f) throw Error("cannot open " + path.string());
    return f;
}

}  // namespace

void write_series_csv(std::ostream& out, const SampledSeries& series) {
    out << "# dt=" << format_g17(series.dt) << ",origin=" << format_g17(series.origin) << ",seed=" << series.seed
        << '\n';
    out << "index,value\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) out << i << ',' << format_g17(series.values[i]) << '\n';
}

void write_series_csv(const std::filesystem::path& path, const SampledSeries& series) {
    auto f = open_out(path, std::ios::out);
    write_series_csv(f, series);
}

SampledSeries read_series_csv(std::istream& in) {
    SampledSeries s;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view meta(line);
            meta.remove_prefix(1);
            while (!meta.empty()) {
                const auto comma = meta.find(',');
                auto item = meta.substr(0, comma);
                meta = comma == std::string_view::npos ? std::string_view{} : meta.substr(comma + 1);
                while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
                const auto eq = item.find('=');
                if (eq == std::string_view::npos) continue;
                const auto key = item.substr(0, eq);
                const auto val = item.substr(eq + 1);
                if (key == "dt") s.dt = parse_number<double>(val, lineno, "dt");
                else if (key == "origin") s.origin = parse_number<double>(val, lineno, "origin");
                else if (key == "seed") s.seed = parse_number<std::uint64_t>(val, lineno, "seed");
            }
            continue;
        }
        if (!header) {
            if (line != "index,value") throw ParseError("expected header 'index,value'", lineno);
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected two columns", lineno);
        const std::string_view sv(line);
        const auto idx = parse_number<std::uint64_t>(sv.substr(0, comma), lineno, "index");
        if (idx != s.values.size()) throw ParseError("non-consecutive index", lineno);
        s.values.push_back(parse_number<double>(sv.substr(comma + 1), lineno, "value"));
    }
    if (!header) throw ParseError("missing header 'index,value'", lineno);
    if (!(s.dt > 0.0)) throw ParseError("dt must be positive", 1);
    return s;
}

SampledSeries read_series_csv(const std::filesystem::path& path) {
    auto f = open_in(path, std::ios::in);
    return read_series_csv(f);
}

void write_series_raw(std::ostream& out, const SampledSeries& series) {
    out.write(kMagic.data(), 4);
    std::array<char, 4> ver;
    for (int i = 0; i < 4; ++i) ver[i] = static_cast<char>((kVersion >> (8 * i)) & 0xFF);
    out.write(ver.data(), 4);
    put_u64(out, series.values.size());
    put_u64(out, std::bit_cast<std::uint64_t>(series.dt));
    put_u64(out, series.seed);
    for (double v : series.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
    if (!out) throw Error("raw series: write failed");
}

void write_series_raw(const std::filesystem::path& path, const SampledSeries& series) {
    auto f = open_out(path, std::ios::out | std::ios::binary);
    write_series_raw(f, series);
}

SampledSeries read_series_raw(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || magic != kMagic) throw ParseError("raw series: bad magic", 0);
    std::array<unsigned char, 4> ver{};
    in.read(reinterpret_cast<char*>(ver.data()), 4);
    const std::uint32_t version = ver[0] | (ver[1] << 8) | (ver[2] << 16) | (static_cast<std::uint32_t>(ver[3]) << 24);
    if (!in || version != kVersion) throw ParseError("raw series: unsupported version", 0);
    const std::uint64_t n = get_u64(in);
    SampledSeries s;
    s.dt = std::bit_cast<double>(get_u64(in));
    s.seed = get_u64(in);
    s.values.resize(n);
    for (auto& v : s.values) v = std::bit_cast<double>(get_u64(in));
    return s;
}

SampledSeries read_series_raw(const std::filesystem::path& path) {
    auto f = open_in(path, std::ios::in | std::ios::binary);
    return read_series_raw(f);
}

}  // namespace gfmm
