#pragma once

#include <filesystem>
#include <iosfwd>

#include "gfmm/simulator.hpp"

namespace gfmm {

/// CSV with a leading "# dt=...,origin=...,seed=..." comment, then header "index,value".
/// Values are printed with 17 significant digits, so reading back is exact.
void write_series_csv(std::ostream& out, const SampledSeries& series);
void write_series_csv(const std::filesystem::path& path, const SampledSeries& series);

/// Accepts files with or without the metadata comment. Throws ParseError with the line number.
SampledSeries read_series_csv(std::istream& in);
SampledSeries read_series_csv(const std::filesystem::path& path);

/// Binary layout, all little-endian:
///   bytes 0..3   magic "GFMS"
///   bytes 4..7   u32 version (1)
///   bytes 8..15  u64 length
///   bytes 16..23 f64 dt
///   bytes 24..31 u64 seed
/// followed by length f64 values. The origin is not stored and reads back as 0.
void write_series_raw(std::ostream& out, const SampledSeries& series);
void write_series_raw(const std::filesystem::path& path, const SampledSeries& series);
SampledSeries read_series_raw(std::istream& in);
SampledSeries read_series_raw(const std::filesystem::path& path);

}  // namespace gfmm
