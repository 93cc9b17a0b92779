// Copyright 2026 The pufeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Measurement file formats.
//
// Text (CSV):
//   line 1:        N,T,M
//   N*M lines:     T comma-separated 0/1 values, one line per (device,
//                  repeat), device-major.
//
// Binary:
//   bytes 0-3:     "PUFB"
//   byte 4:        version 0x01
//   bytes 5-16:    N, T, M as little-endian uint32
//   then N*M rows (device-major, then repeat), each ceil(T/8) bytes; bit t of
//   a row is bit (t % 8) of byte t / 8, padding bits are zero.
//
// Counts (CSV, for data already reduced to ones per position):
//   line 1:        counts,N,T
//   T lines:       one count x_t in [0, N] each.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pufeval/errors.hpp"
#include "pufeval/response_model.hpp"

namespace pufeval {

enum class MeasurementFormat { kCsv, kBinary };

inline constexpr std::string_view kBinaryMagic = "PUFB";
inline constexpr std::uint8_t kBinaryVersion = 0x01;
inline constexpr std::size_t kBinaryHeaderSize = 17;

namespace detail {

// Splits text into lines, dropping a trailing '\r'. The final empty piece
// after a terminating newline is not returned.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) {
      f.remove_prefix(1);
    }
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) {
      f.remove_suffix(1);
    }
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool parse_count(std::string_view s, Count& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::string line_msg(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

inline std::string byte_msg(std::size_t offset, const std::string& what) {
  return "byte " + std::to_string(offset) + ": " + what;
}

inline std::uint32_t read_u32_le(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<std::uint8_t>(bytes[at + i]);
  }
  return v;
}

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

// Dimension product must fit comfortably in memory and in Count.
inline constexpr Count kMaxCells = Count{1} << 34;

inline bool dims_reasonable(Count n, Count t, Count m) {
  return n >= 1 && t >= 1 && m >= 1 && n <= kMaxCells / t &&
         n * t <= kMaxCells / m;
}

}  // namespace detail

inline MeasurementTensor parse_measurements_csv(std::string_view text) {
  using detail::line_msg;
  const auto lines = detail::split_lines(text);
  if (lines.empty()) {
    throw ParseError(ParseError::Kind::kHeader, 1, line_msg(1, "empty file"));
  }
  const auto header = detail::split_fields(lines[0]);
  Count n = 0, t = 0, m = 0;
  if (header.size() != 3 || !detail::parse_count(header[0], n) ||
      !detail::parse_count(header[1], t) ||
      !detail::parse_count(header[2], m) || !detail::dims_reasonable(n, t, m)) {
    throw ParseError(ParseError::Kind::kHeader, 1,
                     line_msg(1, "expected header N,T,M with positive values"));
  }
  const Count rows = n * m;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n * t * m));
  Count row = 0;
  std::size_t i = 1;
  for (; i < lines.size() && row < rows; ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = detail::split_fields(lines[i]);
    if (static_cast<Count>(fields.size()) != t) {
      throw ParseError(ParseError::Kind::kDimension, line_no,
                       line_msg(line_no, "expected " + std::to_string(t) +
                                             " values, found " +
                                             std::to_string(fields.size())));
    }
    const Count device = row / m;
    const Count repeat = row % m;
    for (Count pos = 0; pos < t; ++pos) {
      const auto f = fields[static_cast<std::size_t>(pos)];
      if (f != "0" && f != "1") {
        throw ParseError(
            ParseError::Kind::kSymbol, line_no,
            line_msg(line_no, "value " + std::to_string(pos + 1) +
                                  " is not 0 or 1: '" + std::string(f) + "'"));
      }
      bits[static_cast<std::size_t>((device * t + pos) * m + repeat)] =
          f == "1" ? 1 : 0;
    }
    ++row;
  }
  if (row < rows) {
    throw ParseError(ParseError::Kind::kTruncated, i + 1,
                     line_msg(i + 1, "expected " + std::to_string(rows) +
                                         " measurement rows, found " +
                                         std::to_string(row)));
  }
  for (; i < lines.size(); ++i) {
    if (!lines[i].empty()) {
      throw ParseError(ParseError::Kind::kDimension, i + 1,
                       line_msg(i + 1, "more rows than N*M"));
    }
  }
  return MeasurementTensor(n, t, m, std::move(bits));
}

inline void write_measurements_csv(std::ostream& out,
                                   const MeasurementTensor& m) {
  out << m.devices() << ',' << m.positions() << ',' << m.repeats() << '\n';
  std::string line;
  for (Count n = 0; n < m.devices(); ++n) {
    for (Count k = 0; k < m.repeats(); ++k) {
      line.clear();
      for (Count t = 0; t < m.positions(); ++t) {
        if (t > 0) line.push_back(',');
        line.push_back(m.bit(n, t, k) ? '1' : '0');
      }
      line.push_back('\n');
      out << line;
    }
  }
}

inline MeasurementTensor parse_measurements_binary(std::string_view bytes) {
  using detail::byte_msg;
  if (bytes.size() < kBinaryHeaderSize) {
    throw ParseError(ParseError::Kind::kTruncated, bytes.size(),
                     byte_msg(bytes.size(), "header shorter than 17 bytes"));
  }
  if (bytes.substr(0, 4) != kBinaryMagic) {
    throw ParseError(ParseError::Kind::kHeader, 0,
                     byte_msg(0, "missing PUFB magic"));
  }
  if (static_cast<std::uint8_t>(bytes[4]) != kBinaryVersion) {
    throw ParseError(ParseError::Kind::kHeader, 4,
                     byte_msg(4, "unsupported version"));
  }
  const Count n = detail::read_u32_le(bytes, 5);
  const Count t = detail::read_u32_le(bytes, 9);
  const Count m = detail::read_u32_le(bytes, 13);
  if (!detail::dims_reasonable(n, t, m)) {
    throw ParseError(ParseError::Kind::kHeader, 5,
                     byte_msg(5, "dimensions must be positive"));
  }
  const Count row_bytes = (t + 7) / 8;
  const Count rows = n * m;
  const auto expected = static_cast<std::size_t>(
      kBinaryHeaderSize + static_cast<std::size_t>(rows * row_bytes));
  if (bytes.size() < expected) {
    throw ParseError(ParseError::Kind::kTruncated, bytes.size(),
                     byte_msg(bytes.size(),
                              "payload truncated, expected " +
                                  std::to_string(expected) + " bytes"));
  }
  if (bytes.size() > expected) {
    throw ParseError(ParseError::Kind::kDimension, expected,
                     byte_msg(expected, "trailing bytes after payload"));
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n * t * m));
  std::size_t at = kBinaryHeaderSize;
  for (Count row = 0; row < rows; ++row) {
    const Count device = row / m;
    const Count repeat = row % m;
    for (Count b = 0; b < row_bytes; ++b, ++at) {
      const auto byte = static_cast<std::uint8_t>(bytes[at]);
      for (int j = 0; j < 8; ++j) {
        const Count pos = b * 8 + j;
        const std::uint8_t v = (byte >> j) & 1u;
        if (pos >= t) {
          if (v != 0) {
            throw ParseError(ParseError::Kind::kSymbol, at,
                             byte_msg(at, "non-zero padding bit"));
          }
          continue;
        }
        bits[static_cast<std::size_t>((device * t + pos) * m + repeat)] = v;
      }
    }
  }
  return MeasurementTensor(n, t, m, std::move(bits));
}

inline void write_measurements_binary(std::ostream& out,
                                      const MeasurementTensor& m) {
  out.write(kBinaryMagic.data(), 4);
  out.put(static_cast<char>(kBinaryVersion));
  detail::write_u32_le(out, static_cast<std::uint32_t>(m.devices()));
  detail::write_u32_le(out, static_cast<std::uint32_t>(m.positions()));
  detail::write_u32_le(out, static_cast<std::uint32_t>(m.repeats()));
  const Count row_bytes = (m.positions() + 7) / 8;
  std::string row(static_cast<std::size_t>(row_bytes), '\0');
  for (Count n = 0; n < m.devices(); ++n) {
    for (Count k = 0; k < m.repeats(); ++k) {
      std::fill(row.begin(), row.end(), '\0');
      for (Count t = 0; t < m.positions(); ++t) {
        if (m.bit(n, t, k)) {
          row[static_cast<std::size_t>(t / 8)] |=
              static_cast<char>(1u << (t % 8));
        }
      }
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
  }
}

inline PositionCounts parse_counts_csv(std::string_view text) {
  using detail::line_msg;
  const auto lines = detail::split_lines(text);
  const auto header =
      lines.empty() ? std::vector<std::string_view>{}
                    : detail::split_fields(lines[0]);
  Count n = 0, t = 0;
  if (header.size() != 3 || header[0] != "counts" ||
      !detail::parse_count(header[1], n) || !detail::parse_count(header[2], t) ||
      n < 1 || t < 1) {
    throw ParseError(ParseError::Kind::kHeader, 1,
                     line_msg(1, "expected header counts,N,T"));
  }
  std::vector<Count> ones;
  ones.reserve(static_cast<std::size_t>(t));
  std::size_t i = 1;
  for (; i < lines.size() && static_cast<Count>(ones.size()) < t; ++i) {
    Count x = 0;
    if (!detail::parse_count(lines[i], x)) {
      throw ParseError(ParseError::Kind::kSymbol, i + 1,
                       line_msg(i + 1, "expected an integer count"));
    }
    if (x < 0 || x > n) {
      throw ParseError(ParseError::Kind::kSymbol, i + 1,
                       line_msg(i + 1, "count outside [0, N]"));
    }
    ones.push_back(x);
  }
  if (static_cast<Count>(ones.size()) < t) {
    throw ParseError(ParseError::Kind::kTruncated, i + 1,
                     line_msg(i + 1, "fewer than T counts"));
  }
  for (; i < lines.size(); ++i) {
    if (!lines[i].empty()) {
      throw ParseError(ParseError::Kind::kDimension, i + 1,
                       line_msg(i + 1, "more than T counts"));
    }
  }
  return PositionCounts(n, std::move(ones));
}

inline void write_counts_csv(std::ostream& out, const PositionCounts& c) {
  out << "counts," << c.devices << ',' << c.positions() << '\n';
  for (Count x : c.ones) out << x << '\n';
}

/// Either raw measurements or pre-counted ones per position.
using AnalysisInput = std::variant<MeasurementTensor, PositionCounts>;

/// Dispatches on content: PUFB magic, "counts," header, else measurement CSV.
inline AnalysisInput parse_input(std::string_view bytes) {
  if (bytes.substr(0, 4) == kBinaryMagic) {
    return parse_measurements_binary(bytes);
  }
  if (bytes.substr(0, 7) == "counts,") return parse_counts_csv(bytes);
  return parse_measurements_csv(bytes);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline AnalysisInput load_input(const std::string& path) {
  return parse_input(read_file(path));
}

inline MeasurementTensor load_measurements(const std::string& path) {
  auto input = load_input(path);
  if (auto* m = std::get_if<MeasurementTensor>(&input)) return std::move(*m);
  throw ParseError(ParseError::Kind::kHeader, 1,
                   "file holds counts, not measurements");
}

inline void write_measurements(const std::string& path,
                               const MeasurementTensor& m,
                               MeasurementFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  if (format == MeasurementFormat::kBinary) {
    write_measurements_binary(out, m);
  } else {
    write_measurements_csv(out, m);
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace pufeval
