// Copyright 2026 The Voicemap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "voicemap/map_io.h"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string_view>

namespace voicemap {
namespace {

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
T ParseNumber(std::string_view field, std::size_t line, const char* column) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw MapParseError(line, std::string("bad ") + column + " value '" +
                                  std::string(field) + "'");
  }
  return value;
}

// Walks the data lines of a CSV: skips comments and blanks, checks the
// header, and hands each remaining line to `row` with its line number.
// Comment lines are passed to `comment` without the leading '#'.
template <typename RowFn, typename CommentFn>
void ForEachRow(std::istream& in, std::string_view header, RowFn row,
                CommentFn comment) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      comment(Trim(line.substr(1)));
      continue;
    }
    if (!have_header) {
      if (line != header) {
        throw MapParseError(line_no, "expected header '" +
                                         std::string(header) + "'");
      }
      have_header = true;
      continue;
    }
    row(line, line_no);
  }
  if (!have_header) throw MapParseError(line_no, "missing CSV header");
}

void WriteMetadata(std::ostream& out, std::span<const std::string> metadata) {
  for (const std::string& m : metadata) out << "# " << m << '\n';
}

std::string OptionalField(const std::optional<double>& v) {
  return v ? FormatSig6(*v) : std::string();
}

}  // namespace

MapParseError::MapParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string FormatSig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

void WriteVoiceMapCsv(std::ostream& out, const VoiceMap& map,
                      std::span<const std::string> metadata) {
  WriteMetadata(out, metadata);
  out << kMapCsvHeader << '\n';
  for (const auto& [key, acc] : map.cells()) {
    out << key.st_bin << ',' << key.spl_bin << ',' << acc.n_cycles << ','
        << OptionalField(acc.Mean(Metric::kF0)) << ','
        << OptionalField(acc.Mean(Metric::kSpl)) << ','
        << OptionalField(acc.Mean(Metric::kCrest)) << ','
        << OptionalField(acc.Mean(Metric::kSb)) << ','
        << OptionalField(acc.Mean(Metric::kCpps)) << ','
        << acc.count[static_cast<std::size_t>(Metric::kSb)] << ','
        << acc.count[static_cast<std::size_t>(Metric::kCpps)] << '\n';
  }
}

VoiceMap ReadVoiceMapCsv(std::istream& in, std::string source) {
  VoiceMap map(std::move(source));
  ForEachRow(
      in, kMapCsvHeader,
      [&map](std::string_view line, std::size_t line_no) {
        const auto f = SplitCommas(line);
        if (f.size() != 10) {
          throw MapParseError(line_no, "expected 10 fields, got " +
                                           std::to_string(f.size()));
        }
        CellKey key{ParseNumber<int>(f[0], line_no, "st_bin"),
                    ParseNumber<int>(f[1], line_no, "spl_bin")};
        CellAccumulator acc;
        acc.n_cycles = ParseNumber<std::int64_t>(f[2], line_no, "n_cycles");
        if (acc.n_cycles < 1) {
          throw MapParseError(line_no, "n_cycles must be positive");
        }
        const std::int64_t n_sb = ParseNumber<std::int64_t>(f[8], line_no, "n_sb");
        const std::int64_t n_cpps =
            ParseNumber<std::int64_t>(f[9], line_no, "n_cpps");
        if (n_sb < 0 || n_sb > acc.n_cycles || n_cpps < 0 ||
            n_cpps > acc.n_cycles) {
          throw MapParseError(line_no, "metric count out of range");
        }
        auto set = [&](Metric m, std::string_view field, std::int64_t count,
                       const char* column) {
          const auto i = static_cast<std::size_t>(m);
          if (count == 0) {
            if (!field.empty()) {
              throw MapParseError(line_no, std::string(column) +
                                               " present with zero count");
            }
            return;
          }
          const double mean = ParseNumber<double>(field, line_no, column);
          acc.sum[i] = mean * static_cast<double>(count);
          acc.count[i] = count;
        };
        set(Metric::kF0, f[3], acc.n_cycles, "f0_hz");
        set(Metric::kSpl, f[4], acc.n_cycles, "spl_db");
        set(Metric::kCrest, f[5], acc.n_cycles, "crest");
        set(Metric::kSb, f[6], n_sb, "sb_db");
        set(Metric::kCpps, f[7], n_cpps, "cpps_db");
        if (map.Find(key) != nullptr) {
          throw MapParseError(line_no, "duplicate cell");
        }
        map.InsertCell(key, acc);
      },
      [](std::string_view) {});
  return map;
}

void WriteDifferenceCsv(std::ostream& out, const DifferenceMap& diff,
                        std::span<const std::string> metadata) {
  WriteMetadata(out, metadata);
  out << "# metric=" << MetricName(diff.metric) << '\n';
  out << kDiffCsvHeader << '\n';
  for (const auto& [key, delta] : diff.deltas) {
    out << key.st_bin << ',' << key.spl_bin << ',' << FormatSig6(delta)
        << '\n';
  }
}

DifferenceMap ReadDifferenceCsv(std::istream& in) {
  DifferenceMap diff;
  ForEachRow(
      in, kDiffCsvHeader,
      [&diff](std::string_view line, std::size_t line_no) {
        const auto f = SplitCommas(line);
        if (f.size() != 3) {
          throw MapParseError(line_no, "expected 3 fields, got " +
                                           std::to_string(f.size()));
        }
        CellKey key{ParseNumber<int>(f[0], line_no, "st_bin"),
                    ParseNumber<int>(f[1], line_no, "spl_bin")};
        const double delta = ParseNumber<double>(f[2], line_no, "delta");
        if (!diff.deltas.emplace(key, delta).second) {
          throw MapParseError(line_no, "duplicate cell");
        }
      },
      [&diff](std::string_view comment) {
        constexpr std::string_view kKey = "metric=";
        if (comment.starts_with(kKey)) {
          if (auto m = ParseMetric(comment.substr(kKey.size()))) {
            diff.metric = *m;
          }
        }
      });
  return diff;
}

void WriteCyclesCsv(std::ostream& out, std::span<const CycleRecord> cycles) {
  out << kCyclesCsvHeader << '\n';
  for (const CycleRecord& c : cycles) {
    out << c.start_sample << ',' << c.length_samples << ','
        << FormatSig6(c.f0_hz) << ',' << FormatSig6(c.spl_db) << ','
        << FormatSig6(c.crest) << ',' << OptionalField(c.cpps_db) << ','
        << OptionalField(c.sb_db) << '\n';
  }
}

void WriteFramesCsv(std::ostream& out, std::span<const MetricFrame> frames) {
  out << kFramesCsvHeader << '\n';
  for (const MetricFrame& f : frames) {
    out << FormatSig6(f.center_s) << ',' << FormatSig6(f.sb_db) << ','
        << FormatSig6(f.cpps_db) << '\n';
  }
}

bool LooksLikeDifferenceCsv(std::istream& in) {
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    return line == kDiffCsvHeader;
  }
  return false;
}

}  // namespace voicemap
