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

#ifndef VOICEMAP_VOICE_MAP_H_
#define VOICEMAP_VOICE_MAP_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voicemap/cycle_detector.h"

namespace voicemap {

// Semitone 0 of the map's pitch axis.
inline constexpr double kSemitoneReferenceHz = 55.0;

enum class Metric { kF0, kSpl, kCrest, kSb, kCpps };
inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kF0, Metric::kSpl, Metric::kCrest, Metric::kSb, Metric::kCpps};

// Column name used in CSV files: f0_hz, spl_db, crest, sb_db, cpps_db.
std::string_view MetricName(Metric m);
// Accepts column names and the short forms f0, spl, sb, cpps.
std::optional<Metric> ParseMetric(std::string_view name);

// 12 log2(f0 / 55). Throws std::invalid_argument for f0 <= 0.
double SemitoneOf(double f0_hz);

struct CellKey {
  int st_bin = 0;
  int spl_bin = 0;

  auto operator<=>(const CellKey&) const = default;
};

// Half-open 1 semitone x 1 dB bins: (floor(st), floor(spl)).
CellKey CellOf(double f0_hz, double spl_db);

struct CellAccumulator {
  std::int64_t n_cycles = 0;
  std::array<double, kMetricCount> sum{};
  std::array<std::int64_t, kMetricCount> count{};

  void Add(const CycleRecord& cycle);
  std::optional<double> Mean(Metric m) const;
  CellAccumulator& operator+=(const CellAccumulator& other);
  bool operator==(const CellAccumulator&) const = default;
};

// Sparse (semitone, dB) grid of per-cell metric accumulators. Cells are
// kept sorted by key; every stored cell holds at least one cycle.
class VoiceMap {
 public:
  using CellMap = std::map<CellKey, CellAccumulator>;

  VoiceMap() = default;
  explicit VoiceMap(std::string source) : source_(std::move(source)) {}

  static VoiceMap FromCycles(std::span<const CycleRecord> cycles,
                             std::string source = {});

  // Adds one cycle to its cell. CPPs values below 0 dB are stored as 0.
  void Accumulate(const CycleRecord& cycle);

  // Stores a prebuilt accumulator (used when reading map files). Throws
  // std::invalid_argument if n_cycles < 1 or any count exceeds n_cycles.
  void InsertCell(CellKey key, const CellAccumulator& acc);

  const CellMap& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  std::int64_t total_cycles() const { return total_cycles_; }
  const std::string& source() const { return source_; }
  void set_source(std::string source) { source_ = std::move(source); }

  const CellAccumulator* Find(CellKey key) const;

 private:
  std::string source_;
  CellMap cells_;
  std::int64_t total_cycles_ = 0;
};

// Cell-wise sum of accumulators.
VoiceMap Merge(const VoiceMap& a, const VoiceMap& b);

struct DifferenceMap {
  Metric metric = Metric::kCpps;
  // mean_a - mean_b on keys where both maps have the metric.
  std::map<CellKey, double> deltas;
};

DifferenceMap Diff(const VoiceMap& a, const VoiceMap& b, Metric metric);

// |keys(a) n keys(b)|.
std::size_t OverlapArea(const VoiceMap& a, const VoiceMap& b);

enum class Weighting {
  kCell,   // each occupied cell is one observation
  kCycle,  // each cell weighted by its metric count
};

struct MapStats {
  Metric metric = Metric::kCpps;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  // Observations behind the statistics: cells, or cycles when weighted.
  std::int64_t n = 0;
  std::int64_t n_cells = 0;
  std::optional<double> diff_from_ref;
  std::optional<std::int64_t> overlap_cells;
};

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// mean +/- 1.96 std / sqrt(n) over cell means. When `reference` is given,
// diff_from_ref is the mean of (cell mean - reference cell mean) over the
// cells both maps share. Throws StatsError with fewer than 2 cells holding
// the metric.
MapStats ComputeStats(const VoiceMap& map, Metric metric,
                      const VoiceMap* reference = nullptr,
                      Weighting weighting = Weighting::kCell);

struct CoveragePoint {
  std::size_t utterances = 0;
  std::size_t cells = 0;
};

// Entry k counts the cells of Merge(maps[0..k]) holding at least
// min_cycles_per_cell cycles.
std::vector<CoveragePoint> CoverageCurve(std::span<const VoiceMap> maps,
                                         std::int64_t min_cycles_per_cell = 1);

}  // namespace voicemap

#endif  // VOICEMAP_VOICE_MAP_H_
