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

#include "voicemap/voice_map.h"

#include <algorithm>
#include <cmath>

namespace voicemap {
namespace {

constexpr double kCi95Z = 1.96;

std::size_t Index(Metric m) { return static_cast<std::size_t>(m); }

}  // namespace

std::string_view MetricName(Metric m) {
  switch (m) {
    case Metric::kF0:
      return "f0_hz";
    case Metric::kSpl:
      return "spl_db";
    case Metric::kCrest:
      return "crest";
    case Metric::kSb:
      return "sb_db";
    case Metric::kCpps:
      return "cpps_db";
  }
  return "";
}

std::optional<Metric> ParseMetric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (name == MetricName(m)) return m;
  }
  if (name == "f0") return Metric::kF0;
  if (name == "spl") return Metric::kSpl;
  if (name == "sb") return Metric::kSb;
  if (name == "cpps") return Metric::kCpps;
  return std::nullopt;
}

double SemitoneOf(double f0_hz) {
  if (!(f0_hz > 0.0)) {
    throw std::invalid_argument("SemitoneOf: f0 must be positive");
  }
  return 12.0 * std::log2(f0_hz / kSemitoneReferenceHz);
}

CellKey CellOf(double f0_hz, double spl_db) {
  return CellKey{static_cast<int>(std::floor(SemitoneOf(f0_hz))),
                 static_cast<int>(std::floor(spl_db))};
}

void CellAccumulator::Add(const CycleRecord& cycle) {
  ++n_cycles;
  auto add = [this](Metric m, double v) {
    sum[Index(m)] += v;
    ++count[Index(m)];
  };
  add(Metric::kF0, cycle.f0_hz);
  add(Metric::kSpl, cycle.spl_db);
  add(Metric::kCrest, cycle.crest);
  if (cycle.sb_db) add(Metric::kSb, *cycle.sb_db);
  if (cycle.cpps_db) add(Metric::kCpps, std::max(0.0, *cycle.cpps_db));
}

std::optional<double> CellAccumulator::Mean(Metric m) const {
  const std::int64_t c = count[Index(m)];
  if (c == 0) return std::nullopt;
  return sum[Index(m)] / static_cast<double>(c);
}

CellAccumulator& CellAccumulator::operator+=(const CellAccumulator& other) {
  n_cycles += other.n_cycles;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    sum[i] += other.sum[i];
    count[i] += other.count[i];
  }
  return *this;
}

VoiceMap VoiceMap::FromCycles(std::span<const CycleRecord> cycles,
                              std::string source) {
  VoiceMap map(std::move(source));
  for (const CycleRecord& c : cycles) map.Accumulate(c);
  return map;
}

void VoiceMap::Accumulate(const CycleRecord& cycle) {
  cells_[CellOf(cycle.f0_hz, cycle.spl_db)].Add(cycle);
  ++total_cycles_;
}

void VoiceMap::InsertCell(CellKey key, const CellAccumulator& acc) {
  if (acc.n_cycles < 1) {
    throw std::invalid_argument("cell must hold at least one cycle");
  }
  for (std::int64_t c : acc.count) {
    if (c < 0 || c > acc.n_cycles) {
      throw std::invalid_argument("metric count exceeds cell cycle count");
    }
  }
  auto [it, inserted] = cells_.try_emplace(key, acc);
  if (!inserted) it->second += acc;
  total_cycles_ += acc.n_cycles;
}

const CellAccumulator* VoiceMap::Find(CellKey key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

VoiceMap Merge(const VoiceMap& a, const VoiceMap& b) {
  VoiceMap out(a.source());
  for (const auto& [key, acc] : a.cells()) {
    const CellAccumulator* other = b.Find(key);
    if (other == nullptr) {
      out.InsertCell(key, acc);
    } else {
      CellAccumulator sum = acc;
      sum += *other;
      out.InsertCell(key, sum);
    }
  }
  for (const auto& [key, acc] : b.cells()) {
    if (a.Find(key) == nullptr) out.InsertCell(key, acc);
  }
  return out;
}

DifferenceMap Diff(const VoiceMap& a, const VoiceMap& b, Metric metric) {
  DifferenceMap diff;
  diff.metric = metric;
  for (const auto& [key, acc] : a.cells()) {
    const CellAccumulator* other = b.Find(key);
    if (other == nullptr) continue;
    const auto ma = acc.Mean(metric);
    const auto mb = other->Mean(metric);
    if (ma && mb) diff.deltas.emplace(key, *ma - *mb);
  }
  return diff;
}

std::size_t OverlapArea(const VoiceMap& a, const VoiceMap& b) {
  std::size_t n = 0;
  for (const auto& entry : a.cells()) {
    if (b.Find(entry.first) != nullptr) ++n;
  }
  return n;
}

MapStats ComputeStats(const VoiceMap& map, Metric metric,
                      const VoiceMap* reference, Weighting weighting) {
  struct Obs {
    double value;
    double weight;
  };
  std::vector<Obs> obs;
  for (const auto& [key, acc] : map.cells()) {
    if (auto mean = acc.Mean(metric)) {
      const double w = weighting == Weighting::kCell
                           ? 1.0
                           : static_cast<double>(acc.count[Index(metric)]);
      obs.push_back({*mean, w});
    }
  }
  if (obs.size() < 2) {
    throw StatsError("need at least 2 cells with " +
                     std::string(MetricName(metric)) + ", have " +
                     std::to_string(obs.size()));
  }

  double total_w = 0.0;
  double weighted_sum = 0.0;
  for (const Obs& o : obs) {
    total_w += o.weight;
    weighted_sum += o.weight * o.value;
  }
  const double mean = weighted_sum / total_w;
  double ss = 0.0;
  for (const Obs& o : obs) ss += o.weight * (o.value - mean) * (o.value - mean);

  MapStats s;
  s.metric = metric;
  s.mean = mean;
  s.n = static_cast<std::int64_t>(std::llround(total_w));
  s.n_cells = static_cast<std::int64_t>(obs.size());
  s.std = std::sqrt(ss / (total_w - 1.0));
  const double half = kCi95Z * s.std / std::sqrt(total_w);
  s.ci95_low = mean - half;
  s.ci95_high = mean + half;

  if (reference != nullptr) {
    s.overlap_cells = static_cast<std::int64_t>(OverlapArea(map, *reference));
    const DifferenceMap diff = Diff(map, *reference, metric);
    if (!diff.deltas.empty()) {
      double dsum = 0.0;
      double dw = 0.0;
      for (const auto& [key, delta] : diff.deltas) {
        const double w =
            weighting == Weighting::kCell
                ? 1.0
                : static_cast<double>(map.Find(key)->count[Index(metric)]);
        dsum += w * delta;
        dw += w;
      }
      s.diff_from_ref = dsum / dw;
    }
  }
  return s;
}

std::vector<CoveragePoint> CoverageCurve(std::span<const VoiceMap> maps,
                                         std::int64_t min_cycles_per_cell) {
  min_cycles_per_cell = std::max<std::int64_t>(1, min_cycles_per_cell);
  std::vector<CoveragePoint> curve;
  std::map<CellKey, std::int64_t> cycles;
  std::size_t occupied = 0;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    for (const auto& [key, acc] : maps[k].cells()) {
      std::int64_t& n = cycles[key];
      const bool was = n >= min_cycles_per_cell;
      n += acc.n_cycles;
      if (!was && n >= min_cycles_per_cell) ++occupied;
    }
    curve.push_back({k + 1, occupied});
  }
  return curve;
}

}  // namespace voicemap
