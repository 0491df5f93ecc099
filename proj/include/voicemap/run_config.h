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

#ifndef VOICEMAP_RUN_CONFIG_H_
#define VOICEMAP_RUN_CONFIG_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voicemap/cycle_detector.h"
#include "voicemap/frame_metrics.h"
#include "voicemap/voice_map.h"

namespace voicemap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cells drawn by the renderer: st in [st_min, st_max), spl in
// [spl_min, spl_max).
struct RenderWindow {
  int st_min = 0;
  int st_max = 36;
  int spl_min = 40;
  int spl_max = 100;
};

struct ColorScale {
  double lo = 0.0;
  double hi = 1.0;
};

struct RunConfig {
  VoicingConfig voicing;
  FrameConfig frames;
  std::int64_t min_cycles_per_cell = 1;
  Weighting weighting = Weighting::kCell;
  RenderWindow window;
  std::array<ColorScale, kMetricCount> scales = {{
      {55.0, 880.0},  // f0_hz
      {40.0, 100.0},  // spl_db
      {1.0, 4.0},     // crest
      {-40.0, 0.0},   // sb_db
      {0.0, 15.0},    // cpps_db
  }};
  // Difference maps saturate at +/- diff_cap.
  double diff_cap = 5.0;

  const ColorScale& scale(Metric m) const {
    return scales[static_cast<std::size_t>(m)];
  }

  // Sets one key. Throws ConfigError for unknown keys or unparsable values.
  void Set(std::string_view key, std::string_view value);
  // Applies "key=value" (the form used by --set).
  void SetAssignment(std::string_view assignment);
  // Reads a key=value file; '#' starts a comment, blank lines are ignored.
  void LoadFile(const std::filesystem::path& path);
  // Throws ConfigError if any field is outside the range its module accepts.
  void Validate() const;
  // Every key as "key=value", in a fixed order.
  std::vector<std::string> Describe() const;
};

// Names accepted by RunConfig::Set, in Describe() order.
std::vector<std::string> RunConfigKeys();

}  // namespace voicemap

#endif  // VOICEMAP_RUN_CONFIG_H_
