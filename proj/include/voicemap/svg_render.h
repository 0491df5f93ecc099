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

#ifndef VOICEMAP_SVG_RENDER_H_
#define VOICEMAP_SVG_RENDER_H_

#include <cstdint>
#include <string>

#include "voicemap/run_config.h"
#include "voicemap/voice_map.h"

namespace voicemap {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  std::string Hex() const;
  bool operator==(const Rgb&) const = default;
};

// Sequential cold-to-warm scale; t is clamped to [0, 1].
Rgb MapColor(double t);
// Green for positive, red for negative, white at zero; saturation grows
// linearly with |delta| up to `cap`.
Rgb DiffColor(double delta, double cap);

struct RenderOptions {
  RenderWindow window;
  ColorScale scale;     // map mode
  double diff_cap = 5.0;  // difference mode
  std::string title;
};

// One <rect class="cell"> per cell inside the window, axes in semitones
// re 55 Hz and dB, and a labeled color bar. Output depends only on the
// arguments.
std::string RenderMapSvg(const VoiceMap& map, Metric metric,
                         const RenderOptions& opts);
std::string RenderDiffSvg(const DifferenceMap& diff,
                          const RenderOptions& opts);

}  // namespace voicemap

#endif  // VOICEMAP_SVG_RENDER_H_
