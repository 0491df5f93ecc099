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

#include "voicemap/svg_render.h"

#include <gtest/gtest.h>

#include <regex>
#include <string>
#include <vector>

namespace voicemap {
namespace {

std::size_t Count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

struct CellRect {
  double x, y, w, h;
  std::string fill;
};

std::vector<CellRect> CellRects(const std::string& svg) {
  static const std::regex re(
      "<rect class=\"cell\" x=\"([-0-9.]+)\" y=\"([-0-9.]+)\" "
      "width=\"([0-9.]+)\" height=\"([0-9.]+)\" fill=\"#([0-9a-f]{6})\"");
  std::vector<CellRect> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re);
       it != std::sregex_iterator(); ++it) {
    out.push_back({std::stod((*it)[1]), std::stod((*it)[2]),
                   std::stod((*it)[3]), std::stod((*it)[4]), (*it)[5]});
  }
  return out;
}

VoiceMap SingleCell(CellKey key, double cpps) {
  VoiceMap m;
  CellAccumulator acc;
  acc.n_cycles = 1;
  acc.sum[static_cast<std::size_t>(Metric::kCpps)] = cpps;
  acc.count[static_cast<std::size_t>(Metric::kCpps)] = 1;
  m.InsertCell(key, acc);
  return m;
}

RenderOptions CppsOptions() {
  RenderOptions opts;
  opts.scale = {0.0, 15.0};
  return opts;
}

TEST(RenderMapTest, EmptyMapHasAxesAndColorBar) {
  const std::string svg = RenderMapSvg(VoiceMap(), Metric::kCpps, CppsOptions());
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(Count(svg, "class=\"cell\""), 0u);
  EXPECT_EQ(Count(svg, "class=\"cbar\""), 64u);
  EXPECT_NE(svg.find("f0 (semitones re 55 Hz)"), std::string::npos);
  EXPECT_NE(svg.find("SPL (dB)"), std::string::npos);
  EXPECT_NE(svg.find(">cpps_db<"), std::string::npos);
  EXPECT_NE(svg.find(">15<"), std::string::npos);
}

TEST(RenderMapTest, SingleCellPosition) {
  const RenderOptions opts = CppsOptions();
  const std::string svg = RenderMapSvg(SingleCell({12, 70}, 7.5), Metric::kCpps,
                                       opts);
  const auto rects = CellRects(svg);
  ASSERT_EQ(rects.size(), 1u);
  // Plot origin at (64, 40); 14 px per semitone, 6 px per dB, dB grows up.
  EXPECT_DOUBLE_EQ(rects[0].x, 64.0 + 12 * 14.0);
  EXPECT_DOUBLE_EQ(rects[0].y, 40.0 + (100 - 71) * 6.0);
  EXPECT_DOUBLE_EQ(rects[0].w, 14.0);
  EXPECT_DOUBLE_EQ(rects[0].h, 6.0);
  EXPECT_EQ(rects[0].fill, MapColor(0.5).Hex());
}

TEST(RenderMapTest, WindowClipsCells) {
  VoiceMap m = SingleCell({12, 70}, 5.0);
  m.InsertCell({-3, 70}, SingleCell({0, 0}, 1.0).cells().begin()->second);
  m.InsertCell({12, 100}, SingleCell({0, 0}, 1.0).cells().begin()->second);
  const std::string svg = RenderMapSvg(m, Metric::kCpps, CppsOptions());
  EXPECT_EQ(CellRects(svg).size(), 1u);
}

TEST(RenderMapTest, CellsWithoutMetricAreSkipped) {
  VoiceMap m = SingleCell({12, 70}, 5.0);
  CellAccumulator no_cpps;
  no_cpps.n_cycles = 2;
  m.InsertCell({13, 70}, no_cpps);
  EXPECT_EQ(CellRects(RenderMapSvg(m, Metric::kCpps, CppsOptions())).size(),
            1u);
}

TEST(RenderMapTest, Deterministic) {
  const VoiceMap m = SingleCell({5, 60}, 3.0);
  EXPECT_EQ(RenderMapSvg(m, Metric::kCpps, CppsOptions()),
            RenderMapSvg(m, Metric::kCpps, CppsOptions()));
}

TEST(ColorTest, MapScaleEndpointsAndClamp) {
  EXPECT_EQ(MapColor(0.0), MapColor(-3.0));
  EXPECT_EQ(MapColor(1.0), MapColor(7.0));
  EXPECT_NE(MapColor(0.0), MapColor(1.0));
  // Cold end is blue-dominant, warm end red-dominant.
  EXPECT_GT(MapColor(0.0).b, MapColor(0.0).r);
  EXPECT_GT(MapColor(1.0).r, MapColor(1.0).b);
}

TEST(ColorTest, DiffSignAndSaturation) {
  EXPECT_EQ(DiffColor(0.0, 5.0), (Rgb{255, 255, 255}));
  const Rgb pos = DiffColor(3.0, 5.0);
  const Rgb neg = DiffColor(-1.0, 5.0);
  EXPECT_GT(pos.g, pos.r);
  EXPECT_GT(neg.r, neg.g);
  EXPECT_EQ(DiffColor(10.0, 5.0), DiffColor(5.0, 5.0));
  EXPECT_EQ(DiffColor(5.0, 5.0), (Rgb{0, 160, 0}));
  EXPECT_EQ(DiffColor(-5.0, 5.0), (Rgb{210, 0, 0}));
}

// Saturation as distance from white.
int Saturation(const std::string& hex) {
  const int r = std::stoi(hex.substr(0, 2), nullptr, 16);
  const int g = std::stoi(hex.substr(2, 2), nullptr, 16);
  const int b = std::stoi(hex.substr(4, 2), nullptr, 16);
  return (255 - r) + (255 - g) + (255 - b);
}

TEST(RenderDiffTest, GreenPositiveRedNegative) {
  DifferenceMap d;
  d.metric = Metric::kCpps;
  d.deltas[{12, 70}] = 3.0;
  d.deltas[{13, 71}] = -1.0;
  RenderOptions opts;
  opts.diff_cap = 5.0;
  const std::string svg = RenderDiffSvg(d, opts);
  const auto rects = CellRects(svg);
  ASSERT_EQ(rects.size(), 2u);
  const std::string green = rects[0].fill;
  const std::string red = rects[1].fill;
  EXPECT_EQ(green, DiffColor(3.0, 5.0).Hex());
  EXPECT_EQ(red, DiffColor(-1.0, 5.0).Hex());
  EXPECT_GT(Saturation(green), Saturation(red));
  EXPECT_NE(svg.find("delta cpps_db"), std::string::npos);
  EXPECT_NE(svg.find(">-5<"), std::string::npos);
}

TEST(RenderTest, TitleIsEscaped) {
  RenderOptions opts = CppsOptions();
  opts.title = "A & B <raw>";
  const std::string svg = RenderMapSvg(VoiceMap(), Metric::kCpps, opts);
  EXPECT_NE(svg.find("A &amp; B &lt;raw&gt;"), std::string::npos);
}

}  // namespace
}  // namespace voicemap
