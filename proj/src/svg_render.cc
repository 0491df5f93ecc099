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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace voicemap {
namespace {

constexpr double kPxPerSemitone = 14.0;
constexpr double kPxPerDb = 6.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 52.0;
constexpr double kColorBarGap = 24.0;
constexpr double kColorBarWidth = 16.0;
constexpr double kMarginRight = 96.0;
constexpr int kColorBarSteps = 64;

const Rgb kDiffPositive{0, 160, 0};
const Rgb kDiffNegative{210, 0, 0};

struct Stop {
  double t;
  Rgb c;
};

constexpr std::array<Stop, 5> kMapStops = {{
    {0.00, {44, 62, 158}},
    {0.25, {44, 167, 214}},
    {0.50, {95, 191, 95}},
    {0.75, {242, 193, 46}},
    {1.00, {215, 48, 31}},
}};

std::uint8_t Lerp8(std::uint8_t a, std::uint8_t b, double t) {
  return static_cast<std::uint8_t>(std::lround(a + (b - a) * t));
}

Rgb Lerp(Rgb a, Rgb b, double t) {
  return {Lerp8(a.r, b.r, t), Lerp8(a.g, b.g, t), Lerp8(a.b, b.b, t)};
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  explicit Canvas(const RenderWindow& w)
      : w_(w),
        plot_w_((w.st_max - w.st_min) * kPxPerSemitone),
        plot_h_((w.spl_max - w.spl_min) * kPxPerDb) {}

  double width() const { return kMarginLeft + plot_w_ + kMarginRight; }
  double height() const { return kMarginTop + plot_h_ + kMarginBottom; }
  double plot_right() const { return kMarginLeft + plot_w_; }
  double plot_bottom() const { return kMarginTop + plot_h_; }
  double plot_h() const { return plot_h_; }

  bool Contains(CellKey k) const {
    return k.st_bin >= w_.st_min && k.st_bin < w_.st_max &&
           k.spl_bin >= w_.spl_min && k.spl_bin < w_.spl_max;
  }
  double X(double st) const { return kMarginLeft + (st - w_.st_min) * kPxPerSemitone; }
  double Y(double spl) const { return kMarginTop + (w_.spl_max - spl) * kPxPerDb; }

  void Header(std::ostream& os, const std::string& title) const {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Num(width())
       << "\" height=\"" << Num(height()) << "\" viewBox=\"0 0 "
       << Num(width()) << ' ' << Num(height()) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << Num(width()) << "\" height=\""
       << Num(height()) << "\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) {
      os << "<text x=\"" << Num(kMarginLeft) << "\" y=\"24\" "
         << "font-family=\"sans-serif\" font-size=\"14\">" << Escape(title)
         << "</text>\n";
    }
  }

  void Cell(std::ostream& os, CellKey k, Rgb fill, double value) const {
    os << "<rect class=\"cell\" x=\"" << Num(X(k.st_bin)) << "\" y=\""
       << Num(Y(k.spl_bin + 1)) << "\" width=\"" << Num(kPxPerSemitone)
       << "\" height=\"" << Num(kPxPerDb) << "\" fill=\"#" << fill.Hex()
       << "\" data-st=\"" << k.st_bin << "\" data-spl=\"" << k.spl_bin
       << "\" data-value=\"" << Label(value) << "\"/>\n";
  }

  void Axes(std::ostream& os) const {
    os << "<g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\" "
          "fill=\"none\">\n";
    os << "<rect x=\"" << Num(kMarginLeft) << "\" y=\"" << Num(kMarginTop)
       << "\" width=\"" << Num(plot_w_) << "\" height=\"" << Num(plot_h_)
       << "\"/>\n";
    for (int st = w_.st_min; st <= w_.st_max; ++st) {
      if (st % 6 != 0) continue;
      os << "<line x1=\"" << Num(X(st)) << "\" y1=\"" << Num(plot_bottom())
         << "\" x2=\"" << Num(X(st)) << "\" y2=\"" << Num(plot_bottom() + 5)
         << "\"/>\n";
    }
    for (int spl = w_.spl_min; spl <= w_.spl_max; ++spl) {
      if (spl % 10 != 0) continue;
      os << "<line x1=\"" << Num(kMarginLeft - 5) << "\" y1=\"" << Num(Y(spl))
         << "\" x2=\"" << Num(kMarginLeft) << "\" y2=\"" << Num(Y(spl))
         << "\"/>\n";
    }
    os << "</g>\n";
    os << "<g class=\"tick-labels\" font-family=\"sans-serif\" "
          "font-size=\"10\" fill=\"#000000\">\n";
    for (int st = w_.st_min; st <= w_.st_max; ++st) {
      if (st % 6 != 0) continue;
      os << "<text x=\"" << Num(X(st)) << "\" y=\"" << Num(plot_bottom() + 17)
         << "\" text-anchor=\"middle\">" << st << "</text>\n";
    }
    for (int spl = w_.spl_min; spl <= w_.spl_max; ++spl) {
      if (spl % 10 != 0) continue;
      os << "<text x=\"" << Num(kMarginLeft - 8) << "\" y=\""
         << Num(Y(spl) + 3) << "\" text-anchor=\"end\">" << spl
         << "</text>\n";
    }
    os << "</g>\n";
    os << "<text class=\"axis-label\" x=\""
       << Num(kMarginLeft + plot_w_ / 2.0) << "\" y=\""
       << Num(plot_bottom() + 40)
       << "\" font-family=\"sans-serif\" font-size=\"12\" "
          "text-anchor=\"middle\">f0 (semitones re 55 Hz)</text>\n";
    const double cy = kMarginTop + plot_h_ / 2.0;
    os << "<text class=\"axis-label\" x=\"18\" y=\"" << Num(cy)
       << "\" font-family=\"sans-serif\" font-size=\"12\" "
          "text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << Num(cy) << ")\">SPL (dB)</text>\n";
  }

  // Vertical bar from lo (bottom) to hi (top).
  void ColorBar(std::ostream& os, double lo, double hi,
                const std::function<Rgb(double)>& color_of,
                const std::string& label) const {
    const double x = plot_right() + kColorBarGap;
    const double step_h = plot_h_ / kColorBarSteps;
    os << "<g class=\"colorbar\">\n";
    for (int i = 0; i < kColorBarSteps; ++i) {
      const double v = lo + (hi - lo) * (i + 0.5) / kColorBarSteps;
      const double y = plot_bottom() - (i + 1) * step_h;
      os << "<rect class=\"cbar\" x=\"" << Num(x) << "\" y=\"" << Num(y)
         << "\" width=\"" << Num(kColorBarWidth) << "\" height=\""
         << Num(step_h) << "\" fill=\"#" << color_of(v).Hex() << "\"/>\n";
    }
    os << "<rect x=\"" << Num(x) << "\" y=\"" << Num(kMarginTop)
       << "\" width=\"" << Num(kColorBarWidth) << "\" height=\""
       << Num(plot_h_) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    const std::array<double, 3> marks = {lo, (lo + hi) / 2.0, hi};
    for (std::size_t i = 0; i < marks.size(); ++i) {
      const double y = plot_bottom() - plot_h_ * i / 2.0;
      os << "<text x=\"" << Num(x + kColorBarWidth + 4) << "\" y=\""
         << Num(y + 3)
         << "\" font-family=\"sans-serif\" font-size=\"10\">"
         << Label(marks[i]) << "</text>\n";
    }
    os << "<text x=\"" << Num(x) << "\" y=\"" << Num(kMarginTop - 8)
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << Escape(label)
       << "</text>\n";
    os << "</g>\n";
  }

 private:
  RenderWindow w_;
  double plot_w_;
  double plot_h_;
};

}  // namespace

std::string Rgb::Hex() const {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02x%02x%02x", r, g, b);
  return buf;
}

Rgb MapColor(double t) {
  t = std::clamp(t, 0.0, 1.0);
  for (std::size_t i = 1; i < kMapStops.size(); ++i) {
    if (t <= kMapStops[i].t) {
      const Stop& a = kMapStops[i - 1];
      const Stop& b = kMapStops[i];
      return Lerp(a.c, b.c, (t - a.t) / (b.t - a.t));
    }
  }
  return kMapStops.back().c;
}

Rgb DiffColor(double delta, double cap) {
  const double s = std::min(std::abs(delta) / cap, 1.0);
  const Rgb white{255, 255, 255};
  return Lerp(white, delta >= 0.0 ? kDiffPositive : kDiffNegative, s);
}

std::string RenderMapSvg(const VoiceMap& map, Metric metric,
                         const RenderOptions& opts) {
  const Canvas canvas(opts.window);
  const double lo = opts.scale.lo;
  const double hi = opts.scale.hi;
  auto color_of = [lo, hi](double v) { return MapColor((v - lo) / (hi - lo)); };
  std::ostringstream os;
  canvas.Header(os, opts.title);
  os << "<g class=\"cells\">\n";
  for (const auto& [key, acc] : map.cells()) {
    const auto mean = acc.Mean(metric);
    if (!mean || !canvas.Contains(key)) continue;
    canvas.Cell(os, key, color_of(*mean), *mean);
  }
  os << "</g>\n";
  canvas.Axes(os);
  canvas.ColorBar(os, lo, hi, color_of, std::string(MetricName(metric)));
  os << "</svg>\n";
  return os.str();
}

std::string RenderDiffSvg(const DifferenceMap& diff,
                          const RenderOptions& opts) {
  const Canvas canvas(opts.window);
  const double cap = opts.diff_cap;
  auto color_of = [cap](double v) { return DiffColor(v, cap); };
  std::ostringstream os;
  canvas.Header(os, opts.title);
  os << "<g class=\"cells\">\n";
  for (const auto& [key, delta] : diff.deltas) {
    if (!canvas.Contains(key)) continue;
    canvas.Cell(os, key, color_of(delta), delta);
  }
  os << "</g>\n";
  canvas.Axes(os);
  canvas.ColorBar(os, -cap, cap, color_of,
                  "delta " + std::string(MetricName(diff.metric)));
  os << "</svg>\n";
  return os.str();
}

}  // namespace voicemap
