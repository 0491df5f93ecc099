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

#include "voicemap/run_config.h"

#include <charconv>
#include <fstream>
#include <variant>

#include "voicemap/map_io.h"

namespace voicemap {
namespace {

using FieldRef = std::variant<double*, int*, std::int64_t*, Weighting*>;

struct Field {
  std::string name;
  FieldRef ref;
};

std::vector<Field> Fields(RunConfig& c) {
  std::vector<Field> f = {
      {"spl_offset_db", &c.voicing.spl_offset_db},
      {"f0_min_hz", &c.voicing.f0_min_hz},
      {"f0_max_hz", &c.voicing.f0_max_hz},
      {"max_jump", &c.voicing.max_jump},
      {"min_run", &c.voicing.min_run},
      {"integrator_alpha", &c.voicing.integrator_alpha},
      {"mean_window_s", &c.voicing.mean_window_s},
      {"frame_len_s", &c.frames.frame_len_s},
      {"hop_s", &c.frames.hop_s},
      {"fft_size", &c.frames.fft_size},
      {"cepstrum_bins", &c.frames.cepstrum_bins},
      {"cpps_smooth_cutoff_hz", &c.frames.cpps_smooth_cutoff_hz},
      {"cpps_quefrency_avg_bins", &c.frames.cpps_quefrency_avg_bins},
      {"cpps_f0_min_hz", &c.frames.cpps_f0_min_hz},
      {"cpps_f0_max_hz", &c.frames.cpps_f0_max_hz},
      {"sb_low_edge_hz", &c.frames.sb_low_edge_hz},
      {"sb_high_edge_hz", &c.frames.sb_high_edge_hz},
      {"sb_smooth_cutoff_hz", &c.frames.sb_smooth_cutoff_hz},
      {"min_cycles_per_cell", &c.min_cycles_per_cell},
      {"weighting", &c.weighting},
      {"render_st_min", &c.window.st_min},
      {"render_st_max", &c.window.st_max},
      {"render_spl_min", &c.window.spl_min},
      {"render_spl_max", &c.window.spl_max},
  };
  for (Metric m : kAllMetrics) {
    ColorScale& s = c.scales[static_cast<std::size_t>(m)];
    const std::string base = "scale_" + std::string(MetricName(m));
    f.push_back({base + "_min", &s.lo});
    f.push_back({base + "_max", &s.hi});
  }
  f.push_back({"diff_cap", &c.diff_cap});
  return f;
}

std::string_view Trim(std::string_view s) {
  const auto ws = [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n';
  };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
T ParseValue(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" +
                      std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<std::string> RunConfigKeys() {
  RunConfig scratch;
  std::vector<std::string> keys;
  for (const Field& f : Fields(scratch)) keys.push_back(f.name);
  return keys;
}

void RunConfig::Set(std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  for (const Field& f : Fields(*this)) {
    if (f.name != key) continue;
    std::visit(
        [&](auto* target) {
          using T = std::remove_pointer_t<decltype(target)>;
          if constexpr (std::is_same_v<T, Weighting>) {
            if (value == "cell") {
              *target = Weighting::kCell;
            } else if (value == "cycle") {
              *target = Weighting::kCycle;
            } else {
              throw ConfigError("weighting must be 'cell' or 'cycle'");
            }
          } else {
            *target = ParseValue<T>(key, value);
          }
        },
        f.ref);
    return;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::SetAssignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) +
                      "'");
  }
  Set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    try {
      SetAssignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

void RunConfig::Validate() const {
  try {
    voicing.Validate();
    frames.Validate(kAnalysisSampleRate);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (min_cycles_per_cell < 1) {
    throw ConfigError("min_cycles_per_cell must be at least 1");
  }
  if (window.st_max <= window.st_min || window.spl_max <= window.spl_min) {
    throw ConfigError("render window must have positive extent");
  }
  for (Metric m : kAllMetrics) {
    if (!(scale(m).hi > scale(m).lo)) {
      throw ConfigError("color scale for " + std::string(MetricName(m)) +
                        " must have max > min");
    }
  }
  if (!(diff_cap > 0.0)) throw ConfigError("diff_cap must be positive");
}

std::vector<std::string> RunConfig::Describe() const {
  RunConfig copy = *this;
  std::vector<std::string> out;
  for (const Field& f : Fields(copy)) {
    std::string value = std::visit(
        [](auto* target) -> std::string {
          using T = std::remove_pointer_t<decltype(target)>;
          if constexpr (std::is_same_v<T, Weighting>) {
            return *target == Weighting::kCell ? "cell" : "cycle";
          } else if constexpr (std::is_same_v<T, double>) {
            return FormatSig6(*target);
          } else {
            return std::to_string(*target);
          }
        },
        f.ref);
    out.push_back(f.name + "=" + value);
  }
  return out;
}

}  // namespace voicemap
