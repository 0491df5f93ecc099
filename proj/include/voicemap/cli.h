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

#ifndef VOICEMAP_CLI_H_
#define VOICEMAP_CLI_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "voicemap/voice_map.h"

namespace voicemap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEmptyResult = 3;

// Entry point of the `voicemap` tool. Subcommands: analyze, compare,
// coverage, render, stats. Returns the process exit status.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

// One table row; `stats` is empty when the metric has fewer than two
// cells.
struct StatsRow {
  Metric metric = Metric::kCpps;
  std::optional<MapStats> stats;
};

// Plain-text table with columns Metric | Mean ± Std.dev. | CI Range (95%)
// and, when `with_reference`, Diff from Raw and Overlap. Columns are padded
// by display width, so the ± sign counts as one character.
std::string FormatStatsTable(std::span<const StatsRow> rows,
                             bool with_reference);
std::string FormatStatsCsv(std::span<const StatsRow> rows,
                           bool with_reference);

}  // namespace voicemap

#endif  // VOICEMAP_CLI_H_
