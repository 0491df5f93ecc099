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

#ifndef VOICEMAP_ANALYSIS_H_
#define VOICEMAP_ANALYSIS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "voicemap/audio_buffer.h"
#include "voicemap/cycle_detector.h"
#include "voicemap/frame_metrics.h"
#include "voicemap/run_config.h"
#include "voicemap/voice_map.h"

namespace voicemap {

struct FileAnalysis {
  std::string source_id;
  std::vector<CycleRecord> cycles;
  std::vector<MetricFrame> frames;
  VoiceMap map;
};

// resample -> cycles -> frame metrics -> attach -> map.
FileAnalysis AnalyzeBuffer(const AudioBuffer& buf, const RunConfig& cfg);

FileAnalysis AnalyzeFile(const std::filesystem::path& path,
                         const RunConfig& cfg);

// Analyzes `paths` on up to `jobs` threads. Results come back in the order
// of `paths`. If any file fails, the exception for the earliest failing
// path is rethrown after all workers finish.
std::vector<FileAnalysis> AnalyzeFiles(
    const std::vector<std::filesystem::path>& paths, const RunConfig& cfg,
    unsigned jobs);

// Drops cells holding fewer than `min_cycles` cycles.
VoiceMap FilterMinCycles(const VoiceMap& map, std::int64_t min_cycles);

}  // namespace voicemap

#endif  // VOICEMAP_ANALYSIS_H_
