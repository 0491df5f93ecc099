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

#include "voicemap/analysis.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "voicemap/resampler.h"
#include "voicemap/wav_reader.h"

namespace voicemap {

FileAnalysis AnalyzeBuffer(const AudioBuffer& buf, const RunConfig& cfg) {
  const AudioBuffer canonical = ResampleTo44100(buf);
  FileAnalysis result;
  result.source_id = buf.source_id;
  result.frames = ComputeFrameMetrics(canonical, cfg.frames);
  result.cycles =
      AttachFramesToCycles(DetectCycles(canonical, cfg.voicing), result.frames,
                           cfg.frames.frame_len_s, canonical.sample_rate);
  result.map = VoiceMap::FromCycles(result.cycles, buf.source_id);
  return result;
}

FileAnalysis AnalyzeFile(const std::filesystem::path& path,
                         const RunConfig& cfg) {
  return AnalyzeBuffer(LoadWav(path), cfg);
}

std::vector<FileAnalysis> AnalyzeFiles(
    const std::vector<std::filesystem::path>& paths, const RunConfig& cfg,
    unsigned jobs) {
  std::vector<FileAnalysis> results(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      try {
        results[i] = AnalyzeFile(paths[i], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(paths.size())));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

VoiceMap FilterMinCycles(const VoiceMap& map, std::int64_t min_cycles) {
  VoiceMap out(map.source());
  for (const auto& [key, acc] : map.cells()) {
    if (acc.n_cycles >= min_cycles) out.InsertCell(key, acc);
  }
  return out;
}

}  // namespace voicemap
