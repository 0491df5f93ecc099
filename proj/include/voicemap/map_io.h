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

#ifndef VOICEMAP_MAP_IO_H_
#define VOICEMAP_MAP_IO_H_

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "voicemap/cycle_detector.h"
#include "voicemap/frame_metrics.h"
#include "voicemap/voice_map.h"

namespace voicemap {

inline constexpr const char* kMapCsvHeader =
    "st_bin,spl_bin,n_cycles,f0_hz,spl_db,crest,sb_db,cpps_db,n_sb,n_cpps";
inline constexpr const char* kDiffCsvHeader = "st_bin,spl_bin,delta";
inline constexpr const char* kCyclesCsvHeader =
    "start_sample,length_samples,f0_hz,spl_db,crest,cpps_db,sb_db";
inline constexpr const char* kFramesCsvHeader = "center_s,sb_db,cpps_db";

// A CSV that does not parse. line() is the 1-based line number in the
// input, counting comment lines.
class MapParseError : public std::runtime_error {
 public:
  MapParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// printf("%.6g") with "-0" normalized to "0".
std::string FormatSig6(double v);

// `metadata` lines are written first, each prefixed with "# ". Rows are
// sorted by (st_bin, spl_bin); empty fields where a metric has no values.
void WriteVoiceMapCsv(std::ostream& out, const VoiceMap& map,
                      std::span<const std::string> metadata = {});
// Lines starting with '#' and blank lines are skipped. Sums are rebuilt as
// mean * count.
VoiceMap ReadVoiceMapCsv(std::istream& in, std::string source = {});

// A "# metric=<name>" line precedes the header.
void WriteDifferenceCsv(std::ostream& out, const DifferenceMap& diff,
                        std::span<const std::string> metadata = {});
// The metric is taken from a "# metric=<name>" comment when present.
DifferenceMap ReadDifferenceCsv(std::istream& in);

void WriteCyclesCsv(std::ostream& out, std::span<const CycleRecord> cycles);
void WriteFramesCsv(std::ostream& out, std::span<const MetricFrame> frames);

// Returns true if the first non-comment line of the file is the
// difference-map header.
bool LooksLikeDifferenceCsv(std::istream& in);

}  // namespace voicemap

#endif  // VOICEMAP_MAP_IO_H_
