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

#include "voicemap/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "voicemap/analysis.h"
#include "voicemap/map_io.h"
#include "voicemap/run_config.h"
#include "voicemap/svg_render.h"
#include "voicemap/wav_reader.h"

namespace voicemap {
namespace {

namespace fs = std::filesystem;

// Thrown inside a command; carries the exit status.
class CommandError : public std::runtime_error {
 public:
  CommandError(int status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

CommandError InputError(const std::string& what) {
  return CommandError(kExitInputError, what);
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> assignments;
  std::string weighting;
  std::optional<std::int64_t> min_cycles;
};

void AddCommonOptions(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file");
  cmd->add_option("--set", opts.assignments,
                  "override one config key (key=value); repeatable");
}

void AddWeightingOption(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--weighting", opts.weighting,
                  "statistics observations: cell or cycle")
      ->check(CLI::IsMember({"cell", "cycle"}));
}

void AddMinCyclesOption(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--min-cycles", opts.min_cycles,
                  "ignore cells with fewer cycles");
}

RunConfig BuildConfig(const CommonOptions& opts) {
  RunConfig cfg;
  try {
    if (!opts.config_path.empty()) cfg.LoadFile(opts.config_path);
    for (const std::string& a : opts.assignments) cfg.SetAssignment(a);
    if (!opts.weighting.empty()) cfg.Set("weighting", opts.weighting);
    if (opts.min_cycles) cfg.min_cycles_per_cell = *opts.min_cycles;
    cfg.Validate();
  } catch (const ConfigError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return cfg;
}

Metric RequireMetric(const std::string& name) {
  const auto m = ParseMetric(name);
  if (!m) throw InputError("unknown metric '" + name + "'");
  return *m;
}

std::vector<Metric> SelectMetrics(const std::string& name) {
  if (name.empty() || name == "all") {
    return {kAllMetrics.begin(), kAllMetrics.end()};
  }
  return {RequireMetric(name)};
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  return in;
}

VoiceMap ReadMapFile(const std::string& path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadVoiceMapCsv(in, fs::path(path).stem().string());
  } catch (const MapParseError& e) {
    throw InputError(path + ": row " + std::to_string(e.line()) + ": " +
                     e.what());
  }
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw InputError(path.string() + ": cannot write");
}

// "dir/cycles.csv" + "a" -> "dir/cycles.a.csv".
fs::path WithSourceSuffix(const fs::path& path, const std::string& id) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + "." + id +
                       path.extension().string());
  return out;
}

std::string Fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string Signed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%+.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "+0.00";
  return s;
}

std::string_view DisplayName(Metric m) {
  switch (m) {
    case Metric::kF0:
      return "f0 (Hz)";
    case Metric::kSpl:
      return "SPL (dB)";
    case Metric::kCrest:
      return "Crest";
    case Metric::kSb:
      return "SB (dB)";
    case Metric::kCpps:
      return "CPPs (dB)";
  }
  return "?";
}

// Code points, not bytes.
std::size_t DisplayWidth(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::vector<StatsRow> CollectStats(const VoiceMap& map,
                                   std::span<const Metric> metrics,
                                   const VoiceMap* reference,
                                   Weighting weighting) {
  std::vector<StatsRow> rows;
  for (Metric m : metrics) {
    StatsRow row{m, std::nullopt};
    try {
      row.stats = ComputeStats(map, m, reference, weighting);
    } catch (const StatsError&) {
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> ConfigMetadata(const RunConfig& cfg,
                                        const std::string& command) {
  std::vector<std::string> meta = {"voicemap " + command};
  for (const std::string& kv : cfg.Describe()) meta.push_back("config " + kv);
  return meta;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  CommonOptions common;
  std::vector<std::string> inputs;
  std::string out;
  std::string dump_cycles;
  std::string dump_frames;
  std::string per_file_dir;
  unsigned jobs = 0;
};

int RunAnalyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = BuildConfig(args.common);
  std::vector<fs::path> paths(args.inputs.begin(), args.inputs.end());
  std::sort(paths.begin(), paths.end());

  unsigned jobs = args.jobs;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<FileAnalysis> results;
  try {
    results = AnalyzeFiles(paths, cfg, jobs);
  } catch (const WavError& e) {
    throw InputError(e.what());
  }

  VoiceMap merged;
  std::vector<std::string> meta = ConfigMetadata(cfg, "analyze");
  for (const FileAnalysis& r : results) {
    merged = Merge(merged, r.map);
    meta.push_back("source " + r.source_id + " cycles=" +
                   std::to_string(r.cycles.size()));
  }
  if (merged.total_cycles() == 0) {
    err << "voicemap: no voiced content\n";
    return kExitEmptyResult;
  }

  std::ostringstream csv;
  WriteVoiceMapCsv(csv, merged, meta);
  WriteTextFile(args.out, csv.str());

  const bool many = results.size() > 1;
  for (const FileAnalysis& r : results) {
    if (!args.dump_cycles.empty()) {
      std::ostringstream os;
      WriteCyclesCsv(os, r.cycles);
      WriteTextFile(many ? WithSourceSuffix(args.dump_cycles, r.source_id)
                         : fs::path(args.dump_cycles),
                    os.str());
    }
    if (!args.dump_frames.empty()) {
      std::ostringstream os;
      WriteFramesCsv(os, r.frames);
      WriteTextFile(many ? WithSourceSuffix(args.dump_frames, r.source_id)
                         : fs::path(args.dump_frames),
                    os.str());
    }
    if (!args.per_file_dir.empty()) {
      fs::create_directories(args.per_file_dir);
      std::vector<std::string> file_meta = ConfigMetadata(cfg, "analyze");
      file_meta.push_back("source " + r.source_id);
      std::ostringstream os;
      WriteVoiceMapCsv(os, r.map, file_meta);
      WriteTextFile(fs::path(args.per_file_dir) / (r.source_id + ".csv"),
                    os.str());
    }
  }

  out << "cycles=" << merged.total_cycles() << " cells=" << merged.size()
      << "\n";
  return kExitOk;
}

// --- compare ---------------------------------------------------------------

struct CompareArgs {
  CommonOptions common;
  std::string map_a;
  std::string map_b;
  std::string metric = "all";
  std::string out;
};

int RunCompare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = BuildConfig(args.common);
  const std::vector<Metric> metrics = SelectMetrics(args.metric);
  const VoiceMap a =
      FilterMinCycles(ReadMapFile(args.map_a), cfg.min_cycles_per_cell);
  const VoiceMap b =
      FilterMinCycles(ReadMapFile(args.map_b), cfg.min_cycles_per_cell);

  if (OverlapArea(a, b) == 0) {
    err << "voicemap: warning: maps share no cells; differences are empty\n";
  }
  const std::vector<std::string> meta = {"voicemap compare", "a " + args.map_a,
                                         "b " + args.map_b};
  for (Metric m : metrics) {
    std::ostringstream os;
    WriteDifferenceCsv(os, Diff(a, b, m), meta);
    WriteTextFile(args.out + "." + std::string(MetricName(m)) + ".diff.csv",
                  os.str());
  }

  const std::vector<StatsRow> rows =
      CollectStats(a, metrics, &b, cfg.weighting);
  const std::string table = FormatStatsTable(rows, true);
  WriteTextFile(args.out + ".stats.txt", table);
  WriteTextFile(args.out + ".stats.csv", FormatStatsCsv(rows, true));
  out << table;
  return kExitOk;
}

// --- coverage --------------------------------------------------------------

struct CoverageArgs {
  CommonOptions common;
  std::vector<std::string> maps;
  std::string out;
};

int RunCoverage(const CoverageArgs& args, std::ostream& out) {
  const RunConfig cfg = BuildConfig(args.common);
  std::vector<VoiceMap> maps;
  for (const std::string& path : args.maps) maps.push_back(ReadMapFile(path));
  std::ostringstream os;
  os << "k,cells\n";
  for (const CoveragePoint& p : CoverageCurve(maps, cfg.min_cycles_per_cell)) {
    os << p.utterances << ',' << p.cells << '\n';
  }
  if (args.out.empty()) {
    out << os.str();
  } else {
    WriteTextFile(args.out, os.str());
  }
  return kExitOk;
}

// --- render ----------------------------------------------------------------

struct RenderArgs {
  CommonOptions common;
  std::string input;
  std::string metric;
  std::string out;
  std::string title;
};

int RunRender(const RenderArgs& args) {
  const RunConfig cfg = BuildConfig(args.common);
  std::optional<Metric> metric;
  if (!args.metric.empty()) metric = RequireMetric(args.metric);

  bool is_diff = false;
  {
    std::ifstream probe = OpenInput(args.input);
    is_diff = LooksLikeDifferenceCsv(probe);
  }
  RenderOptions opts;
  opts.window = cfg.window;
  opts.diff_cap = cfg.diff_cap;
  opts.title = args.title;

  std::string svg;
  if (is_diff) {
    std::ifstream in = OpenInput(args.input);
    DifferenceMap diff;
    try {
      diff = ReadDifferenceCsv(in);
    } catch (const MapParseError& e) {
      throw InputError(args.input + ": row " + std::to_string(e.line()) +
                       ": " + e.what());
    }
    if (metric && *metric != diff.metric) {
      throw InputError(args.input + ": holds " +
                       std::string(MetricName(diff.metric)) + " differences");
    }
    svg = RenderDiffSvg(diff, opts);
  } else {
    if (!metric) throw InputError("--metric is required for map files");
    opts.scale = cfg.scale(*metric);
    svg = RenderMapSvg(
        FilterMinCycles(ReadMapFile(args.input), cfg.min_cycles_per_cell),
        *metric, opts);
  }
  WriteTextFile(args.out, svg);
  return kExitOk;
}

// --- stats -----------------------------------------------------------------

struct StatsArgs {
  CommonOptions common;
  std::string map;
  std::string reference;
  std::string metric = "all";
  std::string out;
};

int RunStats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = BuildConfig(args.common);
  const std::vector<Metric> metrics = SelectMetrics(args.metric);
  const VoiceMap map =
      FilterMinCycles(ReadMapFile(args.map), cfg.min_cycles_per_cell);
  if (map.size() < 2) {
    err << "voicemap: fewer than 2 occupied cells\n";
    return kExitEmptyResult;
  }
  std::optional<VoiceMap> ref;
  if (!args.reference.empty()) {
    ref = FilterMinCycles(ReadMapFile(args.reference), cfg.min_cycles_per_cell);
  }
  const std::vector<StatsRow> rows =
      CollectStats(map, metrics, ref ? &*ref : nullptr, cfg.weighting);
  const std::string table = FormatStatsTable(rows, ref.has_value());
  out << table;
  if (!args.out.empty()) {
    WriteTextFile(args.out + ".stats.txt", table);
    WriteTextFile(args.out + ".stats.csv",
                  FormatStatsCsv(rows, ref.has_value()));
  }
  return kExitOk;
}

}  // namespace

std::string FormatStatsTable(std::span<const StatsRow> rows,
                             bool with_reference) {
  std::vector<std::vector<std::string>> table;
  table.push_back({"Metric", "Mean ± Std.dev.", "CI Range (95%)"});
  if (with_reference) {
    table[0].push_back("Diff from Raw");
    table[0].push_back("Overlap");
  }
  for (const StatsRow& row : rows) {
    std::vector<std::string> line = {std::string(DisplayName(row.metric))};
    if (row.stats) {
      const MapStats& s = *row.stats;
      line.push_back(Fixed2(s.mean) + " ± " + Fixed2(s.std));
      line.push_back("[" + Fixed2(s.ci95_low) + ", " + Fixed2(s.ci95_high) +
                     "]");
    } else {
      line.push_back("n/a");
      line.push_back("n/a");
    }
    if (with_reference) {
      line.push_back(row.stats && row.stats->diff_from_ref
                         ? Signed2(*row.stats->diff_from_ref)
                         : "n/a");
      line.push_back(row.stats && row.stats->overlap_cells
                         ? std::to_string(*row.stats->overlap_cells)
                         : "n/a");
    }
    table.push_back(std::move(line));
  }

  std::vector<std::size_t> widths(table[0].size(), 0);
  for (const auto& line : table) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      widths[c] = std::max(widths[c], DisplayWidth(line[c]));
    }
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& line) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c > 0) text += " | ";
      text += line[c];
      if (c + 1 < line.size()) {
        text.append(widths[c] - DisplayWidth(line[c]), ' ');
      }
    }
    out += text + "\n";
  };
  emit(table[0]);
  std::string rule;
  for (std::size_t c = 0; c < widths.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule.append(widths[c], '-');
  }
  out += rule + "\n";
  for (std::size_t i = 1; i < table.size(); ++i) emit(table[i]);
  return out;
}

std::string FormatStatsCsv(std::span<const StatsRow> rows,
                           bool with_reference) {
  std::string out = "metric,mean,std,ci95_low,ci95_high,n,n_cells";
  if (with_reference) out += ",diff_from_ref,overlap_cells";
  out += "\n";
  for (const StatsRow& row : rows) {
    out += MetricName(row.metric);
    if (row.stats) {
      const MapStats& s = *row.stats;
      out += "," + FormatSig6(s.mean) + "," + FormatSig6(s.std) + "," +
             FormatSig6(s.ci95_low) + "," + FormatSig6(s.ci95_high) + "," +
             std::to_string(s.n) + "," + std::to_string(s.n_cells);
      if (with_reference) {
        out += "," + (s.diff_from_ref ? FormatSig6(*s.diff_from_ref) : "");
        out += "," +
               (s.overlap_cells ? std::to_string(*s.overlap_cells) : "");
      }
    } else {
      out += ",,,,,,";
      if (with_reference) out += ",,";
    }
    out += "\n";
  }
  return out;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Voice map analysis: per-cycle crest, SB and CPPs binned "
               "over (semitone, dB)."};
  app.name("voicemap");
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Analyze WAV files into one voice map");
  AddCommonOptions(analyze_cmd, analyze.common);
  analyze_cmd->add_option("inputs", analyze.inputs, "WAV files")->required();
  analyze_cmd->add_option("--out", analyze.out, "map CSV path")->required();
  analyze_cmd->add_option("--dump-cycles", analyze.dump_cycles,
                          "per-cycle CSV (source id inserted when several "
                          "inputs are given)");
  analyze_cmd->add_option("--dump-frames", analyze.dump_frames,
                          "per-frame CSV (source id inserted when several "
                          "inputs are given)");
  analyze_cmd->add_option("--per-file-dir", analyze.per_file_dir,
                          "also write one map CSV per input here");
  analyze_cmd->add_option("--jobs", analyze.jobs,
                          "worker threads (0 = hardware concurrency)");

  CompareArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Difference maps and statistics of A - B");
  AddCommonOptions(compare_cmd, compare.common);
  AddWeightingOption(compare_cmd, compare.common);
  AddMinCyclesOption(compare_cmd, compare.common);
  compare_cmd->add_option("map_a", compare.map_a, "map CSV")->required();
  compare_cmd->add_option("map_b", compare.map_b, "reference map CSV")
      ->required();
  compare_cmd->add_option("--metric", compare.metric, "metric name or 'all'");
  compare_cmd->add_option("--out", compare.out, "output prefix")->required();

  CoverageArgs coverage;
  CLI::App* coverage_cmd = app.add_subcommand(
      "coverage", "Cumulative occupied cells over maps in the given order");
  AddCommonOptions(coverage_cmd, coverage.common);
  AddMinCyclesOption(coverage_cmd, coverage.common);
  coverage_cmd->add_option("maps", coverage.maps, "map CSVs")->required();
  coverage_cmd->add_option("--out", coverage.out, "CSV path (default stdout)");

  RenderArgs render;
  CLI::App* render_cmd =
      app.add_subcommand("render", "Render a map or difference CSV to SVG");
  AddCommonOptions(render_cmd, render.common);
  AddMinCyclesOption(render_cmd, render.common);
  render_cmd->add_option("input", render.input, "map or diff CSV")->required();
  render_cmd->add_option("--metric", render.metric, "metric to draw");
  render_cmd->add_option("--out", render.out, "SVG path")->required();
  render_cmd->add_option("--title", render.title, "title text");

  StatsArgs stats;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Mean, std and 95% CI per metric");
  AddCommonOptions(stats_cmd, stats.common);
  AddWeightingOption(stats_cmd, stats.common);
  AddMinCyclesOption(stats_cmd, stats.common);
  stats_cmd->add_option("map", stats.map, "map CSV")->required();
  stats_cmd->add_option("--reference", stats.reference, "reference map CSV");
  stats_cmd->add_option("--metric", stats.metric, "metric name or 'all'");
  stats_cmd->add_option("--out", stats.out,
                        "also write <prefix>.stats.txt and .stats.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze_cmd) return RunAnalyze(analyze, out, err);
    if (*compare_cmd) return RunCompare(compare, out, err);
    if (*coverage_cmd) return RunCoverage(coverage, out);
    if (*render_cmd) return RunRender(render);
    if (*stats_cmd) return RunStats(stats, out, err);
  } catch (const CommandError& e) {
    err << "voicemap: " << e.what() << "\n";
    return e.status();
  } catch (const std::exception& e) {
    err << "voicemap: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace voicemap
