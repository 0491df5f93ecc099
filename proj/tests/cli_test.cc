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

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "test_support.h"
#include "voicemap/analysis.h"
#include "voicemap/map_io.h"

namespace voicemap {
namespace {

using testing::ReadFile;
using testing::ScratchDir;
using testing::WriteFile;

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "voicemap");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status =
      RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string MapCsv(const std::vector<std::string>& rows) {
  std::string s = std::string(kMapCsvHeader) + "\n";
  for (const std::string& r : rows) s += r + "\n";
  return s;
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  std::string WriteWav(const std::string& name, const std::vector<double>& x,
                       int rate = 44100) {
    testing::WriteWavFile(dir_ / name, x, rate);
    return Path(name);
  }
  std::string WriteText(const std::string& name, const std::string& text) {
    WriteFile(dir_ / name, text);
    return Path(name);
  }

  ScratchDir dir_;
};

TEST_F(CliTest, NoSubcommandIsUsageError) {
  EXPECT_EQ(Invoke({}).status, kExitInputError);
  EXPECT_EQ(Invoke({"frobnicate"}).status, kExitInputError);
  EXPECT_EQ(Invoke({"--help"}).status, kExitOk);
}

TEST_F(CliTest, AnalyzeSilenceIsEmptyResult) {
  const std::string wav = WriteWav("silence.wav", std::vector<double>(44100));
  const CliResult r = Invoke({"analyze", wav, "--out", Path("m.csv")});
  EXPECT_EQ(r.status, kExitEmptyResult);
  EXPECT_NE(r.err.find("no voiced content"), std::string::npos);
}

TEST_F(CliTest, AnalyzeUnreadableInputNamesFile) {
  const std::string good = WriteWav("a.wav", testing::Sine(110.0, 0.3, 0.5));
  const CliResult r =
      Invoke({"analyze", good, Path("missing.wav"), "--out", Path("m.csv")});
  EXPECT_EQ(r.status, kExitInputError);
  EXPECT_NE(r.err.find("missing.wav"), std::string::npos);

  WriteText("junk.wav", "definitely not RIFF");
  const CliResult junk =
      Invoke({"analyze", Path("junk.wav"), "--out", Path("m.csv")});
  EXPECT_EQ(junk.status, kExitInputError);
  EXPECT_NE(junk.err.find("junk.wav"), std::string::npos);
}

TEST_F(CliTest, AnalyzeSine110) {
  const std::string wav = WriteWav("sine.wav", testing::Sine(110.0, 0.3, 2.0));
  const CliResult r = Invoke({"analyze", wav, "--out", Path("m.csv"),
                           "--dump-cycles", Path("cycles.csv"),
                           "--dump-frames", Path("frames.csv")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("cycles=", 0), 0u);

  std::istringstream in(ReadFile(Path("m.csv")));
  const VoiceMap m = ReadVoiceMapCsv(in);
  ASSERT_FALSE(m.empty());
  EXPECT_GE(m.total_cycles(), 190);
  // One dominant cell near semitone 12. Onset cycles may stray up to the
  // 25% jump tolerance (about 4 semitones).
  std::int64_t top = 0;
  CellKey top_key;
  for (const auto& [key, acc] : m.cells()) {
    EXPECT_NEAR(key.st_bin, 12, 4);
    if (acc.n_cycles >= 5) {
      EXPECT_NEAR(key.st_bin, 12, 1);
    }
    if (acc.n_cycles > top) {
      top = acc.n_cycles;
      top_key = key;
    }
  }
  EXPECT_GT(static_cast<double>(top), 0.8 * static_cast<double>(m.total_cycles()));
  EXPECT_NEAR(top_key.st_bin, 12, 1);
  EXPECT_LE(m.size(), 6u);

  const std::string cycles = ReadFile(Path("cycles.csv"));
  EXPECT_EQ(cycles.rfind(kCyclesCsvHeader, 0), 0u);
  EXPECT_EQ(ReadFile(Path("frames.csv")).rfind(kFramesCsvHeader, 0), 0u);
  // Metadata echoes the configuration.
  const std::string text = ReadFile(Path("m.csv"));
  EXPECT_NE(text.find("# config spl_offset_db=100\n"), std::string::npos);
  EXPECT_NE(text.find("# source sine cycles="), std::string::npos);
}

TEST_F(CliTest, AnalyzeMergesInSortedOrderRegardlessOfArgumentOrder) {
  const std::string a = WriteWav("a.wav", testing::Sine(110.0, 0.3, 0.5));
  const std::string b =
      WriteWav("b.wav", testing::GlottalPulseTrain(180.0, 0.5, 1e-4, 3));
  ASSERT_EQ(Invoke({"analyze", a, b, "--out", Path("ab.csv"), "--jobs", "2"})
                .status,
            kExitOk);
  ASSERT_EQ(Invoke({"analyze", b, a, "--out", Path("ba.csv"), "--jobs", "1",
                 "--per-file-dir", Path("per"), "--dump-cycles",
                 Path("c.csv")})
                .status,
            kExitOk);
  EXPECT_EQ(ReadFile(Path("ab.csv")), ReadFile(Path("ba.csv")));
  EXPECT_FALSE(ReadFile(Path("per/a.csv")).empty());
  EXPECT_FALSE(ReadFile(Path("per/b.csv")).empty());
  EXPECT_FALSE(ReadFile(Path("c.a.csv")).empty());
  EXPECT_FALSE(ReadFile(Path("c.b.csv")).empty());
}

TEST_F(CliTest, AnalyzeResamplesInput) {
  const std::string wav =
      WriteWav("low.wav", testing::Sine(150.0, 0.3, 1.0, 22050), 22050);
  const CliResult r = Invoke({"analyze", wav, "--out", Path("m.csv")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  std::istringstream in(ReadFile(Path("m.csv")));
  const VoiceMap m = ReadVoiceMapCsv(in);
  double f0_sum = 0.0;
  for (const auto& [key, acc] : m.cells()) {
    f0_sum += *acc.Mean(Metric::kF0) * static_cast<double>(acc.n_cycles);
  }
  EXPECT_GE(m.total_cycles(), 140);
  EXPECT_NEAR(f0_sum / static_cast<double>(m.total_cycles()), 150.0, 1.0);
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  const std::string wav = WriteWav("s.wav", testing::Sine(220.0, 0.3, 0.5));
  WriteText("run.cfg", "spl_offset_db=80\n");
  ASSERT_EQ(Invoke({"analyze", wav, "--config", Path("run.cfg"), "--set",
                 "hop_s=0.005", "--out", Path("m.csv")})
                .status,
            kExitOk);
  const std::string text = ReadFile(Path("m.csv"));
  EXPECT_NE(text.find("# config spl_offset_db=80\n"), std::string::npos);
  EXPECT_NE(text.find("# config hop_s=0.005\n"), std::string::npos);

  EXPECT_EQ(Invoke({"analyze", wav, "--set", "bogus=1", "--out", Path("m.csv")})
                .status,
            kExitInputError);
  EXPECT_EQ(Invoke({"analyze", wav, "--config", Path("none.cfg"), "--out",
                 Path("m.csv")})
                .status,
            kExitInputError);
}

TEST_F(CliTest, CompareSelfIsZero) {
  const std::string m =
      WriteText("m.csv", MapCsv({"12,70,3,110,70.5,1.5,-10,10,3,3",
                                 "13,71,2,117,71.5,1.7,-12,8,2,2",
                                 "14,72,1,124,72.5,1.9,-14,6,1,1"}));
  const CliResult r = Invoke({"compare", m, m, "--metric", "cpps", "--out",
                           Path("cmp")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(ReadFile(Path("cmp.cpps_db.diff.csv")),
            "# voicemap compare\n# a " + m + "\n# b " + m +
                "\n# metric=cpps_db\nst_bin,spl_bin,delta\n"
                "12,70,0\n13,71,0\n14,72,0\n");
  EXPECT_NE(r.out.find("+0.00"), std::string::npos);
  const std::string csv = ReadFile(Path("cmp.stats.csv"));
  EXPECT_NE(csv.find("cpps_db,8,2,"), std::string::npos);
  EXPECT_NE(csv.find(",0,3\n"), std::string::npos);
}

TEST_F(CliTest, CompareHandBuiltDeltas) {
  const std::string a = WriteText(
      "a.csv", MapCsv({"12,70,1,110,70.5,1.5,,10,0,1", "13,71,1,117,71.5,1.5,,8,0,1"}));
  const std::string b = WriteText(
      "b.csv", MapCsv({"12,70,1,110,70.5,1.5,,7,0,1", "13,71,1,117,71.5,1.5,,9,0,1",
                       "20,60,1,174,60.5,1.5,,9,0,1"}));
  const CliResult r = Invoke({"compare", a, b, "--out", Path("x")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const std::string diff = ReadFile(Path("x.cpps_db.diff.csv"));
  EXPECT_NE(diff.find("st_bin,spl_bin,delta\n12,70,3\n13,71,-1\n"),
            std::string::npos);
  // Every metric gets a diff file.
  for (const char* name : {"f0_hz", "spl_db", "crest", "sb_db"}) {
    EXPECT_FALSE(ReadFile(Path(std::string("x.") + name + ".diff.csv")).empty());
  }
  EXPECT_NE(r.out.find("Diff from Raw"), std::string::npos);
  EXPECT_NE(r.out.find("+1.00"), std::string::npos);
}

TEST_F(CliTest, CompareEmptyOverlapWarns) {
  const std::string a = WriteText("a.csv", MapCsv({"1,60,1,59,60.5,1.5,,3,0,1"}));
  const std::string b = WriteText("b.csv", MapCsv({"9,60,1,93,60.5,1.5,,3,0,1"}));
  const CliResult r = Invoke({"compare", a, b, "--metric", "cpps_db", "--out",
                           Path("e")});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(ReadFile(Path("e.cpps_db.diff.csv")).find("\n1,"),
            std::string::npos);
}

TEST_F(CliTest, CompareMalformedReportsRow) {
  const std::string good = WriteText("g.csv", MapCsv({"1,60,1,59,60.5,1.5,,3,0,1"}));
  const std::string bad =
      WriteText("bad.csv", "# meta\n" + MapCsv({"1,60,1,59,60.5,1.5,,3,0,1",
                                                 "2,60,one,59,60.5,1.5,,3,0,1"}));
  const CliResult r = Invoke({"compare", good, bad, "--out", Path("z")});
  EXPECT_EQ(r.status, kExitInputError);
  EXPECT_NE(r.err.find("row 4"), std::string::npos);
  EXPECT_NE(r.err.find("bad.csv"), std::string::npos);
}

TEST_F(CliTest, CompareUnknownMetric) {
  const std::string m = WriteText("m.csv", MapCsv({"1,60,1,59,60.5,1.5,,3,0,1"}));
  EXPECT_EQ(Invoke({"compare", m, m, "--metric", "hnr", "--out", Path("q")}).status,
            kExitInputError);
}

TEST_F(CliTest, CoverageCurve) {
  const std::string a = WriteText(
      "a.csv", MapCsv({"0,60,1,55,60,1,,1,0,1", "1,60,1,58,60,1,,1,0,1",
                       "2,60,1,62,60,1,,1,0,1", "3,60,1,65,60,1,,1,0,1",
                       "4,60,1,69,60,1,,1,0,1"}));
  const std::string b = WriteText(
      "b.csv", MapCsv({"10,60,1,98,60,1,,1,0,1", "11,60,1,104,60,1,,1,0,1",
                       "12,60,1,110,60,1,,1,0,1"}));
  const std::string c = WriteText(
      "c.csv", MapCsv({"20,60,1,174,60,1,,1,0,1", "21,60,1,185,60,1,,1,0,1"}));
  const CliResult r = Invoke({"coverage", a, b, c});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_EQ(r.out, "k,cells\n1,5\n2,8\n3,10\n");
  ASSERT_EQ(Invoke({"coverage", a, "--out", Path("cov.csv")}).status, kExitOk);
  EXPECT_EQ(ReadFile(Path("cov.csv")), "k,cells\n1,5\n");
  EXPECT_EQ(Invoke({"coverage", a, "--min-cycles", "2"}).out, "k,cells\n1,0\n");
  WriteText("bad.csv", "nonsense\n");
  EXPECT_EQ(Invoke({"coverage", a, Path("bad.csv")}).status, kExitInputError);
}

TEST_F(CliTest, RenderMapAndDiff) {
  const std::string empty = WriteText("empty.csv", MapCsv({}));
  ASSERT_EQ(Invoke({"render", empty, "--metric", "cpps", "--out", Path("e.svg")})
                .status,
            kExitOk);
  const std::string svg = ReadFile(Path("e.svg"));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_EQ(svg.find("class=\"cell\""), std::string::npos);

  const std::string one = WriteText("one.csv", MapCsv({"12,70,1,110,70.5,1.5,,7.5,0,1"}));
  ASSERT_EQ(Invoke({"render", one, "--metric", "cpps_db", "--out", Path("1.svg")})
                .status,
            kExitOk);
  EXPECT_NE(ReadFile(Path("1.svg")).find("data-st=\"12\" data-spl=\"70\""),
            std::string::npos);
  ASSERT_EQ(Invoke({"render", one, "--metric", "cpps_db", "--min-cycles", "2",
                    "--out", Path("1b.svg")})
                .status,
            kExitOk);
  EXPECT_EQ(ReadFile(Path("1b.svg")).find("class=\"cell\""), std::string::npos);

  WriteText("d.csv",
            "# metric=cpps_db\nst_bin,spl_bin,delta\n12,70,3\n13,71,-1\n");
  ASSERT_EQ(Invoke({"render", Path("d.csv"), "--out", Path("d.svg")}).status,
            kExitOk);
  EXPECT_NE(ReadFile(Path("d.svg")).find("delta cpps_db"), std::string::npos);
  EXPECT_EQ(Invoke({"render", Path("d.csv"), "--metric", "crest", "--out",
                 Path("d2.svg")})
                .status,
            kExitInputError);
}

TEST_F(CliTest, RenderErrors) {
  const std::string one = WriteText("one.csv", MapCsv({"12,70,1,110,70.5,1.5,,7.5,0,1"}));
  EXPECT_EQ(Invoke({"render", one, "--metric", "bogus", "--out", Path("x.svg")})
                .status,
            kExitInputError);
  EXPECT_EQ(Invoke({"render", one, "--out", Path("x.svg")}).status,
            kExitInputError);
  EXPECT_EQ(Invoke({"render", Path("none.csv"), "--metric", "cpps", "--out",
                 Path("x.svg")})
                .status,
            kExitInputError);
}

TEST_F(CliTest, StatsTable) {
  const std::string m = WriteText(
      "m.csv", MapCsv({"0,60,1,55,60,1.5,,2,0,1", "1,60,1,58,60,1.5,,4,0,1"}));
  const CliResult r = Invoke({"stats", m, "--metric", "cpps", "--out", Path("s")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("3.00 ± 1.41"), std::string::npos);
  EXPECT_NE(r.out.find("Mean ± Std.dev."), std::string::npos);
  EXPECT_NE(r.out.find("CI Range (95%)"), std::string::npos);
  EXPECT_EQ(r.out.find("Diff from Raw"), std::string::npos);
  EXPECT_EQ(ReadFile(Path("s.stats.txt")), r.out);
  EXPECT_EQ(ReadFile(Path("s.stats.csv")).rfind("metric,mean,std", 0), 0u);

  const CliResult all = Invoke({"stats", m});
  ASSERT_EQ(all.status, kExitOk);
  // SB has no values: shown as n/a rather than failing.
  EXPECT_NE(all.out.find("n/a"), std::string::npos);

  const CliResult self = Invoke({"stats", m, "--reference", m});
  EXPECT_NE(self.out.find("Diff from Raw"), std::string::npos);
  EXPECT_NE(self.out.find("+0.00"), std::string::npos);
  EXPECT_EQ(self.out.find("+0.01"), std::string::npos);
}

TEST_F(CliTest, StatsNeedsTwoCells) {
  const std::string one = WriteText("one.csv", MapCsv({"12,70,1,110,70.5,1.5,,7.5,0,1"}));
  EXPECT_EQ(Invoke({"stats", one}).status, kExitEmptyResult);
  const std::string two = WriteText(
      "two.csv", MapCsv({"0,60,1,55,60,1.5,,2,0,1", "1,60,3,58,60,1.5,,4,0,3"}));
  EXPECT_EQ(Invoke({"stats", two}).status, kExitOk);
  EXPECT_EQ(Invoke({"stats", two, "--min-cycles", "2"}).status, kExitEmptyResult);
  EXPECT_EQ(Invoke({"stats", two, "--weighting", "cells"}).status,
            kExitInputError);
}

TEST_F(CliTest, StatsWeighting) {
  const std::string two = WriteText(
      "two.csv", MapCsv({"0,60,3,55,60,1.5,,2,0,3", "1,60,1,58,60,1.5,,6,0,1"}));
  EXPECT_NE(Invoke({"stats", two, "--metric", "cpps"}).out.find("4.00 ±"),
            std::string::npos);
  EXPECT_NE(Invoke({"stats", two, "--metric", "cpps", "--weighting", "cycle"})
                .out.find("3.00 ± 2.00"),
            std::string::npos);
}

TEST(StatsTableTest, ColumnsAlignByDisplayWidth) {
  MapStats s;
  s.mean = 3.0;
  s.std = std::sqrt(2.0);
  s.ci95_low = 1.04;
  s.ci95_high = 4.96;
  const std::vector<StatsRow> rows = {{Metric::kCpps, s},
                                      {Metric::kCrest, std::nullopt}};
  const std::string table = FormatStatsTable(rows, false);
  std::istringstream in(table);
  std::string line;
  std::vector<std::size_t> bar_columns;
  while (std::getline(in, line)) {
    // Column of the second separator, counted in code points.
    std::size_t cp = 0;
    std::size_t seen = 0;
    for (char c : line) {
      if ((c & 0xC0) == 0x80) continue;
      if (c == '|' || c == '+') {
        if (++seen == 2) break;
      }
      ++cp;
    }
    bar_columns.push_back(cp);
  }
  ASSERT_EQ(bar_columns.size(), 4u);
  for (std::size_t c : bar_columns) EXPECT_EQ(c, bar_columns[0]);
}

#ifdef VOICEMAP_BINARY
int RunBinary(const std::string& args) {
  const std::string cmd =
      std::string(VOICEMAP_BINARY) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

TEST_F(CliTest, ProcessExitCodes) {
  const std::string silence = WriteWav("sil.wav", std::vector<double>(22050));
  const std::string sine = WriteWav("sine.wav", testing::Sine(110.0, 0.3, 1.0));
  EXPECT_EQ(RunBinary("analyze " + sine + " --out " + Path("m.csv")), 0);
  EXPECT_EQ(RunBinary("analyze " + silence + " --out " + Path("x.csv")), 3);
  EXPECT_EQ(RunBinary("analyze " + Path("nope.wav") + " --out " + Path("x.csv")),
            2);
  EXPECT_EQ(RunBinary("render " + Path("m.csv") + " --metric nope --out " +
                      Path("x.svg")),
            2);
  EXPECT_EQ(RunBinary("stats " + Path("m.csv")), 0);
  EXPECT_EQ(RunBinary(""), 2);
}
#endif

}  // namespace
}  // namespace voicemap
