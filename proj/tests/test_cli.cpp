#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "madeup/cli.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace madeup;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "madeup");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("madeup-cli-" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string put(const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  static std::string slurp(const fs::path& p) { return *cli::read_file(p); }
  std::string at(const std::string& name) const { return (dir / name).string(); }
};

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_F(CliTest, SquareToStl) {
  const auto src = put("square.mup", madeup::testing::kSquareSource);
  const auto r = invoke({"run", src, "--mode", "polyline", "--sides", "4", "--radius", "0.5", "-o",
                         at("square.stl")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(fs::file_size(at("square.stl")), 1684u);
}

TEST_F(CliTest, WaveToObj) {
  const auto src = put("wave.mup", madeup::testing::kWaveSource);
  const auto r = invoke({"run", src, "--mode", "parametric", "--rows", "101", "--cols", "101", "-o",
                         at("wave.obj")});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string obj = slurp(at("wave.obj"));
  EXPECT_EQ(count_prefix(obj, "v "), 10201u);
  EXPECT_EQ(count_prefix(obj, "f "), 20000u);
}

TEST_F(CliTest, ParseErrorExitsOne) {
  const auto src = put("bad.mup", "repeat");
  const auto r = invoke({"run", src});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unterminated block"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("bad.mup:1:1:"), std::string::npos) << r.err;
}

TEST_F(CliTest, RuntimeErrorExitsOne) {
  const auto r = invoke({"run", put("oops.mup", "move 1\nmove y\n")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("oops.mup:2:6: error: undefined name 'y'"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"run"}).code, 2);
  EXPECT_EQ(invoke({"run", at("missing.mup")}).code, 2);
  const auto src = put("s.mup", madeup::testing::kSquareSource);
  EXPECT_EQ(invoke({"run", src, "--mode", "sculpt"}).code, 2);
  EXPECT_EQ(invoke({"run", src, "--sides", "2"}).code, 2);
  EXPECT_EQ(invoke({"run", src, "--format", "ply"}).code, 2);
  EXPECT_EQ(invoke({"run", src, "--mode", "parametric"}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("run"), std::string::npos);
}

TEST_F(CliTest, FormatFromExtensionOrFlag) {
  const auto src = put("tri.mup", "move 1");
  ASSERT_EQ(invoke({"run", src, "-o", at("a.json")}).code, 0);
  EXPECT_EQ(slurp(at("a.json")).rfind(R"({"positions":[)", 0), 0u);
  ASSERT_EQ(invoke({"run", src, "--format", "stl-ascii", "-o", at("b.txt")}).code, 0);
  EXPECT_EQ(slurp(at("b.txt")).rfind("solid madeup-forge", 0), 0u);
  const auto r = invoke({"run", src, "--sides", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count_prefix(r.out, "v "), 6u);
}

TEST_F(CliTest, EmitPath) {
  const auto r = invoke({"run", put("s.mup", madeup::testing::kSquareSource), "--emit", "path"});
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  const double expected[5][3] = {{0, 0, 0}, {0, 10, 0}, {-10, 10, 0}, {-10, 0, 0}, {0, 0, 0}};
  for (const auto& v : expected)
    for (double c : v) {
      double got = NAN;
      in >> got;
      EXPECT_NEAR(got, c, 1e-9);
    }
  std::string rest;
  EXPECT_FALSE(in >> rest);
}

TEST_F(CliTest, ManualTriangles) {
  const auto src = put("t.mup", "moveto 0 0 0\nmoveto 1 0 0\nmoveto 0 1 0\ntri 0 1 2\n");
  const auto r = invoke({"run", src, "--mode", "triangles"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
}

TEST_F(CliTest, Ast) {
  EXPECT_EQ(invoke({"ast", put("a.mup", "x = 5")}).out, "(assign x 5)\n");
  EXPECT_EQ(invoke({"ast", put("b.mup", madeup::testing::kSquareSource)}).out,
            "(repeat 4 (block (call move 10) (call yaw 90)))\n");
  EXPECT_EQ(invoke({"ast", put("c.mup", "")}).out, "(block)\n");
  EXPECT_EQ(invoke({"run", put("d.mup", "x = 5"), "--emit", "ast"}).out, "(assign x 5)\n");
  EXPECT_EQ(invoke({"ast", put("e.mup", "(")}).code, 1);
}

TEST_F(CliTest, StepLimitFlagAndEnvironment) {
  const auto src = put("loop.mup", "repeat 100000\n  x = 1\nend\n");
  EXPECT_EQ(invoke({"run", src, "--max-steps", "100"}).code, 1);
  ::setenv("MADEUP_MAX_STEPS", "100", 1);
  const auto limited = invoke({"run", src});
  ::unsetenv("MADEUP_MAX_STEPS");
  EXPECT_EQ(limited.code, 1);
  EXPECT_NE(limited.err.find("step limit exceeded"), std::string::npos);
  EXPECT_EQ(invoke({"run", src}).code, 0);
  ::setenv("MADEUP_MAX_STEPS", "lots", 1);
  EXPECT_EQ(invoke({"run", src}).code, 2);
  ::unsetenv("MADEUP_MAX_STEPS");
}

TEST_F(CliTest, WarningsGoToStderr) {
  const auto r = invoke({"run", put("w.mup", "repeat 2.5\n  move 1\nend\n")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("w.mup:1:1: warning:"), std::string::npos) << r.err;
}

TEST_F(CliTest, LessonPackAndPlay) {
  put("snaps/0.txt", "move 10");
  put("snaps/1500.txt", "move 10\nyaw 90");
  put("snaps/800.txt", "move 20");
  put("snaps/notes.md", "ignored");
  const auto pack = invoke({"lesson", "pack", at("snaps"), "-o", at("l.muplesson"), "--audio-ref", "a.ogg"});
  ASSERT_EQ(pack.code, 0) << pack.err;
  const LessonMovie m = parse_lesson(slurp(at("l.muplesson")));
  EXPECT_EQ(m.deltas.size(), 2u);
  EXPECT_EQ(m.audio_ref, "a.ogg");
  EXPECT_EQ(invoke({"lesson", "play", at("l.muplesson"), "--at", "0"}).out, "move 10");
  EXPECT_EQ(invoke({"lesson", "play", at("l.muplesson"), "--at", "900"}).out, "move 20");
  EXPECT_EQ(invoke({"lesson", "play", at("l.muplesson"), "--at", "1500"}).out, "move 10\nyaw 90");
}

TEST_F(CliTest, LessonSingleSnapshotAndErrors) {
  put("one/0.txt", "yaw 90");
  ASSERT_EQ(invoke({"lesson", "pack", at("one"), "-o", at("one.muplesson")}).code, 0);
  EXPECT_TRUE(parse_lesson(slurp(at("one.muplesson"))).deltas.empty());

  put("bad.muplesson", R"({"version":1,"initial":"ab","deltas":[{"t":5,"o":0,"d":1,"i":"x"},{"t":9,"o":7,"d":1}]})");
  const auto r = invoke({"lesson", "play", at("bad.muplesson"), "--at", "10"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("delta 1"), std::string::npos) << r.err;

  fs::create_directories(dir / "empty");
  EXPECT_EQ(invoke({"lesson", "pack", at("empty")}).code, 1);
  EXPECT_EQ(invoke({"lesson", "pack", at("nope")}).code, 2);
  EXPECT_EQ(invoke({"lesson", "play", at("one.muplesson")}).code, 2);
}

TEST_F(CliTest, OutputIsDeterministic) {
  const auto src = put("w.mup", madeup::testing::kTorusSource);
  const auto a = invoke({"run", src, "--format", "json"});
  const auto b = invoke({"run", src, "--format", "json"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
