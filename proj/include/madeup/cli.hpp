#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "madeup/ast_print.hpp"
#include "madeup/export.hpp"
#include "madeup/lesson.hpp"
#include "madeup/pipeline.hpp"

namespace madeup::cli {

enum ExitCode : int { kOk = 0, kProgramError = 1, kUsageError = 2 };

struct RunConfig {
  std::string input;
  std::string mode = "polyline";
  TubeParams tube;
  GridParams grid;
  std::string output;
  std::string format;
  std::optional<std::size_t> max_steps;
  std::string emit = "mesh";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool write_output(const std::string& path, const std::string& bytes, std::ostream& out,
                         std::ostream& err) {
  if (path.empty() || path == "-") {
    out << bytes;
    return true;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << bytes)) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

inline ExportFormat resolve_format(const std::string& flag, const std::string& output) {
  std::string f = flag;
  if (f.empty()) {
    const auto ext = std::filesystem::path(output).extension().string();
    if (ext == ".stl") f = "stl";
    else if (ext == ".json") f = "json";
    else f = "obj";
  }
  if (f == "obj") return ExportFormat::obj;
  if (f == "stl" || f == "stl_binary" || f == "stl-binary") return ExportFormat::stl_binary;
  if (f == "stl_ascii" || f == "stl-ascii") return ExportFormat::stl_ascii;
  if (f == "json" || f == "mesh_json" || f == "mesh-json") return ExportFormat::mesh_json;
  throw UsageError("unknown format '" + flag + "'");
}

/// Step limit: flag, then MADEUP_MAX_STEPS, then the built-in default.
inline std::size_t resolve_max_steps(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MADEUP_MAX_STEPS"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw UsageError("MADEUP_MAX_STEPS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return EvalLimits{}.max_steps;
}

inline void print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& file,
                              std::ostream& err) {
  for (const auto& d : diags) err << format_diagnostic(d, file) << "\n";
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto source = read_file(cfg.input);
  if (!source) {
    err << "error: cannot read " << cfg.input << "\n";
    return kUsageError;
  }

  RunOptions opts;
  if (cfg.mode == "polyline") opts.mode = GeometryMode::polyline;
  else if (cfg.mode == "parametric") opts.mode = GeometryMode::parametric;
  else if (cfg.mode == "triangles") opts.mode = GeometryMode::triangles;
  else throw UsageError("unknown mode '" + cfg.mode + "'");
  if (opts.mode == GeometryMode::parametric && cfg.emit == "mesh" &&
      (cfg.grid.rows == 0 || cfg.grid.cols == 0))
    throw UsageError("parametric mode requires --rows and --cols");
  opts.tube = cfg.tube;
  opts.grid = cfg.grid;
  opts.limits.max_steps = resolve_max_steps(cfg.max_steps);
  const ExportFormat format = resolve_format(cfg.format, cfg.output);

  if (cfg.emit == "ast") {
    auto program = parse_source(*source);
    if (!program) {
      print_diagnostics(program.diagnostics(), cfg.input, err);
      return kProgramError;
    }
    return write_output(cfg.output, to_sexpr(program.value()) + "\n", out, err) ? kOk : kProgramError;
  }

  const RunOutcome outcome =
      cfg.emit == "path" ? trace_source(*source, opts) : run_source(*source, opts);
  print_diagnostics(outcome.warnings, cfg.input, err);
  if (!outcome.ok) {
    print_diagnostics(outcome.errors, cfg.input, err);
    return kProgramError;
  }
  std::string bytes;
  if (cfg.emit == "path") bytes = write_trace(outcome.path);
  else bytes = export_mesh(outcome.mesh, outcome.path, ExportOptions{format, 6});
  return write_output(cfg.output, bytes, out, err) ? kOk : kProgramError;
}

inline int cmd_ast(const std::string& input, std::ostream& out, std::ostream& err) {
  const auto source = read_file(input);
  if (!source) {
    err << "error: cannot read " << input << "\n";
    return kUsageError;
  }
  auto program = parse_source(*source);
  if (!program) {
    print_diagnostics(program.diagnostics(), input, err);
    return kProgramError;
  }
  out << to_sexpr(program.value()) << "\n";
  return kOk;
}

/// Packs `<t_ms>.txt` snapshots from a directory, in timestamp order.
inline int cmd_lesson_pack(const std::string& dir, const std::string& output,
                           const std::string& audio_ref, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    err << "error: " << dir << " is not a directory\n";
    return kUsageError;
  }
  static const std::regex snapshot_name(R"((\d+)\.txt)");
  std::vector<Snapshot> snapshots;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || !std::regex_match(name, m, snapshot_name)) continue;
    auto text = read_file(entry.path());
    if (!text) {
      err << "error: cannot read " << entry.path().string() << "\n";
      return kProgramError;
    }
    snapshots.push_back({std::stoull(m[1].str()), std::move(*text)});
  }
  if (snapshots.empty()) {
    err << "error: no <t_ms>.txt snapshots in " << dir << "\n";
    return kProgramError;
  }
  std::sort(snapshots.begin(), snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.t_ms < b.t_ms; });
  std::optional<std::string> audio;
  if (!audio_ref.empty()) audio = audio_ref;
  try {
    const LessonMovie movie = record(snapshots, audio);
    return write_output(output, serialize(movie), out, err) ? kOk : kProgramError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kProgramError;
  }
}

inline int cmd_lesson_play(const std::string& movie_path, std::uint64_t at, std::ostream& out,
                           std::ostream& err) {
  const auto text = read_file(movie_path);
  if (!text) {
    err << "error: cannot read " << movie_path << "\n";
    return kUsageError;
  }
  try {
    out << playback_at(parse_lesson(*text), at);
    return kOk;
  } catch (const std::exception& e) {
    err << movie_path << ": error: " << e.what() << "\n";
    return kProgramError;
  }
}

/// Entry point for the `madeup` executable.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"Madeup: trace paths through 3-D space and solidify them into meshes", "madeup"};
  app.require_subcommand(1);

  RunConfig run;
  auto* run_cmd = app.add_subcommand("run", "Execute a program and export its model");
  run_cmd->add_option("input", run.input, "Madeup source (.mup)")->required();
  run_cmd->add_option("--mode", run.mode, "polyline | parametric | triangles")
      ->check(CLI::IsMember({"polyline", "parametric", "triangles"}));
  run_cmd->add_option("--sides", run.tube.sides, "Polytube sides")->check(CLI::Range(3, 1024));
  run_cmd->add_option("--radius", run.tube.radius, "Polytube radius")->check(CLI::PositiveNumber);
  run_cmd->add_option("--rows", run.grid.rows, "Parametric grid rows");
  run_cmd->add_option("--cols", run.grid.cols, "Parametric grid columns");
  run_cmd->add_flag("--wrap-rows", run.grid.wrap_rows, "Join the last grid row to the first");
  run_cmd->add_flag("--wrap-cols", run.grid.wrap_cols, "Join the last grid column to the first");
  run_cmd->add_option("-o,--out", run.output, "Output file (default: stdout)");
  run_cmd->add_option("--format", run.format, "obj | stl | stl-ascii | json");
  run_cmd->add_option("--max-steps", run.max_steps, "Evaluation step limit")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--emit", run.emit, "path | mesh | ast")
      ->check(CLI::IsMember({"path", "mesh", "ast"}));

  std::string ast_input;
  auto* ast_cmd = app.add_subcommand("ast", "Print the syntax tree as an s-expression");
  ast_cmd->add_option("input", ast_input, "Madeup source (.mup)")->required();

  auto* lesson_cmd = app.add_subcommand("lesson", "Pack or play text-movie lessons");
  lesson_cmd->require_subcommand(1);
  std::string pack_dir, pack_out, audio_ref;
  auto* pack_cmd = lesson_cmd->add_subcommand("pack", "Encode a directory of <t_ms>.txt snapshots");
  pack_cmd->add_option("dir", pack_dir, "Snapshot directory")->required();
  pack_cmd->add_option("-o,--out", pack_out, "Output .muplesson (default: stdout)");
  pack_cmd->add_option("--audio-ref", audio_ref, "Opaque reference to narration audio");
  std::string play_movie;
  std::uint64_t play_at = 0;
  auto* play_cmd = lesson_cmd->add_subcommand("play", "Print the lesson text at a time");
  play_cmd->add_option("movie", play_movie, "Lesson file")->required();
  play_cmd->add_option("--at", play_at, "Playback time in milliseconds")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*run_cmd) return cmd_run(run, out, err);
    if (*ast_cmd) return cmd_ast(ast_input, out, err);
    if (*pack_cmd) return cmd_lesson_pack(pack_dir, pack_out, audio_ref, out, err);
    if (*play_cmd) return cmd_lesson_play(play_movie, play_at, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace madeup::cli
