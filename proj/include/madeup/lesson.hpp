#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "madeup/utf8.hpp"

namespace madeup {

/// Replace `delete_count` code points at `offset` with `insert`.
struct EditDelta {
  std::uint64_t t_ms = 0;
  std::size_t offset = 0;
  std::size_t delete_count = 0;
  std::string insert;

  bool empty() const { return delete_count == 0 && insert.empty(); }
  bool operator==(const EditDelta&) const = default;
};

/// A recorded session: the text at t=0 and one splice per changed frame.
struct LessonMovie {
  int version = 1;
  std::string initial;
  std::vector<EditDelta> deltas;
  std::optional<std::string> audio_ref;

  bool operator==(const LessonMovie&) const = default;
};

struct Snapshot {
  std::uint64_t t_ms = 0;
  std::string text;
};

inline constexpr int kLessonVersion = 1;

class LessonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LessonCorruptError : public LessonError {
 public:
  LessonCorruptError(std::size_t delta_index, const std::string& why)
      : LessonError("corrupt lesson: delta " + std::to_string(delta_index) + " " + why),
        index_(delta_index) {}
  std::size_t delta_index() const { return index_; }

 private:
  std::size_t index_;
};

/// Single splice turning `prev` into `next`, from the longest common prefix and then the
/// longest common suffix of what remains. The timestamp is left at zero.
inline EditDelta diff_snapshots(std::string_view prev, std::string_view next) {
  const std::u32string a = utf8::decode(prev);
  const std::u32string b = utf8::decode(next);
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
    ++suffix;
  EditDelta d;
  d.offset = prefix;
  d.delete_count = a.size() - prefix - suffix;
  d.insert = utf8::encode(std::u32string_view(b).substr(prefix, b.size() - prefix - suffix));
  return d;
}

namespace detail {

inline void apply_delta(std::u32string& text, const EditDelta& d, std::size_t index) {
  if (d.offset > text.size() || d.delete_count > text.size() - d.offset)
    throw LessonCorruptError(index, "splices past the end of a " + std::to_string(text.size()) +
                                        "-character text");
  std::u32string insert;
  try {
    insert = utf8::decode(d.insert);
  } catch (const utf8::DecodeError& e) {
    throw LessonCorruptError(index, std::string("has invalid text: ") + e.what());
  }
  text.replace(d.offset, d.delete_count, insert);
}

}  // namespace detail

/// Encodes a session. Unchanged frames are omitted.
inline LessonMovie record(const std::vector<Snapshot>& snapshots,
                          std::optional<std::string> audio_ref = std::nullopt) {
  if (snapshots.empty()) throw LessonError("a lesson needs at least one snapshot");
  LessonMovie movie;
  movie.version = kLessonVersion;
  movie.initial = snapshots.front().text;
  movie.audio_ref = std::move(audio_ref);
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (snapshots[i].t_ms < snapshots[i - 1].t_ms)
      throw LessonError("snapshot timestamps decrease at snapshot " + std::to_string(i));
    EditDelta d = diff_snapshots(snapshots[i - 1].text, snapshots[i].text);
    if (d.empty()) continue;
    d.t_ms = snapshots[i].t_ms;
    movie.deltas.push_back(std::move(d));
  }
  return movie;
}

/// Applies the deltas with `from_ms < t <= to_ms` to `text`, which must be the movie's
/// text at `from_ms`.
inline std::string advance(const LessonMovie& movie, std::string_view text, std::uint64_t from_ms,
                           std::uint64_t to_ms) {
  std::u32string cps = utf8::decode(text);
  for (std::size_t i = 0; i < movie.deltas.size(); ++i) {
    const EditDelta& d = movie.deltas[i];
    if (i > 0 && d.t_ms < movie.deltas[i - 1].t_ms)
      throw LessonCorruptError(i, "is timestamped before its predecessor");
    if (d.t_ms > to_ms) break;
    if (d.t_ms > from_ms) detail::apply_delta(cps, d, i);
  }
  return utf8::encode(cps);
}

/// Text as it stood at `t_ms`: the initial text with every delta up to and including
/// `t_ms` applied in order.
inline std::string playback_at(const LessonMovie& movie, std::uint64_t t_ms) {
  std::u32string cps = utf8::decode(movie.initial);
  for (std::size_t i = 0; i < movie.deltas.size(); ++i) {
    const EditDelta& d = movie.deltas[i];
    if (i > 0 && d.t_ms < movie.deltas[i - 1].t_ms)
      throw LessonCorruptError(i, "is timestamped before its predecessor");
    if (d.t_ms > t_ms) break;
    detail::apply_delta(cps, d, i);
  }
  return utf8::encode(cps);
}

/// `.muplesson` encoding. `d` and `i` are omitted when zero/empty.
inline nlohmann::ordered_json to_json(const LessonMovie& movie) {
  using nlohmann::ordered_json;
  ordered_json deltas = ordered_json::array();
  for (const EditDelta& d : movie.deltas) {
    ordered_json jd;
    jd["t"] = d.t_ms;
    jd["o"] = d.offset;
    if (d.delete_count != 0) jd["d"] = d.delete_count;
    if (!d.insert.empty()) jd["i"] = d.insert;
    deltas.push_back(std::move(jd));
  }
  ordered_json j;
  j["version"] = movie.version;
  j["initial"] = movie.initial;
  j["audio_ref"] = movie.audio_ref ? ordered_json(*movie.audio_ref) : ordered_json(nullptr);
  j["deltas"] = std::move(deltas);
  return j;
}

inline std::string serialize(const LessonMovie& movie) { return to_json(movie).dump(); }

inline LessonMovie parse_lesson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LessonError(std::string("lesson is not valid JSON: ") + e.what());
  }
  try {
    LessonMovie movie;
    movie.version = j.at("version").get<int>();
    if (movie.version != kLessonVersion)
      throw LessonError("unsupported lesson version " + std::to_string(movie.version));
    movie.initial = j.at("initial").get<std::string>();
    if (j.contains("audio_ref") && !j["audio_ref"].is_null())
      movie.audio_ref = j["audio_ref"].get<std::string>();
    for (const auto& jd : j.at("deltas")) {
      EditDelta d;
      d.t_ms = jd.at("t").get<std::uint64_t>();
      d.offset = jd.at("o").get<std::size_t>();
      d.delete_count = jd.value("d", std::size_t{0});
      d.insert = jd.value("i", std::string{});
      movie.deltas.push_back(std::move(d));
    }
    return movie;
  } catch (const nlohmann::json::exception& e) {
    throw LessonError(std::string("malformed lesson: ") + e.what());
  }
}

}  // namespace madeup
