#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>

// Bursts of simultaneous clients overflow cpp-httplib's default backlog of 5.
#ifndef CPPHTTPLIB_LISTEN_BACKLOG
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "madeup/export.hpp"
#include "madeup/pipeline.hpp"

namespace madeup {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8373;
  std::filesystem::path lessons_dir = "lessons";
  std::size_t max_body_bytes = 256 * 1024;
  std::chrono::milliseconds time_budget{2000};
  // Requests may lower these but never raise them.
  EvalLimits caps;
  std::string cors_origin = "*";
};

/// Transport-independent response.
struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;

  Reply() = default;
  Reply(int status, std::string body) : status(status), body(std::move(body)) {}
};

namespace detail {

inline std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Diagnostic& d : diags) {
    nlohmann::ordered_json jd;
    jd["message"] = d.message;
    jd["line"] = d.span.line;
    jd["column"] = d.span.column;
    list.push_back(std::move(jd));
  }
  return list;
}

inline Reply failure(int status, const std::vector<Diagnostic>& diags) {
  nlohmann::ordered_json j;
  j["ok"] = false;
  j["diagnostics"] = diagnostics_json(diags);
  return {status, j.dump()};
}

inline std::optional<GeometryMode> parse_mode(std::string_view s) {
  if (s == "polyline") return GeometryMode::polyline;
  if (s == "parametric") return GeometryMode::parametric;
  if (s == "triangles") return GeometryMode::triangles;
  return std::nullopt;
}

}  // namespace detail

/// Request decoding and limit clamping for POST /api/run.
inline RunOptions decode_run_request(const nlohmann::json& req, const ServiceConfig& config,
                                     std::string& source) {
  if (!req.is_object()) throw std::invalid_argument("request body must be a JSON object");
  source = req.at("source").get<std::string>();
  RunOptions opts;
  if (req.contains("mode")) {
    const auto mode = detail::parse_mode(req["mode"].get<std::string>());
    if (!mode) throw std::invalid_argument("unknown mode '" + req["mode"].get<std::string>() + "'");
    opts.mode = *mode;
  }
  if (req.contains("tube")) {
    const auto& t = req["tube"];
    opts.tube.sides = t.value("sides", opts.tube.sides);
    opts.tube.radius = t.value("radius", opts.tube.radius);
    opts.tube.closure_epsilon = t.value("closure_epsilon", opts.tube.closure_epsilon);
  }
  if (req.contains("grid")) {
    const auto& g = req["grid"];
    opts.grid.rows = g.value("rows", std::size_t{0});
    opts.grid.cols = g.value("cols", std::size_t{0});
    opts.grid.wrap_rows = g.value("wrap_rows", false);
    opts.grid.wrap_cols = g.value("wrap_cols", false);
  }
  opts.limits = config.caps;
  if (req.contains("limits")) {
    const auto& l = req["limits"];
    opts.limits.max_steps =
        std::clamp(l.value("max_steps", config.caps.max_steps), std::size_t{1}, config.caps.max_steps);
    opts.limits.max_vertices = std::clamp(l.value("max_vertices", config.caps.max_vertices),
                                          std::size_t{1}, config.caps.max_vertices);
  }
  opts.limits.deadline = std::chrono::steady_clock::now() + config.time_budget;
  return opts;
}

/// POST /api/run. 200 with the mesh, 422 with diagnostics, 413 when oversized.
inline Reply handle_run(std::string_view body, const ServiceConfig& config) {
  if (body.size() > config.max_body_bytes)
    return detail::failure(413, {{Severity::error, "request body too large", {1, 1}}});
  std::string source;
  RunOptions opts;
  try {
    opts = decode_run_request(nlohmann::json::parse(body), config, source);
  } catch (const std::exception& e) {
    return detail::failure(400, {{Severity::error, std::string("bad request: ") + e.what(), {1, 1}}});
  }
  const RunOutcome outcome = run_source(source, opts);
  if (!outcome.ok) return detail::failure(422, outcome.errors);

  nlohmann::ordered_json j;
  j["ok"] = true;
  j["mesh"] = mesh_json(outcome.mesh, outcome.path);
  if (!outcome.warnings.empty()) j["warnings"] = detail::diagnostics_json(outcome.warnings);
  return {200, j.dump()};
}

/// GET /api/lessons/{id}. Ids are restricted to [A-Za-z0-9_-]; anything else is 404.
inline Reply handle_lesson(const std::string& id, const ServiceConfig& config,
                           std::string_view if_none_match = {}) {
  static const std::regex safe_id("[A-Za-z0-9_-]{1,128}");
  const Reply not_found{404, R"({"ok":false,"error":"lesson not found"})"};
  if (!std::regex_match(id, safe_id)) return not_found;
  const auto file = config.lessons_dir / (id + ".muplesson");
  std::ifstream in(file, std::ios::binary);
  if (!in) return not_found;
  std::ostringstream content;
  content << in.rdbuf();
  Reply reply{200, content.str()};
  const std::string etag = "\"" + detail::fnv1a64_hex(reply.body) + "\"";
  reply.headers["ETag"] = etag;
  reply.headers["Cache-Control"] = "public, max-age=300";
  if (!if_none_match.empty() && if_none_match == etag) {
    reply.status = 304;
    reply.body.clear();
  }
  return reply;
}

inline Reply handle_health() { return {200, R"({"status":"ok"})"}; }

/// HTTP facade over the handlers above. Each request evaluates in isolation.
class Service {
 public:
  explicit Service(ServiceConfig config) : config_(std::move(config)) {
    server_.set_payload_max_length(config_.max_body_bytes);
    server_.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", config_.cors_origin);
    });
    server_.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string what = "internal error";
          try {
            if (ep) std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            what = e.what();
          } catch (...) {
          }
          nlohmann::ordered_json j;
          j["ok"] = false;
          j["error"] = what;
          res.status = 500;
          res.set_content(j.dump(), "application/json");
        });

    server_.Post("/api/run", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_run(req.body, config_));
    });
    server_.Get(R"(/api/lessons/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_lesson(req.matches[1].str(), config_, req.get_header_value("If-None-Match")));
    });
    server_.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
      send(res, handle_health());
    });
    server_.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, If-None-Match");
    });
  }

  const ServiceConfig& config() const { return config_; }

  /// Blocks serving on the configured host and port.
  bool listen() { return server_.listen(config_.host, config_.port); }

  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_to_any_port() { return server_.bind_to_any_port(config_.host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  void stop() { server_.stop(); }

 private:
  ServiceConfig config_;
  httplib::Server server_;

  static void send(httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    for (const auto& [k, v] : reply.headers) res.set_header(k, v);
    if (reply.status != 304) res.set_content(reply.body, reply.content_type);
  }
};

}  // namespace madeup
