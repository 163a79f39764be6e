#include <iostream>

#include <CLI11.hpp>

#include "madeup/service.hpp"

int main(int argc, char** argv) {
  madeup::ServiceConfig config;
  CLI::App app{"Madeup compile-and-mesh service", "madeup-serve"};
  std::string lessons_dir = config.lessons_dir.string();
  long long budget_ms = config.time_budget.count();
  app.add_option("--host", config.host, "Interface to bind");
  app.add_option("--port", config.port, "TCP port")->check(CLI::Range(0, 65535));
  app.add_option("--lessons-dir", lessons_dir, "Directory of <id>.muplesson files");
  app.add_option("--max-body-bytes", config.max_body_bytes, "Largest accepted request body")
      ->check(CLI::PositiveNumber);
  app.add_option("--time-budget-ms", budget_ms, "Wall-clock budget per run")
      ->check(CLI::PositiveNumber);
  app.add_option("--cors-origin", config.cors_origin, "Access-Control-Allow-Origin value");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  config.lessons_dir = lessons_dir;
  config.time_budget = std::chrono::milliseconds(budget_ms);

  madeup::Service service(config);
  std::cerr << "madeup-serve listening on " << config.host << ":" << config.port << "\n";
  if (!service.listen()) {
    std::cerr << "error: cannot listen on " << config.host << ":" << config.port << "\n";
    return 1;
  }
  return 0;
}
