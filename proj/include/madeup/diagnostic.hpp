#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace madeup {

/// 1-based source position. Columns count code points.
struct Span {
  std::size_t line = 1;
  std::size_t column = 1;

  constexpr auto operator<=>(const Span&) const = default;
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string message;
  Span span;
};

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

/// Renders `file:line:column: severity: message`.
inline std::string format_diagnostic(const Diagnostic& d, const std::string& file = "<input>") {
  return file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
         to_string(d.severity) + ": " + d.message;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << format_diagnostic(d);
}

/// Either a value or the diagnostics explaining why there is none.
template <typename T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}
  Result(std::vector<Diagnostic> diagnostics) : state_(std::move(diagnostics)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  T& value() & { return std::get<T>(state_); }
  const T& value() const& { return std::get<T>(state_); }
  T&& value() && { return std::get<T>(std::move(state_)); }

  const std::vector<Diagnostic>& diagnostics() const {
    static const std::vector<Diagnostic> none;
    return ok() ? none : std::get<std::vector<Diagnostic>>(state_);
  }

 private:
  std::variant<T, std::vector<Diagnostic>> state_;
};

}  // namespace madeup
