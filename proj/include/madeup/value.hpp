#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "madeup/ast.hpp"

namespace madeup {

struct Scope;
struct Closure;

struct Nothing {
  bool operator==(const Nothing&) const = default;
};

/// Dynamically typed runtime value.
class Value {
 public:
  using Storage = std::variant<Nothing, double, bool, std::shared_ptr<const Closure>>;

  Value() = default;
  Value(double n) : v_(n) {}
  Value(bool b) : v_(b) {}
  Value(std::shared_ptr<const Closure> c) : v_(std::move(c)) {}

  bool is_nothing() const { return std::holds_alternative<Nothing>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_boolean() const { return std::holds_alternative<bool>(v_); }
  bool is_closure() const { return std::holds_alternative<std::shared_ptr<const Closure>>(v_); }

  double number() const { return std::get<double>(v_); }
  bool boolean() const { return std::get<bool>(v_); }
  const std::shared_ptr<const Closure>& closure() const {
    return std::get<std::shared_ptr<const Closure>>(v_);
  }

  const char* type_name() const {
    static constexpr const char* names[] = {"nothing", "number", "boolean", "function"};
    return names[v_.index()];
  }

  /// Numbers and booleans compare by value, closures by identity.
  bool operator==(const Value& o) const { return v_ == o.v_; }

 private:
  Storage v_;
};

/// One level of bindings. Scopes reachable through `parent` are frozen snapshots.
struct Scope {
  std::unordered_map<std::string, Value> bindings;
  std::shared_ptr<const Scope> parent;
};

struct Closure {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  std::shared_ptr<const Scope> captured;
};

/// Chain of scopes; only the innermost is writable.
class Environment {
 public:
  Environment() : current_(std::make_shared<Scope>()) {}
  explicit Environment(std::shared_ptr<Scope> scope) : current_(std::move(scope)) {}

  const Value* lookup(const std::string& name) const {
    for (const Scope* s = current_.get(); s != nullptr; s = s->parent.get()) {
      if (auto it = s->bindings.find(name); it != s->bindings.end()) return &it->second;
    }
    return nullptr;
  }

  void assign(const std::string& name, Value v) { current_->bindings[name] = std::move(v); }

  /// Frozen copy of everything visible right now. The innermost scope is copied; outer
  /// scopes are already immutable and are shared.
  std::shared_ptr<const Scope> snapshot() const {
    return std::make_shared<const Scope>(Scope{current_->bindings, current_->parent});
  }

  const Scope& current() const { return *current_; }

 private:
  std::shared_ptr<Scope> current_;
};

}  // namespace madeup
