#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "madeup/ast.hpp"
#include "madeup/diagnostic.hpp"
#include "madeup/turtle.hpp"
#include "madeup/value.hpp"

namespace madeup {

/// Resource caps for one evaluation.
struct EvalLimits {
  std::size_t max_steps = 10'000'000;
  std::size_t max_vertices = 5'000'000;
  std::size_t max_call_depth = 1'000;
  // Wall-clock cutoff; unset means unbounded.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class RuntimeError : public std::runtime_error {
 public:
  RuntimeError(const std::string& message, Span span) : std::runtime_error(message), span_(span) {}

  const Span& span() const { return span_; }
  Diagnostic diagnostic() const { return {Severity::error, what(), span_}; }

 private:
  Span span_;
};

/// Receiver for navigation commands issued by a running program.
template <typename S>
concept TurtleSink = requires(S s, double d, std::size_t i) {
  s.move(d);
  s.moveto(d, d, d);
  s.yaw(d);
  s.pitch(d);
  s.roll(d);
  s.emit_face(i, i, i);
  { s.vertex_count() } -> std::convertible_to<std::size_t>;
};

namespace detail {

inline double require_number(const Value& v, std::string_view what, Span at) {
  if (!v.is_number())
    throw RuntimeError(std::string(what) + " must be a number, got " + v.type_name(), at);
  return v.number();
}

inline double require_finite(double x, std::string_view what, Span at) {
  if (!std::isfinite(x)) throw RuntimeError("non-finite result from " + std::string(what), at);
  return x;
}

inline void require_arity(std::string_view name, std::size_t expected, std::size_t got, Span at) {
  if (expected != got)
    throw RuntimeError("'" + std::string(name) + "' expects " + std::to_string(expected) +
                           (expected == 1 ? " argument" : " arguments") + " but got " +
                           std::to_string(got),
                       at);
}

struct MathBuiltin {
  std::string_view name;
  double (*fn)(double);
};

inline constexpr MathBuiltin kMathBuiltins[] = {
    {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},   {"abs", [](double x) { return std::fabs(x); }},
    {"floor", [](double x) { return std::floor(x); }}, {"ceil", [](double x) { return std::ceil(x); }},
};

inline constexpr std::string_view kNavigationBuiltins[] = {"move", "moveto", "yaw",
                                                           "pitch", "roll",   "tri"};

}  // namespace detail

/// True for the pure math builtins and `pi`.
inline bool is_builtin(std::string_view name) {
  if (name == "pi") return true;
  for (const auto& b : detail::kMathBuiltins)
    if (b.name == name) return true;
  return false;
}

/// Pure math builtins. Trigonometric functions take radians.
inline Value apply_builtin(std::string_view name, std::span<const Value> args, Span at = {}) {
  if (name == "pi") {
    detail::require_arity(name, 0, args.size(), at);
    return std::numbers::pi;
  }
  for (const auto& b : detail::kMathBuiltins) {
    if (b.name != name) continue;
    detail::require_arity(name, 1, args.size(), at);
    const double x = detail::require_number(args[0], "argument of '" + std::string(name) + "'", at);
    return detail::require_finite(b.fn(x), "'" + std::string(name) + "'", at);
  }
  throw RuntimeError("unknown builtin '" + std::string(name) + "'", at);
}

/// Tree-walking evaluator. Every construct yields a value: blocks their last statement,
/// loops their final iteration, conditionals the branch taken.
template <TurtleSink Sink>
class Interpreter {
 public:
  Interpreter(Sink& sink, EvalLimits limits = {}) : sink_(sink), limits_(std::move(limits)) {
    if (limits_.max_steps == 0 || limits_.max_vertices == 0)
      throw std::invalid_argument("evaluation limits must be positive");
  }

  Value run(const Program& program, Environment& env) { return eval(*program.root, env); }

  const std::vector<Diagnostic>& warnings() const { return warnings_; }
  std::size_t steps() const { return steps_; }

 private:
  Sink& sink_;
  EvalLimits limits_;
  std::size_t steps_ = 0;
  std::size_t depth_ = 0;
  std::vector<Diagnostic> warnings_;

  void tick(Span at) {
    if (++steps_ > limits_.max_steps)
      throw RuntimeError("step limit exceeded (" + std::to_string(limits_.max_steps) + " steps)",
                         at);
    if (limits_.deadline && (steps_ & 0x3FF) == 0 &&
        std::chrono::steady_clock::now() > *limits_.deadline)
      throw RuntimeError("time limit exceeded", at);
  }

  Value eval(const Expr& e, Environment& env) {
    tick(e.span);
    return std::visit([&](const auto& node) { return eval_node(node, e.span, env); }, e.node);
  }

  Value eval_node(const NumberLit& n, Span, Environment&) { return n.value; }

  Value eval_node(const Ident& id, Span at, Environment& env) {
    if (const Value* v = env.lookup(id.name)) {
      if (v->is_closure() && v->closure()->params.empty()) return call_closure(v->closure(), {}, at);
      return *v;
    }
    if (id.name == "true") return true;
    if (id.name == "false") return false;
    return call_builtin(id.name, {}, at);
  }

  Value eval_node(const Unary& u, Span at, Environment& env) {
    return -detail::require_number(eval(*u.operand, env), "operand of '-'", at);
  }

  Value eval_node(const Binary& b, Span at, Environment& env) {
    const Value lhs = eval(*b.left, env);
    const Value rhs = eval(*b.right, env);
    const char* sym = to_string(b.op);
    if (b.op == BinaryOp::eq) return lhs == rhs;
    if (b.op == BinaryOp::ne) return !(lhs == rhs);
    const std::string what = std::string("operand of '") + sym + "'";
    const double l = detail::require_number(lhs, what, at);
    const double r = detail::require_number(rhs, what, at);
    double result = 0.0;
    switch (b.op) {
      case BinaryOp::add: result = l + r; break;
      case BinaryOp::sub: result = l - r; break;
      case BinaryOp::mul: result = l * r; break;
      case BinaryOp::div:
        if (r == 0.0) throw RuntimeError("division by zero yields a non-finite result", at);
        result = l / r;
        break;
      case BinaryOp::pow: result = std::pow(l, r); break;
      case BinaryOp::lt: return l < r;
      case BinaryOp::le: return l <= r;
      case BinaryOp::gt: return l > r;
      case BinaryOp::ge: return l >= r;
      case BinaryOp::eq:
      case BinaryOp::ne: break;
    }
    return detail::require_finite(result, std::string("'") + sym + "'", at);
  }

  Value eval_node(const Call& c, Span at, Environment& env) {
    std::vector<Value> args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) args.push_back(eval(*a, env));
    if (const Value* v = env.lookup(c.callee)) {
      if (!v->is_closure())
        throw RuntimeError("'" + c.callee + "' is a " + v->type_name() + ", not a function", at);
      return call_closure(v->closure(), args, at);
    }
    return call_builtin(c.callee, args, at);
  }

  Value eval_node(const Assign& a, Span, Environment& env) {
    Value v = eval(*a.rhs, env);
    env.assign(a.name, v);
    return v;
  }

  Value eval_node(const FuncDef& f, Span, Environment& env) {
    auto closure = std::make_shared<const Closure>(Closure{f.name, f.params, f.body, env.snapshot()});
    env.assign(f.name, closure);
    return closure;
  }

  Value eval_node(const Block& b, Span, Environment& env) {
    Value last;
    for (const auto& s : b.statements) last = eval(*s, env);
    return last;
  }

  Value eval_node(const Repeat& r, Span at, Environment& env) {
    double count = detail::require_number(eval(*r.count, env), "repeat count", at);
    if (count != std::trunc(count)) {
      warnings_.push_back({Severity::warning,
                           "repeat count " + std::to_string(count) + " truncated toward zero", at});
      count = std::trunc(count);
    }
    Value last;
    for (double i = 0; i < count; ++i) last = eval(*r.body, env);
    return last;
  }

  Value eval_node(const ForTo& f, Span at, Environment& env) {
    const double limit = detail::require_number(eval(*f.limit, env), "loop bound", at);
    Value last;
    for (double i = 0; i <= limit; ++i) {
      env.assign(f.var, i);
      last = eval(*f.body, env);
    }
    return last;
  }

  Value eval_node(const ForIn& f, Span at, Environment& env) {
    const double lo = detail::require_number(eval(*f.lo, env), "range start", at);
    const double hi = detail::require_number(eval(*f.hi, env), "range end", at);
    Value last;
    for (double i = lo; i <= hi; ++i) {
      env.assign(f.var, i);
      last = eval(*f.body, env);
    }
    return last;
  }

  Value eval_node(const If& i, Span at, Environment& env) {
    const Value cond = eval(*i.cond, env);
    if (!cond.is_boolean())
      throw RuntimeError(std::string("condition must be a boolean, got ") + cond.type_name(), at);
    if (cond.boolean()) return eval(*i.then_branch, env);
    if (i.else_branch) return eval(*i.else_branch, env);
    return {};
  }

  Value call_closure(const std::shared_ptr<const Closure>& fn, std::span<const Value> args,
                     Span at) {
    detail::require_arity(fn->name, fn->params.size(), args.size(), at);
    if (depth_ >= limits_.max_call_depth)
      throw RuntimeError("call depth limit exceeded (" + std::to_string(limits_.max_call_depth) +
                             ")",
                         at);
    auto scope = std::make_shared<Scope>();
    scope->parent = fn->captured;
    // The snapshot predates the function's own binding; bind it so recursion works.
    scope->bindings.emplace(fn->name, Value(fn));
    for (std::size_t i = 0; i < args.size(); ++i) scope->bindings[fn->params[i]] = args[i];
    Environment local(std::move(scope));
    ++depth_;
    struct Unwind {
      std::size_t& d;
      ~Unwind() { --d; }
    } unwind{depth_};
    return eval(*fn->body, local);
  }

  Value call_builtin(const std::string& name, std::span<const Value> args, Span at) {
    for (auto nav : detail::kNavigationBuiltins)
      if (nav == name) return navigate(name, args, at);
    if (!is_builtin(name)) throw RuntimeError("undefined name '" + name + "'", at);
    return apply_builtin(name, args, at);
  }

  Value navigate(const std::string& name, std::span<const Value> args, Span at) {
    const std::size_t arity = (name == "moveto" || name == "tri") ? 3 : 1;
    detail::require_arity(name, arity, args.size(), at);
    double a[3] = {};
    for (std::size_t i = 0; i < arity; ++i)
      a[i] = detail::require_number(args[i], "argument of '" + name + "'", at);
    try {
      if (name == "move") sink_.move(a[0]);
      else if (name == "moveto") sink_.moveto(a[0], a[1], a[2]);
      else if (name == "yaw") sink_.yaw(a[0]);
      else if (name == "pitch") sink_.pitch(a[0]);
      else if (name == "roll") sink_.roll(a[0]);
      else sink_.emit_face(face_index(a[0], at), face_index(a[1], at), face_index(a[2], at));
    } catch (const TurtleError& err) {
      throw RuntimeError(err.what(), at);
    }
    if (sink_.vertex_count() > limits_.max_vertices)
      throw RuntimeError(
          "vertex limit exceeded (" + std::to_string(limits_.max_vertices) + " vertices)", at);
    return {};
  }

  static std::size_t face_index(double x, Span at) {
    if (x < 0 || x != std::floor(x) || x > 4'294'967'295.0)
      throw RuntimeError("face index must be a non-negative integer", at);
    return static_cast<std::size_t>(x);
  }
};

/// Runs `program` in `env`, forwarding navigation to `sink`. Warnings (e.g. a truncated
/// repeat count) are appended to `warnings` when provided.
template <TurtleSink Sink>
Value evaluate(const Program& program, Environment& env, Sink& sink, const EvalLimits& limits = {},
               std::vector<Diagnostic>* warnings = nullptr) {
  Interpreter<Sink> interp(sink, limits);
  try {
    Value v = interp.run(program, env);
    if (warnings) warnings->insert(warnings->end(), interp.warnings().begin(), interp.warnings().end());
    return v;
  } catch (...) {
    if (warnings) warnings->insert(warnings->end(), interp.warnings().begin(), interp.warnings().end());
    throw;
  }
}

}  // namespace madeup
