#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "madeup/interpreter.hpp"
#include "test_support.hpp"

using namespace madeup;
using madeup::testing::eval_source;
using madeup::testing::parse_ok;

namespace {

double number_of(const std::string& src) {
  Value v = eval_source(src);
  EXPECT_TRUE(v.is_number()) << src << " gave " << v.type_name();
  return v.is_number() ? v.number() : NAN;
}

RuntimeError error_of(const std::string& src, const EvalLimits& limits = {}) {
  try {
    eval_source(src, nullptr, limits);
  } catch (const RuntimeError& e) {
    return e;
  }
  ADD_FAILURE() << "no runtime error for: " << src;
  return RuntimeError("", {});
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Evaluate, BlockYieldsLastStatement) { EXPECT_EQ(number_of("x = 1\nx + 1"), 2.0); }

TEST(Evaluate, AssignmentYieldsAssignedValue) { EXPECT_EQ(number_of("y = 7"), 7.0); }

TEST(Evaluate, EmptyProgramIsNothing) { EXPECT_TRUE(eval_source("").is_nothing()); }

TEST(Evaluate, ClosureCapturesSnapshot) {
  EXPECT_EQ(number_of("a = 2\nf x = a * x\na = 5\nf 3"), 6.0);
}

TEST(Evaluate, ClosureAssignmentsStayLocal) {
  EXPECT_EQ(number_of("a = 1\nbump x =\n  a = a + x\n  a\nend\nbump 10\nbump 10\na"), 1.0);
  EXPECT_EQ(number_of("a = 1\nbump x =\n  a = a + x\n  a\nend\nbump 10"), 11.0);
}

TEST(Evaluate, FunctionDefinitionYieldsClosure) {
  Value v = eval_source("f x = x");
  ASSERT_TRUE(v.is_closure());
  EXPECT_EQ(v.closure()->params, std::vector<std::string>{"x"});
}

TEST(Evaluate, Recursion) {
  EXPECT_EQ(number_of("fact n =\n  if n <= 1\n    1\n  else\n    n * fact (n - 1)\n  end\nend\nfact 5"),
            120.0);
}

TEST(Evaluate, PythagoreanLength) {
  EXPECT_EQ(number_of("length a b = (a * a + b * b) ^ 0.5\nlength 3 4"), 5.0);
}

TEST(Evaluate, RepeatYieldsLastIteration) {
  EXPECT_EQ(number_of("i = 0\nrepeat 3\n  i = i + 1\n  i * 10\nend"), 30.0);
}

TEST(Evaluate, ZeroIterationLoopsYieldNothing) {
  EXPECT_TRUE(eval_source("repeat 0\n  1\nend").is_nothing());
  EXPECT_TRUE(eval_source("repeat -3\n  1\nend").is_nothing());
  EXPECT_TRUE(eval_source("for i to -1\n  1\nend").is_nothing());
  EXPECT_TRUE(eval_source("for i in 5..4\n  1\nend").is_nothing());
}

TEST(Evaluate, ForToIsInclusiveFromZero) {
  EXPECT_EQ(number_of("s = 0\nfor i to 4\n  s = s + i\nend\ns"), 10.0);
  EXPECT_EQ(number_of("n = 0\nfor i to 4\n  n = n + 1\nend"), 5.0);
}

TEST(Evaluate, ForInIsInclusive) {
  EXPECT_EQ(number_of("s = 0\nfor i in 3..6\n  s = s + i\nend"), 18.0);
  EXPECT_EQ(number_of("for i in 2..2\n  i\nend"), 2.0);
}

TEST(Evaluate, ConditionalYieldsExecutedBranch) {
  EXPECT_EQ(number_of("if 2 > 1\n  10\nelse\n  20\nend"), 10.0);
  EXPECT_EQ(number_of("if 2 < 1\n  10\nelse\n  20\nend"), 20.0);
  EXPECT_TRUE(eval_source("if false\n  10\nend").is_nothing());
}

TEST(Evaluate, ComparisonsAndEquality) {
  EXPECT_TRUE(eval_source("1 == 1").boolean());
  EXPECT_FALSE(eval_source("1 != 1").boolean());
  EXPECT_TRUE(eval_source("true == (2 > 1)").boolean());
  EXPECT_FALSE(eval_source("1 == true").boolean());
  EXPECT_TRUE(eval_source("2 >= 2").boolean());
}

TEST(Evaluate, NonIntegralRepeatTruncatesWithWarning) {
  Program p = parse_ok("n = 0\nrepeat 2.7\n  n = n + 1\nend");
  Turtle t;
  Environment env;
  std::vector<Diagnostic> warnings;
  Value v = evaluate(p, env, t, {}, &warnings);
  EXPECT_EQ(v.number(), 2.0);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].severity, Severity::warning);
  EXPECT_EQ(warnings[0].span, (Span{2, 1}));
}

TEST(Evaluate, LoopVariablesLiveInEnclosingScope) {
  EXPECT_EQ(number_of("for i to 3\n  i\nend\ni"), 3.0);
}

TEST(Evaluate, FunctionValueWithoutArgumentsIsNotCalled) {
  Value v = eval_source("f x = x\ng = f\ng 4");
  EXPECT_EQ(v.number(), 4.0);
}

TEST(Evaluate, NavigationBuiltinsReturnNothing) {
  Turtle t;
  EXPECT_TRUE(eval_source("move 10", &t).is_nothing());
  EXPECT_EQ(t.vertex_count(), 2u);
  EXPECT_TRUE(eval_source("yaw 90").is_nothing());
}

TEST(Builtins, Trigonometry) {
  EXPECT_NEAR(number_of("sin (pi / 2)"), 1.0, 1e-12);
  EXPECT_EQ(number_of("cos 0"), 1.0);
  EXPECT_NEAR(number_of("tan (pi / 4)"), 1.0, 1e-12);
}

TEST(Builtins, PowerHalfIsSquareRoot) {
  // Reference value: sqrt(2) to 30 digits = 1.41421356237309504880168872421.
  EXPECT_NEAR(number_of("2 ^ 0.5"), 1.4142135623730951, 1e-15);
}

TEST(Builtins, Rounding) {
  EXPECT_EQ(number_of("abs -3.5"), 3.5);
  EXPECT_EQ(number_of("floor 2.7"), 2.0);
  EXPECT_EQ(number_of("ceil 2.1"), 3.0);
  EXPECT_EQ(number_of("floor -2.5"), -3.0);
}

TEST(Builtins, DirectApplication) {
  const Value args[] = {Value(0.0)};
  EXPECT_EQ(apply_builtin("cos", args).number(), 1.0);
  EXPECT_NEAR(apply_builtin("pi", {}).number(), 3.141592653589793, 0.0);
  EXPECT_THROW(apply_builtin("sqrt", args), RuntimeError);
  EXPECT_THROW(apply_builtin("sin", {}), RuntimeError);
  const Value wrong[] = {Value(true)};
  EXPECT_THROW(apply_builtin("abs", wrong), RuntimeError);
}

TEST(Builtins, UserDefinitionsShadowBuiltins) {
  EXPECT_EQ(number_of("sin x = 42\nsin 0"), 42.0);
}

TEST(RuntimeErrors, UndefinedName) {
  auto e = error_of("x = 1\ny + 1");
  EXPECT_TRUE(contains(e.what(), "undefined name 'y'"));
  EXPECT_EQ(e.span(), (Span{2, 1}));
}

TEST(RuntimeErrors, ArityMismatch) {
  EXPECT_TRUE(contains(error_of("f a b = a\nf 1").what(), "expects 2 arguments but got 1"));
  EXPECT_TRUE(contains(error_of("f a = a\nf 1 2").what(), "expects 1 argument but got 2"));
  EXPECT_TRUE(contains(error_of("moveto 1 2").what(), "'moveto' expects 3"));
}

TEST(RuntimeErrors, TypeErrors) {
  EXPECT_TRUE(contains(error_of("if 1\n  2\nend").what(), "condition must be a boolean"));
  EXPECT_TRUE(contains(error_of("repeat true\n  1\nend").what(), "repeat count must be a number"));
  EXPECT_TRUE(contains(error_of("for i to (1 < 2)\n  1\nend").what(), "loop bound must be a number"));
  EXPECT_TRUE(contains(error_of("true + 1").what(), "operand of '+'"));
  EXPECT_TRUE(contains(error_of("x = 3\nx 4").what(), "not a function"));
}

TEST(RuntimeErrors, NonFiniteArithmetic) {
  EXPECT_TRUE(contains(error_of("1 / 0").what(), "division by zero"));
  EXPECT_TRUE(contains(error_of("10 ^ 400").what(), "non-finite"));
  EXPECT_TRUE(contains(error_of("(-8) ^ 0.5").what(), "non-finite"));
}

TEST(RuntimeErrors, StepLimit) {
  EvalLimits limits;
  limits.max_steps = 1000;
  auto e = error_of("repeat 1000000\n  x = 1\nend", limits);
  EXPECT_TRUE(contains(e.what(), "step limit exceeded"));
}

TEST(RuntimeErrors, VertexLimit) {
  EvalLimits limits;
  limits.max_vertices = 10;
  EXPECT_TRUE(contains(error_of("repeat 100\n  move 1\nend", limits).what(), "vertex limit exceeded"));
}

TEST(RuntimeErrors, RunawayRecursion) {
  EXPECT_TRUE(contains(error_of("f n = f (n + 1)\nf 0").what(), "call depth limit exceeded"));
}

TEST(RuntimeErrors, Deadline) {
  EvalLimits limits;
  limits.max_steps = 1'000'000'000;
  limits.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(50);
  EXPECT_TRUE(contains(error_of("repeat 1000000000\n  x = 1\nend", limits).what(), "time limit exceeded"));
}

TEST(RuntimeErrors, ZeroLimitsRejected) {
  Turtle t;
  EvalLimits limits;
  limits.max_steps = 0;
  EXPECT_THROW((Interpreter<Turtle>(t, limits)), std::invalid_argument);
}

// Step counting is monotone: for a fixed program, failing under a limit implies failing
// under every smaller one.
TEST(EvaluateProperty, StepLimitMonotone) {
  const std::string src = "s = 0\nfor i to 20\n  s = s + i * i\nend";
  Program p = parse_ok(src);
  std::size_t needed = 0;
  {
    Turtle t;
    Environment env;
    Interpreter<Turtle> interp(t, {});
    interp.run(p, env);
    needed = interp.steps();
  }
  for (std::size_t limit = 1; limit <= needed + 5; ++limit) {
    Turtle t;
    Environment env;
    EvalLimits limits;
    limits.max_steps = limit;
    bool failed = false;
    try {
      evaluate(p, env, t, limits);
    } catch (const RuntimeError&) {
      failed = true;
    }
    EXPECT_EQ(failed, limit < needed) << "limit " << limit;
  }
}

namespace {

// Random straight-line blocks over a few variables; no navigation or definitions.
std::vector<std::string> random_body(std::mt19937& rng) {
  const char* vars[] = {"a", "b", "c"};
  std::uniform_int_distribution<int> var(0, 2), kind(0, 3), lit(1, 9), len(1, 4);
  std::vector<std::string> lines;
  for (int n = len(rng); n > 0; --n) {
    const std::string v = vars[var(rng)], w = vars[var(rng)];
    switch (kind(rng)) {
      case 0: lines.push_back(v + " = " + w + " + " + std::to_string(lit(rng))); break;
      case 1: lines.push_back(v + " = " + w + " * 0.5 - " + std::to_string(lit(rng))); break;
      case 2: lines.push_back(w + " - " + v); break;
      default: lines.push_back("if " + v + " > " + w + "\n" + v + " = " + w + "\nelse\n" + w + "\nend");
    }
  }
  return lines;
}

}  // namespace

// `repeat n B` equals B written out n times, checked against the unrolled program.
TEST(EvaluateProperty, RepeatMatchesUnrolledBlock) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto body = random_body(rng);
    const int n = trial % 6;
    const std::string init = "a = 1\nb = 2\nc = 3\n";
    std::string looped = init + "repeat " + std::to_string(n) + "\n";
    for (const auto& l : body) looped += l + "\n";
    looped += "end\n";

    std::string unrolled_block;
    for (int i = 0; i < n; ++i)
      for (const auto& l : body) unrolled_block += l + "\n";

    const Value lv = eval_source(looped);
    if (n == 0) {
      EXPECT_TRUE(lv.is_nothing());
      continue;
    }
    const Value uv = eval_source(init + unrolled_block);
    EXPECT_EQ(lv, uv) << looped;
  }
}

// After `f` is defined, later assignments anywhere never change what `f` returns.
TEST(EvaluateProperty, ClosureIsolation) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> lit(-50, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const int a = lit(rng), b = lit(rng), arg = lit(rng);
    const std::string def = "a = " + std::to_string(a) + "\nb = " + std::to_string(b) +
                            "\nf x = a * x + b\n";
    const double baseline = number_of(def + "f " + std::to_string(arg));
    const std::string noise = "a = " + std::to_string(lit(rng)) + "\nb = " + std::to_string(lit(rng)) +
                              "\ng y =\n  a = 1000\n  b = y\n  f y\nend\ng 3\nx = 99\n";
    EXPECT_EQ(number_of(def + noise + "f " + std::to_string(arg)), baseline);
    EXPECT_EQ(baseline, static_cast<double>(a * arg + b));
  }
}

TEST(Environment, InnermostBindingWins) {
  auto outer = std::make_shared<Scope>();
  outer->bindings["x"] = Value(1.0);
  auto inner = std::make_shared<Scope>();
  inner->parent = outer;
  Environment env(inner);
  EXPECT_EQ(env.lookup("x")->number(), 1.0);
  env.assign("x", Value(2.0));
  EXPECT_EQ(env.lookup("x")->number(), 2.0);
  EXPECT_EQ(outer->bindings["x"].number(), 1.0);
  EXPECT_EQ(env.lookup("nope"), nullptr);
}
