#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "madeup/diagnostic.hpp"

namespace madeup {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp { add, sub, mul, div, pow, eq, ne, lt, le, gt, ge };

inline const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "^";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
  }
  return "?";
}

struct NumberLit {
  double value;
};
struct Ident {
  std::string name;
};
struct Unary {
  ExprPtr operand;  // negation is the only unary operator
};
struct Binary {
  BinaryOp op;
  ExprPtr left;
  ExprPtr right;
};
struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};
struct Assign {
  std::string name;
  ExprPtr rhs;
};
struct FuncDef {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
};
struct Block {
  std::vector<ExprPtr> statements;
};
struct Repeat {
  ExprPtr count;
  ExprPtr body;  // Block
};
struct ForTo {
  std::string var;
  ExprPtr limit;
  ExprPtr body;
};
struct ForIn {
  std::string var;
  ExprPtr lo;
  ExprPtr hi;
  ExprPtr body;
};
struct If {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;  // null when absent
};

struct Expr {
  using Node =
      std::variant<NumberLit, Ident, Unary, Binary, Call, Assign, FuncDef, Block, Repeat, ForTo,
                   ForIn, If>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

/// A parsed program: always a top-level Block.
struct Program {
  ExprPtr root;

  const Block& block() const { return std::get<Block>(root->node); }
};

template <typename T>
ExprPtr make_expr(T node, Span span = {}) {
  return std::make_shared<const Expr>(Expr{std::move(node), span});
}

/// Shape equality: compares node kinds, names, literals, and children; ignores spans.
inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

namespace detail {

inline bool equal_lists(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(a[i], b[i])) return false;
  return true;
}

struct ShapeEqual {
  bool operator()(const NumberLit& a, const NumberLit& b) const { return a.value == b.value; }
  bool operator()(const Ident& a, const Ident& b) const { return a.name == b.name; }
  bool operator()(const Unary& a, const Unary& b) const {
    return structurally_equal(a.operand, b.operand);
  }
  bool operator()(const Binary& a, const Binary& b) const {
    return a.op == b.op && structurally_equal(a.left, b.left) &&
           structurally_equal(a.right, b.right);
  }
  bool operator()(const Call& a, const Call& b) const {
    return a.callee == b.callee && equal_lists(a.args, b.args);
  }
  bool operator()(const Assign& a, const Assign& b) const {
    return a.name == b.name && structurally_equal(a.rhs, b.rhs);
  }
  bool operator()(const FuncDef& a, const FuncDef& b) const {
    return a.name == b.name && a.params == b.params && structurally_equal(a.body, b.body);
  }
  bool operator()(const Block& a, const Block& b) const {
    return equal_lists(a.statements, b.statements);
  }
  bool operator()(const Repeat& a, const Repeat& b) const {
    return structurally_equal(a.count, b.count) && structurally_equal(a.body, b.body);
  }
  bool operator()(const ForTo& a, const ForTo& b) const {
    return a.var == b.var && structurally_equal(a.limit, b.limit) &&
           structurally_equal(a.body, b.body);
  }
  bool operator()(const ForIn& a, const ForIn& b) const {
    return a.var == b.var && structurally_equal(a.lo, b.lo) && structurally_equal(a.hi, b.hi) &&
           structurally_equal(a.body, b.body);
  }
  bool operator()(const If& a, const If& b) const {
    return structurally_equal(a.cond, b.cond) && structurally_equal(a.then_branch, b.then_branch) &&
           structurally_equal(a.else_branch, b.else_branch);
  }
  template <typename A, typename B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

}  // namespace detail

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return std::visit(detail::ShapeEqual{}, a->node, b->node);
}

inline bool structurally_equal(const Program& a, const Program& b) {
  return structurally_equal(a.root, b.root);
}

}  // namespace madeup
