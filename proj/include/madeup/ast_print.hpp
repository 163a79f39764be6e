#pragma once

#include <charconv>
#include <string>

#include "madeup/ast.hpp"

namespace madeup {

/// Shortest decimal (never exponent) form that reads back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

namespace detail {

inline void sexpr(const ExprPtr& e, std::string& out);

inline void sexpr_list(const char* head, std::initializer_list<const ExprPtr*> kids,
                       std::string& out, const std::string& label = {}) {
  out += '(';
  out += head;
  if (!label.empty()) out += ' ' + label;
  for (const ExprPtr* k : kids) {
    if (!*k) continue;
    out += ' ';
    sexpr(*k, out);
  }
  out += ')';
}

struct SexprVisitor {
  std::string& out;

  void operator()(const NumberLit& n) const { out += format_number(n.value); }
  void operator()(const Ident& i) const { out += i.name; }
  void operator()(const Unary& u) const { sexpr_list("neg", {&u.operand}, out); }
  void operator()(const Binary& b) const { sexpr_list(to_string(b.op), {&b.left, &b.right}, out); }
  void operator()(const Call& c) const {
    out += "(call " + c.callee;
    for (const auto& a : c.args) {
      out += ' ';
      sexpr(a, out);
    }
    out += ')';
  }
  void operator()(const Assign& a) const { sexpr_list("assign", {&a.rhs}, out, a.name); }
  void operator()(const FuncDef& f) const {
    std::string params = "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) params += (i ? " " : "") + f.params[i];
    params += ')';
    sexpr_list("def", {&f.body}, out, f.name + " " + params);
  }
  void operator()(const Block& b) const {
    out += "(block";
    for (const auto& s : b.statements) {
      out += ' ';
      sexpr(s, out);
    }
    out += ')';
  }
  void operator()(const Repeat& r) const { sexpr_list("repeat", {&r.count, &r.body}, out); }
  void operator()(const ForTo& f) const { sexpr_list("for-to", {&f.limit, &f.body}, out, f.var); }
  void operator()(const ForIn& f) const {
    sexpr_list("for-in", {&f.lo, &f.hi, &f.body}, out, f.var);
  }
  void operator()(const If& i) const {
    sexpr_list("if", {&i.cond, &i.then_branch, &i.else_branch}, out);
  }
};

inline void sexpr(const ExprPtr& e, std::string& out) { std::visit(SexprVisitor{out}, e->node); }

}  // namespace detail

inline std::string to_sexpr(const ExprPtr& e) {
  std::string out;
  detail::sexpr(e, out);
  return out;
}

/// One-line s-expression of a program. A single top-level statement is printed bare.
inline std::string to_sexpr(const Program& p) {
  const auto& stmts = p.block().statements;
  if (stmts.size() == 1) return to_sexpr(stmts.front());
  return to_sexpr(p.root);
}

namespace detail {

inline std::string source_expr(const ExprPtr& e);
inline void source_stmt(const ExprPtr& e, int indent, std::string& out);

inline std::string source_atom(const ExprPtr& e) {
  if (const auto* n = e->as<NumberLit>(); n && n->value >= 0.0) return format_number(n->value);
  if (const auto* i = e->as<Ident>()) return i->name;
  return "(" + source_expr(e) + ")";
}

// Expressions only; every compound operand is parenthesized so the text reparses to the
// same tree regardless of precedence.
inline std::string source_expr(const ExprPtr& e) {
  if (const auto* n = e->as<NumberLit>()) return format_number(n->value);
  if (const auto* i = e->as<Ident>()) return i->name;
  if (const auto* u = e->as<Unary>()) return "-" + source_atom(u->operand);
  if (const auto* b = e->as<Binary>())
    return source_atom(b->left) + " " + to_string(b->op) + " " + source_atom(b->right);
  if (const auto* c = e->as<Call>()) {
    std::string s = c->callee;
    for (const auto& a : c->args) s += " " + source_atom(a);
    return s;
  }
  std::string s;
  source_stmt(e, 0, s);
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

inline void source_block(const ExprPtr& block, int indent, std::string& out) {
  for (const auto& s : std::get<Block>(block->node).statements) source_stmt(s, indent, out);
}

inline void source_stmt(const ExprPtr& e, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const auto end = [&] { out += pad + "end\n"; };
  if (const auto* a = e->as<Assign>()) {
    std::string rhs;
    source_stmt(a->rhs, indent, rhs);
    out += pad + a->name + " = " + rhs.substr(pad.size());
  } else if (const auto* f = e->as<FuncDef>()) {
    out += pad + f->name;
    for (const auto& p : f->params) out += " " + p;
    if (f->body->is<Block>()) {
      out += " =\n";
      source_block(f->body, indent + 1, out);
      end();
    } else {
      std::string body;
      source_stmt(f->body, indent, body);
      out += " = " + body.substr(pad.size());
    }
  } else if (const auto* r = e->as<Repeat>()) {
    out += pad + "repeat " + source_expr(r->count) + "\n";
    source_block(r->body, indent + 1, out);
    end();
  } else if (const auto* f = e->as<ForTo>()) {
    out += pad + "for " + f->var + " to " + source_expr(f->limit) + "\n";
    source_block(f->body, indent + 1, out);
    end();
  } else if (const auto* f = e->as<ForIn>()) {
    out += pad + "for " + f->var + " in " + source_expr(f->lo) + ".." + source_expr(f->hi) + "\n";
    source_block(f->body, indent + 1, out);
    end();
  } else if (const auto* i = e->as<If>()) {
    out += pad + "if " + source_expr(i->cond) + "\n";
    source_block(i->then_branch, indent + 1, out);
    if (i->else_branch) {
      out += pad + "else\n";
      source_block(i->else_branch, indent + 1, out);
    }
    end();
  } else if (e->is<Block>()) {
    source_block(e, indent, out);
  } else {
    out += pad + source_expr(e) + "\n";
  }
}

}  // namespace detail

/// Renders a program back to Madeup source that parses to a structurally identical tree.
inline std::string to_source(const Program& p) {
  std::string out;
  detail::source_block(p.root, 0, out);
  return out;
}

}  // namespace madeup
