#pragma once

#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "madeup/ast.hpp"
#include "madeup/diagnostic.hpp"
#include "madeup/lexer.hpp"

namespace madeup {

namespace detail {

struct ParseFailure {
  Diagnostic diagnostic;
  bool at_end = false;
};

// Recursive-descent parser. Binding strength, tightest first: parentheses, juxtaposed
// application `f a b`, `^` (right associative), unary minus, `* /`, `+ -`, comparisons.
class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  Program parse_program() {
    std::vector<ExprPtr> statements;
    skip_newlines();
    while (!at_end()) {
      statements.push_back(parse_statement());
      expect_terminator();
      skip_newlines();
    }
    return Program{make_expr(Block{std::move(statements)}, Span{1, 1})};
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  bool check(TokenKind kind) const { return !at_end() && tokens_[pos_].kind == kind; }
  bool check(TokenKind kind, std::string_view text) const {
    return !at_end() && tokens_[pos_].is(kind, text);
  }
  bool check_keyword(std::string_view kw) const { return check(TokenKind::keyword, kw); }
  const Token& advance() { return tokens_[pos_++]; }

  Span end_span() const {
    if (tokens_.empty()) return {1, 1};
    const Token& last = tokens_.back();
    if (last.kind == TokenKind::newline) return {last.span.line + 1, 1};
    return {last.span.line, last.span.column + last.lexeme.size()};
  }

  [[noreturn]] void fail(const std::string& message) const {
    if (at_end())
      throw ParseFailure{{Severity::error, message + " at end of input", end_span()}, true};
    throw ParseFailure{{Severity::error, message, tokens_[pos_].span}, false};
  }

  [[noreturn]] void unexpected() const {
    if (at_end()) fail("unexpected end of input");
    const Token& t = tokens_[pos_];
    fail(t.kind == TokenKind::newline ? std::string("unexpected end of line")
                                      : "unexpected '" + t.lexeme + "'");
  }

  const Token& expect(TokenKind kind, std::string_view text, const std::string& what) {
    if (!check(kind, text)) fail("expected " + what);
    return advance();
  }

  void skip_newlines() {
    while (check(TokenKind::newline)) ++pos_;
  }

  void expect_terminator() {
    if (at_end() || check(TokenKind::newline) || check_keyword("end") || check_keyword("else"))
      return;
    unexpected();
  }

  void expect_header_end(const char* what) {
    if (at_end()) fail("expected newline after " + std::string(what));
    if (!check(TokenKind::newline)) fail("expected newline after " + std::string(what));
    ++pos_;
  }

  [[noreturn]] static void unterminated(const Token& opener) {
    throw ParseFailure{{Severity::error,
                        "unterminated block: '" + opener.lexeme + "' without matching 'end'",
                        opener.span},
                       false};
  }

  // Statements up to (not including) `end` or, when allowed, `else`.
  ExprPtr parse_block(const Token& opener, bool allow_else) {
    std::vector<ExprPtr> statements;
    skip_newlines();
    const Span span = at_end() ? end_span() : tokens_[pos_].span;
    while (true) {
      if (at_end()) unterminated(opener);
      if (check_keyword("end") || (allow_else && check_keyword("else"))) break;
      statements.push_back(parse_statement());
      expect_terminator();
      skip_newlines();
    }
    if (statements.empty()) fail("empty block in '" + opener.lexeme + "'");
    return make_expr(Block{std::move(statements)}, span);
  }

  template <typename F>
  ExprPtr guarded(const Token& opener, F&& body) {
    try {
      return body();
    } catch (const ParseFailure& f) {
      if (f.at_end) unterminated(opener);
      throw;
    }
  }

  ExprPtr parse_statement() {
    if (check_keyword("repeat")) return parse_repeat();
    if (check_keyword("for")) return parse_for();
    if (check_keyword("if")) return parse_if();
    if (check(TokenKind::word)) {
      std::size_t words = 0;
      while (peek(words) && peek(words)->kind == TokenKind::word) ++words;
      const Token* after = peek(words);
      if (after && after->is(TokenKind::op, "=")) {
        return words == 1 ? parse_assign() : parse_funcdef(words);
      }
    }
    return parse_expr();
  }

  ExprPtr parse_assign() {
    const Token& name = advance();
    ++pos_;  // '='
    if (at_end() || check(TokenKind::newline)) fail("expected expression after '='");
    return make_expr(Assign{name.lexeme, parse_statement()}, name.span);
  }

  ExprPtr parse_funcdef(std::size_t words) {
    const Token& name = advance();
    std::vector<std::string> params;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < words; ++i) {
      const Token& p = advance();
      if (!seen.insert(p.lexeme).second)
        throw ParseFailure{
            {Severity::error, "duplicate parameter '" + p.lexeme + "' in '" + name.lexeme + "'",
             p.span},
            false};
      params.push_back(p.lexeme);
    }
    ++pos_;  // '='
    if (at_end() || check(TokenKind::newline)) {
      // Multi-line body closed by `end`.
      return guarded(name, [&] {
        expect_header_end("function header");
        auto body = parse_block(name, false);
        expect(TokenKind::keyword, "end", "'end'");
        return make_expr(FuncDef{name.lexeme, std::move(params), std::move(body)}, name.span);
      });
    }
    auto body = parse_statement();
    return make_expr(FuncDef{name.lexeme, std::move(params), std::move(body)}, name.span);
  }

  ExprPtr parse_repeat() {
    const Token& kw = advance();
    return guarded(kw, [&] {
      auto count = parse_expr();
      expect_header_end("repeat count");
      auto body = parse_block(kw, false);
      expect(TokenKind::keyword, "end", "'end'");
      return make_expr(Repeat{std::move(count), std::move(body)}, kw.span);
    });
  }

  ExprPtr parse_for() {
    const Token& kw = advance();
    return guarded(kw, [&] {
      if (!check(TokenKind::word)) fail("expected loop variable after 'for'");
      const std::string var = advance().lexeme;
      if (check_keyword("to")) {
        ++pos_;
        auto limit = parse_expr();
        expect_header_end("loop bound");
        auto body = parse_block(kw, false);
        expect(TokenKind::keyword, "end", "'end'");
        return make_expr(ForTo{var, std::move(limit), std::move(body)}, kw.span);
      }
      if (check_keyword("in")) {
        ++pos_;
        auto lo = parse_expr();
        expect(TokenKind::range, "..", "'..' in range");
        auto hi = parse_expr();
        expect_header_end("loop range");
        auto body = parse_block(kw, false);
        expect(TokenKind::keyword, "end", "'end'");
        return make_expr(ForIn{var, std::move(lo), std::move(hi), std::move(body)}, kw.span);
      }
      fail("expected 'to' or 'in' after loop variable");
    });
  }

  ExprPtr parse_if() {
    const Token& kw = advance();
    return guarded(kw, [&] {
      auto cond = parse_expr();
      expect_header_end("condition");
      auto then_branch = parse_block(kw, true);
      ExprPtr else_branch;
      if (check_keyword("else")) {
        const Token& else_kw = advance();
        expect_header_end("'else'");
        else_branch = parse_block(else_kw, false);
      }
      expect(TokenKind::keyword, "end", "'end'");
      return make_expr(If{std::move(cond), std::move(then_branch), std::move(else_branch)},
                       kw.span);
    });
  }

  static bool comparison_op(const Token& t, BinaryOp& op) {
    if (t.kind != TokenKind::op) return false;
    if (t.lexeme == "==") op = BinaryOp::eq;
    else if (t.lexeme == "!=") op = BinaryOp::ne;
    else if (t.lexeme == "<") op = BinaryOp::lt;
    else if (t.lexeme == "<=") op = BinaryOp::le;
    else if (t.lexeme == ">") op = BinaryOp::gt;
    else if (t.lexeme == ">=") op = BinaryOp::ge;
    else return false;
    return true;
  }

  ExprPtr parse_expr() {
    auto left = parse_additive();
    BinaryOp op;
    while (!at_end() && comparison_op(tokens_[pos_], op)) {
      const Span span = advance().span;
      left = make_expr(Binary{op, left, parse_additive()}, span);
    }
    return left;
  }

  ExprPtr parse_additive() {
    auto left = parse_multiplicative();
    while (check(TokenKind::op, "+") || check(TokenKind::op, "-")) {
      const Token& t = advance();
      const BinaryOp op = t.lexeme == "+" ? BinaryOp::add : BinaryOp::sub;
      left = make_expr(Binary{op, left, parse_multiplicative()}, t.span);
    }
    return left;
  }

  ExprPtr parse_multiplicative() {
    auto left = parse_unary();
    while (check(TokenKind::op, "*") || check(TokenKind::op, "/")) {
      const Token& t = advance();
      const BinaryOp op = t.lexeme == "*" ? BinaryOp::mul : BinaryOp::div;
      left = make_expr(Binary{op, left, parse_unary()}, t.span);
    }
    return left;
  }

  ExprPtr parse_unary() {
    if (check(TokenKind::op, "-")) {
      const Span span = advance().span;
      auto operand = parse_unary();
      if (const auto* lit = operand->as<NumberLit>()) return make_expr(NumberLit{-lit->value}, span);
      return make_expr(Unary{std::move(operand)}, span);
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    auto base = parse_application();
    if (check(TokenKind::op, "^")) {
      const Span span = advance().span;
      return make_expr(Binary{BinaryOp::pow, std::move(base), parse_unary()}, span);
    }
    return base;
  }

  // `-` separated from the previous token but glued to a following number: `moveto 1 -2 3`.
  bool at_prefix_minus() const {
    if (!check(TokenKind::op, "-") || pos_ == 0) return false;
    const Token* next = peek(1);
    const Token& minus = tokens_[pos_];
    return next && next->kind == TokenKind::number && next->offset == minus.end_offset() &&
           tokens_[pos_ - 1].end_offset() < minus.offset;
  }

  bool at_argument_start() const {
    return check(TokenKind::number) || check(TokenKind::word) || check(TokenKind::lparen) ||
           at_prefix_minus();
  }

  ExprPtr parse_application() {
    if (!check(TokenKind::word)) return parse_atom();
    const Token& callee = advance();
    std::vector<ExprPtr> args;
    while (at_argument_start()) {
      if (at_prefix_minus()) {
        const Span span = advance().span;
        args.push_back(make_expr(NumberLit{-number_value(advance())}, span));
      } else {
        args.push_back(parse_atom());
      }
    }
    if (args.empty()) return make_expr(Ident{callee.lexeme}, callee.span);
    return make_expr(Call{callee.lexeme, std::move(args)}, callee.span);
  }

  static double number_value(const Token& t) {
    double v = 0.0;
    std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
    return v;
  }

  ExprPtr parse_atom() {
    if (check(TokenKind::number)) {
      const Token& t = advance();
      return make_expr(NumberLit{number_value(t)}, t.span);
    }
    if (check(TokenKind::word)) {
      const Token& t = advance();
      return make_expr(Ident{t.lexeme}, t.span);
    }
    if (check(TokenKind::lparen)) {
      ++pos_;
      auto inner = parse_expr();
      expect(TokenKind::rparen, ")", "')'");
      return inner;
    }
    unexpected();
  }

};

}  // namespace detail

/// Parses a token stream into a Program. Reports the first syntax error.
inline Result<Program> parse(const std::vector<Token>& tokens) {
  try {
    return detail::Parser(tokens).parse_program();
  } catch (const detail::ParseFailure& f) {
    return std::vector<Diagnostic>{f.diagnostic};
  }
}

/// Normalizes line endings, tokenizes, and parses.
inline Result<Program> parse_source(std::string_view source) {
  const std::string text = normalize_newlines(source);
  auto tokens = tokenize(text);
  if (!tokens) return tokens.diagnostics();
  return parse(tokens.value());
}

}  // namespace madeup
