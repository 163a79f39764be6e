#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "madeup/diagnostic.hpp"

namespace madeup {

enum class TokenKind { word, number, op, range, lparen, rparen, newline, keyword };

struct Token {
  TokenKind kind;
  std::string lexeme;
  Span span;
  // Byte offset of the lexeme in the (LF-normalized) source. Lets the parser tell
  // `f -1` (argument) from `f - 1` (subtraction).
  std::size_t offset = 0;

  std::size_t end_offset() const { return offset + lexeme.size(); }
  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool operator==(const Token& o) const {
    return kind == o.kind && lexeme == o.lexeme && span == o.span && offset == o.offset;
  }
};

inline constexpr std::array<std::string_view, 7> kKeywords = {"repeat", "for", "to", "in",
                                                              "end",    "if",  "else"};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

inline const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::word: return "WORD";
    case TokenKind::number: return "NUMBER";
    case TokenKind::op: return "OPERATOR";
    case TokenKind::range: return "RANGE";
    case TokenKind::lparen: return "LPAREN";
    case TokenKind::rparen: return "RPAREN";
    case TokenKind::newline: return "NEWLINE";
    case TokenKind::keyword: return "KEYWORD";
  }
  return "?";
}

/// Replaces every CRLF pair with LF.
inline std::string normalize_newlines(std::string_view source) {
  std::string out;
  out.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\r' && i + 1 < source.size() && source[i + 1] == '\n') continue;
    out.push_back(source[i]);
  }
  return out;
}

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_word_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_word_char(char c) { return is_word_start(c) || is_digit(c); }

inline std::size_t utf8_sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

}  // namespace detail

/// Splits Madeup source into tokens. Whitespace other than LF is insignificant; a lone
/// CR is treated as whitespace. Every unknown character yields one diagnostic.
inline Result<std::vector<Token>> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::vector<Diagnostic> errors;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t length) {
    tokens.push_back(Token{kind, std::string(source.substr(begin, length)), {line, column}, begin});
    i += length;
    column += length;  // lexemes are ASCII
  };

  while (i < source.size()) {
    const char c = source[i];
    if (c == '\n') {
      push(TokenKind::newline, i, 1);
      ++line;
      column = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++column;
      continue;
    }
    if (detail::is_word_start(c)) {
      std::size_t j = i;
      while (j < source.size() && detail::is_word_char(source[j])) ++j;
      const auto word = source.substr(i, j - i);
      push(is_keyword(word) ? TokenKind::keyword : TokenKind::word, i, j - i);
      continue;
    }
    const bool fraction_start =
        c == '.' && i + 1 < source.size() && detail::is_digit(source[i + 1]);
    if (detail::is_digit(c) || fraction_start) {
      std::size_t j = i;
      while (j < source.size() && detail::is_digit(source[j])) ++j;
      if (j + 1 < source.size() && source[j] == '.' && detail::is_digit(source[j + 1])) {
        ++j;
        while (j < source.size() && detail::is_digit(source[j])) ++j;
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(source.data() + i, source.data() + j, value);
      if (ec != std::errc{} || ptr != source.data() + j || !std::isfinite(value)) {
        errors.push_back({Severity::error,
                          "number literal '" + std::string(source.substr(i, j - i)) +
                              "' is not a finite decimal",
                          {line, column}});
      }
      push(TokenKind::number, i, j - i);
      continue;
    }
    if (c == '.' && i + 1 < source.size() && source[i + 1] == '.') {
      push(TokenKind::range, i, 2);
      continue;
    }
    if (c == '(') {
      push(TokenKind::lparen, i, 1);
      continue;
    }
    if (c == ')') {
      push(TokenKind::rparen, i, 1);
      continue;
    }
    const char next = i + 1 < source.size() ? source[i + 1] : '\0';
    if ((c == '=' || c == '!' || c == '<' || c == '>') && next == '=') {
      push(TokenKind::op, i, 2);
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '=' || c == '<' ||
        c == '>') {
      push(TokenKind::op, i, 1);
      continue;
    }

    const std::size_t width =
        std::min(detail::utf8_sequence_length(static_cast<unsigned char>(c)), source.size() - i);
    errors.push_back({Severity::error,
                      "unknown character '" + std::string(source.substr(i, width)) + "'",
                      {line, column}});
    i += width;
    ++column;
  }

  if (!errors.empty()) return errors;
  return tokens;
}

}  // namespace madeup
