#pragma once

#include <string>
#include <vector>

#include "cqac/errors.hpp"
#include "cqac/query.hpp"

namespace cqac {

// Shared tokenizer for the query/program text formats.  '%' and '#' start
// line comments.
struct Token {
  enum Kind { IDENT, VAR, NUMBER, PUNCT, END } kind = END;
  std::string text;   // identifier/variable name or punctuation token
  Rational value;     // for NUMBER
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& text);
  const Token& peek() const { return toks_[pos_]; }
  const Token& peek2() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool accept(const std::string& punct);
  Token expect_punct(const std::string& punct);
  Token expect(Token::Kind kind, const std::string& what);
  [[noreturn]] void fail(const std::string& msg) const;

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

struct Workspace {
  std::vector<CQACQuery> queries;  // rules, in file order
  Database facts;                  // ground atoms
};

Workspace parse_workspace(const std::string& text);

// Parses a single query (the text must contain exactly one rule statement;
// ground facts are rejected).
CQACQuery parse_query(const std::string& text);

// Parses a list of view definitions (every statement must be a rule).
std::vector<ViewDefinition> parse_views(const std::string& text);

// Parses ground facts only.
Database parse_facts(const std::string& text);

}  // namespace cqac
