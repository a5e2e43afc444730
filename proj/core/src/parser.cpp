#include "cqac/parser.hpp"

#include <cctype>

namespace cqac {

Lexer::Lexer(const std::string& text) {
  size_t i = 0;
  int line = 1, col = 1;
  auto bump = [&](size_t k) {
    for (size_t j = 0; j < k; j++) {
      if (i + j < text.size() && text[i + j] == '\n') { line++; col = 1; }
      else col++;
    }
    i += k;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '%' || c == '#') {
      while (i < text.size() && text[i] != '\n') bump(1);
      continue;
    }
    if (std::isspace((unsigned char)c)) { bump(1); continue; }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum((unsigned char)text[j]) || text[j] == '_')) j++;
      t.text = text.substr(i, j - i);
      t.kind = std::isupper((unsigned char)c) ? Token::VAR : Token::IDENT;
      bump(j - i);
      toks_.push_back(t);
      continue;
    }
    bool neg = c == '-' && i + 1 < text.size() && std::isdigit((unsigned char)text[i + 1]);
    if (std::isdigit((unsigned char)c) || neg) {
      size_t j = i + (neg ? 1 : 0);
      size_t digits_start = j;
      while (j < text.size() && std::isdigit((unsigned char)text[j])) j++;
      long long num = std::stoll(text.substr(digits_start, j - digits_start));
      long long den = 1;
      if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
          std::isdigit((unsigned char)text[j + 1])) {
        size_t k = ++j;
        while (j < text.size() && std::isdigit((unsigned char)text[j])) j++;
        for (size_t d = k; d < j; d++) {
          num = num * 10 + (text[d] - '0');
          den *= 10;
        }
      } else if (j < text.size() && text[j] == '/' && j + 1 < text.size() &&
                 std::isdigit((unsigned char)text[j + 1])) {
        size_t k = ++j;
        while (j < text.size() && std::isdigit((unsigned char)text[j])) j++;
        den = std::stoll(text.substr(k, j - k));
      }
      t.kind = Token::NUMBER;
      t.value = Rational(neg ? -num : num, den);
      bump(j - i);
      toks_.push_back(t);
      continue;
    }
    // punctuation; longest-match for multi-char operators
    static const char* two[] = {":-", "<=", ">=", "!="};
    std::string p;
    for (const char* cand : two) {
      if (text.compare(i, 2, cand) == 0) { p = cand; break; }
    }
    if (p.empty()) p = std::string(1, c);
    t.kind = Token::PUNCT;
    t.text = p;
    bump(p.size());
    toks_.push_back(t);
  }
  Token end;
  end.kind = Token::END;
  end.line = line;
  end.col = col;
  toks_.push_back(end);
}

bool Lexer::accept(const std::string& punct) {
  if (peek().kind == Token::PUNCT && peek().text == punct) {
    pos_++;
    return true;
  }
  return false;
}

Token Lexer::expect_punct(const std::string& punct) {
  if (!(peek().kind == Token::PUNCT && peek().text == punct))
    fail("expected '" + punct + "'");
  return next();
}

Token Lexer::expect(Token::Kind kind, const std::string& what) {
  if (peek().kind != kind) fail("expected " + what);
  return next();
}

void Lexer::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string got = t.kind == Token::END ? "end of input" : "'" + (t.text.empty() ? t.value.str() : t.text) + "'";
  throw ParseError(msg + ", got " + got, t.line, t.col);
}

namespace {

bool is_comp_op(const Token& t) {
  return t.kind == Token::PUNCT &&
         (t.text == "<" || t.text == "<=" || t.text == "=" || t.text == "!=" ||
          t.text == ">=" || t.text == ">");
}

Term parse_term(Lexer& lx) {
  if (lx.peek().kind == Token::VAR) return Term::variable(lx.next().text);
  if (lx.peek().kind == Token::NUMBER) return Term::constant(lx.next().value);
  lx.fail("expected a variable or constant");
}

Atom parse_atom(Lexer& lx) {
  Atom a;
  a.pred = lx.expect(Token::IDENT, "a predicate name").text;
  lx.expect_punct("(");
  if (!lx.accept(")")) {
    do {
      a.args.push_back(parse_term(lx));
    } while (lx.accept(","));
    lx.expect_punct(")");
  }
  return a;
}

}  // namespace

Workspace parse_workspace(const std::string& text) {
  Workspace ws;
  Lexer lx(text);
  while (lx.peek().kind != Token::END) {
    int line = lx.peek().line, col = lx.peek().col;
    Atom head = parse_atom(lx);
    if (lx.accept(".")) {
      std::vector<Rational> tuple;
      for (const auto& t : head.args) {
        if (t.is_var) throw ParseError("fact " + head.pred + " has a variable argument", line, col);
        tuple.push_back(t.val);
      }
      ws.facts.add(head.pred, std::move(tuple));
      continue;
    }
    lx.expect_punct(":-");
    CQACQuery q;
    q.head = head;
    do {
      if (lx.peek().kind == Token::IDENT) {
        Atom sg = parse_atom(lx);
        for (const auto& t : sg.args)
          if (!t.is_var) q.acs.note_constant(t.val);
        q.subgoals.push_back(std::move(sg));
      } else {
        Term l = parse_term(lx);
        if (!is_comp_op(lx.peek())) lx.fail("expected a comparison operator");
        std::string op = lx.next().text;
        Term r = parse_term(lx);
        q.acs.add_term(l, op, r);
      }
    } while (lx.accept(","));
    lx.expect_punct(".");
    for (const auto& v : q.body_variables()) q.acs.universe.insert(v);
    try {
      q.check_valid();
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line, col);
    }
    ws.queries.push_back(std::move(q));
  }
  return ws;
}

CQACQuery parse_query(const std::string& text) {
  Workspace ws = parse_workspace(text);
  if (ws.queries.size() != 1 || !ws.facts.empty())
    throw ParseError("expected exactly one query rule", 1, 1);
  return ws.queries[0];
}

std::vector<ViewDefinition> parse_views(const std::string& text) {
  Workspace ws = parse_workspace(text);
  if (!ws.facts.empty()) throw ParseError("view file must contain only rules", 1, 1);
  std::set<std::string> names;
  for (const auto& v : ws.queries)
    if (!names.insert(v.head.pred).second)
      throw ParseError("duplicate view definition: " + v.head.pred, 1, 1);
  return ws.queries;
}

Database parse_facts(const std::string& text) {
  Workspace ws = parse_workspace(text);
  if (!ws.queries.empty()) throw ParseError("fact file must contain only ground atoms", 1, 1);
  return ws.facts;
}

}  // namespace cqac
