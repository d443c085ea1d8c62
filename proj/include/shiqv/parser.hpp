#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiqv/concept.hpp"
#include "shiqv/ontology.hpp"

namespace shiqv {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

inline constexpr std::string_view kNonSimpleRoleMessage = "non-simple role in number restriction";

namespace detail {

enum class Tok { kName, kKeyword, kNumber, kLParen, kRParen, kDot, kComma, kNotEq, kEnd };

struct Token {
  Tok type;
  std::string text;
  int line;
  int column;
};

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {
      "SUBCLASSOF", "EQUIV", "DISJOINT", "SUBROLE", "TRANSITIVE", "INVERSE", "AND",
      "OR",         "NOT",   "SOME",     "ALL",     "ATLEAST",    "ATMOST",  "NONVAC",
      "EXACTLY",    "TOP",   "BOT",      "INV"};
  return k;
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Token> tokenize_line(std::string_view text, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok t = keywords().count(word) ? Tok::kKeyword : Tok::kName;
      out.push_back({t, std::move(word), line, col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::kNumber, std::string(text.substr(i, j - i)), line, col});
      i = j;
    } else if (c == '(') {
      out.push_back({Tok::kLParen, "(", line, col});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::kRParen, ")", line, col});
      ++i;
    } else if (c == '.') {
      out.push_back({Tok::kDot, ".", line, col});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::kComma, ",", line, col});
      ++i;
    } else if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back({Tok::kNotEq, "!=", line, col});
      i += 2;
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::kEnd, "", line, static_cast<int>(text.size()) + 1});
  return out;
}

struct RoleUse {
  Role role;
  int line;
  int column;
};

class LineParser {
 public:
  LineParser(std::vector<Token> toks, std::vector<RoleUse>* number_roles)
      : toks_(std::move(toks)), number_roles_(number_roles) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_keyword(std::string_view kw) const {
    return peek().type == Tok::kKeyword && peek().text == kw;
  }
  bool at_end() const { return peek().type == Tok::kEnd; }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    std::string found = t.type == Tok::kEnd ? "end of line" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, "expected " + what + ", found " + found);
  }

  const Token& expect(Tok type, const std::string& what) {
    if (peek().type != type) fail(peek(), what);
    return next();
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail(peek(), std::string(kw));
    next();
  }
  void expect_end() {
    if (!at_end()) fail(peek(), "end of line");
  }

  std::string name(const std::string& what) { return expect(Tok::kName, what).text; }

  Role role() {
    if (at_keyword("INV")) {
      next();
      bool paren = peek().type == Tok::kLParen;
      if (paren) next();
      Role r = role();
      if (paren) expect(Tok::kRParen, "')'");
      return r.inverse();
    }
    return Role(name("role name"));
  }

  Concept expr() {
    std::vector<Concept> ops{term()};
    while (at_keyword("OR")) {
      next();
      ops.push_back(term());
    }
    return ops.size() == 1 ? ops.front() : Concept::disjunction(std::move(ops));
  }

  Concept term() {
    std::vector<Concept> ops{factor()};
    while (at_keyword("AND")) {
      next();
      ops.push_back(factor());
    }
    return ops.size() == 1 ? ops.front() : Concept::conjunction(std::move(ops));
  }

  Concept factor() {
    const Token& t = peek();
    if (t.type == Tok::kName) return Concept::atomic(next().text);
    if (t.type == Tok::kLParen) {
      next();
      Concept c = expr();
      expect(Tok::kRParen, "')'");
      return c;
    }
    if (t.type != Tok::kKeyword) fail(t, "concept expression");
    std::string kw = t.text;
    if (kw == "TOP") {
      next();
      return Concept::top();
    }
    if (kw == "BOT") {
      next();
      return Concept::bottom();
    }
    if (kw == "NOT") {
      next();
      return Concept::negation(factor());
    }
    if (kw == "SOME" || kw == "ALL" || kw == "NONVAC") {
      next();
      Role r = role();
      expect(Tok::kDot, "'.'");
      Concept f = factor();
      if (kw == "SOME") return Concept::some(r, f);
      if (kw == "ALL") return Concept::all(r, f);
      return Concept::non_vacuous(r, f);
    }
    if (kw == "ATLEAST" || kw == "ATMOST" || kw == "EXACTLY") {
      next();
      const Token& num = expect(Tok::kNumber, "integer");
      unsigned n = 0;
      auto res = std::from_chars(num.text.data(), num.text.data() + num.text.size(), n);
      if (res.ec != std::errc()) throw ParseError(num.line, num.column, "integer out of range");
      if (n == 0 && kw != "ATMOST") {
        throw ParseError(num.line, num.column, kw + " requires a positive integer");
      }
      const Token& role_tok = peek();
      Role r = role();
      if (number_roles_) number_roles_->push_back({r, role_tok.line, role_tok.column});
      expect(Tok::kDot, "'.'");
      Concept f = factor();
      if (kw == "ATLEAST") return Concept::at_least(n, r, f);
      if (kw == "ATMOST") return Concept::at_most(n, r, f);
      return Concept::exactly(n, r, f);
    }
    fail(t, "concept expression");
  }

  std::vector<Axiom> statement() {
    std::vector<Axiom> out;
    const Token& first = peek();
    if (first.type == Tok::kKeyword && first.text == "DISJOINT") {
      next();
      Concept a = Concept::atomic(name("concept name"));
      Concept b = Concept::atomic(name("concept name"));
      expect_end();
      out.push_back(EquivClass{Concept::bottom(), Concept::conjunction({a, b})});
      return out;
    }
    if (first.type == Tok::kKeyword && first.text == "SUBROLE") {
      next();
      Role r = role();
      Role s = role();
      expect_end();
      out.push_back(SubRole{r, s});
      return out;
    }
    if (first.type == Tok::kKeyword && first.text == "TRANSITIVE") {
      next();
      std::string r = name("role name");
      expect_end();
      out.push_back(Transitive{r});
      return out;
    }
    if (first.type == Tok::kKeyword && first.text == "INVERSE") {
      next();
      Role r = role();
      Role s = role();
      expect_end();
      out.push_back(SubRole{r, s.inverse()});
      out.push_back(SubRole{s.inverse(), r});
      return out;
    }
    if (first.type == Tok::kName && peek(1).type == Tok::kNotEq) {
      std::string a = next().text;
      next();
      std::string b = name("individual name");
      expect_end();
      out.push_back(Inequality{a, b});
      return out;
    }
    if (first.type == Tok::kName && peek(1).type == Tok::kLParen) {
      std::string pred = next().text;
      next();
      std::string a = name("individual name");
      if (peek().type == Tok::kComma) {
        next();
        std::string b = name("individual name");
        expect(Tok::kRParen, "')'");
        expect_end();
        out.push_back(RoleAssertion{pred, a, b});
      } else {
        expect(Tok::kRParen, "')' or ','");
        expect_end();
        out.push_back(ConceptAssertion{Concept::atomic(pred), a});
      }
      return out;
    }
    Concept lhs = factor();
    if (at_keyword("SUBCLASSOF")) {
      next();
      Concept rhs = expr();
      expect_end();
      out.push_back(SubClass{lhs, rhs});
      return out;
    }
    if (at_keyword("EQUIV")) {
      if (!lhs.is_atomic() && !lhs.is(ConceptKind::kBottom)) {
        throw ParseError(first.line, first.column,
                         "EQUIV requires a concept name or BOT on the left");
      }
      next();
      Concept rhs = expr();
      expect_end();
      out.push_back(EquivClass{lhs, rhs});
      return out;
    }
    if (peek().type == Tok::kLParen) {
      next();
      std::string a = name("individual name");
      expect(Tok::kRParen, "')'");
      expect_end();
      out.push_back(ConceptAssertion{lhs, a});
      return out;
    }
    fail(peek(), "SUBCLASSOF, EQUIV or '('");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<RoleUse>* number_roles_;
};

// Roles R such that some transitive role T (or its inverse) satisfies T ⊑* R.
inline std::set<Role> non_simple_roles(const Ontology& o) {
  std::map<Role, std::set<Role>> up;
  for (const Axiom& a : o.tbox) {
    if (auto* s = std::get_if<SubRole>(&a)) {
      up[s->sub].insert(s->sup);
      up[s->sub.inverse()].insert(s->sup.inverse());
    }
  }
  std::set<Role> out;
  std::vector<Role> stack;
  for (const std::string& t : o.transitive_roles()) {
    stack.push_back(Role(t));
    stack.push_back(Role(t, true));
  }
  while (!stack.empty()) {
    Role r = stack.back();
    stack.pop_back();
    if (!out.insert(r).second) continue;
    for (const Role& s : up[r]) stack.push_back(s);
  }
  return out;
}

inline void check_simple_roles(const Ontology& o, const std::vector<RoleUse>& uses) {
  std::set<Role> bad = non_simple_roles(o);
  for (const RoleUse& u : uses) {
    if (bad.count(u.role)) throw ParseError(u.line, u.column, std::string(kNonSimpleRoleMessage));
  }
}

inline void number_restriction_roles(const Concept& c, std::vector<RoleUse>& out) {
  if (c.is(ConceptKind::kAtLeast) || c.is(ConceptKind::kAtMost) || c.is(ConceptKind::kExactly)) {
    out.push_back({c.role(), 0, 0});
  }
  for (const Concept& op : c.operands()) number_restriction_roles(op, out);
}

}  // namespace detail

/** @brief Parses the line-oriented `.onto` format. Throws ParseError. */
inline Ontology parse_ontology(std::string_view source) {
  Ontology o;
  std::vector<detail::RoleUse> number_roles;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    auto toks = detail::tokenize_line(line, line_no);
    if (toks.front().type != detail::Tok::kEnd) {
      detail::LineParser p(std::move(toks), &number_roles);
      for (Axiom& a : p.statement()) o.add(std::move(a));
    }
    if (end == source.size()) break;
    start = end + 1;
  }
  detail::check_simple_roles(o, number_roles);
  return o;
}

// Throws ParseError (line 0) when a programmatically built ontology uses a
// non-simple role in a number restriction.
inline void validate_ontology(const Ontology& o) {
  std::vector<detail::RoleUse> uses;
  for (const Axiom& a : o.axioms()) {
    if (auto* x = std::get_if<SubClass>(&a)) {
      detail::number_restriction_roles(x->sub, uses);
      detail::number_restriction_roles(x->sup, uses);
    } else if (auto* x = std::get_if<EquivClass>(&a)) {
      detail::number_restriction_roles(x->rhs, uses);
    } else if (auto* x = std::get_if<ConceptAssertion>(&a)) {
      detail::number_restriction_roles(x->expr, uses);
    }
  }
  detail::check_simple_roles(o, uses);
}

// Parses a native-syntax concept expression such as `SOME r.A AND B`.
inline Concept parse_expression(std::string_view text) {
  detail::LineParser p(detail::tokenize_line(text, 1), nullptr);
  Concept c = p.expr();
  p.expect_end();
  return c;
}

namespace detail {

class PrefixParser {
 public:
  explicit PrefixParser(std::string_view s) : s_(s) {}

  Concept parse() {
    Concept c = concept_expr();
    skip_ws();
    if (i_ != s_.size()) error("trailing input");
    return c;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw ParseError(1, static_cast<int>(i_) + 1, what);
  }
  void skip_ws() {
    while (i_ < s_.size() && s_[i_] == ' ') ++i_;
  }
  std::string word() {
    skip_ws();
    std::size_t j = i_;
    while (j < s_.size() && s_[j] != ' ' && s_[j] != '(' && s_[j] != ')') ++j;
    if (j == i_) error("expected a token");
    std::string w(s_.substr(i_, j - i_));
    i_ = j;
    return w;
  }
  void expect(char c) {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != c) error(std::string("expected '") + c + "'");
    ++i_;
  }
  bool peek(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  unsigned number() {
    std::string w = word();
    unsigned n = 0;
    auto res = std::from_chars(w.data(), w.data() + w.size(), n);
    if (res.ec != std::errc() || res.ptr != w.data() + w.size()) error("expected an integer");
    return n;
  }
  Role role() {
    if (peek('(')) {
      expect('(');
      if (word() != "inv") error("expected 'inv'");
      Role r = role();
      expect(')');
      return r.inverse();
    }
    return Role(word());
  }
  Concept concept_expr() {
    if (!peek('(')) {
      std::string w = word();
      return Concept::atomic(w);
    }
    expect('(');
    std::string head = word();
    Concept out;
    if (head == "not") {
      out = Concept::negation(concept_expr());
    } else if (head == "and" || head == "or") {
      std::vector<Concept> ops;
      while (!peek(')')) ops.push_back(concept_expr());
      if (ops.size() < 2) error("'" + head + "' needs at least two operands");
      out = head == "and" ? Concept::conjunction(std::move(ops))
                          : Concept::disjunction(std::move(ops));
    } else if (head == "some" || head == "all" || head == "nonvac") {
      Role r = role();
      Concept f = concept_expr();
      out = head == "some" ? Concept::some(r, f)
            : head == "all" ? Concept::all(r, f)
                            : Concept::non_vacuous(r, f);
    } else if (head == "atleast" || head == "atmost" || head == "exactly") {
      unsigned n = number();
      Role r = role();
      Concept f = concept_expr();
      try {
        out = head == "atleast" ? Concept::at_least(n, r, f)
              : head == "atmost" ? Concept::at_most(n, r, f)
                                 : Concept::exactly(n, r, f);
      } catch (const std::invalid_argument& e) {
        error(e.what());
      }
    } else {
      error("unknown constructor '" + head + "'");
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/** @brief Parses the canonical prefix serialization back into a Concept. */
inline Concept parse_concept(std::string_view prefix) {
  return detail::PrefixParser(prefix).parse();
}

inline std::string serialize_expr(const Concept& c) { return c.str(); }

namespace detail {

inline std::string render_role(const Role& r) { return r.inverted ? "INV(" + r.name + ")" : r.name; }

inline std::string render_infix(const Concept& c, int context);

// context: 0 = expr, 1 = term operand, 2 = factor
inline std::string render_infix(const Concept& c, int context) {
  auto wrap = [&](std::string s, int needed) {
    return context > needed ? "(" + s + ")" : s;
  };
  switch (c.kind()) {
    case ConceptKind::kAtomic: return c.name();
    case ConceptKind::kTop: return "TOP";
    case ConceptKind::kBottom: return "BOT";
    case ConceptKind::kNot: return "NOT " + render_infix(c.inner(), 2);
    case ConceptKind::kAnd: {
      std::string s;
      for (const Concept& op : c.operands()) {
        if (!s.empty()) s += " AND ";
        s += render_infix(op, 2);
      }
      return wrap(s, 1);
    }
    case ConceptKind::kOr: {
      std::string s;
      for (const Concept& op : c.operands()) {
        if (!s.empty()) s += " OR ";
        s += render_infix(op, 1);
      }
      return wrap(s, 0);
    }
    case ConceptKind::kSome:
      return "SOME " + render_role(c.role()) + "." + render_infix(c.filler(), 2);
    case ConceptKind::kAll:
      return "ALL " + render_role(c.role()) + "." + render_infix(c.filler(), 2);
    case ConceptKind::kNonVacuous:
      return "NONVAC " + render_role(c.role()) + "." + render_infix(c.filler(), 2);
    case ConceptKind::kAtLeast:
      return "ATLEAST " + std::to_string(c.number()) + " " + render_role(c.role()) + "." +
             render_infix(c.filler(), 2);
    case ConceptKind::kAtMost:
      return "ATMOST " + std::to_string(c.number()) + " " + render_role(c.role()) + "." +
             render_infix(c.filler(), 2);
    case ConceptKind::kExactly:
      return "EXACTLY " + std::to_string(c.number()) + " " + render_role(c.role()) + "." +
             render_infix(c.filler(), 2);
  }
  return "";
}

}  // namespace detail

// Native-syntax rendering of a concept, e.g. `SOME hasAdvisor.Professor`.
inline std::string render_expression(const Concept& c) { return detail::render_infix(c, 0); }

inline std::string render_axiom(const Axiom& a) {
  using detail::render_infix;
  using detail::render_role;
  if (auto* x = std::get_if<SubClass>(&a)) {
    return render_infix(x->sub, 2) + " SUBCLASSOF " + render_infix(x->sup, 0);
  }
  if (auto* x = std::get_if<EquivClass>(&a)) {
    return render_infix(x->lhs, 2) + " EQUIV " + render_infix(x->rhs, 0);
  }
  if (auto* x = std::get_if<SubRole>(&a)) {
    return "SUBROLE " + render_role(x->sub) + " " + render_role(x->sup);
  }
  if (auto* x = std::get_if<Transitive>(&a)) return "TRANSITIVE " + x->role;
  if (auto* x = std::get_if<ConceptAssertion>(&a)) {
    if (x->expr.is_atomic()) return x->expr.name() + "(" + x->individual + ")";
    return "(" + render_infix(x->expr, 0) + ")(" + x->individual + ")";
  }
  if (auto* x = std::get_if<RoleAssertion>(&a)) {
    return x->role + "(" + x->subject + ", " + x->object + ")";
  }
  const auto& x = std::get<Inequality>(a);
  return x.a + " != " + x.b;
}

/** @brief Renders an ontology in the native format; parse_ontology inverts it. */
inline std::string render_ontology(const Ontology& o) {
  std::string out;
  for (const Axiom& a : o.tbox) out += render_axiom(a) + "\n";
  for (const Axiom& a : o.abox) out += render_axiom(a) + "\n";
  return out;
}

}  // namespace shiqv
