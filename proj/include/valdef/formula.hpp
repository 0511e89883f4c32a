#pragma once

// First-order formulas in the ring language with power predicates P_n.
//
// Concrete syntax (docs/grammar.ebnf has the full grammar):
//   E y, z. y*y = 1 + p*x*x        existential block
//   A y. ~(y = 0) -> P_2(y^4)      universal block
//   & | -> <-> ~                   connectives, loosest to tightest: <->, ->, |, &, ~
// Numerals other than 0 and 1 stay numerals in the tree and carry a memoized
// expansion into 1 + 1 + ... (binary Horner form above 16).

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "valdef/common.hpp"

namespace valdef {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Zero, One, Numeral, Neg, Add, Sub, Mul, Pow };
  Kind kind = Kind::Zero;
  std::string name;
  /// Numeral value or Pow exponent.
  std::uint64_t value = 0;
  TermPtr lhs, rhs;
  /// Numerals only: the same number as a tree over 0, 1, +, *.
  TermPtr expansion;
  Span span;
};

namespace term {

inline TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

inline TermPtr var(std::string name, Span s = {}) {
  Term t;
  t.kind = Term::Kind::Var;
  t.name = std::move(name);
  t.span = s;
  return make(std::move(t));
}

inline TermPtr zero(Span s = {}) {
  Term t;
  t.kind = Term::Kind::Zero;
  t.span = s;
  return make(std::move(t));
}

inline TermPtr one(Span s = {}) {
  Term t;
  t.kind = Term::Kind::One;
  t.value = 1;
  t.span = s;
  return make(std::move(t));
}

inline TermPtr binary(Term::Kind k, TermPtr a, TermPtr b, Span s = {}) {
  Term t;
  t.kind = k;
  t.lhs = std::move(a);
  t.rhs = std::move(b);
  t.span = s;
  return make(std::move(t));
}

inline TermPtr add(TermPtr a, TermPtr b, Span s = {}) { return binary(Term::Kind::Add, std::move(a), std::move(b), s); }
inline TermPtr sub(TermPtr a, TermPtr b, Span s = {}) { return binary(Term::Kind::Sub, std::move(a), std::move(b), s); }
inline TermPtr mul(TermPtr a, TermPtr b, Span s = {}) { return binary(Term::Kind::Mul, std::move(a), std::move(b), s); }

inline TermPtr neg(TermPtr a, Span s = {}) {
  Term t;
  t.kind = Term::Kind::Neg;
  t.lhs = std::move(a);
  t.span = s;
  return make(std::move(t));
}

inline TermPtr pow(TermPtr a, std::uint64_t n, Span s = {}) {
  if (n == 0) throw PreconditionViolation("exponent must be positive");
  Term t;
  t.kind = Term::Kind::Pow;
  t.lhs = std::move(a);
  t.value = n;
  t.span = s;
  return make(std::move(t));
}

/// 1 + 1 + ... + 1, shared between calls.
inline TermPtr expansion(std::uint64_t n) {
  static std::mutex mu;
  static std::map<std::uint64_t, TermPtr> cache;
  if (n == 0) return zero();
  if (n == 1) return one();
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  TermPtr e;
  if (n <= 16) {
    e = add(expansion(n - 1), one());
  } else {
    e = mul(expansion(2), expansion(n / 2));
    if (n % 2 == 1) e = add(e, one());
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, e).first->second;
}

inline TermPtr numeral(std::uint64_t n, Span s = {}) {
  if (n == 0) return zero(s);
  if (n == 1) return one(s);
  Term t;
  t.kind = Term::Kind::Numeral;
  t.value = n;
  t.expansion = expansion(n);
  t.span = s;
  return make(std::move(t));
}

/// Left-nested product a*a*...*a with n factors.
inline TermPtr product_chain(const TermPtr& a, std::uint64_t n) {
  TermPtr out = a;
  for (std::uint64_t i = 1; i < n; ++i) out = mul(out, a);
  return out;
}

}  // namespace term

inline bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->value != b->value) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { True, False, Eq, Pred, Not, And, Or, Implies, Iff, Exists, Forall };
  Kind kind = Kind::True;
  TermPtr lhs, rhs;
  /// Index of P_n.
  std::uint64_t n = 0;
  /// Bound variable of a quantifier.
  std::string var;
  FormulaPtr a, b;
  Span span;
};

namespace fml {

inline FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

inline FormulaPtr constant(bool v, Span s = {}) {
  Formula f;
  f.kind = v ? Formula::Kind::True : Formula::Kind::False;
  f.span = s;
  return make(std::move(f));
}

inline FormulaPtr eq(TermPtr l, TermPtr r, Span s = {}) {
  Formula f;
  f.kind = Formula::Kind::Eq;
  f.lhs = std::move(l);
  f.rhs = std::move(r);
  f.span = s;
  return make(std::move(f));
}

inline FormulaPtr pred(std::uint64_t n, TermPtr t, Span s = {}) {
  if (n == 0) throw PreconditionViolation("P_n needs n >= 1");
  Formula f;
  f.kind = Formula::Kind::Pred;
  f.n = n;
  f.lhs = std::move(t);
  f.span = s;
  return make(std::move(f));
}

inline FormulaPtr negate(FormulaPtr x, Span s = {}) {
  Formula f;
  f.kind = Formula::Kind::Not;
  f.a = std::move(x);
  f.span = s;
  return make(std::move(f));
}

inline FormulaPtr binary(Formula::Kind k, FormulaPtr x, FormulaPtr y, Span s = {}) {
  Formula f;
  f.kind = k;
  f.a = std::move(x);
  f.b = std::move(y);
  f.span = s;
  return make(std::move(f));
}

inline FormulaPtr conj(FormulaPtr x, FormulaPtr y, Span s = {}) {
  return binary(Formula::Kind::And, std::move(x), std::move(y), s);
}
inline FormulaPtr disj(FormulaPtr x, FormulaPtr y, Span s = {}) {
  return binary(Formula::Kind::Or, std::move(x), std::move(y), s);
}

inline FormulaPtr quant(Formula::Kind k, std::string v, FormulaPtr body, Span s = {}) {
  Formula f;
  f.kind = k;
  f.var = std::move(v);
  f.a = std::move(body);
  f.span = s;
  return make(std::move(f));
}

inline FormulaPtr exists(std::string v, FormulaPtr body, Span s = {}) {
  return quant(Formula::Kind::Exists, std::move(v), std::move(body), s);
}
inline FormulaPtr forall(std::string v, FormulaPtr body, Span s = {}) {
  return quant(Formula::Kind::Forall, std::move(v), std::move(body), s);
}

/// Quantifier block over vars, innermost last.
inline FormulaPtr block(Formula::Kind k, const std::vector<std::string>& vars, FormulaPtr body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = quant(k, *it, std::move(body));
  return body;
}

/// Left-nested conjunction; true when empty.
inline FormulaPtr conj_all(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) return constant(true);
  FormulaPtr out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj(out, parts[i]);
  return out;
}

}  // namespace fml

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->n != b->n || a->var != b->var) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs) && equal(a->a, b->a) && equal(a->b, b->b);
}

inline bool is_quantifier(const Formula& f) {
  return f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall;
}

// --- printing ---

namespace detail {

inline int term_level(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub: return 1;
    case Term::Kind::Mul: return 2;
    case Term::Kind::Neg: return 3;
    case Term::Kind::Pow: return 4;
    default: return 5;
  }
}

inline void print_term(std::string& out, const Term& t, int need) {
  const bool paren = term_level(t) < need;
  if (paren) out += '(';
  switch (t.kind) {
    case Term::Kind::Var: out += t.name; break;
    case Term::Kind::Zero: out += '0'; break;
    case Term::Kind::One: out += '1'; break;
    case Term::Kind::Numeral: out += std::to_string(t.value); break;
    case Term::Kind::Neg:
      out += '-';
      print_term(out, *t.lhs, 3);
      break;
    case Term::Kind::Add:
    case Term::Kind::Sub:
      print_term(out, *t.lhs, 1);
      out += t.kind == Term::Kind::Add ? " + " : " - ";
      print_term(out, *t.rhs, 2);
      break;
    case Term::Kind::Mul:
      print_term(out, *t.lhs, 2);
      out += '*';
      print_term(out, *t.rhs, 3);
      break;
    case Term::Kind::Pow:
      print_term(out, *t.lhs, 5);
      out += '^';
      out += std::to_string(t.value);
      break;
  }
  if (paren) out += ')';
}

inline int formula_level(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0;
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Eq:
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

inline void print_formula(std::string& out, const Formula& f, int need) {
  const bool paren = formula_level(f) < need;
  if (paren) out += '(';
  switch (f.kind) {
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Eq:
      print_term(out, *f.lhs, 0);
      out += " = ";
      print_term(out, *f.rhs, 0);
      break;
    case Formula::Kind::Pred:
      out += "P_" + std::to_string(f.n) + "(";
      print_term(out, *f.lhs, 0);
      out += ')';
      break;
    case Formula::Kind::Not:
      out += '~';
      print_formula(out, *f.a, 6);
      break;
    case Formula::Kind::And:
      print_formula(out, *f.a, 4);
      out += " & ";
      print_formula(out, *f.b, 5);
      break;
    case Formula::Kind::Or:
      print_formula(out, *f.a, 3);
      out += " | ";
      print_formula(out, *f.b, 4);
      break;
    case Formula::Kind::Implies:
      print_formula(out, *f.a, 3);
      out += " -> ";
      print_formula(out, *f.b, 2);
      break;
    case Formula::Kind::Iff:
      print_formula(out, *f.a, 2);
      out += " <-> ";
      print_formula(out, *f.b, 2);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      out += f.kind == Formula::Kind::Exists ? "E " : "A ";
      const Formula* cur = &f;
      out += cur->var;
      while (cur->a->kind == f.kind) {
        cur = cur->a.get();
        out += ", " + cur->var;
      }
      out += ". ";
      print_formula(out, *cur->a, 0);
      break;
    }
  }
  if (paren) out += ')';
}

}  // namespace detail

inline std::string to_string(const TermPtr& t) {
  std::string out;
  detail::print_term(out, *t, 0);
  return out;
}

inline std::string to_string(const FormulaPtr& f) {
  std::string out;
  detail::print_formula(out, *f, 0);
  return out;
}

// --- parsing ---

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  FormulaPtr parse_formula() {
    auto f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input");
    return f;
  }

  TermPtr parse_term() {
    auto t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool take(std::string_view s) {
    if (!at(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!take(s)) fail("expected '" + std::string(s) + "'");
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string peek_ident() {
    skip_ws();
    std::size_t e = pos_;
    if (e < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[e])) || text_[e] == '_')) {
      while (e < text_.size() && ident_char(text_[e])) ++e;
    }
    return std::string(text_.substr(pos_, e - pos_));
  }

  static bool is_pred_name(const std::string& id) {
    if (id.size() < 3 || id[0] != 'P' || id[1] != '_') return false;
    for (std::size_t i = 2; i < id.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
    }
    return true;
  }

  static bool reserved(const std::string& id) {
    return id == "E" || id == "A" || id == "true" || id == "false" || is_pred_name(id);
  }

  std::string variable() {
    const std::string id = peek_ident();
    if (id.empty() || reserved(id)) fail("expected a variable");
    pos_ += id.size();
    return id;
  }

  std::uint64_t natural() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 18) {
      pos_ = start;
      fail("number too large");
    }
    return std::stoull(digits);
  }

  FormulaPtr formula() {
    skip_ws();
    const std::string id = peek_ident();
    if (id == "E" || id == "A") return quantified();
    return iff();
  }

  FormulaPtr quantified() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string id = peek_ident();
    pos_ += id.size();
    const auto kind = id == "E" ? Formula::Kind::Exists : Formula::Kind::Forall;
    std::vector<std::string> vars{variable()};
    while (take(",")) vars.push_back(variable());
    expect(".");
    FormulaPtr body = formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = fml::quant(kind, *it, body, {start, pos_});
    return body;
  }

  FormulaPtr iff() {
    skip_ws();
    const std::size_t start = pos_;
    FormulaPtr lhs = implies();
    if (take("<->")) return fml::binary(Formula::Kind::Iff, lhs, implies(), {start, pos_});
    return lhs;
  }

  FormulaPtr implies() {
    skip_ws();
    const std::size_t start = pos_;
    FormulaPtr lhs = disjunction();
    if (take("->")) return fml::binary(Formula::Kind::Implies, lhs, implies_rhs(), {start, pos_});
    return lhs;
  }

  FormulaPtr implies_rhs() {
    skip_ws();
    const std::string id = peek_ident();
    if (id == "E" || id == "A") return quantified();
    return implies();
  }

  FormulaPtr disjunction() {
    skip_ws();
    const std::size_t start = pos_;
    FormulaPtr acc = conjunction();
    while (take("|")) acc = fml::disj(acc, conjunction(), {start, pos_});
    return acc;
  }

  FormulaPtr conjunction() {
    skip_ws();
    const std::size_t start = pos_;
    FormulaPtr acc = unary();
    while (take("&")) acc = fml::conj(acc, unary(), {start, pos_});
    return acc;
  }

  FormulaPtr unary() {
    skip_ws();
    const std::size_t start = pos_;
    if (take("~")) return fml::negate(unary(), {start, pos_});
    const std::string id = peek_ident();
    if (id == "E" || id == "A") return quantified();
    return atom();
  }

  FormulaPtr atom() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string id = peek_ident();
    if (id == "true" || id == "false") {
      pos_ += id.size();
      return fml::constant(id == "true", {start, pos_});
    }
    if (is_pred_name(id)) {
      pos_ += 2;
      const std::uint64_t n = natural();
      if (n == 0) {
        pos_ = start;
        fail("P_n needs n >= 1");
      }
      expect("(");
      TermPtr t = term();
      expect(")");
      return fml::pred(n, t, {start, pos_});
    }
    if (at("(")) {
      // Either a parenthesized formula or an equation whose left side
      // starts with a parenthesized term.
      std::optional<ParseError> first;
      try {
        ++pos_;
        FormulaPtr f = formula();
        expect(")");
        if (!continues_term()) return f;
      } catch (const ParseError& e) {
        first = e;
      }
      pos_ = start;
      try {
        return equation(start);
      } catch (const ParseError& e) {
        if (first && first->position() > e.position()) throw *first;
        throw;
      }
    }
    return equation(start);
  }

  bool continues_term() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    if (c == '-') return !at("->");
    return c == '=' || c == '+' || c == '*' || c == '^';
  }

  FormulaPtr equation(std::size_t start) {
    TermPtr l = term();
    expect("=");
    TermPtr r = term();
    return fml::eq(l, r, {start, pos_});
  }

  bool minus_ahead() { return at("-") && !at("->"); }

  TermPtr term() {
    skip_ws();
    const std::size_t start = pos_;
    TermPtr acc = product();
    while (true) {
      if (take("+")) {
        acc = term::add(acc, product(), {start, pos_});
      } else if (minus_ahead()) {
        ++pos_;
        acc = term::sub(acc, product(), {start, pos_});
      } else {
        return acc;
      }
    }
  }

  TermPtr product() {
    skip_ws();
    const std::size_t start = pos_;
    TermPtr acc = signed_factor();
    while (take("*")) acc = term::mul(acc, signed_factor(), {start, pos_});
    return acc;
  }

  TermPtr signed_factor() {
    skip_ws();
    const std::size_t start = pos_;
    if (minus_ahead()) {
      ++pos_;
      return term::neg(signed_factor(), {start, pos_});
    }
    TermPtr base = primary();
    if (take("^")) {
      const std::size_t at_exp = pos_;
      const std::uint64_t n = natural();
      if (n == 0) {
        pos_ = at_exp;
        fail("exponent must be positive");
      }
      return term::pow(base, n, {start, pos_});
    }
    return base;
  }

  TermPtr primary() {
    skip_ws();
    const std::size_t start = pos_;
    if (take("(")) {
      TermPtr t = term();
      expect(")");
      return t;
    }
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const std::uint64_t n = natural();
      return term::numeral(n, {start, pos_});
    }
    const std::string name = variable();
    return term::var(name, {start, pos_});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) { return detail::FormulaParser(text).parse_formula(); }
inline TermPtr parse_term(std::string_view text) { return detail::FormulaParser(text).parse_term(); }

// --- structure ---

inline void collect_variables(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == Term::Kind::Var) out.insert(t->name);
  collect_variables(t->lhs, out);
  collect_variables(t->rhs, out);
}

/// Every variable name occurring in f, bound or free.
inline void collect_variables(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (is_quantifier(*f)) out.insert(f->var);
  collect_variables(f->lhs, out);
  collect_variables(f->rhs, out);
  collect_variables(f->a, out);
  collect_variables(f->b, out);
}

inline std::set<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> out;
  if (!f) return out;
  if (is_quantifier(*f)) {
    out = free_variables(f->a);
    out.erase(f->var);
    return out;
  }
  collect_variables(f->lhs, out);
  collect_variables(f->rhs, out);
  for (const auto& sub : {f->a, f->b}) {
    const auto s = free_variables(sub);
    out.insert(s.begin(), s.end());
  }
  return out;
}

struct QuantifierBlock {
  Formula::Kind kind;
  std::size_t count;
};

/// Leading quantifier blocks, e.g. [(Exists, 3), (Forall, 8)].
inline std::vector<QuantifierBlock> quantifier_prefix(const FormulaPtr& f) {
  std::vector<QuantifierBlock> out;
  for (const Formula* cur = f.get(); cur && is_quantifier(*cur); cur = cur->a.get()) {
    if (out.empty() || out.back().kind != cur->kind) {
      out.push_back({cur->kind, 1});
    } else {
      ++out.back().count;
    }
  }
  return out;
}

inline bool has_quantifier(const FormulaPtr& f) {
  if (!f) return false;
  return is_quantifier(*f) || has_quantifier(f->a) || has_quantifier(f->b);
}

inline bool has_power_predicate(const FormulaPtr& f) {
  if (!f) return false;
  return f->kind == Formula::Kind::Pred || has_power_predicate(f->a) || has_power_predicate(f->b);
}

namespace detail {

inline FormulaPtr eliminate(const FormulaPtr& f, const std::set<std::string>& taken, std::size_t& next) {
  switch (f->kind) {
    case Formula::Kind::Pred: {
      std::string w;
      do {
        w = "w" + std::to_string(next++);
      } while (taken.count(w));
      return fml::exists(w, fml::eq(term::product_chain(term::var(w), f->n), f->lhs));
    }
    case Formula::Kind::Not: return fml::negate(eliminate(f->a, taken, next));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      auto lhs = eliminate(f->a, taken, next);
      return fml::binary(f->kind, lhs, eliminate(f->b, taken, next));
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return fml::quant(f->kind, f->var, eliminate(f->a, taken, next));
    default: return f;
  }
}

}  // namespace detail

/// Replaces each P_n(t) by E w. w*...*w = t with a fresh w.
inline FormulaPtr eliminate_power_predicates(const FormulaPtr& f) {
  if (!has_power_predicate(f)) return f;
  std::set<std::string> taken;
  collect_variables(f, taken);
  std::size_t next = 0;
  return detail::eliminate(f, taken, next);
}

// --- random trees ---

struct RandomAstOptions {
  int max_depth = 6;
  std::vector<std::string> variables{"x", "y", "z", "a", "b"};
  std::uint64_t max_numeral = 40;
  std::uint64_t max_exponent = 5;
  std::uint64_t max_pred = 5;
};

inline TermPtr random_term(std::mt19937_64& rng, int depth, const RandomAstOptions& o = {}) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  const std::uint64_t kind = depth <= 0 ? pick(0, 2) : pick(0, 7);
  switch (kind) {
    case 0: return term::var(o.variables[pick(0, o.variables.size() - 1)]);
    case 1: return term::numeral(pick(0, o.max_numeral));
    case 2: return pick(0, 1) ? term::one() : term::zero();
    case 3: return term::neg(random_term(rng, depth - 1, o));
    case 4:
    case 5:
    case 6: {
      // Sequenced so that the tree depends only on the seed.
      auto l = random_term(rng, depth - 1, o);
      auto r = random_term(rng, depth - 1, o);
      const auto k = kind == 4 ? Term::Kind::Add : kind == 5 ? Term::Kind::Sub : Term::Kind::Mul;
      return term::binary(k, l, r);
    }
    default: {
      auto base = random_term(rng, depth - 1, o);
      return term::pow(base, pick(1, o.max_exponent));
    }
  }
}

inline FormulaPtr random_formula(std::mt19937_64& rng, int depth, const RandomAstOptions& o = {}) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  const int tdepth = std::max(0, std::min(depth, 3) - 1);
  const std::uint64_t kind = depth <= 0 ? pick(0, 2) : pick(0, 9);
  switch (kind) {
    case 0: {
      auto l = random_term(rng, tdepth, o);
      return fml::eq(l, random_term(rng, tdepth, o));
    }
    case 1: return fml::pred(pick(1, o.max_pred), random_term(rng, tdepth, o));
    case 2: return fml::constant(pick(0, 1) == 1);
    case 3: return fml::negate(random_formula(rng, depth - 1, o));
    case 4:
    case 5:
    case 6:
    case 7: {
      auto l = random_formula(rng, depth - 1, o);
      auto r = random_formula(rng, depth - 1, o);
      const Formula::Kind ks[] = {Formula::Kind::And, Formula::Kind::Or, Formula::Kind::Implies, Formula::Kind::Iff};
      return fml::binary(ks[kind - 4], l, r);
    }
    default: {
      auto v = o.variables[pick(0, o.variables.size() - 1)];
      auto body = random_formula(rng, depth - 1, o);
      return fml::quant(kind == 8 ? Formula::Kind::Exists : Formula::Kind::Forall, v, body);
    }
  }
}

}  // namespace valdef
