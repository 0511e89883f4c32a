#pragma once

// Element literals and the JSON element form.
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   primary  := integer | name | '(' expr ')' | 'O(' (name | integer) ('^' exponent)? ')'
//   exponent := '-'? integer | '(' '-'? integer ('/' integer)? ')'
//
// Names are the series variables of the field (any layer) and g, the
// generator of a non-prime finite base field. Rational exponents are only
// allowed on variables of GenSeries(Q, ...) layers.

#include <cctype>
#include <string>
#include <string_view>

#include <json.hpp>

#include "valdef/element.hpp"

namespace valdef {

namespace detail {

class ElementParser {
 public:
  ElementParser(FieldPtr field, std::string_view text) : field_(std::move(field)), text_(text) {}

  Element parse() {
    if (!field_->has_elements()) throw Unsupported(field_->to_string() + " has no element representation");
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool take(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!take(c)) fail(std::string("expected '") + c + "'");
  }

  BigInt integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  std::int64_t small_integer() {
    const BigInt n = integer();
    if (!n.fits_slong_p()) fail("number too large");
    return n.get_si();
  }

  std::string name() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Rational exponent() {
    if (take('(')) {
      const bool neg = take('-');
      std::int64_t num = small_integer();
      std::int64_t den = 1;
      if (take('/')) den = small_integer();
      expect(')');
      if (den == 0) fail("zero denominator");
      return Rational(neg ? -num : num, den);
    }
    const bool neg = take('-');
    const std::int64_t n = small_integer();
    return Rational(neg ? -n : n);
  }

  Element expr() {
    Element acc = term();
    while (true) {
      if (take('+')) {
        acc = acc + term();
      } else if (take('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Element term() {
    Element acc = unary();
    while (true) {
      if (take('*')) {
        acc = acc * unary();
      } else if (take('/')) {
        const std::size_t at = pos_;
        Element d = unary();
        if (d.is_exact_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc * inv(d);
      } else {
        return acc;
      }
    }
  }

  Element unary() {
    if (take('-')) return -unary();
    return power();
  }

  Element power() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string id = peek_name();
    if (!id.empty() && id != "O" && !is_number_start()) {
      if (auto layer = find_layer(id)) {
        name();
        Rational e(1);
        if (take('^')) e = exponent();
        if ((*layer)->factor() == Factor::Z && e.denominator() != 1) {
          pos_ = start;
          fail("fractional exponent on the Laurent variable " + id);
        }
        return lift_constant(field_, Element::monomial(*layer, Element::one((*layer)->inner()), e));
      }
    }
    Element base = primary();
    if (take('^')) {
      const std::size_t at = pos_;
      const Rational e = exponent();
      if (e.denominator() != 1) {
        pos_ = at;
        fail("fractional exponent on a non-variable");
      }
      return pow(base, e.numerator());
    }
    return base;
  }

  bool is_number_start() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  std::string peek_name() {
    const std::size_t save = pos_;
    std::string id = name();
    pos_ = save;
    return id;
  }

  std::optional<FieldPtr> find_layer(const std::string& id) const {
    for (FieldPtr cur = field_; cur && cur->kind() == Field::Kind::Series; cur = cur->inner()) {
      if (cur->var() == id) return cur;
    }
    return std::nullopt;
  }

  Element primary() {
    skip_ws();
    if (take('(')) {
      Element e = expr();
      expect(')');
      return e;
    }
    if (is_number_start()) return Element::from_rational(field_, BigRational(integer()));
    const std::size_t start = pos_;
    const std::string id = name();
    if (id.empty()) fail("expected an element");
    if (id == "O") return big_o();
    if (id == "g") {
      const Field& core = field_->core();
      if (core.kind() == Field::Kind::Base && core.base_field()->kind() == BaseField::Kind::Finite) {
        const auto c = Element::from_base(field_->residue_field(field_->depth()), core.base_field()->generator());
        return lift_constant(field_, c);
      }
    }
    pos_ = start;
    fail("unknown name '" + id + "' in " + field_->to_string());
  }

  Element big_o() {
    expect('(');
    skip_ws();
    if (is_number_start()) {
      const std::size_t at = pos_;
      const BigInt base = integer();
      const Field& core = field_->core();
      if (core.kind() != Field::Kind::PAdic || base != core.prime()) {
        pos_ = at;
        fail("O(p^k) needs the prime of a Qp field");
      }
      std::int64_t k = 1;
      if (take('^')) {
        const Rational e = exponent();
        if (e.denominator() != 1) fail("p-adic precision must be integral");
        k = e.numerator();
      }
      expect(')');
      FieldPtr cur = field_;
      while (cur->kind() == Field::Kind::Series) cur = cur->inner();
      return lift_constant(field_, Element::zero_approx(cur, Rational(k)));
    }
    const std::size_t at = pos_;
    const std::string id = name();
    auto layer = find_layer(id);
    if (!layer) {
      pos_ = at;
      fail("O(...) needs a series variable");
    }
    Rational k(1);
    if (take('^')) k = exponent();
    expect(')');
    return lift_constant(field_, Element::zero_approx(*layer, k));
  }

  FieldPtr field_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Element parse_element(const FieldPtr& field, std::string_view text) {
  return detail::ElementParser(field, text).parse();
}

// --- JSON ---

inline nlohmann::json element_node(const Element& a) {
  if (a.is_base()) return to_string(a);
  if (a.is_padic()) {
    const auto& x = a.padic();
    if (x.is_exact()) return {{"exact", x.rational().get_str()}};
    return {{"val", x.raw_val()}, {"unit", x.raw_unit().get_str()}, {"rel", x.relative_precision()}};
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : a.series().terms) terms.push_back({{"exp", to_string(t.exp)}, {"coeff", element_node(t.coeff)}});
  nlohmann::json node = {{"terms", terms}};
  node["prec"] = a.series().prec ? nlohmann::json(to_string(*a.series().prec)) : nlohmann::json(nullptr);
  return node;
}

inline nlohmann::json to_json(const Element& a) {
  return {{"field", a.field()->to_string()}, {"value", element_node(a)}, {"text", to_string(a)}};
}

inline Element element_from_node(const FieldPtr& f, const nlohmann::json& node) {
  switch (f->kind()) {
    case Field::Kind::Base: return parse_element(f, node.get<std::string>());
    case Field::Kind::PAdic:
      if (node.contains("exact")) {
        BigRational q(node.at("exact").get<std::string>());
        q.canonicalize();
        return Element::from_padic(f, PAdic::exact(f->prime(), q));
      }
      return Element::from_padic(f, PAdic::approx(f->prime(), node.at("val").get<std::int64_t>(),
                                                  BigInt(node.at("unit").get<std::string>()),
                                                  node.at("rel").get<std::int64_t>()));
    case Field::Kind::Series: {
      std::vector<SeriesTerm> terms;
      for (const auto& t : node.at("terms")) {
        terms.push_back({parse_rational(t.at("exp").get<std::string>()), element_from_node(f->inner(), t.at("coeff"))});
      }
      std::optional<Rational> prec;
      if (node.contains("prec") && !node.at("prec").is_null()) prec = parse_rational(node.at("prec").get<std::string>());
      return Element::from_terms(f, std::move(terms), prec);
    }
    case Field::Kind::AlgClosed: break;
  }
  throw Unsupported("no element representation for " + f->to_string());
}

inline Element from_json(const nlohmann::json& j, PrecisionConfig cfg = {}) {
  const auto f = Field::parse(j.at("field").get<std::string>(), cfg);
  return element_from_node(f, j.at("value"));
}

}  // namespace valdef
