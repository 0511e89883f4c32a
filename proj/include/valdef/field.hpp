#pragma once

// Field descriptors: a base field (F_p, F_q, Q), an algebraically closed
// field of characteristic 0, Q_p, or a series layer over another descriptor.
//
// A descriptor with k valued layers carries the henselian valuations
// v_1, ..., v_k; v_j sees the outermost j layers. Its value group is the lex
// product of those layers' exponent groups with the outermost layer last
// (dominant), and its residue field is the descriptor with those j layers
// stripped.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "valdef/common.hpp"
#include "valdef/ordered_groups.hpp"
#include "valdef/residue_fields.hpp"

namespace valdef {

struct PrecisionConfig {
  std::int64_t padic_digits = 64;
  std::int64_t series_order = 64;
  std::int64_t max_denominator = 64;

  bool operator==(const PrecisionConfig&) const = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field : public std::enable_shared_from_this<Field> {
 public:
  enum class Kind { Base, AlgClosed, PAdic, Series };

  static FieldPtr base(BaseFieldPtr b, PrecisionConfig cfg = {}) {
    auto f = std::shared_ptr<Field>(new Field(Kind::Base, cfg));
    f->base_ = std::move(b);
    return f;
  }

  static FieldPtr alg_closed(PrecisionConfig cfg = {}) {
    return std::shared_ptr<Field>(new Field(Kind::AlgClosed, cfg));
  }

  static FieldPtr padic(std::uint32_t p, PrecisionConfig cfg = {}) {
    if (!is_prime(p)) throw PreconditionViolation(std::to_string(p) + " is not prime");
    auto f = std::shared_ptr<Field>(new Field(Kind::PAdic, cfg));
    f->p_ = p;
    f->base_ = BaseField::prime(p);
    f->residue_ = base(f->base_, cfg);
    return f;
  }

  /// Series layer inner((var^factor)). An empty name picks the next default
  /// from t, s, z, w, u counted from the innermost series layer.
  static FieldPtr series(FieldPtr inner, Factor factor, std::string var = "") {
    auto f = std::shared_ptr<Field>(new Field(Kind::Series, inner->config_));
    if (var.empty()) {
      static const char* names[] = {"t", "s", "z", "w", "u"};
      const std::size_t idx = inner->series_layers();
      var = idx < 5 ? names[idx] : "t" + std::to_string(idx);
    }
    for (auto cur = inner; cur; cur = cur->inner_) {
      if (cur->kind_ == Kind::Series && cur->var_ == var) {
        throw PreconditionViolation("series variable '" + var + "' used twice");
      }
    }
    f->inner_ = std::move(inner);
    f->factor_ = factor;
    f->var_ = std::move(var);
    return f;
  }

  /// "Fp(5)", "Fq(9)", "Q", "C", "Qp(5)", "Laurent(X[, var])",
  /// "GenSeries(Q|Z, X[, var])".
  static FieldPtr parse(std::string_view text, PrecisionConfig cfg = {}) {
    std::string compact;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    }
    std::size_t pos = 0;
    auto f = parse_at(compact, pos, cfg);
    if (pos != compact.size()) throw ParseError("trailing input in field descriptor", pos);
    return f;
  }

  /// Same descriptor with a different precision configuration.
  FieldPtr with_config(const PrecisionConfig& cfg) const {
    switch (kind_) {
      case Kind::Base: return base(base_, cfg);
      case Kind::AlgClosed: return alg_closed(cfg);
      case Kind::PAdic: return padic(p_, cfg);
      case Kind::Series: return series(inner_->with_config(cfg), factor_, var_);
    }
    return nullptr;
  }

  Kind kind() const noexcept { return kind_; }
  const PrecisionConfig& config() const noexcept { return config_; }
  const BaseFieldPtr& base_field() const noexcept { return base_; }
  std::uint32_t prime() const noexcept { return p_; }
  const FieldPtr& inner() const noexcept { return inner_; }
  Factor factor() const noexcept { return factor_; }
  const std::string& var() const noexcept { return var_; }

  /// Number of valued layers k.
  std::size_t depth() const noexcept {
    switch (kind_) {
      case Kind::Base:
      case Kind::AlgClosed: return 0;
      case Kind::PAdic: return 1;
      case Kind::Series: return 1 + inner_->depth();
    }
    return 0;
  }

  std::size_t series_layers() const noexcept {
    return kind_ == Kind::Series ? 1 + inner_->series_layers() : 0;
  }

  /// Value group of v_k (all layers), innermost coordinate first.
  GroupShape value_group() const {
    switch (kind_) {
      case Kind::Base:
      case Kind::AlgClosed: return GroupShape{};
      case Kind::PAdic: return GroupShape({Factor::Z});
      case Kind::Series: return inner_->value_group() + GroupShape({factor_});
    }
    return GroupShape{};
  }

  /// Value group of v_j.
  GroupShape value_group(std::size_t level) const {
    require_level(level);
    return value_group().outer(level);
  }

  /// Residue field of v_j: the descriptor with j outer layers stripped.
  FieldPtr residue_field(std::size_t level) const {
    require_level(level);
    if (level == 0) return shared_from_this();
    if (kind_ == Kind::PAdic) return residue_;
    return inner_->residue_field(level - 1);
  }

  std::uint32_t characteristic() const {
    switch (kind_) {
      case Kind::Base: return base_->characteristic();
      case Kind::AlgClosed:
      case Kind::PAdic: return 0;
      case Kind::Series: return inner_->characteristic();
    }
    return 0;
  }

  /// Innermost descriptor (Base, AlgClosed or PAdic).
  const Field& core() const { return kind_ == Kind::Series ? inner_->core() : *this; }

  bool has_elements() const { return core().kind_ != Kind::AlgClosed; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Base: return base_->to_string();
      case Kind::AlgClosed: return "C";
      case Kind::PAdic: return "Qp(" + std::to_string(p_) + ")";
      case Kind::Series: {
        static const char* names[] = {"t", "s", "z", "w", "u"};
        const std::size_t idx = inner_->series_layers();
        const bool default_name = idx < 5 && var_ == names[idx];
        const std::string suffix = default_name ? "" : ", " + var_;
        if (factor_ == Factor::Z) return "Laurent(" + inner_->to_string() + suffix + ")";
        return "GenSeries(Q, " + inner_->to_string() + suffix + ")";
      }
    }
    return "?";
  }

  /// Structural equality, ignoring precision settings.
  bool same_as(const Field& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
      case Kind::Base: return *base_ == *o.base_;
      case Kind::AlgClosed: return true;
      case Kind::PAdic: return p_ == o.p_;
      case Kind::Series: return factor_ == o.factor_ && var_ == o.var_ && inner_->same_as(*o.inner_);
    }
    return false;
  }

  void require_level(std::size_t level) const {
    if (level > depth()) {
      throw PreconditionViolation("valuation level " + std::to_string(level) + " exceeds depth " +
                                  std::to_string(depth()) + " of " + to_string());
    }
  }

 private:
  Field(Kind kind, PrecisionConfig cfg) : kind_(kind), config_(cfg) {}

  static std::uint64_t parse_uint(const std::string& s, std::size_t& pos) {
    const std::size_t start = pos;
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      if (v > (1ull << 32)) throw ParseError("number too large", start);
      ++pos;
    }
    if (pos == start) throw ParseError("expected a number", pos);
    return v;
  }

  static void expect(const std::string& s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  static bool take(const std::string& s, std::size_t& pos, std::string_view word) {
    if (s.compare(pos, word.size(), word) == 0) {
      pos += word.size();
      return true;
    }
    return false;
  }

  static std::string parse_var(const std::string& s, std::size_t& pos) {
    const std::size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected a variable name", pos);
    return s.substr(start, pos - start);
  }

  static FieldPtr parse_at(const std::string& s, std::size_t& pos, const PrecisionConfig& cfg) {
    const std::size_t start = pos;
    if (take(s, pos, "Fp(")) {
      const auto p = parse_uint(s, pos);
      expect(s, pos, ')');
      if (!is_prime(p)) throw ParseError("Fp needs a prime", start);
      return base(BaseField::prime(static_cast<std::uint32_t>(p)), cfg);
    }
    if (take(s, pos, "Fq(")) {
      const auto q = parse_uint(s, pos);
      expect(s, pos, ')');
      return base(BaseField::of_order(q), cfg);
    }
    if (take(s, pos, "Qp(")) {
      const auto p = parse_uint(s, pos);
      expect(s, pos, ')');
      if (!is_prime(p)) throw ParseError("Qp needs a prime", start);
      return padic(static_cast<std::uint32_t>(p), cfg);
    }
    if (take(s, pos, "Laurent(")) {
      auto inner = parse_at(s, pos, cfg);
      std::string var;
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        var = parse_var(s, pos);
      }
      expect(s, pos, ')');
      return series(std::move(inner), Factor::Z, var);
    }
    if (take(s, pos, "GenSeries(")) {
      Factor factor;
      if (take(s, pos, "Q,")) {
        factor = Factor::Q;
      } else if (take(s, pos, "Z,")) {
        factor = Factor::Z;
      } else {
        throw ParseError("expected exponent group Q or Z", pos);
      }
      auto inner = parse_at(s, pos, cfg);
      std::string var;
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        var = parse_var(s, pos);
      }
      expect(s, pos, ')');
      return series(std::move(inner), factor, var);
    }
    if (take(s, pos, "Q")) return base(BaseField::rationals(), cfg);
    if (take(s, pos, "C")) return alg_closed(cfg);
    throw ParseError("unknown field descriptor", start);
  }

  Kind kind_;
  PrecisionConfig config_;
  BaseFieldPtr base_;
  std::uint32_t p_ = 0;
  FieldPtr inner_;
  FieldPtr residue_;
  Factor factor_ = Factor::Z;
  std::string var_;
};

}  // namespace valdef
