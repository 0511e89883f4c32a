#pragma once

// Finite-rank ordered abelian groups built as inverse lexicographic products
// of Z and Q factors.
//
// Ordering convention: coordinates are listed innermost first and the LAST
// coordinate dominates. For a tower F((x^D))((t^G)) the outer t-exponent is
// the last coordinate, so the t-adic valuation is a coarsening of the full
// monomial valuation. The construction module's witness test depends on this.

#include <algorithm>
#include <cctype>
#include <compare>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valdef/common.hpp"

namespace valdef {

enum class Factor { Z, Q };

class GroupShape {
 public:
  GroupShape() = default;
  explicit GroupShape(std::vector<Factor> factors) : factors_(std::move(factors)) {}

  /// "Z", "Z*Q", "Q * Z * Z"; "0" or "" is the trivial group.
  static GroupShape parse(std::string_view text) {
    std::vector<Factor> factors;
    std::string compact;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    }
    if (compact.empty() || compact == "0") return GroupShape{};
    std::size_t pos = 0;
    while (true) {
      if (pos >= compact.size()) throw ParseError("expected group factor", pos);
      const char c = compact[pos];
      if (c == 'Z') {
        factors.push_back(Factor::Z);
      } else if (c == 'Q') {
        factors.push_back(Factor::Q);
      } else {
        throw ParseError(std::string("unknown group factor '") + c + "'", pos);
      }
      ++pos;
      if (pos == compact.size()) break;
      if (compact[pos] != '*') throw ParseError("expected '*'", pos);
      ++pos;
    }
    return GroupShape(std::move(factors));
  }

  std::size_t rank() const noexcept { return factors_.size(); }
  bool trivial() const noexcept { return factors_.empty(); }
  Factor factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const noexcept { return factors_; }

  /// The j most dominant (last) factors.
  GroupShape outer(std::size_t j) const {
    if (j > rank()) throw PreconditionViolation("outer rank exceeds group rank");
    return GroupShape({factors_.end() - static_cast<std::ptrdiff_t>(j), factors_.end()});
  }

  /// The j least dominant (first) factors: the j-th convex subgroup.
  GroupShape inner(std::size_t j) const {
    if (j > rank()) throw PreconditionViolation("inner rank exceeds group rank");
    return GroupShape({factors_.begin(), factors_.begin() + static_cast<std::ptrdiff_t>(j)});
  }

  GroupShape operator+(const GroupShape& dominant) const {
    auto f = factors_;
    f.insert(f.end(), dominant.factors_.begin(), dominant.factors_.end());
    return GroupShape(std::move(f));
  }

  std::string to_string() const {
    if (factors_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += "*";
      out += factors_[i] == Factor::Z ? "Z" : "Q";
    }
    return out;
  }

  bool operator==(const GroupShape&) const = default;

 private:
  std::vector<Factor> factors_;
};

class GroupElement {
 public:
  GroupElement() = default;

  GroupElement(GroupShape shape, std::vector<Rational> coords)
      : shape_(std::move(shape)), coords_(std::move(coords)) {
    if (coords_.size() != shape_.rank()) {
      throw PreconditionViolation("coordinate count does not match group rank");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (shape_.factor(i) == Factor::Z && coords_[i].denominator() != 1) {
        throw PreconditionViolation("non-integral coordinate in a Z factor");
      }
    }
  }

  static GroupElement zero(const GroupShape& shape) {
    return GroupElement(shape, std::vector<Rational>(shape.rank(), Rational(0)));
  }

  static GroupElement basis(const GroupShape& shape, std::size_t i) {
    auto g = zero(shape);
    g.coords_.at(i) = 1;
    return g;
  }

  /// "(1,-2)", "( 1/2 , 3 )"; a bare "5" is accepted for rank one.
  static GroupElement parse(const GroupShape& shape, std::string_view text) {
    std::string compact;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    }
    std::string_view body = compact;
    if (!body.empty() && body.front() == '(') {
      if (body.back() != ')') throw ParseError("expected ')'", compact.size());
      body = body.substr(1, body.size() - 2);
    }
    std::vector<Rational> coords;
    if (!body.empty()) {
      std::size_t start = 0;
      while (true) {
        const auto comma = body.find(',', start);
        coords.push_back(parse_rational(body.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    return GroupElement(shape, std::move(coords));
  }

  const GroupShape& shape() const noexcept { return shape_; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_.at(i); }
  std::size_t rank() const noexcept { return coords_.size(); }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& r) { return r == 0; });
  }

  /// Sign of the element under the last-dominant order: -1, 0, +1.
  int sign() const {
    for (auto it = coords_.rbegin(); it != coords_.rend(); ++it) {
      if (*it > 0) return 1;
      if (*it < 0) return -1;
    }
    return 0;
  }

  GroupElement operator+(const GroupElement& o) const {
    require_same_shape(o);
    auto r = *this;
    for (std::size_t i = 0; i < coords_.size(); ++i) r.coords_[i] += o.coords_[i];
    return r;
  }

  GroupElement operator-(const GroupElement& o) const { return *this + (-o); }

  GroupElement operator-() const {
    auto r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
  }

  friend GroupElement operator*(std::int64_t n, const GroupElement& a) {
    auto r = a;
    for (auto& c : r.coords_) c *= n;
    return r;
  }

  /// Total order; throws on shape mismatch.
  std::strong_ordering operator<=>(const GroupElement& o) const {
    require_same_shape(o);
    for (std::size_t i = coords_.size(); i-- > 0;) {
      if (coords_[i] < o.coords_[i]) return std::strong_ordering::less;
      if (o.coords_[i] < coords_[i]) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

  bool operator==(const GroupElement& o) const {
    return shape_ == o.shape_ && coords_ == o.coords_;
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) out += ",";
      out += valdef::to_string(coords_[i]);
    }
    return out + ")";
  }

 private:
  void require_same_shape(const GroupElement& o) const {
    if (!(shape_ == o.shape_)) {
      throw PreconditionViolation("group shape mismatch: " + shape_.to_string() + " vs " +
                                  o.shape_.to_string());
    }
  }

  GroupShape shape_;
  std::vector<Rational> coords_;
};

inline std::strong_ordering cmp(const GroupElement& a, const GroupElement& b) { return a <=> b; }

/// delta with n*delta = a inside the group, if it exists.
inline std::optional<GroupElement> divide_by(std::int64_t n, const GroupElement& a) {
  if (n < 1) throw PreconditionViolation("divide_by requires n >= 1");
  std::vector<Rational> coords;
  coords.reserve(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) {
    const Rational q = a[i] / n;
    if (a.shape().factor(i) == Factor::Z && q.denominator() != 1) return std::nullopt;
    coords.push_back(q);
  }
  return GroupElement(a.shape(), std::move(coords));
}

/// Convex subgroups of a lex product are generated by the first j factors,
/// 0 <= j <= rank.
inline std::vector<std::size_t> convex_subgroups(const GroupShape& shape) {
  std::vector<std::size_t> js(shape.rank() + 1);
  std::iota(js.begin(), js.end(), std::size_t{0});
  return js;
}

/// Whether g lies in the convex subgroup generated by the first j factors.
inline bool in_convex_subgroup(const GroupElement& g, std::size_t j) {
  for (std::size_t i = j; i < g.rank(); ++i) {
    if (g[i] != 0) return false;
  }
  return true;
}

/// Smallest positive element when the group is discrete, nullopt otherwise.
inline std::optional<GroupElement> is_discrete(const GroupShape& shape) {
  if (shape.trivial()) throw PreconditionViolation("discreteness of the trivial group");
  if (shape.factor(0) != Factor::Z) return std::nullopt;
  return GroupElement::basis(shape, 0);
}

/// Whether every quotient by a nontrivial convex subgroup is p-divisible.
/// The quotient by the first j factors is the lex product of the remaining
/// ones, which is p-divisible exactly when they are all Q.
inline bool is_p_regular(const GroupShape& shape, std::uint32_t p) {
  if (!is_prime(p)) throw PreconditionViolation("p must be prime");
  for (std::size_t j = 1; j <= shape.rank(); ++j) {
    for (std::size_t i = j; i < shape.rank(); ++i) {
      if (shape.factor(i) == Factor::Z) return false;
    }
  }
  return true;
}

/// For Z/Q lex shapes p-divisibility of a quotient does not depend on p, so
/// checking one prime decides regularity.
inline bool is_regular(const GroupShape& shape) { return is_p_regular(shape, 2); }

inline bool is_Z_group(const GroupShape& shape) {
  return !shape.trivial() && is_discrete(shape).has_value() && is_regular(shape);
}

/// Some proper convex subgroup H has Gamma/H regular.
inline bool has_regular_quotient(const GroupShape& shape) {
  for (std::size_t j = 0; j < shape.rank(); ++j) {
    const GroupShape quotient({shape.factors().begin() + static_cast<std::ptrdiff_t>(j),
                               shape.factors().end()});
    if (is_regular(quotient)) return true;
  }
  return false;
}

namespace detail {

/// Rank over Q of the coordinate matrix.
inline std::size_t rational_rank(std::vector<std::vector<BigRational>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const BigRational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Nonzero invariant factors of an integer matrix (Smith normal form).
inline std::vector<BigInt> invariant_factors(std::vector<std::vector<BigInt>> m) {
  std::vector<BigInt> diag;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pivot: smallest nonzero absolute value in the trailing block
    std::size_t pr = rows, pc = cols;
    for (std::size_t r = t; r < rows; ++r) {
      for (std::size_t c = t; c < cols; ++c) {
        if (m[r][c] != 0 && (pr == rows || abs(m[r][c]) < abs(m[pr][pc]))) {
          pr = r;
          pc = c;
        }
      }
    }
    if (pr == rows) break;
    std::swap(m[t], m[pr]);
    for (auto& row : m) std::swap(row[t], row[pc]);
    bool clean = true;
    for (std::size_t r = t + 1; r < rows; ++r) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), m[r][t].get_mpz_t(), m[t][t].get_mpz_t());
      for (std::size_t c = t; c < cols; ++c) m[r][c] -= q * m[t][c];
      if (m[r][t] != 0) clean = false;
    }
    for (std::size_t c = t + 1; c < cols; ++c) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), m[t][c].get_mpz_t(), m[t][t].get_mpz_t());
      for (std::size_t r = t; r < rows; ++r) m[r][c] -= q * m[r][t];
      if (m[t][c] != 0) clean = false;
    }
    if (!clean) continue;
    // divisibility condition of the normal form
    bool divides = true;
    for (std::size_t r = t + 1; r < rows && divides; ++r) {
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (!mpz_divisible_p(m[r][c].get_mpz_t(), m[t][t].get_mpz_t())) {
          for (std::size_t k = t; k < cols; ++k) m[t][k] += m[r][k];
          divides = false;
          break;
        }
      }
    }
    if (!divides) continue;
    diag.push_back(abs(m[t][t]));
    ++t;
  }
  return diag;
}

}  // namespace detail

/// Whether the subgroup generated by `gens` is n-pure in the ambient group
/// for every 1 <= n <= n_max: each ambient element that is n-divisible and
/// lies in the span is n-divisible within the span.
///
/// For independent generators this holds iff the map c -> sum c_i g_i,
/// restricted to the Z coordinates and reduced mod n, is injective; Q
/// coordinates are always divisible. That is read off the invariant factors.
inline bool is_pure_sublattice(const std::vector<GroupElement>& gens, const GroupShape& ambient,
                               std::int64_t n_max = 12) {
  if (gens.empty()) return true;
  std::vector<std::vector<BigRational>> full;
  std::vector<std::vector<BigInt>> integral;
  for (const auto& g : gens) {
    if (!(g.shape() == ambient)) throw PreconditionViolation("generator not in ambient group");
    std::vector<BigRational> row;
    std::vector<BigInt> zrow;
    for (std::size_t i = 0; i < g.rank(); ++i) {
      row.push_back(to_big(g[i]));
      if (ambient.factor(i) == Factor::Z) zrow.emplace_back(static_cast<long>(g[i].numerator()));
    }
    full.push_back(std::move(row));
    integral.push_back(std::move(zrow));
  }
  if (detail::rational_rank(full) != gens.size()) {
    throw PreconditionViolation("generators are dependent");
  }
  if (n_max < 2) return true;
  if (integral[0].empty()) return false;
  const auto factors = detail::invariant_factors(integral);
  if (factors.size() < gens.size()) return false;
  for (std::int64_t n = 2; n <= n_max; ++n) {
    for (const auto& d : factors) {
      BigInt g;
      const BigInt bn(static_cast<long>(n));
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), bn.get_mpz_t());
      if (g != 1) return false;
    }
  }
  return true;
}

}  // namespace valdef
