#pragma once

// Seeded random elements.
//
// Coefficients come from a small box, outer exponents from [-span, span]
// (denominators 1..4 on GenSeries(Q) layers). In approximate mode values
// are handed out with relative precision equal to the cap.

#include <cstdint>
#include <random>

#include "valdef/element.hpp"

namespace valdef {

struct SampleOptions {
  std::int64_t span = 8;
  std::int64_t coeff_box = 6;
  std::int64_t max_terms = 3;
  bool approximate = false;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed, SampleOptions opts = {}) : rng_(seed), opts_(opts) {}

  std::mt19937_64& rng() noexcept { return rng_; }
  const SampleOptions& options() const noexcept { return opts_; }

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Any element; zero with small probability.
  Element element(const FieldPtr& f) {
    if (coin(0.03)) return Element::zero(f);
    return nonzero(f);
  }

  Element nonzero(const FieldPtr& f) {
    switch (f->kind()) {
      case Field::Kind::Base: {
        const auto& b = *f->base_field();
        if (b.is_finite()) return Element::from_base(f, b.element(static_cast<std::uint32_t>(uniform(1, b.order() - 1))));
        std::int64_t n = 0;
        while (n == 0) n = uniform(-opts_.coeff_box, opts_.coeff_box);
        return Element::from_rational(f, BigRational(BigInt(static_cast<long>(n)), BigInt(static_cast<long>(uniform(1, opts_.coeff_box)))));
      }
      case Field::Kind::PAdic: return padic_with_valuation(f, uniform(-opts_.span, opts_.span));
      case Field::Kind::Series: return series_with_exponent(f, exponent(f));
      case Field::Kind::AlgClosed: break;
    }
    throw Unsupported("cannot sample " + f->to_string());
  }

  /// Nonzero element whose v_1 value has outer coordinate e.
  Element with_outer_exponent(const FieldPtr& f, Rational e) {
    if (f->kind() == Field::Kind::PAdic) {
      if (e.denominator() != 1) throw PreconditionViolation("p-adic valuations are integers");
      return padic_with_valuation(f, e.numerator());
    }
    return series_with_exponent(f, e);
  }

  /// Unit of v_level: valuation exactly zero at that level.
  Element unit(const FieldPtr& f, std::size_t level) {
    if (level == 0) return nonzero(f);
    if (f->kind() == Field::Kind::PAdic) return padic_with_valuation(f, 0);
    Element lead = unit(f->inner(), level - 1);
    Element x = Element::monomial(f, lead, Rational(0));
    return x + tail(f, Rational(0));
  }

  /// Element with v_level > 0.
  Element in_maximal_ideal(const FieldPtr& f, std::size_t level) {
    Element x = element(f);
    while (!x.is_exact_zero() && !in_valuation_ring(x, level)) x = element(f);
    return x * Element::level_variable(f, level);
  }

  /// Element with v_level >= 0.
  Element integral(const FieldPtr& f, std::size_t level) {
    Element x = element(f);
    while (!in_valuation_ring(x, level)) x = element(f);
    return x;
  }

 private:
  Rational exponent(const FieldPtr& f) {
    const std::int64_t n = uniform(-opts_.span, opts_.span);
    if (f->factor() == Factor::Z) return Rational(n);
    return Rational(n, uniform(1, 4));
  }

  Rational step(const FieldPtr& f) {
    if (f->factor() == Factor::Z) return Rational(uniform(1, 3));
    return Rational(uniform(1, 6), uniform(1, 4));
  }

  Element tail(const FieldPtr& f, Rational after) {
    std::vector<SeriesTerm> terms;
    const std::int64_t extra = uniform(0, opts_.max_terms - 1);
    Rational e = after;
    for (std::int64_t i = 0; i < extra; ++i) {
      e += step(f);
      terms.push_back({e, element(f->inner())});
    }
    return Element::from_terms(f, std::move(terms));
  }

  Element series_with_exponent(const FieldPtr& f, Rational e) {
    std::vector<SeriesTerm> terms;
    terms.push_back({e, nonzero(f->inner())});
    Element x = Element::from_terms(f, std::move(terms)) + tail(f, e);
    if (opts_.approximate) x = x + Element::zero_approx(f, e + Rational(f->config().series_order));
    return x;
  }

  Element padic_with_valuation(const FieldPtr& f, std::int64_t v) {
    const std::uint32_t p = f->prime();
    const BigInt bound = big_pow(p, 3);
    BigInt num;
    do {
      num = BigInt(static_cast<long>(uniform(1, bound.get_si() - 1)));
    } while (mpz_divisible_ui_p(num.get_mpz_t(), p));
    if (coin()) num = -num;
    std::int64_t den;
    do {
      den = uniform(1, opts_.coeff_box);
    } while (den % p == 0);
    BigRational q(num, BigInt(static_cast<long>(den)));
    q.canonicalize();
    if (v >= 0) {
      q *= BigRational(big_pow(p, v));
    } else {
      q /= BigRational(big_pow(p, -v));
    }
    PAdic a = PAdic::exact(p, q);
    if (opts_.approximate) a = a.to_approx(f->config().padic_digits);
    return Element::from_padic(f, a);
  }

  std::mt19937_64 rng_;
  SampleOptions opts_;
};

}  // namespace valdef
