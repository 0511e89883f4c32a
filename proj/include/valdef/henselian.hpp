#pragma once

// Sampled check of 1 + m_v inside the p-th powers.

#include <string>
#include <vector>

#include "valdef/powers.hpp"
#include "valdef/sampling.hpp"

namespace valdef {

struct HenselianReport {
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t undecided = 0;
  std::vector<std::string> notes;

  bool passed() const { return failures == 0 && undecided == 0; }
};

inline HenselianReport p_henselian_check(const FieldPtr& f, std::size_t level, std::uint32_t p, std::size_t samples,
                                         std::uint64_t seed) {
  if (!is_prime(p)) throw PreconditionViolation("p must be prime");
  if (level == 0 || level > f->depth()) throw PreconditionViolation(f->to_string() + " has no nontrivial valuation at this level");
  if (f->residue_field(level)->characteristic() == p) throw PreconditionViolation("residue characteristic equals p");
  if (!has_primitive_root_of_unity(*f, p)) throw PreconditionViolation("K lacks a primitive p-th root of unity");
  HenselianReport r;
  Sampler s(seed);
  const Element one = Element::one(f);
  for (std::size_t i = 0; i < samples; ++i) {
    const Element m = s.in_maximal_ideal(f, level);
    ++r.samples;
    try {
      if (!is_nth_power(one + m, p)) {
        ++r.failures;
        if (r.notes.size() < 8) r.notes.push_back("1 + m not a p-th power for m = " + to_string(m));
      }
    } catch (const InsufficientPrecision& e) {
      ++r.undecided;
    }
  }
  return r;
}

}  // namespace valdef
