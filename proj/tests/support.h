#pragma once

// Seeded generators shared by the property tests.

#include <random>
#include <vector>

#include "residua/group.h"
#include "residua/ordinal.h"

namespace fixtures {

using residua::BigInt;
using residua::Ordinal;

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

// Ordinal below w^(max_exp+1) with finite exponents.
inline Ordinal ordinal_below_w_pow(std::mt19937_64& rng, unsigned max_exp = 4, unsigned max_coeff = 5) {
  std::vector<Ordinal::Term> terms;
  for (int e = static_cast<int>(max_exp); e >= 0; --e) {
    if (below(rng, 3) == 0) continue;
    terms.push_back({Ordinal::finite(e), BigInt(1 + below(rng, max_coeff))});
  }
  return Ordinal::from_terms(std::move(terms));
}

// Mixes finite exponents with exponents w, w+1 and w*2 so that samples fall
// on both sides of w^w.
inline Ordinal ordinal_mixed(std::mt19937_64& rng) {
  static const std::vector<Ordinal> big_exps = {
      Ordinal::omega_times(2), residua::add(Ordinal::omega(), Ordinal::finite(1)), Ordinal::omega()};
  std::vector<Ordinal::Term> terms;
  for (const auto& e : big_exps)
    if (below(rng, 5) == 0) terms.push_back({e, BigInt(1 + below(rng, 3))});
  Ordinal low = ordinal_below_w_pow(rng, 3, 4);
  for (const auto& t : low.terms()) terms.push_back(t);
  return Ordinal::from_terms(std::move(terms));
}

// Random group element as a word of length 0..max_len in the generators.
inline residua::Element word(const residua::Group& g, std::mt19937_64& rng, std::size_t max_len = 8) {
  return residua::random_word(g, below(rng, max_len + 1), rng);
}

// Small finite groups used across suites, orders 1..48.
inline std::vector<residua::GroupPtr> finite_groups() {
  using namespace residua;
  return {
      make_trivial(),
      make_cyclic(2),
      make_cyclic(3),
      make_cyclic(4),
      make_cyclic(5),
      make_cyclic(6),
      make_cyclic(7),
      make_product({make_cyclic(2), make_cyclic(2)}),
      make_symmetric(3),
      make_perm(4, {perm_from_cycles(4, {{0, 1, 2, 3}}), perm_from_cycles(4, {{0, 2}})}, "D(4)"),
      make_cyclic(12),
      make_alternating(4),
      make_product({make_cyclic(2), make_cyclic(4)}),
      make_product({make_symmetric(3), make_cyclic(3)}),
      make_symmetric(4),
      make_product({make_symmetric(4), make_cyclic(2)}),
  };
}

}  // namespace fixtures
