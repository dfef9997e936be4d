#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "residua/error.h"
#include "residua/ordinal.h"
#include "support.h"

using namespace residua;

namespace {

const Ordinal w = Ordinal::omega();
Ordinal n(long v) { return Ordinal::finite(v); }

// Ordinals below w^w as coefficient vectors indexed by the exponent.
using Poly = std::map<int, BigInt, std::greater<int>>;

Poly to_poly(const Ordinal& a) {
  Poly p;
  for (const auto& t : a.terms()) p[static_cast<int>(*t.exponent.as_finite())] = t.coeff;
  return p;
}

Ordinal from_poly(const Poly& p) {
  std::vector<Ordinal::Term> terms;
  for (const auto& [e, c] : p)
    if (c > 0) terms.push_back({Ordinal::finite(e), c});
  return Ordinal::from_terms(std::move(terms));
}

int degree(const Poly& p) { return p.empty() ? -1 : p.begin()->first; }

Poly poly_add(const Poly& a, const Poly& b) {
  if (b.empty()) return a;
  const int d = degree(b);
  Poly out;
  for (const auto& [e, c] : a)
    if (e >= d) out[e] = c;
  for (const auto& [e, c] : b) out[e] += c;
  return out;
}

// a * b by repeated addition on the finite part and a * w^k = w^(deg a + k)
// for the infinite terms; distributes from the left.
Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out;
  for (const auto& [e, c] : b) {
    Poly piece;
    if (e == 0) {
      for (BigInt i = 0; i < c; ++i) piece = poly_add(piece, a);
    } else {
      Poly unit{{degree(a) + e, 1}};
      for (BigInt i = 0; i < c; ++i) piece = poly_add(piece, unit);
    }
    out = poly_add(out, piece);
  }
  return out;
}

}  // namespace

TEST_CASE("addition absorbs lower left terms") {
  CHECK(add(n(1), w) == w);
  CHECK(add(w, w) == Ordinal::omega_times(2));
  CHECK(add(w, Ordinal::omega_pow(w)) == Ordinal::omega_pow(w));
  CHECK(add(w, n(1)) != w);
  CHECK(add(Ordinal(), w) == w);
}

TEST_CASE("multiplication is not commutative") {
  CHECK(multiply(w, n(2)) == add(w, w));
  CHECK(multiply(n(2), w) == w);
  CHECK(multiply(w, Ordinal()).is_zero());
  CHECK(compare(Ordinal::omega_times(2), multiply(n(2), w)) == std::strong_ordering::greater);
  // right distributivity fails
  CHECK(multiply(add(n(1), n(1)), w) == w);
  CHECK(add(multiply(n(1), w), multiply(n(1), w)) == Ordinal::omega_times(2));
}

TEST_CASE("2*w has order type w") {
  // reverse-lexicographic order on {0,1} x N: compare the N-coordinate first
  std::vector<std::pair<int, int>> pts;
  for (int k = 0; k < 40; ++k)
    for (int i = 0; i < 2; ++i) pts.push_back({i, k});
  std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.second != b.second ? a.second < b.second : a.first < b.first; });
  // the map (i, k) -> 2k + i is an order isomorphism onto an initial segment of N
  for (std::size_t pos = 0; pos < pts.size(); ++pos) CHECK(2 * pts[pos].second + pts[pos].first == static_cast<int>(pos));
  CHECK(multiply(n(2), w) == w);
}

TEST_CASE("compare and equality") {
  CHECK(compare(w, w) == std::strong_ordering::equal);
  CHECK(compare(add(n(1), w), w) == std::strong_ordering::equal);
  CHECK(n(3) < w);
  CHECK(Ordinal::omega_times(5) < Ordinal::omega_pow(n(2)));
  CHECK(Ordinal::omega_pow(n(100), 7) < Ordinal::omega_pow(w));
}

TEST_CASE("classification") {
  CHECK(classify(Ordinal()) == DepthClass::Zero);
  CHECK(classify(n(1)) == DepthClass::One);
  CHECK(classify(n(2)) == DepthClass::Invalid);
  CHECK(classify(w) == DepthClass::Limit);
  CHECK(classify(add(w, n(1))) == DepthClass::LimitPlusOne);
  CHECK(classify(add(w, n(2))) == DepthClass::Invalid);
  CHECK(classify(Ordinal::omega_pow(w)) == DepthClass::Limit);
}

TEST_CASE("successor decomposition") {
  auto [l1, t1] = decompose_successor(add(Ordinal::omega_times(2), n(3)));
  CHECK(l1 == Ordinal::omega_times(2));
  CHECK(t1 == 3);
  auto [l2, t2] = decompose_successor(w);
  CHECK(l2 == w);
  CHECK(t2 == 0);
  auto [l3, t3] = decompose_successor(n(5));
  CHECK(l3.is_zero());
  CHECK(t3 == 5);
  CHECK_THROWS_AS(decompose_successor(Ordinal()), PreconditionError);
}

TEST_CASE("omega absorption examples") {
  CHECK_FALSE(omega_absorbs(Ordinal::omega_times(5)));
  CHECK(omega_absorbs(Ordinal::omega_pow(w)));
  CHECK_FALSE(omega_absorbs(Ordinal()));
  // w + w^2 = w^2: the threshold sits at w^2
  CHECK(omega_absorbs(Ordinal::omega_pow(n(2))));
  CHECK_FALSE(omega_absorbs(add(Ordinal::omega_times(7), n(3))));
}

TEST_CASE("omega absorption holds exactly from w^2 on") {
  std::mt19937_64 rng(11);
  const Ordinal w2 = Ordinal::omega_pow(n(2));
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = fixtures::ordinal_mixed(rng);
    CHECK(omega_absorbs(a) == (a >= w2));
  }
}

TEST_CASE("text format") {
  CHECK(format(add(Ordinal::omega_times(2), n(1))) == "w*2 + 1");
  CHECK(parse_ordinal("w^w") == Ordinal::omega_pow(w));
  Ordinal p = parse_ordinal("w^(w*2)*3 + w + 4");
  REQUIRE(p.terms().size() == 3);
  CHECK(p.terms()[0].exponent == Ordinal::omega_times(2));
  CHECK(p.terms()[0].coeff == 3);
  CHECK(p.terms()[1].exponent == n(1));
  CHECK(p.terms()[2].exponent.is_zero());
  CHECK(p.terms()[2].coeff == 4);
  CHECK(parse_ordinal("  w * 3+ 2 ") == add(Ordinal::omega_times(3), n(2)));
  CHECK(format(Ordinal()) == "0");
}

TEST_CASE("parse errors carry the offset") {
  try {
    parse_ordinal("w + + 1");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_ordinal("w^(2"), ParseError);
  CHECK_THROWS_AS(parse_ordinal(""), ParseError);
  CHECK_THROWS_AS(parse_ordinal("x"), ParseError);
}

TEST_CASE("text and json round trips") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = fixtures::ordinal_mixed(rng);
    CHECK(parse_ordinal(format(a)) == a);
    CHECK(ordinal_from_json(to_json(a)) == a);
  }
  CHECK(to_json(Ordinal()).dump() == R"({"terms":[]})");
}

TEST_CASE("arithmetic agrees with the polynomial oracle below w^w") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = fixtures::ordinal_below_w_pow(rng, 4, 4);
    Ordinal b = fixtures::ordinal_below_w_pow(rng, 4, 4);
    CHECK(add(a, b) == from_poly(poly_add(to_poly(a), to_poly(b))));
    CHECK(multiply(a, b) == from_poly(poly_mul(to_poly(a), to_poly(b))));
  }
}

TEST_CASE("associativity and left distributivity on random triples") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = fixtures::ordinal_below_w_pow(rng);
    Ordinal b = fixtures::ordinal_below_w_pow(rng);
    Ordinal c = fixtures::ordinal_below_w_pow(rng);
    REQUIRE(add(add(a, b), c) == add(a, add(b, c)));
    REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    REQUIRE(multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c)));
  }
}

TEST_CASE("compare is a total order") {
  std::mt19937_64 rng(3);
  std::vector<Ordinal> xs;
  for (int i = 0; i < 120; ++i) xs.push_back(fixtures::ordinal_mixed(rng));
  for (const auto& a : xs)
    for (const auto& b : xs) {
      auto ab = compare(a, b);
      auto ba = compare(b, a);
      CHECK((ab == 0) == (ba == 0));
      CHECK((ab < 0) == (ba > 0));
      CHECK((ab == 0) == (a == b));
      for (int k = 0; k < 3; ++k) {
        const auto& c = xs[fixtures::below(rng, xs.size())];
        if (a < b && b < c) CHECK(a < c);
      }
    }
}

TEST_CASE("addition is strictly monotone on the right") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = fixtures::ordinal_mixed(rng);
    Ordinal b = fixtures::ordinal_mixed(rng);
    Ordinal c = fixtures::ordinal_mixed(rng);
    if (b < c) CHECK(add(a, b) < add(a, c));
    CHECK(a <= add(a, b));
    CHECK(b <= add(a, b));
  }
}

TEST_CASE("classification matches the successor decomposition") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = fixtures::ordinal_mixed(rng);
    if (a.is_zero()) continue;
    auto [limit, tail] = decompose_successor(a);
    CHECK(add(limit, Ordinal::finite(tail)) == a);
    const bool invalid = tail >= 2 || (a.is_finite() && *a.as_finite() >= 2);
    CHECK((classify(a) == DepthClass::Invalid) == invalid);
  }
}

TEST_CASE("w + w*(n-1) = w*n") {
  for (int k = 1; k <= 20; ++k) CHECK(add(w, multiply(w, n(k - 1))) == multiply(w, n(k)));
}

TEST_CASE("cardinal bounds") {
  auto five = CardinalBound::finite(5);
  CHECK(five < CardinalBound::aleph0());
  CHECK(CardinalBound::finite(2) < five);
  CHECK(max(five, CardinalBound::aleph0()) == CardinalBound::aleph0());
  CHECK(five.admits(4));
  CHECK_FALSE(five.admits(5));
  CHECK(CardinalBound::aleph0().admits(BigInt(1) << 200));
  CHECK(parse_cardinal("aleph0") == CardinalBound::aleph0());
  CHECK(parse_cardinal("7") == CardinalBound::finite(7));
  CHECK(format(five) == "5");
  CHECK_THROWS_AS(parse_cardinal("0"), ParseError);
  CHECK_THROWS_AS(CardinalBound::finite(0), PreconditionError);
}
