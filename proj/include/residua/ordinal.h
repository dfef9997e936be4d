#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace residua {

using BigInt = boost::multiprecision::cpp_int;

/// An ordinal below epsilon_0 in Cantor normal form:
///   w^e1 * c1 + w^e2 * c2 + ... + w^ek * ck,   e1 > e2 > ... > ek,  ci >= 1.
/// The empty sum is 0. Every constructor and operation yields the canonical
/// form, so structural equality is ordinal equality.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;

  static Ordinal finite(const BigInt& n);
  static Ordinal omega();
  /// w^exponent * coeff (zero when coeff is zero).
  static Ordinal omega_pow(const Ordinal& exponent, const BigInt& coeff = 1);
  /// w * n
  static Ordinal omega_times(const BigInt& n);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_finite() const;
  /// The value when finite.
  std::optional<BigInt> as_finite() const;

  /// Builds from terms already in canonical order; throws PreconditionError otherwise.
  static Ordinal from_terms(std::vector<Term> terms);

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  BigInt coeff;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

/// Ordinal sum: order type of a followed by b.
Ordinal add(const Ordinal& a, const Ordinal& b);
/// Ordinal product: order type of a x b under reverse-lexicographic order.
Ordinal multiply(const Ordinal& a, const Ordinal& b);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return multiply(a, b); }

enum class DepthClass { Zero, One, Limit, LimitPlusOne, Invalid };

std::string to_string(DepthClass c);

/// Which values can occur as a residual finiteness depth.
DepthClass classify(const Ordinal& a);

/// Splits a = limit_part + tail with limit_part zero or a limit ordinal.
/// Throws PreconditionError for a = 0.
std::pair<Ordinal, BigInt> decompose_successor(const Ordinal& a);

/// True iff w + a == a.
bool omega_absorbs(const Ordinal& a);

/// Canonical text, e.g. "w^(w*2)*3 + w + 4"; zero prints as "0".
std::string format(const Ordinal& a);

/// Parses the ordinal text grammar:
///   ordinal := term ("+" term)*
///   term    := "w" ("^" factor)? ("*" int)? | int
///   factor  := "w" | int | "(" ordinal ")"
/// Terms combine with ordinal addition, so "1 + w" parses to w.
/// Throws ParseError carrying the offset of the first offending character.
Ordinal parse_ordinal(std::string_view text);

nlohmann::json to_json(const Ordinal& a);
Ordinal ordinal_from_json(const nlohmann::json& j);

/// Finite(n) for n >= 1, or Aleph0. Bounds the index of every chain step.
class CardinalBound {
 public:
  static CardinalBound finite(const BigInt& n);
  static CardinalBound aleph0() { return CardinalBound(); }

  bool is_finite() const noexcept { return value_.has_value(); }
  const std::optional<BigInt>& value() const noexcept { return value_; }

  /// True when a step of this (finite) index is allowed, i.e. index < kappa.
  bool admits(const BigInt& index) const { return !value_ || index < *value_; }

  friend bool operator==(const CardinalBound&, const CardinalBound&) = default;
  friend std::strong_ordering operator<=>(const CardinalBound& a, const CardinalBound& b);

 private:
  CardinalBound() = default;
  std::optional<BigInt> value_;
};

CardinalBound max(const CardinalBound& a, const CardinalBound& b);
/// "aleph0" or the decimal value.
std::string format(const CardinalBound& k);
/// Accepts "aleph0", "w", "inf" or a positive decimal integer.
CardinalBound parse_cardinal(std::string_view text);

/// JSON number when the value fits in int64, decimal string otherwise.
nlohmann::json bigint_json(const BigInt& v);
BigInt bigint_from_json(const nlohmann::json& j);

}  // namespace residua
