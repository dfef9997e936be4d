#include "residua/ordinal.h"

#include <cctype>
#include <limits>

#include "residua/error.h"

namespace residua {

ParseError::ParseError(std::size_t offset, std::string message, std::set<std::string> expected)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      detail_(std::move(message)),
      expected_(std::move(expected)) {}

Ordinal Ordinal::finite(const BigInt& n) {
  if (n < 0) throw PreconditionError("ordinals are non-negative");
  Ordinal r;
  if (n > 0) r.terms_.push_back(Term{Ordinal(), n});
  return r;
}

Ordinal Ordinal::omega() { return omega_pow(finite(1)); }

Ordinal Ordinal::omega_pow(const Ordinal& exponent, const BigInt& coeff) {
  if (coeff < 0) throw PreconditionError("negative coefficient");
  Ordinal r;
  if (coeff > 0) r.terms_.push_back(Term{exponent, coeff});
  return r;
}

Ordinal Ordinal::omega_times(const BigInt& n) { return omega_pow(finite(1), n); }

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff < 1) throw PreconditionError("coefficients must be positive");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw PreconditionError("exponents must be strictly decreasing");
  }
  Ordinal r;
  r.terms_ = std::move(terms);
  return r;
}

bool Ordinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

std::optional<BigInt> Ordinal::as_finite() const {
  if (terms_.empty()) return BigInt(0);
  if (terms_.size() == 1 && terms_[0].exponent.is_zero()) return terms_[0].coeff;
  return std::nullopt;
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    if (!(a.terms_[i].exponent == b.terms_[i].exponent)) return false;
  }
  return true;
}

// Cantor normal forms compare lexicographically on (exponent, coeff) pairs,
// with a proper prefix being smaller.
std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff)
      return a.terms_[i].coeff < b.terms_[i].coeff ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const auto& lead = b.terms().front();
  std::vector<Ordinal::Term> out;
  for (const auto& t : a.terms()) {
    auto c = t.exponent <=> lead.exponent;
    if (c > 0) {
      out.push_back(t);
    } else {
      if (c == 0) {
        out.push_back(Ordinal::Term{lead.exponent, t.coeff + lead.coeff});
        out.insert(out.end(), b.terms().begin() + 1, b.terms().end());
        return Ordinal::from_terms(std::move(out));
      }
      break;
    }
  }
  out.insert(out.end(), b.terms().begin(), b.terms().end());
  return Ordinal::from_terms(std::move(out));
}

// a * b distributes over the terms of b from the left. For a term w^e * n of b:
//   e > 0:  a * w^e * n = w^(lead(a) + e) * n
//   e = 0:  a * n       = a with its leading coefficient multiplied by n
Ordinal multiply(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  const auto& lead = a.terms().front();
  Ordinal result;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (!t.exponent.is_zero()) {
      piece = Ordinal::omega_pow(add(lead.exponent, t.exponent), t.coeff);
    } else {
      std::vector<Ordinal::Term> terms = a.terms();
      terms.front().coeff *= t.coeff;
      piece = Ordinal::from_terms(std::move(terms));
    }
    result = add(result, piece);
  }
  return result;
}

std::string to_string(DepthClass c) {
  switch (c) {
    case DepthClass::Zero: return "zero";
    case DepthClass::One: return "one";
    case DepthClass::Limit: return "limit";
    case DepthClass::LimitPlusOne: return "limit+1";
    case DepthClass::Invalid: return "invalid";
  }
  return "invalid";
}

DepthClass classify(const Ordinal& a) {
  if (a.is_zero()) return DepthClass::Zero;
  const auto& last = a.terms().back();
  if (!last.exponent.is_zero()) return DepthClass::Limit;
  if (a.terms().size() == 1) return last.coeff == 1 ? DepthClass::One : DepthClass::Invalid;
  return last.coeff == 1 ? DepthClass::LimitPlusOne : DepthClass::Invalid;
}

std::pair<Ordinal, BigInt> decompose_successor(const Ordinal& a) {
  if (a.is_zero()) throw PreconditionError("decompose_successor: argument must be positive");
  const auto& last = a.terms().back();
  if (!last.exponent.is_zero()) return {a, BigInt(0)};
  std::vector<Ordinal::Term> head(a.terms().begin(), a.terms().end() - 1);
  return {Ordinal::from_terms(std::move(head)), last.coeff};
}

bool omega_absorbs(const Ordinal& a) { return add(Ordinal::omega(), a) == a; }

namespace {

std::string format_exponent(const Ordinal& e) {
  if (auto n = e.as_finite()) return n->str();
  if (e == Ordinal::omega()) return "w";
  return "(" + format(e) + ")";
}

}  // namespace

std::string format(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& t : a.terms()) {
    if (!out.empty()) out += " + ";
    if (t.exponent.is_zero()) {
      out += t.coeff.str();
      continue;
    }
    out += "w";
    if (!(t.exponent == Ordinal::finite(1))) out += "^" + format_exponent(t.exponent);
    if (t.coeff != 1) out += "*" + t.coeff.str();
  }
  return out;
}

namespace {

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view text) : text_(text) {}

  Ordinal parse_all() {
    Ordinal r = ordinal();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character", {"+", "end of input"});
    return r;
  }

 private:
  Ordinal ordinal() {
    Ordinal r = term();
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        ++pos_;
        r = add(r, term());
      } else {
        return r;
      }
    }
  }

  Ordinal term() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == 'w') {
      ++pos_;
      Ordinal exponent = Ordinal::finite(1);
      BigInt coeff = 1;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '^') {
        ++pos_;
        exponent = factor();
        skip_ws();
      }
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        coeff = integer();
      }
      return Ordinal::omega_pow(exponent, coeff);
    }
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      return Ordinal::finite(integer());
    fail("expected a term", {"w", "integer"});
  }

  Ordinal factor() {
    skip_ws();
    if (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == 'w') {
        ++pos_;
        return Ordinal::omega();
      }
      if (std::isdigit(static_cast<unsigned char>(c))) return Ordinal::finite(integer());
      if (c == '(') {
        ++pos_;
        Ordinal inner = ordinal();
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("unclosed parenthesis", {")", "+"});
        ++pos_;
        return inner;
      }
    }
    fail("expected an exponent", {"w", "integer", "("});
  }

  BigInt integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer", {"integer"});
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected) {
    throw ParseError(pos_, msg, std::move(expected));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal parse_ordinal(std::string_view text) { return OrdinalParser(text).parse_all(); }

nlohmann::json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

BigInt bigint_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw PreconditionError("expected an integer in JSON");
}

nlohmann::json to_json(const Ordinal& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : a.terms()) terms.push_back({{"exp", to_json(t.exponent)}, {"coeff", bigint_json(t.coeff)}});
  return {{"terms", terms}};
}

Ordinal ordinal_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw PreconditionError("ordinal JSON must be an object with a terms array");
  std::vector<Ordinal::Term> terms;
  for (const auto& t : j["terms"]) terms.push_back({ordinal_from_json(t.at("exp")), bigint_from_json(t.at("coeff"))});
  return Ordinal::from_terms(std::move(terms));
}

CardinalBound CardinalBound::finite(const BigInt& n) {
  if (n < 1) throw PreconditionError("finite cardinal bound must be positive");
  CardinalBound k;
  k.value_ = n;
  return k;
}

std::strong_ordering operator<=>(const CardinalBound& a, const CardinalBound& b) {
  if (!a.value_ && !b.value_) return std::strong_ordering::equal;
  if (!a.value_) return std::strong_ordering::greater;
  if (!b.value_) return std::strong_ordering::less;
  if (*a.value_ == *b.value_) return std::strong_ordering::equal;
  return *a.value_ < *b.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

CardinalBound max(const CardinalBound& a, const CardinalBound& b) { return a < b ? b : a; }

std::string format(const CardinalBound& k) { return k.value() ? k.value()->str() : "aleph0"; }

CardinalBound parse_cardinal(std::string_view text) {
  if (text == "aleph0" || text == "w" || text == "inf") return CardinalBound::aleph0();
  if (text.empty()) throw ParseError(0, "expected a cardinal", {"aleph0", "integer"});
  for (std::size_t i = 0; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw ParseError(i, "expected a cardinal", {"aleph0", "integer"});
  BigInt n(std::string{text});
  if (n < 1) throw ParseError(0, "cardinal bound must be positive", {"integer >= 1"});
  return CardinalBound::finite(n);
}

}  // namespace residua
