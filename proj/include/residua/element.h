#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "residua/ordinal.h"

namespace residua {

/// Immutable group element. The payload variant is the element's group tag:
/// each group accepts only its own variant (and, for permutations and
/// residues, its own degree or modulus), so mixing elements of unrelated
/// groups is rejected instead of coerced. Copies share the payload.
class Element {
 public:
  struct Rep;

  Element();  // the empty tuple; only useful as a placeholder
  explicit Element(Rep rep);

  const Rep& rep() const noexcept { return *rep_; }

  friend bool operator==(const Element& a, const Element& b);
  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

 private:
  std::shared_ptr<const Rep> rep_;
};

/// Permutation of {0..d-1} as an image array.
struct Perm {
  std::vector<std::uint32_t> image;
};

struct Integer {
  BigInt value;
};

struct Modular {
  std::uint64_t residue = 0;
  std::uint64_t modulus = 1;
};

/// The isometry x -> (flip ? -x : x) + translation of the integer line.
struct Dihedral {
  BigInt translation;
  bool flip = false;
};

struct Tuple {
  std::vector<Element> parts;
};

/// Finitely supported function from points to a base group. Only
/// non-identity values are stored.
struct FinSupport {
  std::map<Element, Element> values;
};

/// Pair (f, g) of a wreath product; `fs` holds a FinSupport payload.
struct WreathPair {
  Element fs;
  Element top;
};

struct Element::Rep {
  std::variant<Perm, Integer, Modular, Dihedral, Tuple, FinSupport, WreathPair> v;
};

inline Element make_perm_element(std::vector<std::uint32_t> image) { return Element({Perm{std::move(image)}}); }
inline Element make_integer(const BigInt& v) { return Element({Integer{v}}); }
inline Element make_modular(std::uint64_t r, std::uint64_t n) { return Element({Modular{r, n}}); }
inline Element make_dihedral(const BigInt& t, bool flip) { return Element({Dihedral{t, flip}}); }
inline Element make_tuple(std::vector<Element> parts) { return Element({Tuple{std::move(parts)}}); }
inline Element make_fin_support(std::map<Element, Element> values) { return Element({FinSupport{std::move(values)}}); }
inline Element make_wreath(Element fs, Element top) { return Element({WreathPair{std::move(fs), std::move(top)}}); }

template <class T>
const T* get_if(const Element& e) {
  return std::get_if<T>(&e.rep().v);
}

/// Short human-readable text: cycles for permutations, "{p:v}" for
/// finitely supported functions, "[{..}; g]" for wreath pairs.
std::string to_text(const Element& e);

/// JSON per variant: permutation as image array, wreath pair as
/// {"fs":{"<point>":<elt>},"top":<elt>}.
nlohmann::json to_json(const Element& e);

/// Builds a permutation of the given degree from disjoint cycles. Throws
/// PreconditionError when a point is out of range or repeated.
Element perm_from_cycles(std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& cycles);

}  // namespace residua
