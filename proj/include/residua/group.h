#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "residua/element.h"

namespace residua {

/// Largest finite group `Group::elements()` will enumerate.
inline constexpr std::size_t kEnumerationCap = 100000;
/// Finite orders above 2^kOrderBitsCap raise CapExceeded when asked for.
inline constexpr std::uint64_t kOrderBitsCap = 1 << 16;

/// Hypotheses supplied at construction and echoed by every certificate that
/// relies on them. They are never verified.
struct GroupFlags {
  bool residually_finite_claimed = false;
  bool finite_abelianization_claimed = false;
};

/// A finite or countably infinite set of points with an injective
/// enumeration x_0, x_1, ... . Points are themselves Elements.
class PointSet {
 public:
  virtual ~PointSet() = default;
  /// nullopt for a countably infinite set.
  virtual std::optional<std::uint64_t> size() const = 0;
  virtual Element at(std::uint64_t i) const = 0;
  /// Throws PreconditionError for a non-point.
  virtual std::uint64_t index_of(const Element& p) const = 0;
  virtual bool contains(const Element& p) const = 0;
  virtual std::string name() const = 0;
};

using PointSetPtr = std::shared_ptr<const PointSet>;

/// The naturals 0, 1, 2, ... as Integer points.
PointSetPtr natural_points();
/// The integer points 0..m-1.
PointSetPtr finite_points(std::uint64_t m);
/// A finite list of distinct points, enumerated in the given order.
PointSetPtr list_points(std::vector<Element> points, std::string name);

class Group;
using GroupPtr = std::shared_ptr<const Group>;

/// A computable group. Operations are total on members and throw
/// GroupMismatch on elements of a different shape.
class Group : public std::enable_shared_from_this<Group> {
 public:
  virtual ~Group() = default;

  virtual std::string kind() const = 0;
  /// Expression-style description, e.g. "wreath(C(2), Z)".
  virtual std::string name() const = 0;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element invert(const Element& a) const = 0;
  virtual bool contains(const Element& e) const = 0;
  /// A generating set. Groups that are not finitely generated return a
  /// finite subset used for drawing probe words.
  virtual std::vector<Element> generators() const = 0;
  /// nullopt when infinite.
  virtual std::optional<BigInt> order() const = 0;

  /// Sorted list of all elements. Finite groups only.
  virtual const std::vector<Element>& elements() const;
  /// Injective enumeration of the group's elements, or null when none is
  /// registered. Finite groups enumerate `elements()`.
  virtual PointSetPtr enumeration() const;

  bool is_finite() const { return order().has_value(); }
  bool is_identity(const Element& e) const { return e == identity(); }
  const GroupFlags& flags() const noexcept { return flags_; }

 protected:
  explicit Group(GroupFlags flags) : flags_(flags) {}

 private:
  GroupFlags flags_;
  mutable std::once_flag elements_once_;
  mutable std::vector<Element> elements_;
  mutable std::once_flag enumeration_once_;
  mutable PointSetPtr enumeration_;
};

Element commutator(const Group& g, const Element& a, const Element& b);
/// g x g^-1
Element conjugate(const Group& grp, const Element& g, const Element& x);

/// Sorted closure of `gens` under multiplication (and inversion, which is
/// implied for finite groups). Throws CapExceeded past `cap` elements.
std::vector<Element> closure(const Group& g, const std::vector<Element>& gens, std::size_t cap = kEnumerationCap);

GroupPtr make_trivial();
GroupPtr make_cyclic(std::uint64_t n);
GroupPtr make_integers();
/// Permutation group generated by image arrays of the given degree. Throws
/// PreconditionError on arrays that are not bijections of {0..degree-1}.
GroupPtr make_perm(std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& generators, std::string name = "");
GroupPtr make_perm(std::uint32_t degree, const std::vector<Element>& generators, std::string name = "");
GroupPtr make_symmetric(std::uint32_t n);
GroupPtr make_alternating(std::uint32_t n);
/// Isometries of the integer line, generated by x -> -x and x -> 1 - x.
GroupPtr make_infinite_dihedral();
GroupPtr make_product(std::vector<GroupPtr> factors);

/// Functions points -> base with finite support, multiplied pointwise.
GroupPtr finite_support_power(GroupPtr base, PointSetPtr points);

using Action = std::function<Element(const Element& g, const Element& x)>;

/// K wr_X G with the given action of `top` on `points`. The action is probed
/// on identity and compatibility with multiplication; PreconditionError on a
/// failed probe.
GroupPtr wreath_product(GroupPtr base, GroupPtr top, PointSetPtr points, Action action, std::uint64_t seed = 0);
/// K wr G: top acting on itself by left multiplication. Requires an
/// enumeration of `top`.
GroupPtr wreath_product(GroupPtr base, GroupPtr top);

/// A finite subgroup given by its element set inside `parent`.
GroupPtr make_subgroup(GroupPtr parent, std::vector<Element> elements, std::string name = "");

/// Derived subgroup [G,G] of a finite group, as the normal closure of the
/// commutators of generator pairs. PreconditionError for infinite groups.
GroupPtr commutator_subgroup(const GroupPtr& g);

// Identical objects, or groups built the same way (compared by name).
bool same_group(const GroupPtr& a, const GroupPtr& b);

class ProductGroup : public Group {
 public:
  explicit ProductGroup(std::vector<GroupPtr> factors);
  std::string kind() const override { return "product"; }
  std::string name() const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element invert(const Element& a) const override;
  bool contains(const Element& e) const override;
  std::vector<Element> generators() const override;
  std::optional<BigInt> order() const override;
  const std::vector<GroupPtr>& factors() const noexcept { return factors_; }

 private:
  const Tuple& parts(const Element& e) const;
  std::vector<GroupPtr> factors_;
};

class FinSupportPowerGroup : public Group {
 public:
  FinSupportPowerGroup(GroupPtr base, PointSetPtr points);
  std::string kind() const override { return "power"; }
  std::string name() const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element invert(const Element& a) const override;
  bool contains(const Element& e) const override;
  std::vector<Element> generators() const override;
  std::optional<BigInt> order() const override;

  const GroupPtr& base() const noexcept { return base_; }
  const PointSetPtr& points() const noexcept { return points_; }
  /// The function with value `v` at `point` and identity elsewhere.
  Element single(const Element& point, const Element& v) const;
  /// Value at a point (identity off the support).
  Element value(const Element& f, const Element& point) const;
  const FinSupport& support(const Element& f) const;
  /// x -> v  becomes  act(g, x) -> v
  Element shift(const Action& act, const Element& g, const Element& f) const;

 private:
  GroupPtr base_;
  PointSetPtr points_;
  std::optional<BigInt> order_;
  bool order_too_large_ = false;
};

class WreathGroup : public Group {
 public:
  WreathGroup(GroupPtr base, GroupPtr top, PointSetPtr points, Action action, bool self_action);
  std::string kind() const override { return "wreath"; }
  std::string name() const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element invert(const Element& a) const override;
  bool contains(const Element& e) const override;
  std::vector<Element> generators() const override;
  std::optional<BigInt> order() const override;

  const GroupPtr& base() const noexcept { return base_; }
  const GroupPtr& top() const noexcept { return top_; }
  const PointSetPtr& points() const noexcept { return points_; }
  /// The finite-support power K^(X), kernel of the projection to the top.
  const std::shared_ptr<const FinSupportPowerGroup>& kernel() const noexcept { return kernel_; }
  Element act(const Element& g, const Element& x) const { return action_(g, x); }
  bool self_action() const noexcept { return self_action_; }
  /// Point carrying the base generators: the top identity for self-action,
  /// otherwise the first enumerated point.
  Element base_point() const;

  const WreathPair& pair(const Element& e) const;

 private:
  GroupPtr base_;
  GroupPtr top_;
  PointSetPtr points_;
  Action action_;
  bool self_action_;
  std::shared_ptr<const FinSupportPowerGroup> kernel_;
};

using ElementMap = std::function<Element(const Element&)>;

/// A short exact sequence kernel -> total -> quotient. `lift` is a set-map
/// section of the projection; `include` and `restrict` translate between the
/// kernel group's own elements and total-group elements. `kernel`, `lift`,
/// `include` and `restrict` may be empty when unknown.
struct Extension {
  GroupPtr total;
  GroupPtr quotient;
  GroupPtr kernel;
  ElementMap projection;
  ElementMap lift;
  ElementMap include;
  ElementMap restrict;

  bool in_kernel(const Element& e) const { return quotient->is_identity(projection(e)); }
};

/// Bundles a projection with its kernel test. The projection is probed for
/// the homomorphism law and for hitting every quotient generator.
Extension extension_from_quotient(GroupPtr total, ElementMap projection, GroupPtr quotient, std::uint64_t seed = 0);
/// K^(X) -> K wr_X G -> G
Extension wreath_extension(const GroupPtr& wreath);
/// Translations -> D_inf -> Z/2 by flip parity.
Extension dihedral_parity_extension(const GroupPtr& dinf);
/// prod(others) -> prod(factors) -> factors[j]
Extension product_extension(const GroupPtr& product, std::size_t quotient_factor);

/// Injection of the base group as functions supported at `point`, for a
/// finite-support power or a wreath product.
ElementMap embed_at_point(const GroupPtr& group, const Element& point);

using Rng = std::mt19937_64;

/// Uniform draw from [0, n); deterministic across platforms.
std::uint64_t draw_below(Rng& rng, std::uint64_t n);
/// Random word of exactly `length` letters in the generators and their inverses.
Element random_word(const Group& g, std::size_t length, Rng& rng);
/// Up to `count` distinct non-identity elements, as words of length
/// 1..max_word, in draw order. Deterministic in `seed`.
std::vector<Element> draw_probes(const Group& g, std::size_t count, std::size_t max_word, std::uint64_t seed);

}  // namespace residua
