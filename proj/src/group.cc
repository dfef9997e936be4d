#include "residua/group.h"

#include <algorithm>
#include <deque>
#include <set>

#include "residua/error.h"
#include <limits>

namespace residua {

namespace {

template <class T>
const T& expect(const Element& e, const char* group) {
  if (const T* p = get_if<T>(e)) return *p;
  throw GroupMismatch(std::string("element ") + to_text(e) + " does not belong to " + group);
}

class IntegerPoints : public PointSet {
 public:
  std::optional<std::uint64_t> size() const override { return std::nullopt; }
  Element at(std::uint64_t i) const override {
    if (i % 2 == 1) return make_integer(BigInt((i + 1) / 2));
    return make_integer(-BigInt(i / 2));
  }
  std::uint64_t index_of(const Element& p) const override {
    const auto* v = get_if<Integer>(p);
    if (!v) throw PreconditionError("not an integer point: " + to_text(p));
    if (boost::multiprecision::abs(v->value) > BigInt(std::numeric_limits<std::uint64_t>::max() / 4))
      throw PreconditionError("point index overflow");
    if (v->value > 0) return static_cast<std::uint64_t>(2 * v->value - 1);
    return static_cast<std::uint64_t>(-2 * v->value);
  }
  bool contains(const Element& p) const override { return get_if<Integer>(p) != nullptr; }
  std::string name() const override { return "Z"; }
};

class DihedralPoints : public PointSet {
 public:
  std::optional<std::uint64_t> size() const override { return std::nullopt; }
  Element at(std::uint64_t i) const override {
    Element t = ints_.at(i / 2);
    return make_dihedral(get_if<Integer>(t)->value, i % 2 == 1);
  }
  std::uint64_t index_of(const Element& p) const override {
    const auto* d = get_if<Dihedral>(p);
    if (!d) throw PreconditionError("not a dihedral point: " + to_text(p));
    return 2 * ints_.index_of(make_integer(d->translation)) + (d->flip ? 1 : 0);
  }
  bool contains(const Element& p) const override { return get_if<Dihedral>(p) != nullptr; }
  std::string name() const override { return "Dinf"; }

 private:
  IntegerPoints ints_;
};

class NaturalPoints : public PointSet {
 public:
  std::optional<std::uint64_t> size() const override { return std::nullopt; }
  Element at(std::uint64_t i) const override { return make_integer(BigInt(i)); }
  std::uint64_t index_of(const Element& p) const override {
    if (!contains(p)) throw PreconditionError("not a natural point: " + to_text(p));
    return static_cast<std::uint64_t>(get_if<Integer>(p)->value);
  }
  bool contains(const Element& p) const override {
    const auto* v = get_if<Integer>(p);
    return v && v->value >= 0 && v->value <= BigInt(std::numeric_limits<std::uint64_t>::max() / 2);
  }
  std::string name() const override { return "N"; }
};

class ListPoints : public PointSet {
 public:
  ListPoints(std::vector<Element> points, std::string name) : points_(std::move(points)), name_(std::move(name)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!index_.emplace(points_[i], i).second) throw PreconditionError("repeated point " + to_text(points_[i]));
    }
  }
  std::optional<std::uint64_t> size() const override { return points_.size(); }
  Element at(std::uint64_t i) const override {
    if (i >= points_.size()) throw PreconditionError("point index out of range");
    return points_[i];
  }
  std::uint64_t index_of(const Element& p) const override {
    auto it = index_.find(p);
    if (it == index_.end()) throw PreconditionError("not a point: " + to_text(p));
    return it->second;
  }
  bool contains(const Element& p) const override { return index_.count(p) > 0; }
  std::string name() const override { return name_; }

 private:
  std::vector<Element> points_;
  std::map<Element, std::uint64_t> index_;
  std::string name_;
};

class CyclicGroup : public Group {
 public:
  explicit CyclicGroup(std::uint64_t n) : Group({true, true}), n_(n) {
    if (n == 0) throw PreconditionError("cyclic group order must be at least 1");
  }
  std::string kind() const override { return "cyclic"; }
  std::string name() const override { return n_ == 1 ? "1" : "C(" + std::to_string(n_) + ")"; }
  Element identity() const override { return make_modular(0, n_); }
  Element multiply(const Element& a, const Element& b) const override {
    return make_modular((check(a).residue + check(b).residue) % n_, n_);
  }
  Element invert(const Element& a) const override { return make_modular((n_ - check(a).residue) % n_, n_); }
  bool contains(const Element& e) const override {
    const auto* m = get_if<Modular>(e);
    return m && m->modulus == n_ && m->residue < n_;
  }
  std::vector<Element> generators() const override {
    if (n_ == 1) return {};
    return {make_modular(1, n_)};
  }
  std::optional<BigInt> order() const override { return BigInt(n_); }

 private:
  const Modular& check(const Element& e) const {
    const auto& m = expect<Modular>(e, "a cyclic group");
    if (m.modulus != n_ || m.residue >= n_) throw GroupMismatch("residue " + to_text(e) + " has the wrong modulus for " + name());
    return m;
  }
  std::uint64_t n_;
};

class IntegerGroup : public Group {
 public:
  IntegerGroup() : Group({true, false}) {}
  std::string kind() const override { return "integers"; }
  std::string name() const override { return "Z"; }
  Element identity() const override { return make_integer(0); }
  Element multiply(const Element& a, const Element& b) const override {
    return make_integer(expect<Integer>(a, "Z").value + expect<Integer>(b, "Z").value);
  }
  Element invert(const Element& a) const override { return make_integer(-expect<Integer>(a, "Z").value); }
  bool contains(const Element& e) const override { return get_if<Integer>(e) != nullptr; }
  std::vector<Element> generators() const override { return {make_integer(1)}; }
  std::optional<BigInt> order() const override { return std::nullopt; }
  PointSetPtr enumeration() const override { return points_; }

 private:
  PointSetPtr points_ = std::make_shared<IntegerPoints>();
};

class DihedralGroup : public Group {
 public:
  DihedralGroup() : Group({true, true}) {}
  std::string kind() const override { return "dihedral"; }
  std::string name() const override { return "Dinf"; }
  Element identity() const override { return make_dihedral(0, false); }
  // (a*b)(x) = a(b(x))
  Element multiply(const Element& a, const Element& b) const override {
    const auto& da = expect<Dihedral>(a, "Dinf");
    const auto& db = expect<Dihedral>(b, "Dinf");
    BigInt t = (da.flip ? BigInt(-db.translation) : db.translation) + da.translation;
    return make_dihedral(t, da.flip != db.flip);
  }
  Element invert(const Element& a) const override {
    const auto& d = expect<Dihedral>(a, "Dinf");
    return make_dihedral(d.flip ? d.translation : BigInt(-d.translation), d.flip);
  }
  bool contains(const Element& e) const override { return get_if<Dihedral>(e) != nullptr; }
  std::vector<Element> generators() const override { return {make_dihedral(0, true), make_dihedral(1, true)}; }
  std::optional<BigInt> order() const override { return std::nullopt; }
  PointSetPtr enumeration() const override { return points_; }

 private:
  PointSetPtr points_ = std::make_shared<DihedralPoints>();
};

}  // namespace

class PermGroup : public Group {
 public:
  PermGroup(std::uint32_t degree, std::vector<Element> gens, std::string name)
      : Group({true, true}), degree_(degree), gens_(std::move(gens)), name_(std::move(name)) {
    for (const auto& g : gens_) {
      const auto* p = get_if<Perm>(g);
      if (!p || p->image.size() != degree_) throw PreconditionError("generator " + to_text(g) + " has the wrong degree");
      std::vector<bool> hit(degree_, false);
      for (auto x : p->image) {
        if (x >= degree_ || hit[x]) throw PreconditionError("generator is not a bijection of {0.." + std::to_string(degree_ - 1) + "}");
        hit[x] = true;
      }
    }
  }
  std::string kind() const override { return "permutation"; }
  std::string name() const override {
    if (!name_.empty()) return name_;
    std::string out = "perm(" + std::to_string(degree_) + ";";
    for (std::size_t i = 0; i < gens_.size(); ++i) out += std::string(i ? ", " : " ") + to_text(gens_[i]);
    return out + ")";
  }
  Element identity() const override {
    std::vector<std::uint32_t> img(degree_);
    for (std::uint32_t i = 0; i < degree_; ++i) img[i] = i;
    return make_perm_element(std::move(img));
  }
  Element multiply(const Element& a, const Element& b) const override {
    const auto& pa = check(a);
    const auto& pb = check(b);
    std::vector<std::uint32_t> img(degree_);
    for (std::uint32_t i = 0; i < degree_; ++i) img[i] = pa.image[pb.image[i]];
    return make_perm_element(std::move(img));
  }
  Element invert(const Element& a) const override {
    const auto& p = check(a);
    std::vector<std::uint32_t> img(degree_);
    for (std::uint32_t i = 0; i < degree_; ++i) img[p.image[i]] = i;
    return make_perm_element(std::move(img));
  }
  bool contains(const Element& e) const override {
    const auto* p = get_if<Perm>(e);
    if (!p || p->image.size() != degree_) return false;
    const auto& all = elements();
    return std::binary_search(all.begin(), all.end(), e);
  }
  std::vector<Element> generators() const override { return gens_; }
  std::optional<BigInt> order() const override { return BigInt(elements().size()); }
  const std::vector<Element>& elements() const override {
    std::call_once(once_, [this] { all_ = closure(*this, gens_); });
    return all_;
  }

 private:
  const Perm& check(const Element& e) const {
    const auto& p = expect<Perm>(e, "a permutation group");
    if (p.image.size() != degree_) throw GroupMismatch("permutation " + to_text(e) + " has the wrong degree for " + name());
    return p;
  }
  std::uint32_t degree_;
  std::vector<Element> gens_;
  std::string name_;
  mutable std::once_flag once_;
  mutable std::vector<Element> all_;
};

const std::vector<Element>& Group::elements() const {
  std::call_once(elements_once_, [this] {
    if (!order()) throw PreconditionError(name() + " is infinite and has no element list");
    elements_ = closure(*this, generators());
  });
  return elements_;
}

PointSetPtr Group::enumeration() const {
  if (!is_finite()) return nullptr;
  std::call_once(enumeration_once_, [this] {
    std::vector<Element> pts = elements();
    // identity first so the base point of a self-action wreath is x_0
    auto it = std::find(pts.begin(), pts.end(), identity());
    std::rotate(pts.begin(), it, it + 1);
    enumeration_ = list_points(std::move(pts), name());
  });
  return enumeration_;
}

Element commutator(const Group& g, const Element& a, const Element& b) {
  return g.multiply(g.multiply(a, b), g.multiply(g.invert(a), g.invert(b)));
}

Element conjugate(const Group& grp, const Element& g, const Element& x) {
  return grp.multiply(grp.multiply(g, x), grp.invert(g));
}

std::vector<Element> closure(const Group& g, const std::vector<Element>& gens, std::size_t cap) {
  std::set<Element> seen{g.identity()};
  std::deque<Element> frontier{g.identity()};
  while (!frontier.empty()) {
    Element x = frontier.front();
    frontier.pop_front();
    for (const auto& s : gens) {
      Element y = g.multiply(x, s);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw CapExceeded("closure exceeds " + std::to_string(cap) + " elements in " + g.name());
        frontier.push_back(std::move(y));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

PointSetPtr natural_points() {
  static const PointSetPtr pts = std::make_shared<NaturalPoints>();
  return pts;
}

PointSetPtr finite_points(std::uint64_t m) {
  std::vector<Element> pts;
  for (std::uint64_t i = 0; i < m; ++i) pts.push_back(make_integer(BigInt(i)));
  return list_points(std::move(pts), std::to_string(m));
}

PointSetPtr list_points(std::vector<Element> points, std::string name) {
  return std::make_shared<ListPoints>(std::move(points), std::move(name));
}

GroupPtr make_trivial() { return std::make_shared<CyclicGroup>(1); }
GroupPtr make_cyclic(std::uint64_t n) { return std::make_shared<CyclicGroup>(n); }
GroupPtr make_integers() { return std::make_shared<IntegerGroup>(); }
GroupPtr make_infinite_dihedral() { return std::make_shared<DihedralGroup>(); }

GroupPtr make_perm(std::uint32_t degree, const std::vector<Element>& generators, std::string name) {
  return std::make_shared<PermGroup>(degree, generators, std::move(name));
}

GroupPtr make_perm(std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& generators, std::string name) {
  std::vector<Element> gens;
  for (const auto& g : generators) gens.push_back(make_perm_element(g));
  return make_perm(degree, gens, std::move(name));
}

GroupPtr make_symmetric(std::uint32_t n) {
  if (n == 0) throw PreconditionError("S(n) needs n >= 1");
  std::vector<Element> gens;
  if (n >= 2) {
    gens.push_back(perm_from_cycles(n, {{0, 1}}));
    if (n >= 3) {
      std::vector<std::uint32_t> cycle(n);
      for (std::uint32_t i = 0; i < n; ++i) cycle[i] = i;
      gens.push_back(perm_from_cycles(n, {cycle}));
    }
  }
  return make_perm(n, gens, "S(" + std::to_string(n) + ")");
}

GroupPtr make_alternating(std::uint32_t n) {
  if (n == 0) throw PreconditionError("A(n) needs n >= 1");
  std::vector<Element> gens;
  for (std::uint32_t k = 2; k < n; ++k) gens.push_back(perm_from_cycles(n, {{0, 1, k}}));
  return make_perm(n, gens, "A(" + std::to_string(n) + ")");
}

// ---------------------------------------------------------------- product

ProductGroup::ProductGroup(std::vector<GroupPtr> factors) : Group({}), factors_(std::move(factors)) {
  if (factors_.empty()) throw PreconditionError("product of no factors");
}

std::string ProductGroup::name() const {
  std::string out = "prod(";
  for (std::size_t i = 0; i < factors_.size(); ++i) out += (i ? ", " : "") + factors_[i]->name();
  return out + ")";
}

const Tuple& ProductGroup::parts(const Element& e) const {
  const auto& t = expect<Tuple>(e, "a product group");
  if (t.parts.size() != factors_.size()) throw GroupMismatch("tuple of the wrong arity for " + name());
  return t;
}

Element ProductGroup::identity() const {
  std::vector<Element> parts;
  for (const auto& f : factors_) parts.push_back(f->identity());
  return make_tuple(std::move(parts));
}

Element ProductGroup::multiply(const Element& a, const Element& b) const {
  const auto& pa = parts(a);
  const auto& pb = parts(b);
  std::vector<Element> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(factors_[i]->multiply(pa.parts[i], pb.parts[i]));
  return make_tuple(std::move(out));
}

Element ProductGroup::invert(const Element& a) const {
  const auto& pa = parts(a);
  std::vector<Element> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) out.push_back(factors_[i]->invert(pa.parts[i]));
  return make_tuple(std::move(out));
}

bool ProductGroup::contains(const Element& e) const {
  const auto* t = get_if<Tuple>(e);
  if (!t || t->parts.size() != factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!factors_[i]->contains(t->parts[i])) return false;
  return true;
}

std::vector<Element> ProductGroup::generators() const {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (const auto& g : factors_[i]->generators()) {
      std::vector<Element> parts;
      for (std::size_t j = 0; j < factors_.size(); ++j) parts.push_back(i == j ? g : factors_[j]->identity());
      gens.push_back(make_tuple(std::move(parts)));
    }
  }
  return gens;
}

std::optional<BigInt> ProductGroup::order() const {
  BigInt n = 1;
  bool infinite = false;
  for (const auto& f : factors_) {
    auto o = f->order();
    if (!o) {
      infinite = true;
    } else if (*o == 0) {
      return BigInt(0);
    } else {
      n *= *o;
    }
  }
  if (infinite) return std::nullopt;
  return n;
}

GroupPtr make_product(std::vector<GroupPtr> factors) { return std::make_shared<ProductGroup>(std::move(factors)); }

// ---------------------------------------------------------------- power

FinSupportPowerGroup::FinSupportPowerGroup(GroupPtr base, PointSetPtr points)
    : Group({}), base_(std::move(base)), points_(std::move(points)) {
  auto b = base_->order();
  auto m = points_->size();
  if (b && *b == 1) {
    order_ = BigInt(1);
  } else if (b && m) {
    const std::uint64_t bits = boost::multiprecision::msb(*b) + 1;
    if (*m > kOrderBitsCap / bits) order_too_large_ = true;
    else order_ = boost::multiprecision::pow(*b, static_cast<unsigned>(*m));
  }
}

std::string FinSupportPowerGroup::name() const { return "power(" + base_->name() + ", " + points_->name() + ")"; }

Element FinSupportPowerGroup::identity() const { return make_fin_support({}); }

const FinSupport& FinSupportPowerGroup::support(const Element& f) const { return expect<FinSupport>(f, "a finite-support power"); }

Element FinSupportPowerGroup::multiply(const Element& a, const Element& b) const {
  const auto& fa = support(a);
  const auto& fb = support(b);
  if (fb.values.empty()) return a;
  if (fa.values.empty()) return b;
  std::map<Element, Element> out = fa.values;
  for (const auto& [x, v] : fb.values) {
    auto it = out.find(x);
    if (it == out.end()) {
      out.emplace(x, v);
    } else {
      Element w = base_->multiply(it->second, v);
      if (base_->is_identity(w))
        out.erase(it);
      else
        it->second = std::move(w);
    }
  }
  return make_fin_support(std::move(out));
}

Element FinSupportPowerGroup::invert(const Element& a) const {
  std::map<Element, Element> out;
  for (const auto& [x, v] : support(a).values) out.emplace(x, base_->invert(v));
  return make_fin_support(std::move(out));
}

bool FinSupportPowerGroup::contains(const Element& e) const {
  const auto* f = get_if<FinSupport>(e);
  if (!f) return false;
  for (const auto& [x, v] : f->values)
    if (!points_->contains(x) || !base_->contains(v) || base_->is_identity(v)) return false;
  return true;
}

std::vector<Element> FinSupportPowerGroup::generators() const {
  const std::uint64_t m = points_->size().value_or(3);
  std::vector<Element> gens;
  for (std::uint64_t i = 0; i < m; ++i)
    for (const auto& g : base_->generators()) gens.push_back(single(points_->at(i), g));
  return gens;
}

std::optional<BigInt> FinSupportPowerGroup::order() const {
  if (order_too_large_) throw CapExceeded("the order of " + name() + " exceeds 2^" + std::to_string(kOrderBitsCap));
  return order_;
}

Element FinSupportPowerGroup::single(const Element& point, const Element& v) const {
  if (!points_->contains(point)) throw PreconditionError("not a point of " + points_->name() + ": " + to_text(point));
  if (!base_->contains(v)) throw GroupMismatch(to_text(v) + " is not in " + base_->name());
  if (base_->is_identity(v)) return identity();
  return make_fin_support({{point, v}});
}

Element FinSupportPowerGroup::value(const Element& f, const Element& point) const {
  const auto& s = support(f);
  auto it = s.values.find(point);
  return it == s.values.end() ? base_->identity() : it->second;
}

Element FinSupportPowerGroup::shift(const Action& act, const Element& g, const Element& f) const {
  const auto& s = support(f);
  if (s.values.empty()) return f;
  std::map<Element, Element> out;
  for (const auto& [x, v] : s.values) out.emplace(act(g, x), v);
  return make_fin_support(std::move(out));
}

GroupPtr finite_support_power(GroupPtr base, PointSetPtr points) {
  return std::make_shared<FinSupportPowerGroup>(std::move(base), std::move(points));
}

// ---------------------------------------------------------------- wreath

WreathGroup::WreathGroup(GroupPtr base, GroupPtr top, PointSetPtr points, Action action, bool self_action)
    : Group({}),
      base_(std::move(base)),
      top_(std::move(top)),
      points_(std::move(points)),
      action_(std::move(action)),
      self_action_(self_action),
      kernel_(std::make_shared<FinSupportPowerGroup>(base_, points_)) {}

std::string WreathGroup::name() const {
  if (self_action_) return "wreath(" + base_->name() + ", " + top_->name() + ")";
  return "wreath(" + base_->name() + ", " + top_->name() + " on " + points_->name() + ")";
}

const WreathPair& WreathGroup::pair(const Element& e) const { return expect<WreathPair>(e, "a wreath product"); }

Element WreathGroup::identity() const { return make_wreath(kernel_->identity(), top_->identity()); }

// (f1, g1)(f2, g2) = (f1 * (g1 . f2), g1 g2),  (g . f)(g x) = f(x)
Element WreathGroup::multiply(const Element& a, const Element& b) const {
  const auto& pa = pair(a);
  const auto& pb = pair(b);
  Element fs = kernel_->multiply(pa.fs, kernel_->shift(action_, pa.top, pb.fs));
  return make_wreath(std::move(fs), top_->multiply(pa.top, pb.top));
}

Element WreathGroup::invert(const Element& a) const {
  const auto& p = pair(a);
  Element ginv = top_->invert(p.top);
  return make_wreath(kernel_->shift(action_, ginv, kernel_->invert(p.fs)), ginv);
}

bool WreathGroup::contains(const Element& e) const {
  const auto* p = get_if<WreathPair>(e);
  return p && kernel_->contains(p->fs) && top_->contains(p->top);
}

Element WreathGroup::base_point() const { return self_action_ ? top_->identity() : points_->at(0); }

std::vector<Element> WreathGroup::generators() const {
  std::vector<Element> gens;
  const Element x0 = base_point();
  for (const auto& k : base_->generators()) gens.push_back(make_wreath(kernel_->single(x0, k), top_->identity()));
  for (const auto& g : top_->generators()) gens.push_back(make_wreath(kernel_->identity(), g));
  return gens;
}

std::optional<BigInt> WreathGroup::order() const {
  auto k = kernel_->order();
  auto g = top_->order();
  if (!k || !g) return std::nullopt;
  return *k * *g;
}

GroupPtr wreath_product(GroupPtr base, GroupPtr top, PointSetPtr points, Action action, std::uint64_t seed) {
  // probe: identity fixes points, (gh).x = g.(h.x)
  std::vector<Element> pts;
  const std::uint64_t m = points->size().value_or(8);
  for (std::uint64_t i = 0; i < m && i < 64; ++i) pts.push_back(points->at(i));
  for (const auto& x : pts)
    if (!(action(top->identity(), x) == x)) throw PreconditionError("action: identity moves point " + to_text(x));
  Rng rng(seed);
  for (int trial = 0; trial < 64; ++trial) {
    Element g = random_word(*top, 1 + draw_below(rng, 4), rng);
    Element h = random_word(*top, 1 + draw_below(rng, 4), rng);
    const Element& x = pts[draw_below(rng, pts.size())];
    Element hx = action(h, x);
    if (!points->contains(hx)) throw PreconditionError("action leaves the point set at " + to_text(x));
    if (!(action(top->multiply(g, h), x) == action(g, hx)))
      throw PreconditionError("action is not compatible with multiplication at point " + to_text(x));
  }
  return std::make_shared<WreathGroup>(std::move(base), std::move(top), std::move(points), std::move(action), false);
}

GroupPtr wreath_product(GroupPtr base, GroupPtr top) {
  PointSetPtr points = top->enumeration();
  if (!points) throw Unregistered("no enumeration registered for " + top->name() + "; cannot form a self-action wreath product");
  const Group* t = top.get();
  Action act = [t](const Element& g, const Element& x) { return t->multiply(g, x); };
  return std::make_shared<WreathGroup>(std::move(base), std::move(top), std::move(points), std::move(act), true);
}

// ---------------------------------------------------------------- subgroups

namespace {

class FiniteSubgroup : public Group {
 public:
  FiniteSubgroup(GroupPtr parent, std::vector<Element> elements, std::string name)
      : Group(parent->flags()), parent_(std::move(parent)), elements_(std::move(elements)), name_(std::move(name)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  }
  std::string kind() const override { return "subgroup"; }
  std::string name() const override { return name_.empty() ? "subgroup of " + parent_->name() : name_; }
  Element identity() const override { return parent_->identity(); }
  Element multiply(const Element& a, const Element& b) const override { return parent_->multiply(a, b); }
  Element invert(const Element& a) const override { return parent_->invert(a); }
  bool contains(const Element& e) const override { return std::binary_search(elements_.begin(), elements_.end(), e); }
  std::vector<Element> generators() const override {
    // a small generating set: greedily add elements not yet generated
    std::vector<Element> gens;
    std::vector<Element> span{identity()};
    for (const auto& e : elements_) {
      if (std::binary_search(span.begin(), span.end(), e)) continue;
      gens.push_back(e);
      span = closure(*parent_, gens);
    }
    return gens;
  }
  std::optional<BigInt> order() const override { return BigInt(elements_.size()); }
  const std::vector<Element>& elements() const override { return elements_; }

 private:
  GroupPtr parent_;
  std::vector<Element> elements_;
  std::string name_;
};

}  // namespace

GroupPtr make_subgroup(GroupPtr parent, std::vector<Element> elements, std::string name) {
  return std::make_shared<FiniteSubgroup>(std::move(parent), std::move(elements), std::move(name));
}

GroupPtr commutator_subgroup(const GroupPtr& g) {
  if (!g->is_finite()) throw PreconditionError("commutator_subgroup needs a finite group; " + g->name() + " is infinite");
  const auto gens = g->generators();
  std::vector<Element> normal_gens;
  for (const auto& a : gens)
    for (const auto& b : gens) {
      Element c = commutator(*g, a, b);
      if (!g->is_identity(c)) normal_gens.push_back(c);
    }
  std::vector<Element> span = closure(*g, normal_gens);
  // normal closure: add conjugates by generators until stable
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& s : std::vector<Element>(normal_gens)) {
      for (const auto& x : gens) {
        Element c = conjugate(*g, x, s);
        if (!std::binary_search(span.begin(), span.end(), c)) {
          normal_gens.push_back(c);
          span = closure(*g, normal_gens);
          grew = true;
        }
      }
    }
  }
  return make_subgroup(g, std::move(span), "[" + g->name() + ", " + g->name() + "]");
}

// ---------------------------------------------------------------- extensions

Extension extension_from_quotient(GroupPtr total, ElementMap projection, GroupPtr quotient, std::uint64_t seed) {
  Rng rng(seed);
  for (int trial = 0; trial < 64; ++trial) {
    Element a = random_word(*total, 1 + draw_below(rng, 6), rng);
    Element b = random_word(*total, 1 + draw_below(rng, 6), rng);
    Element lhs = projection(total->multiply(a, b));
    Element rhs = quotient->multiply(projection(a), projection(b));
    if (!(lhs == rhs)) throw PreconditionError("projection is not a homomorphism on probe pair " + to_text(a) + ", " + to_text(b));
  }
  if (!quotient->is_identity(projection(total->identity()))) throw PreconditionError("projection does not fix the identity");
  std::set<Element> hit;
  for (const auto& g : total->generators()) hit.insert(projection(g));
  for (const auto& q : quotient->generators()) {
    if (!hit.count(q) && !hit.count(quotient->invert(q)))
      throw PreconditionError("quotient generator " + to_text(q) + " is not hit by a generator image");
  }
  Extension ext;
  ext.total = std::move(total);
  ext.quotient = std::move(quotient);
  ext.projection = std::move(projection);
  return ext;
}

Extension wreath_extension(const GroupPtr& wreath) {
  auto w = std::dynamic_pointer_cast<const WreathGroup>(wreath);
  if (!w) throw PreconditionError(wreath->name() + " is not a wreath product");
  const WreathGroup* wp = w.get();
  Extension ext;
  ext.total = wreath;
  ext.quotient = w->top();
  ext.kernel = w->kernel();
  ext.projection = [wp](const Element& e) { return wp->pair(e).top; };
  ext.lift = [wp](const Element& g) { return make_wreath(wp->kernel()->identity(), g); };
  ext.include = [wp](const Element& f) { return make_wreath(f, wp->top()->identity()); };
  ext.restrict = [wp](const Element& e) { return wp->pair(e).fs; };
  return ext;
}

Extension dihedral_parity_extension(const GroupPtr& dinf) {
  if (dinf->kind() != "dihedral") throw PreconditionError(dinf->name() + " is not the infinite dihedral group");
  Extension ext;
  ext.total = dinf;
  ext.quotient = make_cyclic(2);
  ext.kernel = make_integers();
  ext.projection = [](const Element& e) { return make_modular(expect<Dihedral>(e, "Dinf").flip ? 1 : 0, 2); };
  ext.lift = [](const Element& q) { return make_dihedral(0, expect<Modular>(q, "C(2)").residue == 1); };
  ext.include = [](const Element& t) { return make_dihedral(expect<Integer>(t, "Z").value, false); };
  ext.restrict = [](const Element& e) { return make_integer(expect<Dihedral>(e, "Dinf").translation); };
  return ext;
}

Extension product_extension(const GroupPtr& product, std::size_t j) {
  auto p = std::dynamic_pointer_cast<const ProductGroup>(product);
  if (!p) throw PreconditionError(product->name() + " is not a product");
  const auto& fs = p->factors();
  if (j >= fs.size()) throw PreconditionError("quotient factor out of range");
  std::vector<GroupPtr> rest;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (i != j) rest.push_back(fs[i]);
  const bool single = rest.size() == 1;
  GroupPtr kernel = single ? rest.front() : make_product(rest);
  const ProductGroup* pp = p.get();
  Extension ext;
  ext.total = product;
  ext.quotient = fs[j];
  ext.kernel = kernel;
  ext.projection = [pp, j](const Element& e) { return expect<Tuple>(e, "a product").parts.at(j); };
  ext.lift = [pp, j](const Element& q) {
    std::vector<Element> parts;
    for (std::size_t i = 0; i < pp->factors().size(); ++i) parts.push_back(i == j ? q : pp->factors()[i]->identity());
    return make_tuple(std::move(parts));
  };
  ext.include = [pp, j, single](const Element& k) {
    std::vector<Element> ks = single ? std::vector<Element>{k} : expect<Tuple>(k, "a product").parts;
    std::vector<Element> parts;
    std::size_t r = 0;
    for (std::size_t i = 0; i < pp->factors().size(); ++i) parts.push_back(i == j ? pp->factors()[j]->identity() : ks.at(r++));
    return make_tuple(std::move(parts));
  };
  ext.restrict = [j, single](const Element& e) {
    const auto& parts = expect<Tuple>(e, "a product").parts;
    std::vector<Element> ks;
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (i != j) ks.push_back(parts[i]);
    return single ? ks.front() : make_tuple(std::move(ks));
  };
  return ext;
}

ElementMap embed_at_point(const GroupPtr& group, const Element& point) {
  if (auto pw = std::dynamic_pointer_cast<const FinSupportPowerGroup>(group)) {
    if (!pw->points()->contains(point)) throw PreconditionError("not a point: " + to_text(point));
    return [pw, point](const Element& k) { return pw->single(point, k); };
  }
  if (auto w = std::dynamic_pointer_cast<const WreathGroup>(group)) {
    if (!w->points()->contains(point)) throw PreconditionError("not a point: " + to_text(point));
    return [w, point](const Element& k) { return make_wreath(w->kernel()->single(point, k), w->top()->identity()); };
  }
  throw PreconditionError(group->name() + " has no point coordinates");
}

// ---------------------------------------------------------------- probes

std::uint64_t draw_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw PreconditionError("draw_below(0)");
  return rng() % n;
}

Element random_word(const Group& g, std::size_t length, Rng& rng) {
  const auto gens = g.generators();
  Element w = g.identity();
  if (gens.empty()) return w;
  for (std::size_t i = 0; i < length; ++i) {
    std::uint64_t pick = draw_below(rng, 2 * gens.size());
    const Element& s = gens[pick / 2];
    w = g.multiply(w, pick % 2 ? g.invert(s) : s);
  }
  return w;
}

std::vector<Element> draw_probes(const Group& g, std::size_t count, std::size_t max_word, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Element> out;
  std::set<Element> seen;
  if (max_word == 0 || g.generators().empty()) return out;
  for (std::size_t attempt = 0; attempt < 50 * count + 50 && out.size() < count; ++attempt) {
    Element w = random_word(g, 1 + draw_below(rng, max_word), rng);
    if (g.is_identity(w) || !seen.insert(w).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->name() != b->name() || a->order() != b->order()) return false;
  // default subgroup names do not pin the element set down
  if (a->is_finite() && *a->order() <= 5000) return a->elements() == b->elements();
  return true;
}

}  // namespace residua
