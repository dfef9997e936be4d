#include "residua/oracle.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "residua/error.h"

namespace residua {

namespace {

bool bits_less(const ElementSet& a, const ElementSet& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  for (std::size_t i = 0; i < kOracleCap; ++i)
    if (a[i] != b[i]) return b[i];
  return false;
}

bool subset(const ElementSet& a, const ElementSet& b) { return (a & ~b).none(); }

void check_finite(const GroupPtr& g) {
  auto order = g->order();
  if (!order) throw PreconditionError(g->name() + " is infinite");
  if (*order > kOracleCap) throw CapExceeded(g->name() + " has order " + order->str() + ", above the oracle cap of " + std::to_string(kOracleCap));
}

}  // namespace

CayleyTable::CayleyTable(GroupPtr group) : group_(std::move(group)) {
  check_finite(group_);
  elements_ = group_->elements();
  const std::size_t n = elements_.size();
  std::map<Element, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos.emplace(elements_[i], i);
  mul_.resize(n * n);
  inv_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) mul_[a * n + b] = static_cast<std::uint8_t>(pos.at(group_->multiply(elements_[a], elements_[b])));
    inv_[a] = static_cast<std::uint8_t>(pos.at(group_->invert(elements_[a])));
  }
  identity_ = pos.at(group_->identity());
}

ElementSet CayleyTable::generate(const ElementSet& gens) const {
  ElementSet out = trivial();
  std::vector<std::size_t> frontier{identity_};
  std::vector<std::size_t> g;
  for (std::size_t i = 0; i < order(); ++i)
    if (gens[i]) g.push_back(i);
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto x : frontier)
      for (auto s : g) {
        auto y = mul(x, s);
        if (!out[y]) {
          out.set(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return out;
}

bool CayleyTable::is_subgroup(const ElementSet& s) const {
  if (!s[identity_]) return false;
  for (std::size_t a = 0; a < order(); ++a) {
    if (!s[a]) continue;
    if (!s[inv(a)]) return false;
    for (std::size_t b = 0; b < order(); ++b)
      if (s[b] && !s[mul(a, b)]) return false;
  }
  return true;
}

ElementSet CayleyTable::whole() const {
  ElementSet s;
  for (std::size_t i = 0; i < order(); ++i) s.set(i);
  return s;
}

ElementSet CayleyTable::trivial() const {
  ElementSet s;
  s.set(identity_);
  return s;
}

std::vector<Element> CayleyTable::to_elements(const ElementSet& s) const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < order(); ++i)
    if (s[i]) out.push_back(elements_[i]);
  return out;
}

std::size_t SubgroupLattice::index_of(const ElementSet& s) const {
  for (std::size_t i = 0; i < subgroups.size(); ++i)
    if (subgroups[i] == s) return i;
  throw PreconditionError("not a subgroup of " + table.group()->name());
}

nlohmann::json SubgroupLattice::to_json() const {
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : subgroups) {
    nlohmann::json els = nlohmann::json::array();
    for (const auto& e : table.to_elements(s)) els.push_back(to_text(e));
    subs.push_back({{"order", s.count()}, {"elements", els}});
  }
  nlohmann::json incl = nlohmann::json::array();
  for (std::size_t i = 0; i < subgroups.size(); ++i)
    for (std::size_t j = 0; j < subgroups.size(); ++j)
      if (i != j && contains[i][j]) incl.push_back({j, i});
  return {{"group", table.group()->name()}, {"order", table.order()}, {"count", subgroups.size()}, {"subgroups", subs},
          {"inclusions", incl}};
}

SubgroupLattice all_subgroups(const GroupPtr& g) {
  CayleyTable t(g);
  std::set<ElementSet, decltype(&bits_less)> found(&bits_less);
  for (std::size_t i = 0; i < t.order(); ++i) {
    ElementSet gen;
    gen.set(i);
    found.insert(t.generate(gen));
  }
  std::vector<ElementSet> frontier(found.begin(), found.end());
  const std::vector<ElementSet> cyclic = frontier;
  // every subgroup is a join of cyclic ones, so joining new subgroups with
  // cyclic subgroups until nothing new appears reaches all of them
  while (!frontier.empty()) {
    std::vector<ElementSet> next;
    for (const auto& a : frontier)
      for (const auto& c : cyclic) {
        if (subset(c, a)) continue;
        ElementSet j = t.generate(a | c);
        if (found.insert(j).second) next.push_back(j);
      }
    frontier = std::move(next);
  }
  SubgroupLattice lat{t, std::vector<ElementSet>(found.begin(), found.end()), {}};
  for (const auto& s : lat.subgroups)
    if (!t.is_subgroup(s)) throw Error("subgroup enumeration produced a non-subgroup");
  const std::size_t n = lat.subgroups.size();
  lat.contains.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lat.contains[i][j] = subset(lat.subgroups[j], lat.subgroups[i]);
  return lat;
}

std::vector<ElementSet> subgroups_by_subset_scan(const CayleyTable& t) {
  if (t.order() > 12) throw CapExceeded("subset scan is limited to order 12");
  std::vector<ElementSet> out;
  const std::uint64_t n = t.order();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    ElementSet s(mask);
    if (t.is_subgroup(s)) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), bits_less);
  return out;
}

std::vector<Element> core_up_to_index(const GroupPtr& g, std::uint64_t k) {
  auto lat = all_subgroups(g);
  ElementSet core = lat.table.whole();
  const std::size_t n = lat.table.order();
  for (const auto& s : lat.subgroups)
    if (n / s.count() < k) core &= s;
  return lat.table.to_elements(core);
}

std::uint64_t min_kappa(const GroupPtr& g) {
  auto lat = all_subgroups(g);
  const std::size_t n = lat.subgroups.size();
  // best[i]: least possible largest index over chains from subgroup i down to 1
  std::vector<std::uint64_t> best(n, std::numeric_limits<std::uint64_t>::max());
  best[0] = 0;  // the trivial subgroup sorts first
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (lat.contains[i][j] && lat.subgroups[j] != lat.subgroups[i]) {
        std::uint64_t idx = lat.subgroups[i].count() / lat.subgroups[j].count();
        best[i] = std::min(best[i], std::max(idx, best[j]));
      }
  return best[n - 1] + 1;
}

Ordinal depth_exact_finite(const GroupPtr& g) {
  CayleyTable t(g);
  if (t.order() == 1) return Ordinal();
  // G > 1 has index |G| < |G| + 1
  if (min_kappa(g) > t.order() + 1) throw Error("no chain with indices below |G| + 1 for " + g->name());
  return Ordinal::finite(1);
}

std::vector<std::vector<std::vector<Element>>> chain_enumerate(const GroupPtr& g, std::uint64_t max_len) {
  auto lat = all_subgroups(g);
  const std::size_t n = lat.subgroups.size();
  std::vector<std::vector<std::vector<Element>>> out;
  std::vector<std::size_t> path{n - 1};
  std::function<void()> walk = [&] {
    const std::size_t cur = path.back();
    if (cur == 0) {
      std::vector<std::vector<Element>> chain;
      for (auto i : path) chain.push_back(lat.table.to_elements(lat.subgroups[i]));
      out.push_back(std::move(chain));
      return;
    }
    if (path.size() - 1 == max_len) return;
    for (std::size_t j = cur; j-- > 0;)
      if (lat.contains[cur][j]) {
        path.push_back(j);
        walk();
        path.pop_back();
      }
  };
  walk();
  return out;
}

}  // namespace residua
