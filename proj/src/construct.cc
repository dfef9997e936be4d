#include "residua/construct.h"

#include <map>

#include "residua/error.h"

namespace residua {

namespace {

// Names with a fixed expression, and well-known groups the library cannot model.
const std::map<std::string, std::string>& named_expressions() {
  static const std::map<std::string, std::string> m = {{"lamplighter", "wreath(C(2), Z)"}};
  return m;
}

const std::map<std::string, std::string>& unmodelled() {
  static const std::map<std::string, std::string> m = {
      {"higman", "Higman's group has no finite-index subgroups to build a chain from"},
      {"deligne", "Deligne's central extension of Sp(2n, Z) needs a presentation this library does not model"},
  };
  return m;
}

const Expr& resolved(const Expr& e, ExprPtr& hold) {
  if (e.kind != Expr::Kind::Named) return e;
  hold = resolve_named(e.name);
  return *hold;
}

ChainSchema finite_chain(const GroupPtr& g) {
  if (*g->order() <= kDerivedSeriesCap) return derived_series_chain(g);
  // too large for an element list: one opaque step
  SubgroupDescriptor one{g, [g](const Element& e) { return to_tri(g->is_identity(e)); }, IndexInfo::finite(*g->order()), {},
                         "trivial subgroup"};
  return ChainSchema(g, {}, {one}, CardinalBound::aleph0(), "G > 1 for " + g->name());
}

ChainSchema chain_for(const Expr& e, const GroupPtr& g);

// Factors ordered so that shorter chains come first: add(a, b) absorbs a
// when a is small.
ChainSchema product_chain(const GroupPtr& prod, std::vector<ChainSchema> chains) {
  if (chains.size() == 1) return chains.front();
  std::size_t first = 0;
  for (std::size_t i = 1; i < chains.size(); ++i)
    if (chains[i].length() < chains[first].length()) first = i;
  Extension ext = product_extension(prod, first);
  ChainSchema q = chains[first];
  chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(first));
  return concat_extension(ext, q, product_chain(ext.kernel, std::move(chains)));
}

ChainSchema power_over_infinite(ChainSchema base, const std::shared_ptr<const FinSupportPowerGroup>& pw) {
  if (base.block_count() == 0) base = promote_to_omega(base);
  if (base.tail_length() > 0)
    throw Unregistered("no chain constructor for a power of " + pw->base()->name() + " over infinitely many points: its chain has length " +
                       format(base.length()) + ", not w*q");
  return power_chain(base, pw);
}

ChainSchema chain_for(const Expr& e_in, const GroupPtr& g) {
  ExprPtr hold;
  const Expr& e = resolved(e_in, hold);
  using K = Expr::Kind;
  if (g->is_finite()) return finite_chain(g);
  switch (e.kind) {
    case K::Int: return two_adic_chain(g);
    case K::Dinf: return dihedral_chain(g);
    case K::Product: {
      auto prod = std::dynamic_pointer_cast<const ProductGroup>(g);
      std::vector<ChainSchema> chains;
      for (std::size_t i = 0; i < e.args.size(); ++i) chains.push_back(chain_for(*e.args[i], prod->factors()[i]));
      return product_chain(g, std::move(chains));
    }
    case K::Power: {
      auto pw = std::dynamic_pointer_cast<const FinSupportPowerGroup>(g);
      ChainSchema base = chain_for(*e.args[0], pw->base());
      if (e.points) return diagonal_power_chain(base, pw);
      return power_over_infinite(std::move(base), pw);
    }
    case K::Wreath: {
      auto w = std::dynamic_pointer_cast<const WreathGroup>(g);
      ChainSchema top = chain_for(*e.args[1], w->top());
      ChainSchema base = chain_for(*e.args[0], w->base());
      ChainSchema kernel = w->top()->is_finite() ? diagonal_power_chain(base, w->kernel()) : power_over_infinite(std::move(base), w->kernel());
      return concat_extension(wreath_extension(g), top, kernel);
    }
    case K::Tower: {
      GroupPtr base_group = build_group(*e.args[0]);
      ChainSchema base = chain_for(*e.args[0], base_group);
      if (e.n == 1) return base;
      if (base.length() != Ordinal::omega())
        throw Unregistered("no tower chain for " + print_expr(*e.args[0]) + ": its chain has length " + format(base.length()) + ", not w");
      if (!base_group->flags().residually_finite_claimed)
        throw Unregistered("no tower chain for " + print_expr(*e.args[0]) + ": the group is not flagged residually finite");
      return tower_chain(base_group, base, e.n);
    }
    default: break;
  }
  throw Unregistered("no chain constructor for " + print_expr(e));
}

std::optional<std::uint64_t> tower_height(const Expr& e) {
  if (e.kind == Expr::Kind::Tower) return e.n;
  return std::nullopt;
}

}  // namespace

bool is_registered(const std::string& name) { return named_expressions().count(name) > 0; }

ExprPtr resolve_named(const std::string& name) {
  if (auto it = named_expressions().find(name); it != named_expressions().end()) return parse_expr(it->second);
  if (auto it = unmodelled().find(name); it != unmodelled().end()) throw Unregistered("'" + name + "' is not registered: " + it->second);
  throw Unregistered("unknown group name '" + name + "'");
}

GroupPtr build_group(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Trivial: return make_trivial();
    case K::Cyclic: return make_cyclic(e.n);
    case K::Symmetric: return make_symmetric(static_cast<std::uint32_t>(e.n));
    case K::Alternating: return make_alternating(static_cast<std::uint32_t>(e.n));
    case K::Perm: {
      std::vector<Element> gens;
      for (const auto& gen : e.generators) gens.push_back(perm_from_cycles(static_cast<std::uint32_t>(e.n), gen));
      return make_perm(static_cast<std::uint32_t>(e.n), gens);
    }
    case K::Int: return make_integers();
    case K::Dinf: return make_infinite_dihedral();
    case K::Product: {
      std::vector<GroupPtr> factors;
      for (const auto& a : e.args) factors.push_back(build_group(*a));
      return make_product(std::move(factors));
    }
    case K::Power: return finite_support_power(build_group(*e.args[0]), e.points ? finite_points(*e.points) : natural_points());
    case K::Wreath: return wreath_product(build_group(*e.args[0]), build_group(*e.args[1]));
    case K::Tower: {
      GroupPtr g = build_group(*e.args[0]);
      GroupPtr cur = g;
      for (std::uint64_t i = 1; i < e.n; ++i) cur = wreath_product(cur, g);
      return cur;
    }
    case K::Named: return build_group(*resolve_named(e.name));
  }
  throw Unregistered("unknown expression");
}

ChainSchema build_chain(const Expr& e) { return chain_for(e, build_group(e)); }

nlohmann::json DepthInterval::to_json() const {
  return {{"lower", format(lower)},
          {"upper", format(upper)},
          {"paper_claimed", paper_claimed ? nlohmann::json(format(*paper_claimed)) : nlohmann::json(nullptr)},
          {"claim_source", claim_source.empty() ? nlohmann::json(nullptr) : nlohmann::json(claim_source)},
          {"discrepancy", discrepancy},
          {"flags", flags}};
}

DepthInterval depth_interval(const Expr& e_in) {
  ExprPtr hold;
  const Expr& e = resolved(e_in, hold);
  GroupPtr g = build_group(e);
  DepthInterval out;
  ChainSchema chain = chain_for(e, g);
  if (chain.tail_length() >= 2) {
    bool all_finite = true;
    for (const auto& d : chain.tail()) all_finite = all_finite && d.index_in_parent.kind == IndexInfo::Kind::Finite;
    if (all_finite) chain = compress_successor_tail(chain);
  }
  out.upper = chain.length();
  for (const auto& n : chain.notes()) out.flags.push_back(n);
  if (g->is_finite()) {
    out.lower = *g->order() == 1 ? Ordinal() : Ordinal::finite(1);
  } else {
    out.lower = Ordinal::omega();
    out.flags.push_back("lower bound w: an infinite group is not n-residually finite for finite n");
  }

  // claimed depths for towers, and for a tower wreathed with a finite group
  const Expr* tower = nullptr;
  GroupPtr finite_top;
  ExprPtr hold_base;
  if (tower_height(e)) {
    tower = &e;
  } else if (e.kind == Expr::Kind::Wreath) {
    const Expr& base = resolved(*e.args[0], hold_base);
    auto w = std::dynamic_pointer_cast<const WreathGroup>(g);
    if (tower_height(base) && w->top()->is_finite() && *w->top()->order() > 1) {
      tower = &base;
      finite_top = w->top();
    }
  }
  if (tower) {
    GroupPtr base_group = build_group(*tower->args[0]);
    const Ordinal wn = Ordinal::omega_times(tower->n);
    if (base_group->is_finite()) {
      out.flags.push_back("tower over a finite group is finite; no claimed depth");
    } else if (!base_group->flags().finite_abelianization_claimed || !base_group->flags().residually_finite_claimed) {
      out.flags.push_back(base_group->name() + " is not flagged residually finite with finite abelianization; no claimed depth");
    } else if (!finite_top) {
      out.paper_claimed = wn;
      out.claim_source = "tower theorem: depth of G_n is w*n for G infinite, residually finite, with finite abelianization";
    } else {
      out.paper_claimed = add(wn, Ordinal::finite(1));
      out.claim_source = "tower theorem, finite-top case: depth of G_n wr H is w*n + 1 for finite H";
      out.flags.push_back("claimed w*n + 1 for G_n wr " + finite_top->name() + ", but the constructed chain (H pulled back, then the diagonal power of the tower chain) has length " +
                          format(out.upper) + "; the gap is reported, not resolved");
    }
  }
  if (out.paper_claimed && (*out.paper_claimed < out.lower || out.upper < *out.paper_claimed)) {
    out.discrepancy = true;
    out.flags.push_back("claimed depth " + format(*out.paper_claimed) + " lies outside [" + format(out.lower) + ", " + format(out.upper) + "]");
  }
  for (const Ordinal* o : {&out.lower, &out.upper})
    if (classify(*o) == DepthClass::Invalid) throw Error("reported depth bound " + format(*o) + " is neither 0, 1, a limit, nor a limit plus one");
  if (out.paper_claimed && classify(*out.paper_claimed) == DepthClass::Invalid) throw Error("claimed depth is not a valid depth");
  if (out.upper < out.lower) throw Error("depth interval is empty: upper " + format(out.upper) + " below lower " + format(out.lower));
  return out;
}

}  // namespace residua
