#include <algorithm>
#include <set>

#include "residua/chain.h"
#include "residua/error.h"

namespace residua {

namespace {

using Desc = SubgroupDescriptor;

// Transversals are materialized only up to this many representatives.
constexpr std::size_t kTransversalLimit = std::size_t{1} << 20;

std::vector<Element> coset_reps(const Group& g, const std::vector<Element>& big, const std::vector<Element>& sub) {
  std::set<Element> covered;
  std::vector<Element> reps;
  for (const auto& e : big) {
    if (covered.count(e)) continue;
    reps.push_back(e);
    for (const auto& h : sub) covered.insert(g.multiply(e, h));
  }
  return reps;
}

// All products a_1 a_2 ... a_k with a_j drawn from factors[j], in
// lexicographic order of the choices.
std::vector<Element> product_reps(const Group& g, const std::vector<std::vector<Element>>& factors) {
  std::vector<Element> out{g.identity()};
  for (const auto& f : factors) {
    if (out.size() * f.size() > kTransversalLimit) throw CapExceeded("transversal exceeds " + std::to_string(kTransversalLimit) + " representatives");
    std::vector<Element> next;
    next.reserve(out.size() * f.size());
    for (const auto& a : out)
      for (const auto& t : f) next.push_back(g.multiply(a, t));
    out = std::move(next);
  }
  return out;
}

ChainSchema carry_notes(ChainSchema c, const ChainSchema& from) {
  for (const auto& n : from.notes()) c = c.with_note(n);
  return c;
}

Membership whole(const GroupPtr& g) {
  return [g](const Element& e) { return to_tri(g->contains(e)); };
}

// Members of a finite-support power whose every value satisfies `m`.
Tri all_values(const FinSupportPowerGroup& pw, const Element& f, const std::function<Tri(const Element&)>& m) {
  const auto* fs = get_if<FinSupport>(f);
  if (!fs || !pw.contains(f)) return Tri::No;
  Tri acc = Tri::Yes;
  for (const auto& [x, v] : fs->values) {
    acc = tri_and(acc, m(v));
    if (acc == Tri::No) break;
  }
  return acc;
}

IndexInfo index_power(const IndexInfo& i, std::uint64_t m) {
  IndexInfo out = IndexInfo::finite(1);
  for (std::uint64_t k = 0; k < m; ++k) out = index_product(out, i);
  return out;
}

CardinalBound widened(const CardinalBound& k, bool products, std::string& note) {
  if (!products || !k.is_finite()) return k;
  note = "kappa widened to aleph0: a finite bound does not survive products of step indices";
  return CardinalBound::aleph0();
}

}  // namespace

std::vector<Element> left_transversal(const Group& g, const std::vector<Element>& big, const Membership& sub) {
  std::vector<Element> reps;
  std::vector<Element> inv;
  for (const auto& e : big) {
    bool seen = false;
    for (const auto& ti : inv) {
      if (sub(g.multiply(ti, e)) == Tri::Yes) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    reps.push_back(e);
    inv.push_back(g.invert(e));
  }
  return reps;
}

// ---------------------------------------------------------------- finite chains

ChainSchema explicit_chain(GroupPtr group, std::vector<std::vector<Element>> stages, CardinalBound kappa, std::string label) {
  if (!group->is_finite()) throw PreconditionError("explicit chains need a finite group; " + group->name() + " is infinite");
  if (stages.empty()) throw PreconditionError("an explicit chain needs at least stage 0");
  for (auto& s : stages) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  if (stages[0] != group->elements()) throw PreconditionError("stage 0 of an explicit chain must be the whole group");
  std::vector<Desc> tail;
  for (std::size_t i = 1; i < stages.size(); ++i) {
    if (!std::includes(stages[i - 1].begin(), stages[i - 1].end(), stages[i].begin(), stages[i].end()))
      throw PreconditionError("stage " + std::to_string(i) + " is not contained in stage " + std::to_string(i - 1));
    auto cur = std::make_shared<const std::vector<Element>>(stages[i]);
    auto reps = std::make_shared<const std::vector<Element>>(coset_reps(*group, stages[i - 1], stages[i]));
    Membership m = [cur](const Element& e) { return to_tri(std::binary_search(cur->begin(), cur->end(), e)); };
    tail.push_back({group, m, IndexInfo::finite(reps->size()), [reps] { return *reps; },
                    label + " stage " + std::to_string(i)});
  }
  return ChainSchema(std::move(group), {}, std::move(tail), std::move(kappa), std::move(label));
}

ChainSchema derived_series_chain(const GroupPtr& group) {
  if (!group->is_finite()) throw PreconditionError("derived series needs a finite group; " + group->name() + " is infinite");
  std::vector<std::vector<Element>> stages{group->elements()};
  GroupPtr cur = group;
  while (stages.back().size() > 1) {
    GroupPtr next = commutator_subgroup(cur);
    if (next->elements().size() == stages.back().size()) {
      stages.push_back({group->identity()});
      break;
    }
    stages.push_back(next->elements());
    cur = next;
  }
  return explicit_chain(group, std::move(stages), CardinalBound::aleph0(), "derived series of " + group->name());
}

ChainSchema one_step_chain(const GroupPtr& group) {
  if (!group->is_finite()) throw PreconditionError("one-step chain needs a finite group; " + group->name() + " is infinite");
  std::vector<std::vector<Element>> stages{group->elements()};
  if (stages.front().size() > 1) stages.push_back({group->identity()});
  return explicit_chain(group, std::move(stages), CardinalBound::aleph0(), group->name() + " > 1");
}

// ---------------------------------------------------------------- infinite chains

ChainSchema two_adic_chain(const GroupPtr& z) {
  if (z->kind() != "integers") throw PreconditionError("two_adic_chain needs Z, got " + z->name());
  BlockRule rule;
  rule.stage = [z](std::uint64_t n) -> Desc {
    const BigInt m = BigInt(1) << n;
    const BigInt half = m / 2;
    Membership mem = [m](const Element& e) {
      const auto* v = get_if<Integer>(e);
      return to_tri(v && v->value % m == 0);
    };
    return {z, mem, IndexInfo::finite(2), [half] { return std::vector<Element>{make_integer(0), make_integer(half)}; },
            "2^" + std::to_string(n) + "Z"};
  };
  rule.limit = [](const Element& e) {
    const auto* v = get_if<Integer>(e);
    return to_tri(v && v->value == 0);
  };
  return ChainSchema(z, {rule}, {}, CardinalBound::aleph0(), "2-adic chain of Z");
}

ChainSchema dihedral_chain(const GroupPtr& dinf) {
  if (dinf->kind() != "dihedral") throw PreconditionError("dihedral_chain needs Dinf, got " + dinf->name());
  BlockRule rule;
  rule.stage = [dinf](std::uint64_t n) -> Desc {
    const BigInt m = BigInt(1) << n;
    Membership mem = [m](const Element& e) {
      const auto* d = get_if<Dihedral>(e);
      return to_tri(d && !d->flip && d->translation % m == 0);
    };
    if (n == 1) {
      return {dinf, mem, IndexInfo::finite(4),
              [] {
                return std::vector<Element>{make_dihedral(0, false), make_dihedral(1, false), make_dihedral(0, true),
                                            make_dihedral(1, true)};
              },
              "2Z translations"};
    }
    const BigInt half = m / 2;
    return {dinf, mem, IndexInfo::finite(2),
            [half] { return std::vector<Element>{make_dihedral(0, false), make_dihedral(half, false)}; },
            "2^" + std::to_string(n) + "Z translations"};
  };
  rule.limit = [](const Element& e) {
    const auto* d = get_if<Dihedral>(e);
    return to_tri(d && !d->flip && d->translation == 0);
  };
  return ChainSchema(dinf, {rule}, {}, CardinalBound::aleph0(), "translation chain of Dinf");
}

ChainSchema promote_to_omega(const ChainSchema& finite) {
  if (finite.block_count() != 0) throw PreconditionError("promote_to_omega needs a finite chain, got length " + format(finite.length()));
  const GroupPtr g = finite.group();
  const auto tail = finite.tail();
  const Membership last = tail.empty() ? whole(g) : tail.back().membership;
  BlockRule rule;
  rule.stage = [g, tail, last](std::uint64_t n) -> Desc {
    if (n <= tail.size()) return tail[n - 1];
    return {g, last, IndexInfo::finite(1), [g] { return std::vector<Element>{g->identity()}; }, "repeated final stage"};
  };
  rule.limit = last;
  return carry_notes(ChainSchema(g, {rule}, {}, finite.kappa(), finite.label() + " (promoted)"), finite);
}

// ---------------------------------------------------------------- extensions

ChainSchema concat_extension(const Extension& ext_in, const ChainSchema& chain_q, const ChainSchema& chain_n) {
  if (!same_group(chain_q.group(), ext_in.quotient))
    throw GroupMismatch("quotient chain is over " + chain_q.group()->name() + ", not the quotient " + ext_in.quotient->name());
  if (!ext_in.kernel || !same_group(chain_n.group(), ext_in.kernel))
    throw GroupMismatch("kernel chain is over " + chain_n.group()->name() + ", not the extension's kernel");
  if (!ext_in.include || !ext_in.restrict) throw PreconditionError("extension lacks kernel coordinates (include/restrict)");
  auto ext = std::make_shared<const Extension>(ext_in);

  auto pull_m = [ext](Membership m) -> Membership {
    if (!m) return {};
    return [ext, m](const Element& e) { return m(ext->projection(e)); };
  };
  auto push_m = [ext](Membership m) -> Membership {
    if (!m) return {};
    return [ext, m](const Element& e) { return ext->in_kernel(e) ? m(ext->restrict(e)) : Tri::No; };
  };
  auto pull = [ext, pull_m](const Desc& d) -> Desc {
    TransversalFn t;
    if (d.transversal && ext->lift) {
      t = [ext, inner = d.transversal] {
        std::vector<Element> out;
        for (const auto& r : inner()) out.push_back(ext->lift(r));
        return out;
      };
    }
    return {ext->total, pull_m(d.membership), d.index_in_parent, t, "pullback of " + d.label};
  };
  auto push = [ext, push_m](const Desc& d) -> Desc {
    TransversalFn t;
    if (d.transversal) {
      t = [ext, inner = d.transversal] {
        std::vector<Element> out;
        for (const auto& r : inner()) out.push_back(ext->include(r));
        return out;
      };
    }
    return {ext->total, push_m(d.membership), d.index_in_parent, t, d.label};
  };

  std::vector<BlockRule> blocks;
  std::vector<Desc> tail;
  for (const auto& rule : chain_q.blocks()) {
    blocks.push_back({[pull, s = rule.stage](std::uint64_t n) { return pull(s(n)); }, pull_m(rule.limit)});
  }
  const auto q_tail = chain_q.tail();
  if (chain_n.block_count() > 0) {
    const std::uint64_t r1 = q_tail.size();
    const auto& first = chain_n.blocks().front();
    std::vector<Desc> pulled;
    for (const auto& d : q_tail) pulled.push_back(pull(d));
    blocks.push_back({[pulled, r1, push, s = first.stage](std::uint64_t n) { return n <= r1 ? pulled[n - 1] : push(s(n - r1)); },
                      push_m(first.limit)});
    for (std::size_t b = 1; b < chain_n.blocks().size(); ++b) {
      const auto& rule = chain_n.blocks()[b];
      blocks.push_back({[push, s = rule.stage](std::uint64_t n) { return push(s(n)); }, push_m(rule.limit)});
    }
  } else {
    for (const auto& d : q_tail) tail.push_back(pull(d));
  }
  for (const auto& d : chain_n.tail()) tail.push_back(push(d));

  ChainSchema out(ext->total, std::move(blocks), std::move(tail), max(chain_q.kappa(), chain_n.kappa()),
                  "concat(" + chain_q.label() + "; " + chain_n.label() + ")");
  return carry_notes(carry_notes(std::move(out), chain_q), chain_n);
}

ChainSchema compress_successor_tail(const ChainSchema& chain) {
  const auto& tail = chain.tail();
  if (tail.size() < 2)
    throw PreconditionError("compress_successor_tail needs a tail of length >= 2, got length " + format(chain.length()));
  IndexInfo idx = IndexInfo::finite(1);
  bool all_transversals = true;
  for (const auto& d : tail) {
    if (d.index_in_parent.kind != IndexInfo::Kind::Finite)
      throw PreconditionError("tail stage '" + d.label + "' has index " + to_string(d.index_in_parent) + "; only finite indices compress");
    idx = index_product(idx, d.index_in_parent);
    all_transversals = all_transversals && static_cast<bool>(d.transversal);
  }
  const GroupPtr g = chain.group();
  TransversalFn t;
  if (all_transversals) {
    t = [g, tail] {
      std::vector<std::vector<Element>> factors;
      for (const auto& d : tail) factors.push_back(d.transversal());
      return product_reps(*g, factors);
    };
  }
  Desc last{g, tail.back().membership, idx, t, "compressed tail"};
  ChainSchema out(g, chain.blocks(), {last}, chain.kappa(), chain.label() + " (compressed)");
  return carry_notes(std::move(out), chain);
}

// ---------------------------------------------------------------- powers

ChainSchema power_chain(const ChainSchema& base_chain, const PointSetPtr& points) {
  return power_chain(base_chain, std::make_shared<const FinSupportPowerGroup>(base_chain.group(), points));
}

ChainSchema power_chain(const ChainSchema& base_chain, const std::shared_ptr<const FinSupportPowerGroup>& pw) {
  if (!same_group(base_chain.group(), pw->base()))
    throw GroupMismatch("base chain is over " + base_chain.group()->name() + ", not " + pw->base()->name());
  if (pw->points()->size())
    throw PreconditionError("power_chain needs a countably infinite point set; use diagonal_power_chain for " + pw->points()->name());
  if (base_chain.tail_length() != 0)
    throw PreconditionError("power_chain needs a base chain of length w*q; length " + format(base_chain.length()) + " has a finite tail");
  if (base_chain.block_count() == 0) throw PreconditionError("power_chain needs a base chain of length w*q with q >= 1");

  auto base = std::make_shared<const ChainSchema>(base_chain);
  std::vector<BlockRule> blocks;
  for (std::uint64_t b = 0; b < base->block_count(); ++b) {
    BlockRule rule;
    rule.stage = [base, pw, b](std::uint64_t n) -> Desc {
      // steps[k-1] is base stage w*b + k
      auto steps = std::make_shared<std::vector<Desc>>();
      for (std::uint64_t k = 1; k <= n; ++k) steps->push_back(base->successor_stage({b, k}));
      Membership m = [base, pw, b, steps, n](const Element& f) -> Tri {
        const auto* fs = get_if<FinSupport>(f);
        if (!fs || !pw->contains(f)) return Tri::No;
        Tri acc = Tri::Yes;
        for (const auto& [x, v] : fs->values) {
          const std::uint64_t i = pw->points()->index_of(x);
          acc = tri_and(acc, i < n ? (*steps)[n - i - 1].contains(v) : base->block_start_contains(b, v));
          if (acc == Tri::No) break;
        }
        return acc;
      };
      IndexInfo idx = IndexInfo::finite(1);
      bool all_transversals = true;
      for (const auto& d : *steps) {
        idx = index_product(idx, d.index_in_parent);
        all_transversals = all_transversals && static_cast<bool>(d.transversal);
      }
      TransversalFn t;
      if (all_transversals) {
        t = [pw, steps, n] {
          std::vector<std::vector<Element>> factors;
          for (std::uint64_t i = 0; i < n; ++i) {
            std::vector<Element> at_point;
            const Element x = pw->points()->at(i);
            for (const auto& r : (*steps)[n - i - 1].transversal()) at_point.push_back(pw->single(x, r));
            factors.push_back(std::move(at_point));
          }
          return product_reps(*pw, factors);
        };
      }
      return {pw, m, idx, t, "H(" + std::to_string(n) + ") in block " + std::to_string(b)};
    };
    rule.limit = [base, pw, b](const Element& f) {
      return all_values(*pw, f, [&](const Element& v) { return base->block_start_contains(b + 1, v); });
    };
    blocks.push_back(std::move(rule));
  }
  std::string note;
  CardinalBound kappa = widened(base->kappa(), true, note);
  ChainSchema out(pw, std::move(blocks), {}, kappa, "power chain of " + base->label() + " over " + pw->points()->name());
  if (!note.empty()) out = out.with_note(note);
  return carry_notes(std::move(out), base_chain);
}

ChainSchema diagonal_power_chain(const ChainSchema& base_chain, const PointSetPtr& points) {
  return diagonal_power_chain(base_chain, std::make_shared<const FinSupportPowerGroup>(base_chain.group(), points));
}

ChainSchema diagonal_power_chain(const ChainSchema& base_chain, const std::shared_ptr<const FinSupportPowerGroup>& pw) {
  if (!same_group(base_chain.group(), pw->base()))
    throw GroupMismatch("base chain is over " + base_chain.group()->name() + ", not " + pw->base()->name());
  const auto size = pw->points()->size();
  if (!size) throw PreconditionError("diagonal_power_chain needs a finite point set; use power_chain for " + pw->points()->name());
  const std::uint64_t m = *size;

  auto diag = [pw, m](const Desc& d) -> Desc {
    Membership mem = [pw, inner = d.membership](const Element& f) { return all_values(*pw, f, inner); };
    TransversalFn t;
    if (d.transversal) {
      t = [pw, m, inner = d.transversal] {
        const auto reps = inner();
        std::vector<std::vector<Element>> factors;
        for (std::uint64_t i = 0; i < m; ++i) {
          std::vector<Element> at_point;
          const Element x = pw->points()->at(i);
          for (const auto& r : reps) at_point.push_back(pw->single(x, r));
          factors.push_back(std::move(at_point));
        }
        return product_reps(*pw, factors);
      };
    }
    return {pw, mem, index_power(d.index_in_parent, m), t, d.label + "^" + std::to_string(m)};
  };

  auto base = std::make_shared<const ChainSchema>(base_chain);
  std::vector<BlockRule> blocks;
  for (std::uint64_t b = 0; b < base->block_count(); ++b) {
    BlockRule rule;
    rule.stage = [base, diag, b](std::uint64_t n) { return diag(base->successor_stage({b, n})); };
    rule.limit = [base, pw, b](const Element& f) {
      return all_values(*pw, f, [&](const Element& v) { return base->block_start_contains(b + 1, v); });
    };
    blocks.push_back(std::move(rule));
  }
  std::vector<Desc> tail;
  for (const auto& d : base->tail()) tail.push_back(diag(d));
  std::string note;
  CardinalBound kappa = widened(base->kappa(), m > 1, note);
  ChainSchema out(pw, std::move(blocks), std::move(tail), kappa, "diagonal power of " + base->label() + " over " + pw->points()->name());
  if (!note.empty()) out = out.with_note(note);
  return carry_notes(std::move(out), base_chain);
}

// ---------------------------------------------------------------- towers

ChainSchema tower_chain(const GroupPtr& g, const ChainSchema& g_chain, std::uint64_t n) {
  if (n == 0) throw PreconditionError("tower_chain needs n >= 1");
  if (!same_group(g_chain.group(), g)) throw GroupMismatch("chain is over " + g_chain.group()->name() + ", not " + g->name());
  if (g_chain.length() != Ordinal::omega()) throw PreconditionError("tower_chain needs a chain of length w over " + g->name());
  if (g->is_finite()) throw PreconditionError("tower_chain needs an infinite group; " + g->name() + " is finite");
  if (!g->flags().residually_finite_claimed) throw PreconditionError(g->name() + " is not flagged residually finite");
  if (!g->enumeration()) throw Unregistered("no enumeration registered for " + g->name());
  if (n == 1) return g_chain;

  ChainSchema chain = g_chain;
  GroupPtr gk = g;
  for (std::uint64_t k = 1; k < n; ++k) {
    GroupPtr w = wreath_product(gk, g);
    auto wg = std::dynamic_pointer_cast<const WreathGroup>(w);
    ChainSchema kernel_chain = power_chain(chain, wg->kernel());
    chain = concat_extension(wreath_extension(w), g_chain, kernel_chain);
    gk = w;
  }
  chain = chain.with_label("tower(" + g->name() + ", " + std::to_string(n) + ")")
              .with_note("length w*" + std::to_string(n) + " is an upper bound on depth");
  if (g->flags().finite_abelianization_claimed)
    chain = chain.with_note("exact depth w*" + std::to_string(n) + " claimed under the finite abelianization hypothesis (not verified)");
  else
    chain = chain.with_note(g->name() + " is not flagged with finite abelianization; exactness not asserted");
  return chain;
}

std::pair<SubgroupDescriptor, SubgroupDescriptor> core_sandwich(const GroupPtr& wreath) {
  auto w = std::dynamic_pointer_cast<const WreathGroup>(wreath);
  if (!w) throw PreconditionError(wreath->name() + " is not a wreath product");
  if (w->top()->is_finite() || !w->top()->flags().residually_finite_claimed)
    throw PreconditionError("core_sandwich needs an infinite top group flagged residually finite");
  if (!w->base()->is_finite()) throw PreconditionError("the lower core bound needs a finite base group; " + w->base()->name() + " is infinite");
  GroupPtr derived = commutator_subgroup(w->base());
  GroupPtr top = w->top();
  Membership upper = [top](const Element& e) {
    const auto* p = get_if<WreathPair>(e);
    return to_tri(p && top->is_identity(p->top));
  };
  Membership lower = [top, derived](const Element& e) {
    const auto* p = get_if<WreathPair>(e);
    if (!p || !top->is_identity(p->top)) return Tri::No;
    const auto* fs = get_if<FinSupport>(p->fs);
    if (!fs) return Tri::No;
    for (const auto& [x, v] : fs->values)
      if (!derived->contains(v)) return Tri::No;
    return Tri::Yes;
  };
  return {{wreath, lower, IndexInfo::unverified(), {}, "[K,K]^(G)"}, {wreath, upper, IndexInfo::unverified(), {}, "K^(G)"}};
}

}  // namespace residua
