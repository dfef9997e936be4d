#include "residua/tree.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "residua/error.h"

namespace residua {

namespace {

std::uint64_t steps_in_block(const ChainSchema& chain, std::uint64_t block) {
  return block < chain.block_count() ? UINT64_MAX : chain.tail_length();
}

}  // namespace

// ---------------------------------------------------------------- coset tree

CosetTree::CosetTree(ChainSchema chain) : chain_(std::move(chain)) {}

CosetTree coset_tree(const ChainSchema& chain) { return CosetTree(chain); }

TreeVertex CosetTree::root() const { return {{0, 0}, chain_.group()->identity()}; }

TreeVertex CosetTree::vertex_of(const Element& g, StageIndex level) const {
  if (!chain_.has_stage(level)) throw PreconditionError("level " + format(level.ordinal()) + " is beyond the tree's depth");
  if (!chain_.group()->contains(g)) throw GroupMismatch(to_text(g) + " is not in " + chain_.group()->name());
  return {level, g};
}

TreeVertex CosetTree::parent(const TreeVertex& v) const {
  if (v.level.step == 0) throw PreconditionError("vertices at level " + format(v.level.ordinal()) + " have no parent edge");
  return {{v.level.block, v.level.step - 1}, v.rep};
}

Tri CosetTree::same(const TreeVertex& a, const TreeVertex& b) const {
  if (a.level != b.level) return Tri::No;
  const auto& g = *chain_.group();
  return chain_.stage(a.level).contains(g.multiply(g.invert(a.rep), b.rep));
}

IndexInfo CosetTree::fibre_size(StageIndex level) const {
  StageIndex next{level.block, level.step + 1};
  if (!chain_.has_stage(next)) return IndexInfo::finite(0);
  return chain_.stage(next).index_in_parent;
}

// ---------------------------------------------------------------- truncation

Element TreeTruncation::representative(std::uint64_t level, std::uint64_t vertex) const {
  if (!chain) throw NotMaterializable("truncation carries no group data");
  if (level > depth || vertex >= sizes.at(level)) throw PreconditionError("no vertex " + std::to_string(vertex) + " at level " + std::to_string(level));
  const auto& g = *chain->group();
  std::vector<std::uint64_t> digits(level);
  for (std::uint64_t i = level; i > 0; --i) {
    const std::uint64_t f = transversals[i - 1].size();
    digits[i - 1] = vertex % f;
    vertex /= f;
  }
  Element rep = g.identity();
  for (std::uint64_t i = 0; i < level; ++i) rep = g.multiply(rep, transversals[i][digits[i]]);
  return rep;
}

std::uint64_t TreeTruncation::locate(const Element& g, std::uint64_t level) const {
  if (!chain) throw NotMaterializable("truncation carries no group data");
  if (level > depth) throw PreconditionError("level " + std::to_string(level) + " is not materialized");
  const auto& grp = *chain->group();
  if (block > 0) {
    Tri in = chain->block_start_contains(block, g);
    if (in == Tri::Unknown) throw NotMaterializable("cannot decide whether " + to_text(g) + " lies in the block's start");
    if (in == Tri::No) throw PreconditionError(to_text(g) + " moves the subtree's root");
  }
  Element cur = g;
  std::uint64_t k = 0;
  for (std::uint64_t i = 1; i <= level; ++i) {
    const Membership& test = stage_tests[i - 1];
    const auto& reps = transversals[i - 1];
    std::optional<std::uint64_t> hit;
    bool unknown = false;
    for (std::uint64_t a = 0; a < reps.size() && !hit; ++a) {
      Element rest = grp.multiply(grp.invert(reps[a]), cur);
      Tri t = test(rest);
      if (t == Tri::Yes) {
        hit = a;
        cur = rest;
      }
      unknown = unknown || t == Tri::Unknown;
    }
    if (!hit)
      throw NotMaterializable(unknown ? "coset membership undecided at level " + std::to_string(i)
                                      : "transversal misses the coset of " + to_text(g) + " at level " + std::to_string(i));
    k = k * reps.size() + *hit;
  }
  return k;
}

TreeTruncation truncate(const CosetTree& tree, std::uint64_t depth, std::uint64_t block) {
  const auto& chain = tree.chain();
  if (block > chain.block_count())
    throw PreconditionError("the chain has no block " + std::to_string(block) + "; its length is " + format(chain.length()));
  depth = std::min(depth, steps_in_block(chain, block));
  TreeTruncation tr;
  tr.depth = depth;
  tr.block = block;
  tr.chain = chain;
  tr.sizes = {1};
  tr.parents = {{}};
  std::ostringstream prov;
  prov << "coset tree of " << chain.label() << " over " << chain.group()->name();
  if (block > 0) prov << ", below the identity thread at " << format(StageIndex{block, 0}.ordinal());
  tr.provenance = prov.str();
  for (std::uint64_t i = 1; i <= depth; ++i) {
    SubgroupDescriptor st = chain.stage({block, i});
    if (st.index_in_parent.kind != IndexInfo::Kind::Finite || !st.transversal)
      throw NotMaterializable("level " + format(StageIndex{block, i}.ordinal()) + " has index " + to_string(st.index_in_parent) +
                              " without a transversal");
    auto reps = st.transversal();
    if (BigInt(reps.size()) != st.index_in_parent.value)
      throw NotMaterializable("transversal at level " + std::to_string(i) + " has the wrong size");
    const std::uint64_t f = reps.size();
    const std::uint64_t prev = tr.sizes.back();
    if (f == 0 || prev > kTruncationCap / f) throw NotMaterializable("truncation exceeds " + std::to_string(kTruncationCap) + " vertices");
    tr.transversals.push_back(std::move(reps));
    tr.stage_tests.push_back(st.membership);
    tr.sizes.push_back(prev * f);
    std::vector<std::uint64_t> par(prev * f);
    for (std::uint64_t k = 0; k < par.size(); ++k) par[k] = k / f;
    tr.parents.push_back(std::move(par));
  }
  return tr;
}

std::uint64_t restriction_map(const TreeTruncation& tr, const Ordinal& i, const Ordinal& j, std::uint64_t vertex) {
  StageIndex si = stage_index(i), sj = stage_index(j);
  if (si.block != tr.block || sj.block != tr.block || si.step > tr.depth || sj.step > tr.depth)
    throw NotMaterializable("levels " + format(i) + " and " + format(j) + " are not both materialized");
  if (si.step > sj.step) throw PreconditionError("restriction needs " + format(i) + " <= " + format(j));
  if (vertex >= tr.sizes[sj.step]) throw PreconditionError("no vertex " + std::to_string(vertex) + " at level " + format(j));
  for (std::uint64_t s = sj.step; s > si.step; --s) vertex = tr.parents[s][vertex];
  return vertex;
}

std::vector<std::uint64_t> identity_thread(const TreeTruncation& tr) {
  std::vector<std::uint64_t> out(tr.depth + 1, 0);
  if (!tr.chain) return out;
  const Element id = tr.chain->group()->identity();
  for (std::uint64_t i = 1; i <= tr.depth; ++i) out[i] = tr.locate(id, i);
  return out;
}

// ---------------------------------------------------------------- automorphisms

bool TreeAutomorphism::is_identity() const {
  for (const auto& lv : levels)
    for (std::uint64_t k = 0; k < lv.size(); ++k)
      if (lv[k] != k) return false;
  return true;
}

bool TreeAutomorphism::commutes_with(const TreeTruncation& tr) const {
  if (levels.size() != tr.sizes.size()) return false;
  for (std::uint64_t i = 1; i < levels.size(); ++i)
    for (std::uint64_t k = 0; k < levels[i].size(); ++k)
      if (tr.parents[i][levels[i][k]] != levels[i - 1][tr.parents[i][k]]) return false;
  return true;
}

TreeAutomorphism TreeAutomorphism::compose(const TreeAutomorphism& inner) const {
  TreeAutomorphism out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::vector<std::uint64_t> lv(levels[i].size());
    for (std::uint64_t k = 0; k < lv.size(); ++k) lv[k] = levels[i][inner.levels[i][k]];
    out.levels.push_back(std::move(lv));
  }
  return out;
}

TreeAutomorphism act(const Element& g, const TreeTruncation& tr) {
  if (!tr.chain) throw NotMaterializable("truncation carries no group data");
  const auto& grp = *tr.chain->group();
  if (!grp.contains(g)) throw GroupMismatch(to_text(g) + " is not in " + grp.name());
  TreeAutomorphism out;
  for (std::uint64_t i = 0; i <= tr.depth; ++i) {
    std::vector<std::uint64_t> lv(tr.sizes[i]);
    for (std::uint64_t k = 0; k < lv.size(); ++k) lv[k] = tr.locate(grp.multiply(g, tr.representative(i, k)), i);
    out.levels.push_back(std::move(lv));
  }
  return out;
}

// ---------------------------------------------------------------- simplicity

nlohmann::json SimplicityReport::to_json() const {
  nlohmann::json j;
  j["exhaustive"] = exhaustive;
  if (exhaustive) j["simple"] = simple;
  j["violation"] = violation ? residua::to_json(*violation) : nlohmann::json(nullptr);
  j["violation_text"] = violation ? nlohmann::json(to_text(*violation)) : nlohmann::json(nullptr);
  if (fixed_vertex) j["fixed_vertex"] = *fixed_vertex;
  auto list = [](const std::vector<ProbeMotion>& ms) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : ms)
      arr.push_back({{"probe", to_text(m.probe)}, {"moved_at", m.moved_at ? nlohmann::json(format(*m.moved_at)) : nlohmann::json("unresolved")}});
    return arr;
  };
  j["motions"] = list(motions);
  j["unresolved"] = list(unresolved);
  return j;
}

SimplicityReport verify_simple(const ChainSchema& chain, const TreeTruncation& tr, std::size_t probes, std::uint64_t seed,
                               std::uint64_t levels, std::size_t max_word) {
  SimplicityReport rep;
  const auto& g = *chain.group();
  const bool finite_case = chain.block_count() == 0 && g.is_finite() && tr.chain && tr.block == 0 && tr.depth == chain.tail_length();
  if (finite_case) {
    rep.exhaustive = true;
    rep.simple = true;
    const std::uint64_t d = tr.depth;
    for (const auto& e : g.elements()) {
      if (g.is_identity(e)) continue;
      for (std::uint64_t k = 0; k < tr.sizes[d]; ++k)
        if (tr.locate(g.multiply(e, tr.representative(d, k)), d) == k) {
          rep.simple = false;
          rep.violation = e;
          rep.fixed_vertex = k;
          return rep;
        }
    }
    return rep;
  }
  const StageIndex last = chain.final_stage();
  for (const auto& p : draw_probes(g, probes, max_word, seed)) {
    if (g.is_identity(p)) continue;
    ProbeMotion m{p, std::nullopt};
    bool stuck = false;
    for (std::uint64_t b = 0; b <= last.block && !m.moved_at && !stuck; ++b) {
      if (b > 0) {
        Tri in = chain.block_start_contains(b, p);
        if (in == Tri::No) m.moved_at = StageIndex{b, 0}.ordinal();
        if (in != Tri::Yes) {
          stuck = in == Tri::Unknown;
          break;
        }
      }
      const std::uint64_t steps = b < last.block ? levels : last.step;
      for (std::uint64_t s = 1; s <= steps && !m.moved_at; ++s)
        if (chain.stage({b, s}).contains(p) == Tri::No) m.moved_at = StageIndex{b, s}.ordinal();
      // the block continues past the budget
      if (!m.moved_at && b < last.block && chain.blocks()[b].limit == nullptr) stuck = true;
    }
    if (!m.moved_at && !stuck && chain.stage(last).contains(p) == Tri::Yes && !rep.violation) rep.violation = p;
    (m.moved_at ? rep.motions : rep.unresolved).push_back(m);
  }
  return rep;
}

// ---------------------------------------------------------------- stabilizers

ChainSchema stabilizer_chain(const TreeTruncation& tr, const std::vector<std::uint64_t>& thread) {
  if (!tr.chain) throw NotMaterializable("truncation carries no group data");
  if (thread.size() != tr.depth + 1 || thread[0] != 0) throw PreconditionError("incoherent thread: wrong length or root");
  for (std::uint64_t i = 1; i <= tr.depth; ++i)
    if (thread[i] >= tr.sizes[i] || tr.parents[i][thread[i]] != thread[i - 1])
      throw PreconditionError("incoherent thread at level " + std::to_string(i));
  const GroupPtr& g = tr.chain->group();
  if (!g->is_finite()) throw PreconditionError("stabilizers are computed exhaustively; " + g->name() + " is infinite");
  std::vector<Element> acting;
  for (const auto& e : g->elements())
    if (tr.block == 0 || tr.chain->block_start_contains(tr.block, e) == Tri::Yes) acting.push_back(e);
  GroupPtr owner = tr.block == 0 ? g : make_subgroup(g, acting);
  std::vector<std::vector<Element>> stages;
  for (std::uint64_t i = 0; i <= tr.depth; ++i) {
    const Element rep = tr.representative(i, thread[i]);
    std::vector<Element> stab;
    for (const auto& e : acting)
      if (tr.locate(g->multiply(e, rep), i) == thread[i]) stab.push_back(e);
    stages.push_back(std::move(stab));
  }
  return explicit_chain(owner, std::move(stages), tr.chain->kappa(), "stabilizers in " + tr.chain->label());
}

// ---------------------------------------------------------------- output

std::string to_dot(const TreeTruncation& tr) {
  std::ostringstream out;
  out << "digraph tree {\n";
  for (std::uint64_t i = 0; i < tr.sizes.size(); ++i)
    for (std::uint64_t k = 0; k < tr.sizes[i]; ++k) out << "  \"" << i << ':' << k << "\";\n";
  for (std::uint64_t i = 1; i < tr.sizes.size(); ++i)
    for (std::uint64_t k = 0; k < tr.sizes[i]; ++k)
      out << "  \"" << i - 1 << ':' << tr.parents[i][k] << "\" -> \"" << i << ':' << k << "\";\n";
  out << "}\n";
  return out.str();
}

nlohmann::json to_json(const TreeTruncation& tr) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::uint64_t i = 0; i < tr.sizes.size(); ++i) levels.push_back({{"size", tr.sizes[i]}, {"parents", tr.parents[i]}});
  return {{"depth", tr.depth}, {"block", tr.block}, {"levels", levels}, {"provenance", tr.provenance}};
}

TreeTruncation truncation_from_json(const nlohmann::json& j) {
  TreeTruncation tr;
  try {
    tr.depth = j.at("depth").get<std::uint64_t>();
    tr.block = j.value("block", std::uint64_t{0});
    tr.provenance = j.value("provenance", std::string());
    for (const auto& lv : j.at("levels")) {
      tr.sizes.push_back(lv.at("size").get<std::uint64_t>());
      tr.parents.push_back(lv.at("parents").get<std::vector<std::uint64_t>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed truncation: ") + e.what());
  }
  if (tr.sizes.size() != tr.depth + 1 || tr.sizes[0] != 1) throw ParseError(0, "truncation levels do not match its depth");
  for (std::uint64_t i = 0; i < tr.sizes.size(); ++i) {
    if (tr.parents[i].size() != (i == 0 ? 0 : tr.sizes[i])) throw ParseError(0, "parent list of level " + std::to_string(i) + " has the wrong size");
    for (auto p : tr.parents[i])
      if (p >= tr.sizes[i - 1]) throw ParseError(0, "parent out of range at level " + std::to_string(i));
  }
  return tr;
}

}  // namespace residua
