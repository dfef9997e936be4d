#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "residua/chain.h"

namespace residua {

/// A vertex of the coset tree at some level: the coset rep * C_level. Two
/// vertices at one level are equal when rep1^-1 rep2 lies in the stage.
struct TreeVertex {
  StageIndex level;
  Element rep;
};

/// The rooted tree whose level-i vertices are the left cosets of stage i and
/// whose edges drop to the larger coset. Levels are generated on demand.
class CosetTree {
 public:
  explicit CosetTree(ChainSchema chain);

  const ChainSchema& chain() const noexcept { return chain_; }
  Ordinal depth() const { return chain_.length(); }
  const CardinalBound& kappa() const noexcept { return chain_.kappa(); }

  TreeVertex root() const;
  TreeVertex vertex_of(const Element& g, StageIndex level) const;
  /// Parent of a successor-level vertex. Limit-level vertices are threads
  /// and have no single parent edge.
  TreeVertex parent(const TreeVertex& v) const;
  Tri same(const TreeVertex& a, const TreeVertex& b) const;
  /// Number of children of any vertex at `level`: the index of the next stage.
  IndexInfo fibre_size(StageIndex level) const;

 private:
  ChainSchema chain_;
};

CosetTree coset_tree(const ChainSchema& chain);

/// Explicit levels 0..depth of one w-block of a coset tree, below the
/// identity thread's vertex at the block's start. Vertex k at level i is the
/// tuple of transversal positions obtained by reading k in mixed radix.
struct TreeTruncation {
  std::uint64_t depth = 0;
  std::uint64_t block = 0;
  std::vector<std::uint64_t> sizes;                 // one per level
  std::vector<std::vector<std::uint64_t>> parents;  // parents[i][k]: parent of vertex k at level i (empty at 0)
  std::string provenance;

  // Present when built from a tree; absent after parsing.
  std::optional<ChainSchema> chain;
  std::vector<std::vector<Element>> transversals;  // transversals[i]: step i+1 of the block
  std::vector<Membership> stage_tests;              // stage_tests[i]: step i+1 of the block

  Element representative(std::uint64_t level, std::uint64_t vertex) const;
  /// Vertex of the coset g * stage at `level`. Throws NotMaterializable when
  /// membership cannot be decided or g leaves the block's subtree.
  std::uint64_t locate(const Element& g, std::uint64_t level) const;
};

/// Vertex cap for a truncation.
inline constexpr std::uint64_t kTruncationCap = std::uint64_t{1} << 20;

TreeTruncation truncate(const CosetTree& tree, std::uint64_t depth, std::uint64_t block = 0);

/// E_i^j within a truncation: maps a vertex at stage j to its ancestor at
/// stage i. Both stages must lie in the truncated block.
std::uint64_t restriction_map(const TreeTruncation& tr, const Ordinal& i, const Ordinal& j, std::uint64_t vertex);

struct TreeAutomorphism {
  std::vector<std::vector<std::uint64_t>> levels;  // bijection per level

  bool is_identity() const;
  /// Checks parent(g(v)) == g(parent(v)) on every edge.
  bool commutes_with(const TreeTruncation& tr) const;
  TreeAutomorphism compose(const TreeAutomorphism& inner) const;  // this after inner
};

/// Left translation by g on every level of the truncation.
TreeAutomorphism act(const Element& g, const TreeTruncation& tr);

struct ProbeMotion {
  Element probe;
  std::optional<Ordinal> moved_at;  // first stage whose identity-thread vertex moves; nullopt: unresolved
};

struct SimplicityReport {
  bool exhaustive = false;
  bool simple = false;                 // meaningful only when exhaustive
  std::optional<Element> violation;    // nontrivial element with a fixed deepest vertex
  std::optional<std::uint64_t> fixed_vertex;
  std::vector<ProbeMotion> motions;    // non-exhaustive evidence
  std::vector<ProbeMotion> unresolved;

  nlohmann::json to_json() const;
};

/// For a finite chain over a finite group truncated at its full length, checks
/// exhaustively that every nontrivial element moves every deepest vertex.
/// Otherwise reports, per probe, the first stage (up to `levels` steps per
/// block) where it moves the identity thread; this is evidence, not a verdict.
SimplicityReport verify_simple(const ChainSchema& chain, const TreeTruncation& tr, std::size_t probes = 64,
                               std::uint64_t seed = 0, std::uint64_t levels = 12, std::size_t max_word = 8);

/// Stages of a thread's stabilizers in a finite acting group. `thread[i]` is
/// the vertex at level i; the result is an explicit chain of length depth.
ChainSchema stabilizer_chain(const TreeTruncation& tr, const std::vector<std::uint64_t>& thread);

/// Vertices of the identity's cosets, level by level.
std::vector<std::uint64_t> identity_thread(const TreeTruncation& tr);

std::string to_dot(const TreeTruncation& tr);
nlohmann::json to_json(const TreeTruncation& tr);
TreeTruncation truncation_from_json(const nlohmann::json& j);

}  // namespace residua
