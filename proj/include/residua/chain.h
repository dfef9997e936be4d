#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "residua/group.h"
#include "residua/ordinal.h"

namespace residua {

/// Steps examined per block when a limit stage is evaluated as the
/// intersection of the stages before it.
inline constexpr std::uint64_t kResolutionBudget = 64;

/// Three-valued membership: limit stages are only semi-decidable.
enum class Tri { No, Yes, Unknown };

inline Tri to_tri(bool b) { return b ? Tri::Yes : Tri::No; }
Tri tri_and(Tri a, Tri b);
std::string to_string(Tri t);

struct IndexInfo {
  enum class Kind { Finite, Infinite, Unverified, NotApplicable };
  Kind kind = Kind::Unverified;
  BigInt value;  // for Finite

  static IndexInfo finite(const BigInt& v) { return {Kind::Finite, v}; }
  static IndexInfo infinite() { return {Kind::Infinite, 0}; }
  static IndexInfo unverified() { return {Kind::Unverified, 0}; }
  static IndexInfo not_applicable() { return {Kind::NotApplicable, 0}; }
};

std::string to_string(const IndexInfo& i);
/// Product of step indices; Infinite dominates, then Unverified.
IndexInfo index_product(const IndexInfo& a, const IndexInfo& b);

using Membership = std::function<Tri(const Element&)>;
using TransversalFn = std::function<std::vector<Element>()>;

/// One stage of a chain: a subgroup given by a membership test, with its
/// index in the previous stage and, when the constructor can produce one,
/// a transversal of left coset representatives in the previous stage.
struct SubgroupDescriptor {
  GroupPtr owner;
  Membership membership;
  IndexInfo index_in_parent = IndexInfo::not_applicable();
  TransversalFn transversal;
  std::string label;

  Tri contains(const Element& e) const { return membership(e); }
};

/// The stage w*block + step.
struct StageIndex {
  std::uint64_t block = 0;
  std::uint64_t step = 0;

  Ordinal ordinal() const;
  bool is_limit() const { return step == 0 && block > 0; }
  friend auto operator<=>(const StageIndex&, const StageIndex&) = default;
};

/// Throws PreconditionError unless `i` has the form w*q + r.
StageIndex stage_index(const Ordinal& i);

/// One w-block of stages w*b + n. `stage(n)` is defined for n >= 1; stage
/// w*b itself is the block's start (the whole group for b = 0, otherwise the
/// previous block's intersection). `limit`, when set, is an exact membership
/// test for this block's intersection, the stage w*(b+1).
struct BlockRule {
  std::function<SubgroupDescriptor(std::uint64_t step)> stage;
  Membership limit;
};

/// A residual chain of length w*q + r over a group: q block rules followed by
/// r explicit tail stages. Stage 0 is the whole group; limit stages are
/// intersections evaluated lazily per element.
class ChainSchema {
 public:
  ChainSchema(GroupPtr group, std::vector<BlockRule> blocks, std::vector<SubgroupDescriptor> tail,
              CardinalBound kappa, std::string label);

  const GroupPtr& group() const noexcept { return group_; }
  Ordinal length() const;
  std::uint64_t block_count() const noexcept { return blocks_.size(); }
  std::uint64_t tail_length() const noexcept { return tail_.size(); }
  const CardinalBound& kappa() const noexcept { return kappa_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<BlockRule>& blocks() const noexcept { return blocks_; }
  const std::vector<SubgroupDescriptor>& tail() const noexcept { return tail_; }
  /// Hypotheses and caveats carried into certificates.
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  ChainSchema with_kappa(CardinalBound kappa) const;
  ChainSchema with_note(std::string note) const;
  ChainSchema with_label(std::string label) const;

  bool has_stage(StageIndex s) const;
  StageIndex final_stage() const { return {block_count(), tail_length()}; }

  /// Stage 0 or a successor stage.
  SubgroupDescriptor successor_stage(StageIndex s) const;
  /// Stage w*block as the conjunction of stages w*(block-1) + n for
  /// n = 1..budget: No as soon as one excludes, otherwise Unknown.
  Tri limit_by_conjunction(std::uint64_t block, const Element& e, std::uint64_t budget = kResolutionBudget) const;
  /// Membership in the limit stage w*block: the conjunction decides
  /// exclusions, the block's closed form (when supplied) decides the rest.
  Tri limit_contains(std::uint64_t block, const Element& e, std::uint64_t budget = kResolutionBudget) const;
  /// Stage w*block by its closed form when one is supplied (the whole group
  /// for block 0), otherwise as `limit_contains`.
  Tri block_start_contains(std::uint64_t block, const Element& e, std::uint64_t budget = kResolutionBudget) const;
  /// Any stage, limits included.
  SubgroupDescriptor stage(StageIndex s, std::uint64_t budget = kResolutionBudget) const;

 private:
  GroupPtr group_;
  std::vector<BlockRule> blocks_;
  std::vector<SubgroupDescriptor> tail_;
  CardinalBound kappa_;
  std::string label_;
  std::vector<std::string> notes_;
};

/// Stage i of the chain; limit stages are lazy intersections.
SubgroupDescriptor chain_at(const ChainSchema& chain, const Ordinal& i, std::uint64_t budget = kResolutionBudget);

// ---------------------------------------------------------------- certificates

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct LevelReport {
  Ordinal stage;
  IndexInfo index;           // Finite only when checked against a transversal
  std::optional<BigInt> claimed_index;
  bool descent = true;
};

struct SeparationReport {
  Element probe;
  std::optional<Ordinal> first_excluding_stage;  // nullopt: unresolved
};

struct ChainCertificate {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::optional<Element> witness;
  std::optional<Ordinal> witness_stage;
  std::uint64_t levels_checked = 0;
  std::size_t probes_used = 0;
  std::uint64_t seed = 0;
  CardinalBound kappa = CardinalBound::aleph0();
  Ordinal length;
  std::vector<LevelReport> levels;
  std::vector<SeparationReport> separations;
  std::vector<std::string> flags;
};

struct VerifyOptions {
  std::uint64_t levels = 4;          // finite steps checked past each limit stage
  std::size_t probes = 64;
  std::uint64_t seed = 0;
  std::size_t max_word = 8;          // probe word length
  std::uint64_t budget = kResolutionBudget;
  std::size_t transversal_cap = 4096;
  std::size_t closure_sample = 12;   // members per stage used for the subgroup test
  std::vector<Element> extra_probes; // checked before the random words
};

/// Checks a finite prefix of the chain on random probe words: stage 0 is
/// full, stages descend and are closed on probes, every checked step has an
/// index below kappa witnessed by a transversal, the final stage excludes
/// every probe, and each probe has a first excluding stage. Failures are
/// verdicts with a witness, never exceptions.
ChainCertificate verify_prefix(const ChainSchema& chain, const VerifyOptions& options);

nlohmann::json to_json(const ChainCertificate& cert);

// ---------------------------------------------------------------- builders

/// A finite chain from explicit element sets; `stages[0]` must be the whole
/// (finite) group and each set must lie in the previous one.
ChainSchema explicit_chain(GroupPtr group, std::vector<std::vector<Element>> stages,
                           CardinalBound kappa = CardinalBound::aleph0(), std::string label = "explicit");

/// Derived series of a finite group, closed off by P > 1 when it stalls at a
/// nontrivial perfect subgroup P. Length 0 for the trivial group.
ChainSchema derived_series_chain(const GroupPtr& group);

/// G > 1 for a finite group G, with index |G|.
ChainSchema one_step_chain(const GroupPtr& group);

/// 2^i Z in Z.
ChainSchema two_adic_chain(const GroupPtr& integers);

/// Translations by multiples of 2^i (i >= 1) in D_inf.
ChainSchema dihedral_chain(const GroupPtr& dinf);

/// Extends a finite chain of length r to an w-chain whose stages after r
/// repeat the final stage with index 1.
ChainSchema promote_to_omega(const ChainSchema& finite);

/// Chain over the total group: pullbacks of the quotient chain up to its
/// length, then the kernel chain. Length add(len Q, len N), kappa the max.
ChainSchema concat_extension(const Extension& ext, const ChainSchema& chain_q, const ChainSchema& chain_n);

/// Replaces a finite tail of length n >= 2 after the last limit by one step
/// straight to the final stage; the new index is the product of the old ones.
ChainSchema compress_successor_tail(const ChainSchema& chain);

/// Chain over the finite-support power of the base group over a countable
/// point set. In block b, stage w*b + n holds f with f(x_i) in base stage
/// w*b + (n - i) for i < n and every value in base stage w*b. Requires base
/// length w*q with q >= 1.
ChainSchema power_chain(const ChainSchema& base_chain, const PointSetPtr& points);
ChainSchema power_chain(const ChainSchema& base_chain, const std::shared_ptr<const FinSupportPowerGroup>& power);

/// Stage i holds the functions with every value in base stage i; for a
/// finite point set of size m each step index is the base index to the m.
ChainSchema diagonal_power_chain(const ChainSchema& base_chain, const PointSetPtr& points);
ChainSchema diagonal_power_chain(const ChainSchema& base_chain, const std::shared_ptr<const FinSupportPowerGroup>& power);

/// Chain of length w*n over G_n, where G_1 = G and G_{i+1} = G_i wr G, built
/// by pulling back `g_chain` and appending the power chain of G_i's chain.
ChainSchema tower_chain(const GroupPtr& g, const ChainSchema& g_chain, std::uint64_t n);

/// Lower and upper membership tests around the residual core of K wr G
/// (G infinite): functions into [K,K] with trivial top part, and the kernel
/// of the projection to G.
std::pair<SubgroupDescriptor, SubgroupDescriptor> core_sandwich(const GroupPtr& wreath);

/// Left coset representatives of `sub` inside the element list `big`,
/// chosen in list order.
std::vector<Element> left_transversal(const Group& g, const std::vector<Element>& big, const Membership& sub);

}  // namespace residua
