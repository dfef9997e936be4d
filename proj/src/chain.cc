#include "residua/chain.h"

#include <algorithm>
#include <map>
#include <set>

#include "residua/error.h"

namespace residua {

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::No || b == Tri::No) return Tri::No;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::Yes;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(const IndexInfo& i) {
  switch (i.kind) {
    case IndexInfo::Kind::Finite: return i.value.str();
    case IndexInfo::Kind::Infinite: return "infinite";
    case IndexInfo::Kind::Unverified: return "unverified";
    case IndexInfo::Kind::NotApplicable: return "n/a";
  }
  return "n/a";
}

IndexInfo index_product(const IndexInfo& a, const IndexInfo& b) {
  using K = IndexInfo::Kind;
  if (a.kind == K::Infinite || b.kind == K::Infinite) return IndexInfo::infinite();
  if (a.kind != K::Finite || b.kind != K::Finite) return IndexInfo::unverified();
  return IndexInfo::finite(a.value * b.value);
}

Ordinal StageIndex::ordinal() const { return add(Ordinal::omega_times(block), Ordinal::finite(step)); }

StageIndex stage_index(const Ordinal& i) {
  StageIndex s;
  for (const auto& t : i.terms()) {
    auto e = t.exponent.as_finite();
    if (!e || *e > 1) throw PreconditionError("stage " + format(i) + " is not of the form w*q + r");
    if (t.coeff > BigInt(std::numeric_limits<std::uint32_t>::max())) throw PreconditionError("stage " + format(i) + " is too large");
    if (*e == 1)
      s.block = static_cast<std::uint64_t>(t.coeff);
    else
      s.step = static_cast<std::uint64_t>(t.coeff);
  }
  return s;
}

// ---------------------------------------------------------------- schema

ChainSchema::ChainSchema(GroupPtr group, std::vector<BlockRule> blocks, std::vector<SubgroupDescriptor> tail,
                         CardinalBound kappa, std::string label)
    : group_(std::move(group)), blocks_(std::move(blocks)), tail_(std::move(tail)), kappa_(std::move(kappa)), label_(std::move(label)) {
  if (!group_) throw PreconditionError("chain needs a group");
  for (const auto& b : blocks_)
    if (!b.stage) throw PreconditionError("block rule without a stage function");
}

Ordinal ChainSchema::length() const { return StageIndex{block_count(), tail_length()}.ordinal(); }

ChainSchema ChainSchema::with_kappa(CardinalBound kappa) const {
  ChainSchema c = *this;
  c.kappa_ = std::move(kappa);
  return c;
}

ChainSchema ChainSchema::with_note(std::string note) const {
  ChainSchema c = *this;
  if (std::find(c.notes_.begin(), c.notes_.end(), note) == c.notes_.end()) c.notes_.push_back(std::move(note));
  return c;
}

ChainSchema ChainSchema::with_label(std::string label) const {
  ChainSchema c = *this;
  c.label_ = std::move(label);
  return c;
}

bool ChainSchema::has_stage(StageIndex s) const {
  if (s.block < block_count()) return true;
  return s.block == block_count() && s.step <= tail_length();
}

SubgroupDescriptor ChainSchema::successor_stage(StageIndex s) const {
  if (!has_stage(s)) throw PreconditionError("stage " + format(s.ordinal()) + " exceeds chain length " + format(length()));
  if (s.block == 0 && s.step == 0) {
    GroupPtr g = group_;
    return {g, [g](const Element& e) { return to_tri(g->contains(e)); }, IndexInfo::not_applicable(), {}, "G"};
  }
  if (s.step == 0) throw PreconditionError("stage " + format(s.ordinal()) + " is a limit stage");
  if (s.block < block_count()) return blocks_[s.block].stage(s.step);
  return tail_[s.step - 1];
}

Tri ChainSchema::limit_by_conjunction(std::uint64_t block, const Element& e, std::uint64_t budget) const {
  if (block == 0 || block > block_count()) throw PreconditionError("no limit stage at block " + std::to_string(block));
  const auto& rule = blocks_[block - 1];
  Tri start = block_start_contains(block - 1, e, budget);
  if (start == Tri::No) return Tri::No;
  for (std::uint64_t n = 1; n <= budget; ++n)
    if (rule.stage(n).contains(e) == Tri::No) return Tri::No;
  return Tri::Unknown;
}

Tri ChainSchema::limit_contains(std::uint64_t block, const Element& e, std::uint64_t budget) const {
  Tri t = limit_by_conjunction(block, e, budget);
  if (t == Tri::No) return Tri::No;
  const auto& rule = blocks_[block - 1];
  if (!rule.limit) return Tri::Unknown;
  return rule.limit(e);
}

Tri ChainSchema::block_start_contains(std::uint64_t block, const Element& e, std::uint64_t budget) const {
  if (block == 0) return to_tri(group_->contains(e));
  if (block > block_count()) throw PreconditionError("no limit stage at block " + std::to_string(block));
  const auto& rule = blocks_[block - 1];
  if (rule.limit) return rule.limit(e);
  return limit_contains(block, e, budget);
}

SubgroupDescriptor ChainSchema::stage(StageIndex s, std::uint64_t budget) const {
  if (!has_stage(s)) throw PreconditionError("stage " + format(s.ordinal()) + " exceeds chain length " + format(length()));
  if (!s.is_limit()) return successor_stage(s);
  // copies keep the descriptor valid after the schema goes away
  auto self = std::make_shared<const ChainSchema>(*this);
  const std::uint64_t b = s.block;
  return {group_, [self, b, budget](const Element& e) { return self->limit_contains(b, e, budget); },
          IndexInfo::not_applicable(), {}, "limit " + format(s.ordinal())};
}

SubgroupDescriptor chain_at(const ChainSchema& chain, const Ordinal& i, std::uint64_t budget) {
  if (i > chain.length()) throw PreconditionError("stage " + format(i) + " exceeds chain length " + format(chain.length()));
  return chain.stage(stage_index(i), budget);
}

// ---------------------------------------------------------------- verification

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

class Verifier {
 public:
  Verifier(const ChainSchema& chain, const VerifyOptions& opt) : chain_(chain), opt_(opt), g_(*chain.group()) {}

  ChainCertificate run() {
    cert_.seed = opt_.seed;
    cert_.kappa = chain_.kappa();
    cert_.length = chain_.length();
    for (const auto& n : chain_.notes()) cert_.flags.push_back(n);
    if (g_.flags().residually_finite_claimed && !g_.is_finite())
      cert_.flags.push_back("hypothesis: " + g_.name() + " residually finite (claimed, not verified)");
    std::set<Element> seen;
    for (const auto& p : opt_.extra_probes)
      if (g_.contains(p) && !g_.is_identity(p) && seen.insert(p).second) probes_.push_back(p);
    for (auto& p : draw_probes(g_, opt_.probes, opt_.max_word, opt_.seed))
      if (seen.insert(p).second) probes_.push_back(std::move(p));
    cert_.probes_used = probes_.size();
    try {
      check_stages();
      if (!failed_) check_separation();
    } catch (const Error& e) {
      if (!failed_) {
        cert_.verdict = Verdict::Inconclusive;
        cert_.reason = std::string("evaluation error: ") + e.what();
        return finish();
      }
    }
    if (failed_) return finish();
    cert_.verdict = inconclusive_.empty() ? Verdict::Pass : Verdict::Inconclusive;
    cert_.reason = inconclusive_.empty() ? "all checks passed" : inconclusive_.front();
    return finish();
  }

 private:
  ChainCertificate finish() {
    cert_.levels_checked = cert_.levels.size();
    std::sort(cert_.separations.begin(), cert_.separations.end(),
              [](const SeparationReport& a, const SeparationReport& b) { return a.probe < b.probe; });
    for (auto& s : inconclusive_)
      if (std::find(cert_.flags.begin(), cert_.flags.end(), s) == cert_.flags.end()) cert_.flags.push_back(s);
    return std::move(cert_);
  }

  void fail(std::string reason, const Element& witness, const Ordinal& stage) {
    if (failed_) return;
    failed_ = true;
    cert_.verdict = Verdict::Fail;
    cert_.reason = std::move(reason);
    cert_.witness = witness;
    cert_.witness_stage = stage;
  }

  void unsure(std::string why) {
    if (std::find(inconclusive_.begin(), inconclusive_.end(), why) == inconclusive_.end()) inconclusive_.push_back(std::move(why));
  }

  const SubgroupDescriptor& descriptor(StageIndex s) {
    auto it = cache_.find(s);
    if (it == cache_.end()) it = cache_.emplace(s, chain_.stage(s, opt_.budget)).first;
    return it->second;
  }

  std::vector<StageIndex> checked_stages() const {
    std::vector<StageIndex> out;
    for (std::uint64_t b = 0; b < chain_.block_count(); ++b)
      for (std::uint64_t n = 0; n <= opt_.levels; ++n) out.push_back({b, n});
    for (std::uint64_t n = 0; n <= chain_.tail_length(); ++n) {
      StageIndex s{chain_.block_count(), n};
      if (out.empty() || out.back() < s) out.push_back(s);
    }
    return out;
  }

  void check_stages() {
    const auto stages = checked_stages();
    const Element id = g_.identity();
    std::vector<Tri> prev;
    std::optional<StageIndex> prev_stage;
    for (const auto& s : stages) {
      const auto& d = descriptor(s);
      const Ordinal ord = s.ordinal();
      LevelReport report;
      report.stage = ord;
      report.index = s.step == 0 ? IndexInfo::not_applicable() : IndexInfo::unverified();
      std::vector<Tri> mem;
      mem.reserve(probes_.size());
      for (const auto& p : probes_) mem.push_back(d.contains(p));

      Tri has_id = d.contains(id);
      if (has_id == Tri::No) return fail("identity is not in stage " + format(ord), id, ord);
      if (has_id == Tri::Unknown) unsure("identity membership unresolved at stage " + format(ord));

      if (s.block == 0 && s.step == 0) {
        for (std::size_t i = 0; i < probes_.size(); ++i)
          if (mem[i] != Tri::Yes) return fail("stage 0 rejects a group element", probes_[i], ord);
      }

      if (prev_stage) {
        for (std::size_t i = 0; i < probes_.size(); ++i) {
          if (mem[i] == Tri::Yes && prev[i] == Tri::No) {
            report.descent = false;
            cert_.levels.push_back(report);
            return fail("stage " + format(ord) + " is not contained in stage " + format(prev_stage->ordinal()), probes_[i], ord);
          }
        }
      }

      check_closure(d, mem, ord);
      if (failed_) return;

      if (s.step > 0) {
        check_index(s, d, prev, report);
        if (failed_) {
          cert_.levels.push_back(report);
          return;
        }
      }
      for (Tri t : mem)
        if (t == Tri::Unknown) unsure("membership unresolved within budget at stage " + format(ord));
      cert_.levels.push_back(report);
      prev = std::move(mem);
      prev_stage = s;
    }

    // final stage is trivial on probes
    const StageIndex last = chain_.final_stage();
    const auto& d = descriptor(last);
    for (const auto& p : probes_) {
      Tri t = d.contains(p);
      if (t == Tri::Yes) return fail("final stage " + format(last.ordinal()) + " contains a nontrivial element", p, last.ordinal());
      if (t == Tri::Unknown) unsure("final-stage membership unresolved within budget");
    }
  }

  void check_closure(const SubgroupDescriptor& d, const std::vector<Tri>& mem, const Ordinal& ord) {
    std::vector<Element> members;
    for (std::size_t i = 0; i < probes_.size() && members.size() < opt_.closure_sample; ++i)
      if (mem[i] == Tri::Yes) members.push_back(probes_[i]);
    for (const auto& a : members) {
      for (const auto& b : members) {
        Element q = g_.multiply(a, g_.invert(b));
        Tri t = d.contains(q);
        if (t == Tri::No) return fail("stage " + format(ord) + " is not closed under a*b^-1", q, ord);
        if (t == Tri::Unknown) unsure("closure unresolved within budget at stage " + format(ord));
      }
    }
  }

  void check_index(StageIndex s, const SubgroupDescriptor& d, const std::vector<Tri>& prev, LevelReport& report) {
    const Ordinal ord = s.ordinal();
    const IndexInfo& info = d.index_in_parent;
    // a probe in the previous stage but not in this one, used as witness
    std::optional<Element> dropped;
    for (std::size_t i = 0; i < probes_.size() && !dropped; ++i)
      if (prev[i] == Tri::Yes && d.contains(probes_[i]) == Tri::No) dropped = probes_[i];

    switch (info.kind) {
      case IndexInfo::Kind::Infinite:
        report.index = IndexInfo::infinite();
        return fail("index at stage " + format(ord) + " is infinite, not < " + format(chain_.kappa()), dropped.value_or(g_.identity()), ord);
      case IndexInfo::Kind::Unverified:
      case IndexInfo::Kind::NotApplicable:
        unsure("index unverified at stage " + format(ord));
        return;
      case IndexInfo::Kind::Finite:
        break;
    }
    report.claimed_index = info.value;
    if (!chain_.kappa().admits(info.value)) {
      std::optional<Element> w = dropped;
      if (!w && d.transversal && info.value <= BigInt(opt_.transversal_cap)) {
        for (const auto& t : d.transversal())
          if (!g_.is_identity(t)) {
            w = t;
            break;
          }
      }
      return fail("index " + info.value.str() + " at stage " + format(ord) + " is not < " + format(chain_.kappa()),
                  w.value_or(g_.identity()), ord);
    }
    if (!d.transversal || info.value > BigInt(opt_.transversal_cap)) {
      unsure("index unverified at stage " + format(ord));
      return;
    }
    const auto reps = d.transversal();
    const auto& parent = descriptor({s.block, s.step - 1});
    if (BigInt(reps.size()) != info.value)
      return fail("transversal at stage " + format(ord) + " has " + std::to_string(reps.size()) + " representatives for claimed index " + info.value.str(),
                  reps.empty() ? g_.identity() : reps.front(), ord);
    bool sure = true;
    for (const auto& t : reps) {
      Tri in = parent.contains(t);
      if (in == Tri::No) return fail("coset representative outside the previous stage at " + format(ord), t, ord);
      if (in == Tri::Unknown) sure = false;
    }
    std::vector<Element> inv;
    inv.reserve(reps.size());
    for (const auto& t : reps) inv.push_back(g_.invert(t));
    for (std::size_t a = 0; a < reps.size(); ++a) {
      for (std::size_t b = a + 1; b < reps.size(); ++b) {
        Tri same = d.contains(g_.multiply(inv[a], reps[b]));
        if (same == Tri::Yes) return fail("two coset representatives share a coset at stage " + format(ord), reps[b], ord);
        if (same == Tri::Unknown) sure = false;
      }
    }
    for (std::size_t i = 0; i < probes_.size(); ++i) {
      if (prev[i] != Tri::Yes) continue;
      bool covered = false;
      bool unknown = false;
      for (std::size_t a = 0; a < reps.size() && !covered; ++a) {
        Tri t = d.contains(g_.multiply(inv[a], probes_[i]));
        if (t == Tri::Yes) covered = true;
        if (t == Tri::Unknown) unknown = true;
      }
      if (!covered && !unknown) return fail("probe lies in no listed coset at stage " + format(ord), probes_[i], ord);
      if (!covered) sure = false;
    }
    if (!sure) {
      unsure("index unverified at stage " + format(ord));
      return;
    }
    report.index = IndexInfo::finite(info.value);
  }

  void check_separation() {
    for (const auto& p : probes_) {
      SeparationReport r{p, std::nullopt};
      bool reached_tail = true;
      for (std::uint64_t b = 0; b < chain_.block_count() && !r.first_excluding_stage; ++b) {
        for (std::uint64_t n = 1; n <= opt_.budget; ++n) {
          if (descriptor({b, n}).contains(p) == Tri::No) {
            r.first_excluding_stage = StageIndex{b, n}.ordinal();
            break;
          }
        }
        if (r.first_excluding_stage) break;
        // survived the budget: only an exact limit test lets it move on
        const auto& rule = chain_.blocks()[b];
        if (!rule.limit || rule.limit(p) != Tri::Yes) {
          reached_tail = false;
          break;
        }
      }
      if (!r.first_excluding_stage && reached_tail) {
        for (std::uint64_t n = 1; n <= chain_.tail_length(); ++n) {
          if (descriptor({chain_.block_count(), n}).contains(p) == Tri::No) {
            r.first_excluding_stage = StageIndex{chain_.block_count(), n}.ordinal();
            break;
          }
        }
      }
      if (!r.first_excluding_stage) unsure("probe separation unresolved within budget");
      cert_.separations.push_back(std::move(r));
    }
  }

  const ChainSchema& chain_;
  const VerifyOptions& opt_;
  const Group& g_;
  std::vector<Element> probes_;
  std::map<StageIndex, SubgroupDescriptor> cache_;
  ChainCertificate cert_;
  bool failed_ = false;
  std::vector<std::string> inconclusive_;
};

}  // namespace

ChainCertificate verify_prefix(const ChainSchema& chain, const VerifyOptions& options) {
  if (options.levels < 1) throw PreconditionError("verify_prefix needs levels >= 1");
  return Verifier(chain, options).run();
}

nlohmann::json to_json(const ChainCertificate& c) {
  using nlohmann::json;
  json levels = json::array();
  for (const auto& l : c.levels) {
    json idx = l.index.kind == IndexInfo::Kind::NotApplicable ? json(nullptr)
               : l.index.kind == IndexInfo::Kind::Finite    ? bigint_json(l.index.value)
                                                            : json(to_string(l.index));
    json entry = {{"stage", format(l.stage)}, {"index", idx}, {"descent", l.descent}};
    if (l.claimed_index) entry["claimed_index"] = bigint_json(*l.claimed_index);
    levels.push_back(std::move(entry));
  }
  json seps = json::array();
  for (const auto& s : c.separations) {
    seps.push_back({{"probe", to_json(s.probe)},
                    {"probe_text", to_text(s.probe)},
                    {"first_excluding_stage", s.first_excluding_stage ? json(format(*s.first_excluding_stage)) : json("unresolved")}});
  }
  json out = {{"tool", "residua 0.1.0"},
              {"verdict", to_string(c.verdict)},
              {"reason", c.reason},
              {"witness", c.witness ? to_json(*c.witness) : json(nullptr)},
              {"witness_text", c.witness ? json(to_text(*c.witness)) : json(nullptr)},
              {"witness_stage", c.witness_stage ? json(format(*c.witness_stage)) : json(nullptr)},
              {"kappa", format(c.kappa)},
              {"length", to_json(c.length)},
              {"length_text", format(c.length)},
              {"levels_checked", c.levels_checked},
              {"levels", levels},
              {"separations", seps},
              {"seed", c.seed},
              {"probes_used", c.probes_used},
              {"flags", c.flags}};
  return out;
}

}  // namespace residua
