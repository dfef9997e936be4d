// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//   acceptance [--only N]

#include <CLI11.hpp>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "residua/cli.h"
#include "residua/construct.h"
#include "residua/error.h"
#include "residua/oracle.h"
#include "residua/tree.h"
#include "support.h"

using namespace residua;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { extra_ += (extra_.empty() ? "" : ", ") + s; }
  Outcome done() const {
    std::ostringstream s;
    s << checks_ << " checks";
    if (!extra_.empty()) s << ", " << extra_;
    if (failures_) s << ", " << failures_ << " failed: " << notes_;
    return {failures_ == 0, s.str()};
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string notes_, extra_;
};

const Ordinal w = Ordinal::omega();
Ordinal fin(std::uint64_t n) { return Ordinal::finite(n); }

// ---------------------------------------------------------------- 1

Outcome ordinal_laws() {
  Tally t;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = fixtures::ordinal_below_w_pow(rng), b = fixtures::ordinal_below_w_pow(rng), c = fixtures::ordinal_below_w_pow(rng);
    const std::string abc = "(" + format(a) + ", " + format(b) + ", " + format(c) + ")";
    t.check((a + b) + c == a + (b + c), "add not associative on " + abc);
    t.check((a * b) * c == a * (b * c), "multiply not associative on " + abc);
    t.check(a * (b + c) == a * b + a * c, "left distributivity fails on " + abc);
  }
  t.check(fin(1) + w == w, "1 + w != w");
  t.check(w + fin(1) != w, "w + 1 == w");
  t.check(w * fin(2) == w + w, "w*2 != w + w");
  t.check(fin(2) * w == w, "2*w != w");
  for (std::uint64_t n = 1; n <= 20; ++n)
    t.check(w + w * fin(n - 1) == Ordinal::omega_times(n), "w + w*(n-1) != w*n for n = " + std::to_string(n));

  // omega_absorbs against the stated threshold w^w
  const Ordinal w_w = Ordinal::omega_pow(w);
  std::size_t mismatches = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = fixtures::ordinal_mixed(rng);
    if (omega_absorbs(a) != (a >= w_w)) {
      if (mismatches++ == 0) first = format(a);
    }
  }
  t.check(mismatches == 0, "omega_absorbs <=> a >= w^w disagrees on " + std::to_string(mismatches) + " of 1000 samples, first " + first +
                               " (w + a == a already holds from w^2 on)");
  return t.done();
}

// ---------------------------------------------------------------- 2

Outcome depth_classification() {
  Tally t;
  for (std::uint64_t q = 0; q <= 3; ++q)
    for (std::uint64_t r = 0; r <= 3; ++r) {
      const Ordinal a = Ordinal::omega_times(q) + fin(r);
      DepthClass expect = DepthClass::Invalid;
      if (q == 0 && r == 0) expect = DepthClass::Zero;
      if (q == 0 && r == 1) expect = DepthClass::One;
      if (q > 0 && r == 0) expect = DepthClass::Limit;
      if (q > 0 && r == 1) expect = DepthClass::LimitPlusOne;
      t.check(classify(a) == expect, "classify(" + format(a) + ") = " + to_string(classify(a)) + ", expected " + to_string(expect));
    }
  return t.done();
}

// ---------------------------------------------------------------- 3

std::vector<GroupPtr> twelve_groups() {
  return {make_trivial(),
          make_cyclic(2),
          make_cyclic(3),
          make_cyclic(5),
          make_cyclic(7),
          make_product({make_cyclic(2), make_cyclic(2)}),
          make_symmetric(3),
          make_cyclic(12),
          make_alternating(4),
          make_product({make_symmetric(3), make_cyclic(3)}),
          make_symmetric(4),
          make_product({make_symmetric(4), make_cyclic(2)})};
}

Outcome finite_ground_truth() {
  Tally t;
  for (const auto& g : twelve_groups()) {
    const BigInt n = *g->order();
    t.check(depth_exact_finite(g) == fin(n == 1 ? 0 : 1), "depth of " + g->name());
    auto core = core_up_to_index(g, static_cast<std::uint64_t>(n) + 1);
    t.check(core.size() == 1 && g->is_identity(core.front()), "core of " + g->name() + " below index |G|+1 is not trivial");
  }
  for (std::uint64_t p : {2, 3, 5, 7}) t.check(min_kappa(make_cyclic(p)) == p + 1, "min_kappa(C(" + std::to_string(p) + "))");
  return t.done();
}

// ---------------------------------------------------------------- 4

ChainSchema lamplighter_chain() {
  auto lamp = wreath_product(make_cyclic(2), make_integers());
  auto wg = std::dynamic_pointer_cast<const WreathGroup>(lamp);
  return concat_extension(wreath_extension(lamp), two_adic_chain(wg->top()),
                          power_chain(promote_to_omega(one_step_chain(make_cyclic(2))), wg->kernel()));
}

// Random function on x_0..x_9 lying in stage k of a power chain, from its
// literal description: f(x_i) in base stage k - i for i < k.
using ValueAt = std::function<Element(std::mt19937_64&, std::uint64_t depth)>;

Element member_of_stage(const FinSupportPowerGroup& pw, std::mt19937_64& rng, std::uint64_t k, const ValueAt& value) {
  std::map<Element, Element> vals;
  for (std::uint64_t i = 0; i < 10; ++i) {
    Element v = value(rng, i < k ? k - i : 0);
    if (!pw.base()->is_identity(v)) vals.emplace(pw.points()->at(i), v);
  }
  return make_fin_support(vals);
}

// Counts [H_{k-1} : H_k] for k = 1..n by checking that the transversal's
// members lie in distinct cosets and that they cover sampled members of
// H_{k-1}. Returns the product of the counts.
BigInt counted_index(const ChainSchema& chain, std::uint64_t n, const ValueAt& value, Tally& t, const std::string& what) {
  auto pw = std::dynamic_pointer_cast<const FinSupportPowerGroup>(chain.group());
  std::mt19937_64 rng(n);
  BigInt total = 1;
  for (std::uint64_t k = 1; k <= n; ++k) {
    auto stage = chain.stage({0, k});
    const auto reps = stage.transversal();
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j)
        t.check(stage.contains(pw->multiply(pw->invert(reps[i]), reps[j])) == Tri::No, what + ": transversal repeats a coset at step " + std::to_string(k));
    for (int s = 0; s < 40; ++s) {
      Element h = member_of_stage(*pw, rng, k - 1, value);
      bool covered = false;
      for (const auto& r : reps) covered = covered || stage.contains(pw->multiply(pw->invert(r), h)) == Tri::Yes;
      t.check(covered, what + ": transversal misses a coset at step " + std::to_string(k));
      // literal membership agrees with the chain
      Element f = member_of_stage(*pw, rng, k, value);
      t.check(stage.contains(f) == Tri::Yes, what + ": literal member of stage " + std::to_string(k) + " rejected");
      // a base generator at x_{k-1} leaves the stage
      Element bad = pw->multiply(f, pw->single(pw->points()->at(k - 1), pw->base()->generators().front()));
      t.check(stage.contains(bad) == Tri::No, what + ": literal non-member of stage " + std::to_string(k) + " accepted");
    }
    total *= reps.size();
  }
  return total;
}

Outcome chain_axioms() {
  Tally t;
  auto not_fail = [&](const ChainSchema& c, VerifyOptions opt, const std::string& what) {
    auto cert = verify_prefix(c, opt);
    t.check(cert.verdict != Verdict::Fail, what + " failed: " + cert.reason);
    t.note(what + " " + to_string(cert.verdict));
  };
  auto z = make_integers();
  not_fail(two_adic_chain(z), VerifyOptions{.levels = 6}, "2-adic");
  auto lamp = lamplighter_chain();
  t.check(lamp.length() == Ordinal::omega_times(2), "lamplighter chain length");
  not_fail(lamp, VerifyOptions{.levels = 5, .probes = 64, .seed = 7}, "lamplighter");
  auto d = make_infinite_dihedral();
  not_fail(tower_chain(d, dihedral_chain(d), 2), VerifyOptions{.levels = 4, .probes = 64}, "tower(Dinf, 2)");

  auto c2_chain = power_chain(promote_to_omega(one_step_chain(make_cyclic(2))), natural_points());
  not_fail(c2_chain, VerifyOptions{.levels = 8}, "power of C(2)");
  ValueAt c2_value = [](std::mt19937_64& rng, std::uint64_t depth) {
    return make_modular(depth > 0 ? 0 : fixtures::below(rng, 2), 2);
  };
  for (std::uint64_t n = 1; n <= 8; ++n)
    t.check(counted_index(c2_chain, n, c2_value, t, "C(2) power") == (BigInt(1) << n), "[G^(X) : H_" + std::to_string(n) + "] != 2^n");

  auto z_chain = power_chain(two_adic_chain(z), natural_points());
  ValueAt z_value = [](std::mt19937_64& rng, std::uint64_t depth) {
    return make_integer((static_cast<long>(fixtures::below(rng, 17)) - 8) * (BigInt(1) << depth));
  };
  for (std::uint64_t n = 1; n <= 6; ++n)
    t.check(counted_index(z_chain, n, z_value, t, "Z power") == (BigInt(1) << (n * (n + 1) / 2)),
            "Z power index at n = " + std::to_string(n) + " != 2^(n(n+1)/2)");
  return t.done();
}

// ---------------------------------------------------------------- 5

std::vector<Element> stage_set(const ChainSchema& c, std::uint64_t step) {
  std::vector<Element> out;
  for (const auto& e : c.group()->elements())
    if (c.stage({0, step}).contains(e) == Tri::Yes) out.push_back(e);
  return out;
}

Outcome tree_theorem() {
  Tally t;
  std::size_t chains = 0;
  for (const auto& g : fixtures::finite_groups()) {
    if (*g->order() > 24) continue;
    for (const auto& stages : chain_enumerate(g, 3)) {
      ++chains;
      const std::string what = g->name() + " chain #" + std::to_string(chains);
      auto chain = explicit_chain(g, stages);
      auto tr = truncate(coset_tree(chain), stages.size() - 1);
      auto back = stabilizer_chain(tr, identity_thread(tr));
      for (std::uint64_t i = 0; i < stages.size(); ++i) t.check(stage_set(back, i) == stages[i], what + ": stabilizer stage " + std::to_string(i));
      for (std::uint64_t i = 1; i < stages.size(); ++i) {
        std::vector<std::uint64_t> children(tr.sizes[i - 1], 0);
        for (auto p : tr.parents[i]) ++children[p];
        const std::uint64_t index = stages[i - 1].size() / stages[i].size();
        for (auto c : children) t.check(c == index, what + ": fibre size at level " + std::to_string(i));
      }
      auto rep = verify_simple(chain, tr);
      t.check(rep.exhaustive && rep.simple, what + ": chain ending at 1 is not simple");
      if (stages.size() > 1) {
        std::vector<std::vector<Element>> cut(stages.begin(), stages.end() - 1);
        auto short_chain = explicit_chain(g, cut);
        auto r2 = verify_simple(short_chain, truncate(coset_tree(short_chain), cut.size() - 1));
        t.check(r2.exhaustive && !r2.simple, what + ": chain ending above 1 reported simple");
      }
    }
  }
  t.check(chains > 0, "no chains enumerated");
  t.note(std::to_string(chains) + " chains");
  return t.done();
}

// ---------------------------------------------------------------- 6

void check_axioms(const Group& g, std::uint64_t seed, Tally& t) {
  std::mt19937_64 rng(seed);
  const Element e = g.identity();
  for (int i = 0; i < 1000; ++i) {
    Element a = fixtures::word(g, rng, 6), b = fixtures::word(g, rng, 6), c = fixtures::word(g, rng, 6);
    t.check(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)), g.name() + ": associativity");
    t.check(g.multiply(a, e) == a && g.multiply(e, a) == a, g.name() + ": identity");
    t.check(g.is_identity(g.multiply(a, g.invert(a))) && g.is_identity(g.multiply(g.invert(a), a)), g.name() + ": inverse");
  }
}

std::set<Element> support_of(const WreathGroup& wg, const Element& e) {
  std::set<Element> s;
  for (const auto& [x, v] : wg.kernel()->support(wg.pair(e).fs).values) s.insert(x);
  return s;
}

// [g k g^-1, k'] = 1 whenever the translate of supp(k) by g misses supp(k').
std::size_t disjoint_translates(const GroupPtr& w, std::uint64_t seed, Tally& t) {
  auto wg = std::dynamic_pointer_cast<const WreathGroup>(w);
  auto ext = wreath_extension(w);
  std::mt19937_64 rng(seed);
  std::size_t used = 0;
  for (int i = 0; i < 1000; ++i) {
    Element g = fixtures::word(*w, rng, 6);
    Element k = ext.include(random_word(*wg->kernel(), 1 + fixtures::below(rng, 2), rng));
    Element k2 = ext.include(random_word(*wg->kernel(), 1 + fixtures::below(rng, 2), rng));
    Element moved = conjugate(*w, g, k);
    std::set<Element> a = support_of(*wg, moved), b = support_of(*wg, k2);
    bool disjoint = true;
    for (const auto& x : a) disjoint = disjoint && !b.count(x);
    if (!disjoint) continue;
    ++used;
    t.check(w->is_identity(commutator(*w, moved, k2)), w->name() + ": [gkg^-1, k'] != 1 on disjoint supports");
  }
  return used;
}

Outcome wreath_semantics() {
  Tally t;
  auto w23 = wreath_product(make_cyclic(2), make_cyclic(3));
  auto ws3z = wreath_product(make_symmetric(3), make_integers());
  auto tower = build_group(*parse_expr("tower(Dinf, 2)"));
  check_axioms(*w23, 61, t);
  check_axioms(*ws3z, 62, t);
  check_axioms(*tower, 63, t);
  std::size_t used = 0;
  used += disjoint_translates(w23, 64, t);
  used += disjoint_translates(ws3z, 65, t);
  used += disjoint_translates(tower, 66, t);
  t.check(used >= 300, "too few disjoint-translate probes: " + std::to_string(used));
  t.note(std::to_string(used) + " disjoint-translate probes");
  t.check(*w23->order() == 24, "|wreath(C(2), C(3))| != 24");
  t.check(w23->elements().size() == 24, "enumeration of wreath(C(2), C(3)) has the wrong size");
  return t.done();
}

// ---------------------------------------------------------------- 7

bool is_even(const Element& p) {
  const auto& img = get_if<Perm>(p)->image;
  std::vector<bool> seen(img.size());
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = img[j]) seen[j] = true;
  }
  return (img.size() - cycles) % 2 == 0;
}

Outcome core_sandwich_evidence() {
  Tally t;
  auto w = wreath_product(make_symmetric(3), make_integers());
  auto wg = std::dynamic_pointer_cast<const WreathGroup>(w);
  auto [lower, upper] = core_sandwich(w);
  const auto s3 = make_symmetric(3)->elements();  // sorted, identity first
  std::vector<Element> a3;
  for (const auto& p : s3)
    if (is_even(p)) a3.push_back(p);
  const Element zero = make_integer(0);

  std::mt19937_64 rng(71);
  std::size_t in_lower = 0;
  for (int i = 0; i < 1000; ++i) {
    Element e;
    if (i % 2 == 0) {
      e = fixtures::word(*w, rng, 8);
    } else {
      std::map<Element, Element> vals;
      for (int j = 0; j < 4; ++j) {
        const auto& v = fixtures::below(rng, 4) ? a3[fixtures::below(rng, a3.size())] : s3[fixtures::below(rng, s3.size())];
        const Element x = make_integer(static_cast<long>(fixtures::below(rng, 11)) - 5);
        if (v != s3.front()) vals[x] = v;
      }
      e = make_wreath(make_fin_support(vals), zero);
    }
    // literal descriptions: lower is A3-valued with trivial top, upper has trivial top
    bool top_trivial = wg->pair(e).top == zero;
    bool values_even = true;
    for (const auto& [x, v] : wg->kernel()->support(wg->pair(e).fs).values) values_even = values_even && is_even(v);
    const Tri lo = lower.contains(e), up = upper.contains(e);
    t.check(lo == to_tri(top_trivial && values_even), "lower test disagrees with its description");
    t.check(up == to_tri(top_trivial), "upper test disagrees with its description");
    if (lo == Tri::Yes) {
      ++in_lower;
      t.check(up == Tri::Yes, "lower member outside upper");
    }
  }
  t.check(in_lower >= 100, "too few probes in the lower subgroup");
  t.note(std::to_string(in_lower) + " probes in lower");

  // g_1 with nontrivial top moves the copy at the base point off itself
  auto at = embed_at_point(w, wg->base_point());
  for (int i = 0; i < 1000; ++i) {
    Element g1 = fixtures::word(*w, rng, 8);
    if (wg->pair(g1).top == zero) g1 = w->multiply(g1, make_wreath(wg->kernel()->identity(), make_integer(1)));
    Element x = at(s3[fixtures::below(rng, s3.size())]);
    Element y = at(s3[fixtures::below(rng, s3.size())]);
    t.check(w->is_identity(commutator(*w, conjugate(*w, g1, x), y)), "[g1 x g1^-1, y] != 1");
    t.check(lower.contains(commutator(*w, x, y)) == Tri::Yes, "[x, y] outside the lower subgroup");
  }
  return t.done();
}

// ---------------------------------------------------------------- 8

Outcome symbolic_depths() {
  Tally t;
  for (std::uint64_t n = 1; n <= 5; ++n) {
    const std::string text = "tower(Dinf, " + std::to_string(n) + ")";
    auto d = depth_interval(*parse_expr(text));
    const Ordinal wn = Ordinal::omega_times(n);
    t.check(d.upper == wn, text + ": upper " + format(d.upper));
    t.check(d.paper_claimed && *d.paper_claimed == wn, text + ": claimed depth missing or wrong");
    t.check(d.lower == w, text + ": lower " + format(d.lower));
    t.check(!d.discrepancy, text + ": unexpected discrepancy");

    const std::string wr = "wreath(" + text + ", C(2))";
    auto dw = depth_interval(*parse_expr(wr));
    t.check(dw.paper_claimed && *dw.paper_claimed == wn + fin(1), wr + ": claimed w*n + 1 not reported");
    t.check(dw.discrepancy, wr + ": discrepancy not flagged");
    bool noted = false;
    for (const auto& f : dw.flags) noted = noted || f.find("gap is reported") != std::string::npos;
    t.check(noted, wr + ": no flag describing the gap");
  }
  return t.done();
}

// ---------------------------------------------------------------- 9

Outcome determinism() {
  Tally t;
  const std::vector<std::vector<std::string>> cmds = {
      {"depth", "tower(Dinf, 3)"},
      {"depth", "wreath(tower(Dinf, 2), C(2))", "--format", "json"},
      {"verify", "Z", "--levels", "6"},
      {"verify", "wreath(C(2), Z)", "--levels", "5", "--probes", "64", "--seed", "7"},
      {"verify", "tower(Dinf, 2)", "--seed", "3", "--format", "json"},
      {"verify", "C(5)", "--kappa", "5"},
      {"verify", "prod(Z, S(3))", "--seed", "9"},
      {"tree", "S(3)", "--levels", "2", "--format", "dot"},
      {"tree", "wreath(C(2), Z)", "--levels", "3", "--format", "json"},
      {"tree", "A(4)", "--levels", "2"},
      {"oracle", "lattice", "S(4)", "--format", "json"},
      {"oracle", "core", "S(3)", "--max-index", "4"},
      {"oracle", "min-kappa", "C(12)", "--format", "json"},
      {"oracle", "depth", "C(12)"},
  };
  for (const auto& c : cmds) {
    std::ostringstream o1, e1, o2, e2;
    const int r1 = run_cli(c, o1, e1);
    const int r2 = run_cli(c, o2, e2);
    std::string line;
    for (const auto& a : c) line += a + " ";
    t.check(r1 == r2 && o1.str() == o2.str(), "output differs between runs of: " + line);
    t.check(!o1.str().empty(), "no artifact from: " + line);
  }
  t.note(std::to_string(cmds.size()) + " commands");
  return t.done();
}

struct Criterion {
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"ordinal laws", 5, ordinal_laws},
      {"depth classification", 1, depth_classification},
      {"finite-group ground truth", 30, finite_ground_truth},
      {"chain axioms", 60, chain_axioms},
      {"tree theorem, finite case", 60, tree_theorem},
      {"wreath semantics", 10, wreath_semantics},
      {"core sandwich evidence", 10, core_sandwich_evidence},
      {"symbolic depth reproduction", 1, symbolic_depths},
      {"determinism", 0, determinism},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      out.pass = false;
      out.detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    all = all && out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << " (" << c.name << ") " << std::fixed << std::setprecision(2)
              << secs << " s: " << out.detail << std::endl;
  }
  return all ? 0 : 1;
}
