#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "residua/chain.h"
#include "residua/error.h"
#include "residua/oracle.h"
#include "support.h"

using namespace residua;

namespace {

std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  return n > 1 ? std::max(best, n) : best;
}

std::uint64_t order_of(const GroupPtr& g) { return static_cast<std::uint64_t>(*g->order()); }

}  // namespace

TEST_CASE("subgroup counts of the fixture groups") {
  CHECK(all_subgroups(make_cyclic(6)).subgroups.size() == 4);
  CHECK(all_subgroups(make_symmetric(3)).subgroups.size() == 6);
  CHECK(all_subgroups(make_product({make_cyclic(2), make_cyclic(2)})).subgroups.size() == 5);
  CHECK(all_subgroups(make_alternating(4)).subgroups.size() == 10);
  CHECK(all_subgroups(make_trivial()).subgroups.size() == 1);
  CHECK(all_subgroups(make_symmetric(4)).subgroups.size() == 30);
  std::vector<std::size_t> orders;
  for (const auto& s : all_subgroups(make_cyclic(6)).subgroups) orders.push_back(s.count());
  CHECK(orders == std::vector<std::size_t>{1, 2, 3, 6});
}

TEST_CASE("join closure agrees with the subset scan up to order 12") {
  for (const auto& g : fixtures::finite_groups()) {
    if (order_of(g) > 12) continue;
    auto lat = all_subgroups(g);
    CHECK(lat.subgroups == subgroups_by_subset_scan(lat.table));
  }
}

TEST_CASE("cyclic groups have one subgroup per divisor") {
  for (std::uint64_t n = 1; n <= 30; ++n) CHECK(all_subgroups(make_cyclic(n)).subgroups.size() == divisor_count(n));
}

TEST_CASE("lattice invariants") {
  for (const auto& g : fixtures::finite_groups()) {
    auto lat = all_subgroups(g);
    const auto& t = lat.table;
    CHECK(lat.subgroups.front() == t.trivial());
    CHECK(lat.subgroups.back() == t.whole());
    for (std::size_t i = 0; i < lat.subgroups.size(); ++i) {
      CHECK(t.is_subgroup(lat.subgroups[i]));
      CHECK(t.order() % lat.subgroups[i].count() == 0);  // Lagrange
      for (std::size_t j = 0; j < i; ++j) CHECK(lat.subgroups[i] != lat.subgroups[j]);
    }
  }
}

TEST_CASE("core up to index") {
  auto s3 = make_symmetric(3);
  CHECK(core_up_to_index(s3, 4) == std::vector<Element>{s3->identity()});
  CHECK(core_up_to_index(s3, 3).size() == 3);  // only A3 has index < 3
  CHECK(core_up_to_index(make_cyclic(5), 5).size() == 5);
  for (const auto& g : fixtures::finite_groups()) {
    const auto n = order_of(g);
    CHECK(core_up_to_index(g, 2).size() == n);
    CHECK(core_up_to_index(g, n + 1) == std::vector<Element>{g->identity()});
    std::size_t prev = n;
    for (std::uint64_t k = 1; k <= n + 1; ++k) {
      auto c = core_up_to_index(g, k);
      CHECK(c.size() <= prev);
      prev = c.size();
    }
  }
}

TEST_CASE("minimal kappa") {
  CHECK(min_kappa(make_cyclic(4)) == 3);
  for (std::uint64_t p : {2, 3, 5, 7}) CHECK(min_kappa(make_cyclic(p)) == p + 1);
  CHECK(min_kappa(make_trivial()) == 1);
  for (std::uint64_t n = 2; n <= 30; ++n) CHECK(min_kappa(make_cyclic(n)) == 1 + largest_prime_factor(n));
  CHECK(min_kappa(make_symmetric(4)) == 4);  // S4 > A4 > V4 > C2 > 1
  CHECK(min_kappa(make_alternating(4)) == 4);
  for (const auto& g : fixtures::finite_groups()) {
    const auto k = min_kappa(g);
    if (order_of(g) > 1) CHECK(k >= 2);
    CHECK(k <= order_of(g) + 1);
  }
}

TEST_CASE("exact depth of finite groups") {
  CHECK(depth_exact_finite(make_trivial()).is_zero());
  CHECK(depth_exact_finite(make_cyclic(2)) == Ordinal::finite(1));
  CHECK(depth_exact_finite(make_symmetric(5)) == Ordinal::finite(1));
  CHECK_THROWS_AS(depth_exact_finite(make_integers()), PreconditionError);
  CHECK_THROWS_AS(all_subgroups(make_symmetric(6)), CapExceeded);
}

TEST_CASE("chain enumeration") {
  auto s3 = make_symmetric(3);
  auto chains = chain_enumerate(s3, 3);
  auto a3 = commutator_subgroup(s3)->elements();
  std::vector<Element> c2 = {s3->identity(), perm_from_cycles(3, {{0, 1}})};
  std::sort(c2.begin(), c2.end());
  bool via_a3 = false, via_c2 = false;
  for (const auto& c : chains) {
    via_a3 = via_a3 || (c.size() == 3 && c[1] == a3);
    via_c2 = via_c2 || (c.size() == 3 && c[1] == c2);
  }
  CHECK(via_a3);
  CHECK(via_c2);
  CHECK(chains.size() == 5);  // S3 > 1, and through each of the 4 proper nontrivial subgroups

  auto c2g = chain_enumerate(make_cyclic(2), 5);
  REQUIRE(c2g.size() == 1);
  CHECK(c2g[0].size() == 2);
  CHECK(chain_enumerate(s3, 0).empty());
  CHECK(chain_enumerate(make_trivial(), 0).size() == 1);
  CHECK(chain_enumerate(s3, 3) == chains);
}

TEST_CASE("enumerated chains pass verification") {
  for (const auto& g : fixtures::finite_groups()) {
    if (order_of(g) > 24) continue;
    for (const auto& c : chain_enumerate(g, 3)) {
      auto cert = verify_prefix(explicit_chain(g, c), VerifyOptions{.levels = 4, .probes = 16});
      CHECK(cert.verdict == Verdict::Pass);
    }
  }
}

TEST_CASE("lattice json") {
  auto j = all_subgroups(make_cyclic(4)).to_json();
  CHECK(j["count"] == 3);
  CHECK(j["subgroups"][0]["elements"].size() == 1);
  CHECK(j["inclusions"].size() == 3);
}
