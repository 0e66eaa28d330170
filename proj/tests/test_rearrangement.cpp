#include <algorithm>
#include <set>

#include "doctest.h"
#include "netdist/canonical.hpp"
#include "netdist/errors.hpp"
#include "netdist/newick.hpp"
#include "netdist/random.hpp"
#include "netdist/rearrangement.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace netdist;
using testutil::taxa;

namespace {

int pendant(const PhyloNetwork& g, const std::string& name) {
  return g.graph().in_edges(g.leaf(*g.taxa().index_of(name)))[0];
}

std::set<CanonicalKey> keys_of(const std::vector<Neighbor>& ns) {
  std::set<CanonicalKey> out;
  for (const auto& n : ns) out.insert(n.key);
  return out;
}

std::vector<PhyloNetwork> small_networks() {
  std::vector<PhyloNetwork> all;
  for (int n = 1; n <= 3; ++n)
    for (int r = 0; r <= 1; ++r)
      for (auto& g : enumerate_networks(taxa(n), r)) all.push_back(std::move(g));
  return all;
}

}  // namespace

TEST_CASE("validity examples") {
  PhyloNetwork t = parse_enewick("((1,2),3);");
  CHECK(is_valid_op(t, {OpKind::PR0Tail, pendant(t, "1"), pendant(t, "3")}));

  // Prune the cherry edge at its tail and try to regraft below it.
  int cherry = t.graph().in_edges(t.graph().edge(pendant(t, "1")).tail)[0];
  CHECK_FALSE(is_valid_op(t, {OpKind::PR0Tail, cherry, pendant(t, "1")}));
  CHECK_THROWS_AS(apply_op(t, {OpKind::PR0Tail, cherry, pendant(t, "1")}), InvalidOpError);

  PhyloNetwork one = single_leaf_network(taxa(1));
  CHECK_FALSE(is_valid_op(one, {OpKind::PR0Head, 0, 0}));
  CHECK_FALSE(is_valid_op(one, {OpKind::PR0Tail, 0, 0}));
  CHECK_FALSE(is_valid_op(one, {OpKind::PRMinus, 0, -1}));
  CHECK_FALSE(is_valid_op(one, {OpKind::PRPlus, 0, 7}));
  CHECK(is_valid_op(one, {OpKind::PRPlus, 0, 0}));
}

TEST_CASE("apply examples") {
  // Moving leaf 2 next to leaf 3 in ((1,2),3) gives (1,(2,3)).
  PhyloNetwork t = parse_enewick("((1,2),3);");
  PhyloNetwork moved = apply_op(t, {OpKind::PR0Tail, pendant(t, "2"), pendant(t, "3")});
  CHECK(validate(moved).ok);
  CHECK(canonical_key(moved) == canonical_key(parse_enewick("(1,(2,3));")));

  PhyloNetwork one = single_leaf_network(taxa(1));
  PhyloNetwork bubble = apply_op(one, {OpKind::PRPlus, 0, 0});
  CHECK(reticulation_count(bubble) == 1);
  int minus = -1;
  for (int e = 0; e < bubble.edge_count(); ++e)
    if (is_valid_op(bubble, {OpKind::PRMinus, e, -1})) minus = e;
  REQUIRE(minus >= 0);
  CHECK(canonical_key(apply_op(bubble, {OpKind::PRMinus, minus, -1})) == canonical_key(one));

  // Head move of a reticulation edge.
  PhyloNetwork n = parse_enewick("((1,(2)#H1),(#H1,3));");
  int h = n.graph().edge(pendant(n, "2")).tail;
  int moved_edge = n.graph().in_edges(h)[0];
  int ops = 0;
  for (const auto& op : enumerate_ops(n, OpSet::PR)) {
    if (op.kind != OpKind::PR0Head || op.edge != moved_edge) continue;
    PhyloNetwork res = apply_op(n, op);
    CHECK(validate(res).ok);
    CHECK(reticulation_count(res) == 1);
    ++ops;
  }
  CHECK(ops > 0);
}

TEST_CASE("neighbour examples") {
  auto ns = enumerate_neighbors(single_leaf_network(taxa(1)), OpSet::PR);
  REQUIRE(ns.size() == 1);
  CHECK(ns[0].op.kind == OpKind::PRPlus);
  CHECK(reticulation_count(ns[0].network) == 1);

  auto rs = keys_of(enumerate_neighbors(parse_enewick("((1,2),3);"), OpSet::RSPR));
  std::set<CanonicalKey> want{canonical_key(parse_enewick("((1,3),2);")), canonical_key(parse_enewick("((2,3),1);"))};
  CHECK(rs == want);

  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    PhyloNetwork g = random_network(taxa(1 + i % 4), i % 3, rng);
    auto pr = keys_of(enumerate_neighbors(g, OpSet::PR));
    auto sn = keys_of(enumerate_neighbors(g, OpSet::SNPR));
    CHECK(std::includes(pr.begin(), pr.end(), sn.begin(), sn.end()));
    auto keys = neighbor_keys(g, OpSet::PR);
    CHECK(std::set<CanonicalKey>(keys.begin(), keys.end()) == pr);
  }
}

TEST_CASE("rSPR neighbourhoods match the cluster oracle") {
  for (int n = 3; n <= 5; ++n) {
    auto trees = enumerate_trees(taxa(n));
    for (const auto& t : trees) {
      auto ns = enumerate_neighbors(t, OpSet::RSPR);
      int oracle_count = 0;
      for (const auto& u : trees) oracle_count += oracle::rspr_distance(t, u) == 1;
      CHECK(static_cast<int>(ns.size()) == oracle_count);
      for (const auto& nb : ns) {
        CHECK(nb.network.is_tree());
        CHECK(oracle::rspr_distance(t, nb.network) == 1);
      }
    }
  }
}

TEST_CASE("every valid op is reversible, exhaustive n <= 3, r <= 1") {
  for (const auto& g : small_networks()) {
    CanonicalKey gk = canonical_key(g);
    int r = reticulation_count(g);
    for (OpSet set : {OpSet::PR, OpSet::SNPR}) {
      for (const auto& op : enumerate_ops(g, set)) {
        PhyloNetwork h = apply_op(g, op);
        REQUIRE(validate(h).ok);
        REQUIRE_FALSE(oracle::has_cycle(h.graph()));
        int shift = op.kind == OpKind::PRPlus ? 1 : op.kind == OpKind::PRMinus ? -1 : 0;
        CHECK(reticulation_count(h) == r + shift);
        if (canonical_key(h) == gk) continue;
        auto back = neighbor_keys(h, set);
        CHECK(std::binary_search(back.begin(), back.end(), gk));
      }
    }
    if (g.is_tree()) {
      for (const auto& op : enumerate_ops(g, OpSet::RSPR)) {
        PhyloNetwork h = apply_op(g, op);
        CHECK(h.is_tree());
        if (canonical_key(h) == gk) continue;
        auto back = neighbor_keys(h, OpSet::RSPR);
        CHECK(std::binary_search(back.begin(), back.end(), gk));
      }
    }
  }
}

TEST_CASE("random reversibility samples") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    PhyloNetwork g = random_network(taxa(1 + i % 5), i % 3, rng);
    auto ops = enumerate_ops(g, OpSet::PR);
    const auto& op = ops[rng.index(ops.size())];
    PhyloNetwork h = apply_op(g, op);
    REQUIRE(validate(h).ok);
    CanonicalKey gk = canonical_key(g);
    if (canonical_key(h) == gk) continue;
    auto back = neighbor_keys(h, OpSet::PR);
    CHECK(std::binary_search(back.begin(), back.end(), gk));
  }
}

TEST_CASE("reticulation cap") {
  PhyloNetwork one = single_leaf_network(taxa(1));
  bool capped = false;
  CHECK(neighbor_keys(one, OpSet::PR, 0, &capped).empty());
  CHECK(capped);
  capped = false;
  CHECK(neighbor_keys(one, OpSet::PR, 1, &capped).size() == 1);
  CHECK_FALSE(capped);
}
