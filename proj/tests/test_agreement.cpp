#include <algorithm>

#include "doctest.h"
#include "netdist/agreement.hpp"
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

PrunedGraph swap_labels(const PrunedGraph& g, int a, int b) {
  Multigraph m;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int l = g.graph().label(v);
    m.add_vertex(l == a ? b : l == b ? a : l);
  }
  for (const Edge& e : g.graph().edges()) m.add_edge(e.tail, e.head);
  return PrunedGraph(g.taxa_ptr(), std::move(m));
}

PrunedGraph random_pruned(const PhyloNetwork& g, int k, Rng& rng) {
  PrunedGraph cur(g);
  for (int i = 0; i < k; ++i) {
    auto ps = enumerate_prunings(cur);
    if (ps.empty()) break;
    cur = apply_pruning(cur, ps[rng.index(ps.size())]);
  }
  return cur;
}

std::vector<PhyloNetwork> small_networks(int nmax, int rmax) {
  std::vector<PhyloNetwork> all;
  for (int n = 1; n <= nmax; ++n)
    for (int r = 0; r <= rmax; ++r)
      for (auto& g : enumerate_networks(taxa(n), r)) all.push_back(std::move(g));
  return all;
}

PhyloNetwork random_small(Rng& rng, int nmax, int rmax) {
  int n = 2 + rng.index(nmax - 1);
  return random_network(taxa(n), rng.index(rmax + 1), rng);
}

}  // namespace

TEST_CASE("pruning examples") {
  PhyloNetwork t = parse_enewick("((1,2),3);");
  PrunedGraph p = apply_pruning(t, {pendant(t, "1"), PruneEnd::AtTail});
  CHECK(p.sprout_count() == 1);
  CHECK(p.components().size() == 2);
  CHECK(validate(p).ok);
  CHECK(p.graph().find_label(0) >= 0);

  int top = t.graph().out_edges(t.root())[0];
  PrunedGraph q = apply_pruning(t, {top, PruneEnd::AtTail});
  CHECK(q.sprout_count() == 1);
  CHECK(q.graph().degree(q.graph().find_label(kRootLabel)) == 0);

  // Pruning the root edge at its head leaves an unlabelled (0,2) vertex.
  PrunedGraph r = apply_pruning(t, {top, PruneEnd::AtHead});
  bool thrown = false;
  for (int e = 0; e < r.edge_count(); ++e) {
    int v = r.graph().edge(e).tail;
    if (!r.graph().is_labeled(v) && r.graph().degree(v) == 2) {
      CHECK_FALSE(is_legal_pruning(r, {e, PruneEnd::AtTail}));
      CHECK_THROWS_AS(apply_pruning(r, {e, PruneEnd::AtTail}), PreconditionError);
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("enumerate prunings") {
  CHECK(enumerate_prunings(single_leaf_network(taxa(1))).size() == 2);
  for (const auto& g : small_networks(3, 1)) {
    auto ps = enumerate_prunings(g);
    int expect = 0;
    for (int e = 0; e < g.edge_count(); ++e)
      for (int v : {g.graph().edge(e).tail, g.graph().edge(e).head})
        if (g.graph().is_labeled(v) || g.graph().degree(v) == 3) ++expect;
    CHECK(static_cast<int>(ps.size()) == expect);
    for (const auto& p : ps) CHECK(apply_pruning(g, p).sprout_count() == 1);
  }
}

TEST_CASE("sprout accounting") {
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    PhyloNetwork g = random_small(rng, 5, 2);
    int k = rng.index(5);
    PrunedGraph cur(g);
    for (int j = 0; j < k; ++j) {
      auto ps = enumerate_prunings(cur);
      REQUIRE_FALSE(ps.empty());
      cur = apply_pruning(cur, ps[rng.index(ps.size())]);
    }
    PrunedGraph p = cur;
    CHECK(p.sprout_count() == k);
    CHECK(validate(p).ok);
  }
}

TEST_CASE("embedding examples") {
  for (const auto& g : small_networks(3, 1)) {
    auto e = find_agreement_embedding(PrunedGraph(g), g);
    REQUIRE(e.has_value());
    CHECK(verify_agreement_embedding(*e).ok);
  }
  PhyloNetwork a = parse_enewick("((1,2),3);"), b = parse_enewick("((1,3),2);", a.taxa_ptr());
  CHECK_FALSE(find_agreement_embedding(PrunedGraph(a), b).has_value());
}

TEST_CASE("embedding decision matches pruning levels") {
  Rng rng(11);
  auto nets = small_networks(3, 1);
  int derivable = 0, rejected = 0;
  for (const auto& g : nets) {
    auto levels = pruning_levels(g, 3);
    for (int want = 0; want <= 3; ++want) {
      PrunedGraph p = random_pruned(g, want, rng);
      int k = p.sprout_count();
      auto e = find_agreement_embedding(p, g);
      REQUIRE(e.has_value());
      CHECK(verify_agreement_embedding(*e).ok);
      ++derivable;
      if (g.taxa().size() < 2) continue;
      PrunedGraph s = swap_labels(p, 0, 1);
      bool in_levels = std::binary_search(levels[k].begin(), levels[k].end(), canonical_key(s));
      CHECK(find_agreement_embedding(s, g).has_value() == in_levels);
      if (!in_levels) ++rejected;
    }
  }
  CHECK(derivable > 0);
  CHECK(rejected > 0);
}

TEST_CASE("verify reports violations") {
  PhyloNetwork g = parse_enewick("((1,(2)#H1),(#H1,3));");
  Rng rng(5);
  PrunedGraph p = random_pruned(g, 2, rng);
  auto e = find_agreement_embedding(p, g);
  REQUIRE(e.has_value());
  REQUIRE(verify_agreement_embedding(*e).ok);

  AgreementEmbedding cut = *e;
  for (auto& path : cut.edge_paths)
    if (path.size() > 0) {
      path.pop_back();
      break;
    }
  CHECK(verify_agreement_embedding(cut).has("cover"));

  PrunedGraph full(g);
  auto id = find_agreement_embedding(full, g);
  REQUIRE(id.has_value());
  AgreementEmbedding clash = *id;
  int a = -1, b = -1;
  for (int v = 0; v < full.vertex_count(); ++v)
    if (full.graph().degree(v) == 3) (a < 0 ? a : b) = v;
  REQUIRE(b >= 0);
  clash.vertex_map[a] = clash.vertex_map[b];
  CHECK_FALSE(verify_agreement_embedding(clash).ok);
  CHECK(verify_agreement_embedding(clash).has("collision"));
}

TEST_CASE("embedding change is an involution") {
  Rng rng(17);
  int done = 0;
  for (int i = 0; i < 400 && done < 30; ++i) {
    PhyloNetwork g = random_small(rng, 4, 2);
    PrunedGraph p = random_pruned(g, 2 + rng.index(2), rng);
    auto e = find_agreement_embedding(p, g);
    REQUIRE(e.has_value());
    for (int u : p.sprouts())
      for (int v : p.sprouts()) {
        if (u == v || p.is_t_sprout(u) != p.is_t_sprout(v)) continue;
        if (attached_edge(*e, u) != p.sprout_edge(v)) continue;
        AgreementEmbedding c = embedding_change(*e, u, v);
        CHECK(verify_agreement_embedding(c).ok);
        AgreementEmbedding back = embedding_change(c, v, u);
        CHECK(back.edge_paths == e->edge_paths);
        CHECK(back.vertex_map == e->vertex_map);
        ++done;
      }
  }
  CHECK(done > 0);
}

TEST_CASE("embedding change preconditions") {
  PhyloNetwork t = parse_enewick("((1,2),(3,4));");
  PrunedGraph p = apply_pruning(t, {pendant(t, "1"), PruneEnd::AtTail});
  p = apply_pruning(p, {p.graph().in_edges(p.graph().find_label(2))[0], PruneEnd::AtTail});
  auto e = find_agreement_embedding(p, t);
  REQUIRE(e.has_value());
  auto s = p.sprouts();
  REQUIRE(s.size() == 2);
  // Neither sprout sits on the other's edge.
  if (attached_edge(*e, s[0]) != p.sprout_edge(s[1])) CHECK_THROWS_AS(embedding_change(*e, s[0], s[1]), PreconditionError);
  CHECK_THROWS_AS(embedding_change(*e, s[0], s[0]), PreconditionError);
}

TEST_CASE("is_agreement_graph examples") {
  PhyloNetwork g = parse_enewick("((1,(2)#H1),(#H1,3));");
  AgreementGraph self = make_agreement_graph(PrunedGraph(g), {});
  CHECK(is_agreement_graph(self, g, g).ok);

  // Missing label: drop leaf 3 and its edge.
  PhyloNetwork t = parse_enewick("((1,2),3);");
  PrunedGraph p = apply_pruning(t, {pendant(t, "3"), PruneEnd::AtTail});
  Multigraph m;
  int leaf3 = p.graph().find_label(2);
  std::vector<int> id(p.vertex_count(), -1);
  for (int v = 0; v < p.vertex_count(); ++v)
    if (v != leaf3 && !(p.is_sprout(v) && p.graph().edge(p.sprout_edge(v)).head == leaf3)) id[v] = m.add_vertex(p.graph().label(v));
  for (const Edge& e : p.graph().edges())
    if (id[e.tail] >= 0 && id[e.head] >= 0) m.add_edge(id[e.tail], id[e.head]);
  AgreementGraph missing = make_agreement_graph(PrunedGraph(p.taxa_ptr(), m), {});
  CHECK_FALSE(is_agreement_graph(missing, t, t).ok);

  PhyloNetwork other = parse_enewick("((1,2),(3,4));");
  CHECK_THROWS_AS(is_agreement_graph(self, g, other), TaxaMismatchError);
}

TEST_CASE("agreement distance examples") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  CHECK(agreement_distance(a, a).d == 0);
  AgreementResult r = agreement_distance(a, b);
  CHECK(r.d == 1);
  CHECK(r.s == 1);
  CHECK(r.l == 0);

  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    PhyloNetwork t = random_network(taxa(3 + rng.index(2)), 0, rng);
    auto ops = enumerate_ops(t, OpSet::PR);
    std::vector<RearrangementOp> plus;
    for (const auto& op : ops)
      if (op.kind == OpKind::PRPlus) plus.push_back(op);
    PhyloNetwork n = apply_op(t, plus[rng.index(plus.size())]);
    AgreementResult rr = agreement_distance(t, n);
    CHECK(rr.d == 1);
    CHECK(rr.l == 1);
    CHECK(rr.n_is_richer == false);
  }
  CHECK_THROWS_AS(agreement_distance(a, parse_enewick("((1,2),(3,4));")), TaxaMismatchError);
}

TEST_CASE("agreement witness is certified") {
  Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    PhyloNetwork n = random_small(rng, 4, 2);
    PhyloNetwork m = random_network(n.taxa_ptr(), rng.index(3), rng);
    AgreementResult r = agreement_distance(n, m);
    CHECK(r.d == r.s + r.l);
    CHECK(r.l == std::abs(reticulation_count(n) - reticulation_count(m)));
    CHECK(is_agreement_graph(r.mag, n, m).ok);
    CHECK(verify_agreement_embedding(r.embedding_n).ok);
    CHECK(verify_agreement_embedding(r.embedding_nprime).ok);
    const AgreementEmbedding& rich = r.n_is_richer ? r.embedding_n : r.embedding_nprime;
    CHECK(is_normalized(r.mag, rich));
    auto js = witness_json(r);
    CHECK(js.find("\"embedding_Nprime\"") != std::string::npos);
  }
}

TEST_CASE("agreement distance matches the level method") {
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    PhyloNetwork n = random_small(rng, 3, 1);
    PhyloNetwork m = random_network(n.taxa_ptr(), rng.index(2), rng);
    CHECK(agreement_distance(n, m).d == testutil::ad_by_levels(n, m));
  }
  for (int i = 0; i < 15; ++i) {
    PhyloNetwork n = random_network(taxa(4), rng.index(3), rng);
    PhyloNetwork m = random_network(n.taxa_ptr(), rng.index(3), rng);
    CHECK(agreement_distance(n, m).d == testutil::ad_by_levels(n, m));
  }
}

TEST_CASE("agreement distance is symmetric and zero only on equal keys") {
  auto nets = small_networks(3, 1);
  std::vector<PhyloNetwork> three;
  for (const auto& g : nets)
    if (g.taxa().size() == 3) three.push_back(g);
  for (std::size_t i = 0; i < three.size(); ++i)
    for (std::size_t j = i; j < three.size(); ++j) {
      int d = agreement_distance(three[i], three[j]).d;
      CHECK(d == agreement_distance(three[j], three[i]).d);
      CHECK((d == 0) == (canonical_key(three[i]) == canonical_key(three[j])));
    }
}

TEST_CASE("agreement distance equals rSPR on 4-leaf trees") {
  auto trees = enumerate_trees(taxa(4));
  REQUIRE(trees.size() == 15);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = i; j < trees.size(); ++j)
      CHECK(agreement_distance(trees[i], trees[j]).d == oracle::rspr_distance(trees[i], trees[j]));
}

TEST_CASE("triangle inequality on 3-leaf trees") {
  auto trees = enumerate_trees(taxa(3));
  for (const auto& a : trees)
    for (const auto& b : trees)
      for (const auto& c : trees)
        CHECK(agreement_distance(a, c).d <= agreement_distance(a, b).d + agreement_distance(b, c).d);
}

TEST_CASE("agreement search respects its budget") {
  PhyloNetwork a = parse_enewick("(((1,2),3),(4,5));");
  PhyloNetwork b = parse_enewick("(((5,3),1),(4,2));", a.taxa_ptr());
  SearchOptions opt;
  opt.budget_states = 5;
  CHECK_THROWS_AS(agreement_distance(a, b, opt), BudgetExceededError);
}

TEST_CASE("pruned graph DOT marks sprouts") {
  PhyloNetwork t = parse_enewick("((1,2),3);");
  std::string dot = export_dot(apply_pruning(t, {pendant(t, "1"), PruneEnd::AtTail}));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("shape=circle") != std::string::npos);
}
