#include <algorithm>

#include "doctest.h"
#include "netdist/distances.hpp"
#include "netdist/errors.hpp"
#include "netdist/newick.hpp"
#include "netdist/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace netdist;
using testutil::taxa;

namespace {

RearrangementSequence random_walk(const PhyloNetwork& start, int steps, int cap, Rng& rng) {
  RearrangementSequence seq;
  seq.start = start;
  PhyloNetwork cur = start;
  for (int i = 0; i < steps; ++i) {
    std::vector<RearrangementOp> ops;
    for (const auto& op : enumerate_ops(cur, OpSet::PR))
      if (op.kind != OpKind::PRPlus || reticulation_count(cur) < cap) ops.push_back(op);
    RearrangementOp op = ops[rng.index(ops.size())];
    cur = apply_op(cur, op);
    seq.steps.push_back({op, canonical_key(cur)});
  }
  seq.end = canonical_key(cur);
  return seq;
}

int head_moves(const RearrangementSequence& seq) {
  return static_cast<int>(std::count_if(seq.steps.begin(), seq.steps.end(),
                                        [](const SequenceStep& s) { return s.op.kind == OpKind::PR0Head; }));
}

}  // namespace

TEST_CASE("pr distance examples") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  CHECK(pr_distance(a, a).value == 0);
  DistanceResult r = pr_distance(a, b);
  CHECK(r.value == 1);
  REQUIRE(r.sequence.has_value());
  CHECK(verify_sequence(*r.sequence).ok);
  CHECK(r.sequence->end == canonical_key(b));

  // A PR+ followed by an independent tail move.
  PhyloNetwork t = parse_enewick("(((1,2),3),4);");
  PhyloNetwork u = parse_enewick("(((1,(2)#H1),(#H1,4)),3);", t.taxa_ptr());
  CHECK(agreement_distance(t, u).d == 2);
  CHECK(pr_distance(t, u).value == 2);

  CHECK_THROWS_AS(pr_distance(a, parse_enewick("((1,2),(3,4));")), TaxaMismatchError);
  BfsOptions low;
  low.cap = 0;
  CHECK_THROWS_AS(pr_distance(a, parse_enewick("((1,(2)#H1),(#H1,3));", a.taxa_ptr()), low), PreconditionError);
}

TEST_CASE("snpr and rspr examples") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  CHECK(snpr_distance(a, a).value == 0);
  CHECK(snpr_distance(a, b).value == 1);
  CHECK(rspr_distance(a, a).value == 0);
  CHECK(rspr_distance(a, b).value == 1);

  PhyloNetwork c = parse_enewick("(((1,2),3),4);");
  PhyloNetwork d = parse_enewick("(((3,4),1),2);", c.taxa_ptr());
  int v = rspr_distance(c, d).value;
  CHECK(v == oracle::rspr_distance(c, d));
  CHECK(v == agreement_distance(c, d).d);

  CHECK_THROWS_AS(rspr_distance(a, parse_enewick("((1,(2)#H1),(#H1,3));", a.taxa_ptr())), PreconditionError);
}

TEST_CASE("rspr matches the oracle on 4-leaf trees") {
  auto trees = enumerate_trees(taxa(4));
  auto table = oracle::rspr_table(4);
  auto all = oracle::all_trees(4);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      int d = rspr_distance(trees[i], trees[j]).value;
      CHECK(d == oracle::rspr_distance(trees[i], trees[j]));
      CHECK(d == pr_distance(trees[i], trees[j]).value);
      CHECK(d == snpr_distance(trees[i], trees[j]).value);
    }
  CHECK(all.size() == table.size());
}

TEST_CASE("verify_sequence violations") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  RearrangementSequence seq = *pr_distance(a, b).sequence;
  REQUIRE(verify_sequence(seq).ok);

  RearrangementSequence bad = seq;
  bad.steps[0].op.target = 99;
  ValidationReport rep = verify_sequence(bad);
  CHECK(rep.has("step"));
  CHECK(rep.violations[0].detail.rfind("step 0", 0) == 0);

  RearrangementSequence empty;
  empty.start = a;
  empty.end = canonical_key(b);
  CHECK(verify_sequence(empty).has("endpoint"));
}

TEST_CASE("budget and cap reporting") {
  PhyloNetwork a = parse_enewick("(((1,2),3),(4,5));");
  PhyloNetwork b = parse_enewick("(((5,3),1),(4,2));", a.taxa_ptr());
  BfsOptions opt;
  opt.budget_states = 20;
  try {
    pr_distance(a, b, opt);
    FAIL("expected a budget error");
  } catch (const BudgetExceededError& e) {
    CHECK(e.lower_bound() >= 1);
  }
  DistanceResult t = rspr_distance(a, b);
  CHECK(t.exhausted);
  CHECK(pr_distance(a, b).value == t.value);

  // Expanding a network at the cap skips its PR+ moves.
  PhyloNetwork c = parse_enewick("(((1,2),3),4);");
  PhyloNetwork d = parse_enewick("(((1,(2)#H1),(#H1,4)),3);", c.taxa_ptr());
  BfsOptions tight;
  tight.cap = 1;
  DistanceResult capped = pr_distance(c, d, tight);
  CHECK(capped.value == 2);
  CHECK_FALSE(capped.exhausted);
}

TEST_CASE("distance table") {
  auto trees = enumerate_trees(taxa(4));
  auto table = distance_table(trees, OpSet::RSPR, 0);
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j) CHECK(table[i][j] == oracle::rspr_distance(trees[i], trees[j]));
}

TEST_CASE("mag sequence examples") {
  PhyloNetwork a = parse_enewick("((1,(2)#H1),(#H1,3));");
  RearrangementSequence none = mag_to_pr_sequence(a, a, agreement_distance(a, a));
  CHECK(none.length() == 0);
  CHECK(verify_sequence(none).ok);

  PhyloNetwork t = parse_enewick("((1,2),3);");
  PhyloNetwork u = parse_enewick("((1,3),2);", t.taxa_ptr());
  RearrangementSequence one = mag_to_pr_sequence(t, u, agreement_distance(t, u));
  CHECK(one.length() == 1);
  CHECK(verify_sequence(one).ok);
  CHECK(one.end == canonical_key(u));
}

TEST_CASE("mag sequence on a pair with dAD < dPR") {
  PhyloNetwork a = parse_enewick("((2,(1,(3,((4)#H2)#H1))),(#H2,#H1));");
  PhyloNetwork b = parse_enewick("((((4,(3,((1,2))#H2)))#H1,#H1),#H2);", a.taxa_ptr());
  AgreementResult r = agreement_distance(a, b);
  CHECK(r.d == 2);
  BfsOptions opt;
  opt.cap = 3;
  CHECK(pr_distance(a, b, opt).value == 3);
  for (int dir = 0; dir < 2; ++dir) {
    const PhyloNetwork& x = dir ? b : a;
    const PhyloNetwork& y = dir ? a : b;
    RearrangementSequence seq = mag_to_pr_sequence(x, y, agreement_distance(x, y));
    CHECK(verify_sequence(seq).ok);
    CHECK(seq.end == canonical_key(y));
    CHECK(seq.length() >= 3);
    CHECK(seq.length() <= 6);
  }
}

TEST_CASE("mag sequences stay within three times dAD") {
  Rng rng(41);
  BuilderStats stats;
  for (int i = 0; i < 120; ++i) {
    int n = 2 + rng.index(3);
    PhyloNetwork a = random_network(taxa(n), rng.index(3), rng);
    PhyloNetwork b = random_network(a.taxa_ptr(), rng.index(3), rng);
    AgreementResult r = agreement_distance(a, b);
    RearrangementSequence seq = mag_to_pr_sequence(a, b, r, &stats);
    CHECK(verify_sequence(seq).ok);
    CHECK(seq.start.graph().edge_count() == a.graph().edge_count());
    CHECK(seq.end == canonical_key(b));
    CHECK(seq.length() <= 3 * r.d);
    CHECK(seq.length() >= r.d);
  }
  CHECK(stats.a + stats.b > 0);
}

TEST_CASE("mag sequence rejects foreign witnesses") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  PhyloNetwork c = parse_enewick("((2,3),1);", a.taxa_ptr());
  CHECK_THROWS_AS(mag_to_pr_sequence(a, c, agreement_distance(a, b)), PreconditionError);
}

TEST_CASE("pr to snpr conversion") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  RearrangementSequence tail = *pr_distance(a, b).sequence;
  RearrangementSequence same = pr_to_snpr_sequence(tail);
  CHECK(same.opset == OpSet::SNPR);
  REQUIRE(same.length() == tail.length());
  for (int i = 0; i < same.length(); ++i) CHECK(same.steps[i].op == tail.steps[i].op);

  PhyloNetwork n = parse_enewick("((1,(2)#H1),(#H1,3));");
  RearrangementSequence one;
  one.start = n;
  for (const auto& op : enumerate_ops(n, OpSet::PR))
    if (op.kind == OpKind::PR0Head) {
      PhyloNetwork m = apply_op(n, op);
      if (canonical_key(m) == canonical_key(n)) continue;
      one.steps.push_back({op, canonical_key(m)});
      one.end = canonical_key(m);
      break;
    }
  REQUIRE(one.length() == 1);
  RearrangementSequence two = pr_to_snpr_sequence(one);
  CHECK(two.length() == 2);
  CHECK(two.steps[0].op.kind == OpKind::PRPlus);
  CHECK(two.steps[1].op.kind == OpKind::PRMinus);
  CHECK(verify_sequence(two).ok);

  Rng rng(43);
  for (int i = 0; i < 80; ++i) {
    PhyloNetwork s = random_network(taxa(3 + rng.index(2)), 1 + rng.index(2), rng);
    RearrangementSequence seq = random_walk(s, 1 + rng.index(3), 3, rng);
    RearrangementSequence conv = pr_to_snpr_sequence(seq);
    CHECK(verify_sequence(conv).ok);
    CHECK(conv.end == seq.end);
    CHECK(conv.length() == seq.length() + head_moves(seq));
  }
}

TEST_CASE("bounds sandwich on 3-leaf networks") {
  std::vector<PhyloNetwork> nets;
  for (int r = 0; r <= 1; ++r)
    for (auto& g : enumerate_networks(taxa(3), r)) nets.push_back(std::move(g));
  for (std::size_t i = 0; i < nets.size(); ++i)
    for (std::size_t j = i + 1; j < nets.size(); ++j) {
      int ad = agreement_distance(nets[i], nets[j]).d;
      int pr = pr_distance(nets[i], nets[j]).value;
      int snpr = snpr_distance(nets[i], nets[j]).value;
      CHECK(ad <= pr);
      CHECK(pr <= 3 * ad);
      CHECK(pr <= snpr);
      CHECK(snpr <= 2 * pr);
      CHECK((ad == 1) == (pr == 1));
    }
}

TEST_CASE("distance json") {
  PhyloNetwork a = parse_enewick("((1,2),3);");
  PhyloNetwork b = parse_enewick("((1,3),2);", a.taxa_ptr());
  std::string js = distance_json(distance("pr", a, b), true);
  CHECK(js.find("\"metric\":\"pr\"") != std::string::npos);
  CHECK(js.find("\"value\":1") != std::string::npos);
  CHECK(js.find("\"steps\"") != std::string::npos);
  std::string ad = distance_json(distance("ad", a, b), false);
  CHECK(ad.find("witness") == std::string::npos);
  CHECK_THROWS_AS(distance("xyz", a, b), PreconditionError);
}
