#include <string>

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

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t c = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++c;
  return c;
}

std::size_t error_offset(const std::string& line) {
  try {
    parse_enewick(line);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for " << line);
  return 0;
}

}  // namespace

TEST_CASE("parse examples") {
  PhyloNetwork t = parse_enewick("((1,2),3);");
  CHECK(validate(t).ok);
  CHECK(t.is_tree());
  // Leaves 1 and 2 share a parent.
  int p1 = t.graph().edge(t.graph().in_edges(t.leaf(0))[0]).tail;
  int p2 = t.graph().edge(t.graph().in_edges(t.leaf(1))[0]).tail;
  int p3 = t.graph().edge(t.graph().in_edges(t.leaf(2))[0]).tail;
  CHECK(p1 == p2);
  CHECK(p1 != p3);

  PhyloNetwork n = parse_enewick("((1,(2)#H1),(#H1,3));");
  CHECK(validate(n).ok);
  CHECK(reticulation_count(n) == 1);
  int h = n.graph().edge(n.graph().in_edges(n.leaf(1))[0]).tail;
  CHECK(n.kind(h) == VertexKind::Reticulation);

  CHECK(error_offset("((1,2;") == 5);
  CHECK(canonical_key(parse_enewick("1;")) == canonical_key(single_leaf_network(taxa(1))));
  CHECK(canonical_key(parse_enewick(" ( ( 1 , 2 ) , 3 ) ; ")) == canonical_key(t));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_enewick("((1,2),3)"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,2)x,3);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1:0.5,2),3);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,2),1);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,(2)#H1),3);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,#H1),(#H1,3));"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,2,3),4);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1),2);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,2)#H1,#H1);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((rho,2),3);"), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,2),3);", make_taxa({"1", "2", "4"})), ParseError);
  CHECK_THROWS_AS(parse_enewick("((1,2),3);", make_taxa({"1", "2", "3", "4"})), ParseError);
  // The hybrid subtree contains its own second parent.
  try {
    parse_enewick("((((1,#H1))#H1,2),3);");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("cyclic") != std::string::npos);
  }
}

TEST_CASE("write examples") {
  CHECK(write_enewick(single_leaf_network(taxa(1))) == "1;");
  PhyloNetwork bubble = apply_op(single_leaf_network(taxa(1)), {OpKind::PRPlus, 0, 0});
  std::string s = write_enewick(bubble);
  CHECK(count_of(s, "#H1") == 2);
  CHECK(s == "((1)#H1,#H1);");
  CHECK(canonical_key(parse_enewick(s)) == canonical_key(bubble));

  // Swapping which parent carries the subtree gives the same network.
  PhyloNetwork a = parse_enewick("((1,(2)#H1),(#H1,3));");
  PhyloNetwork b = parse_enewick("((1,#H1),((2)#H1,3));");
  CHECK(oracle::isomorphic(a.graph(), b.graph()));
  CHECK(canonical_key(a) == canonical_key(b));
  CHECK(write_enewick(a) == write_enewick(b));
}

TEST_CASE("roundtrip random networks") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    PhyloNetwork g = random_network(taxa(1 + i % 6), i % 4, rng);
    std::string text = write_enewick(g);
    PhyloNetwork h = parse_enewick(text);
    REQUIRE(canonical_key(g) == canonical_key(h));
    CHECK(write_enewick(h) == text);
  }
}

TEST_CASE("structural deletion fuzz") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    std::string text = write_enewick(random_network(taxa(2 + i % 5), i % 4, rng));
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
      if (std::string("(),;#").find(text[pos]) == std::string::npos) continue;
      std::string bad = text.substr(0, pos) + text.substr(pos + 1);
      try {
        parse_enewick(bad);
        FAIL("accepted " << bad);
      } catch (const ParseError& e) {
        CHECK(e.offset() <= bad.size());
      }
    }
  }
}

TEST_CASE("document parsing") {
  auto doc = parse_enewick_document("# comment\n((1,2),3);\n\n((1,3),2);\r\n");
  REQUIRE(doc.size() == 2);
  CHECK(doc[0].line_number == 2);
  CHECK(doc[1].line_number == 4);
  try {
    parse_enewick_document("((1,2),3);\n((1,2;\n");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
    CHECK(e.offset() == 5);
  }
}

TEST_CASE("dot export") {
  std::string one = export_dot(single_leaf_network(taxa(1)));
  CHECK(count_of(one, " [label=") == 2);
  CHECK(count_of(one, " -> ") == 1);
  std::string three = export_dot(parse_enewick("((1,2),3);"));
  CHECK(count_of(three, " [label=") == 6);
  CHECK(count_of(three, " -> ") == 5);
  CHECK(three.find("label=\"rho\"") != std::string::npos);
  std::string ret = export_dot(parse_enewick("((1,(2)#H1),(#H1,3));"));
  CHECK(count_of(ret, "shape=box") == 1);
}
