#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "netdist/network.hpp"
#include "netdist/pruned_graph.hpp"

namespace netdist {

// Parses one extended Newick line such as "((1,(2)#H1),(#H1,3));". The root
// vertex rho is added above the top node. Reticulations are written
// "(child)#H<k>" once and "#H<k>" at their other parent. Internal names and
// branch lengths are rejected. With `taxa` given, every leaf name must belong
// to it and every taxon must occur; otherwise the taxa are the leaf names.
// Throws ParseError.
PhyloNetwork parse_enewick(std::string_view line, TaxaPtr taxa = nullptr);

struct ParsedLine {
  int line_number;  // 1-based
  PhyloNetwork network;
};

// One network per line. Blank lines and lines starting with '#' are skipped.
// ParseError messages are prefixed with the line number.
std::vector<ParsedLine> parse_enewick_document(std::string_view text);

// Deterministic: isomorphic networks produce identical text.
std::string write_enewick(const PhyloNetwork& g);

std::string export_dot(const PhyloNetwork& g);
std::string export_dot(const PrunedGraph& g);

}  // namespace netdist
