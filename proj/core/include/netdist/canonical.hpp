#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netdist/multigraph.hpp"
#include "netdist/network.hpp"
#include "netdist/pruned_graph.hpp"
#include "netdist/taxa.hpp"

namespace netdist {

// Byte string identifying a labelled multigraph up to label-preserving
// isomorphism. Keys also encode the taxon names and can be decoded.
using CanonicalKey = std::string;

struct CanonicalForm {
  CanonicalKey key;
  // order[i] is the vertex placed at canonical position i.
  std::vector<int> order;
};

CanonicalForm canonical_form(const Multigraph& g, const TaxaSet& taxa);
CanonicalKey canonical_key(const Multigraph& g, const TaxaSet& taxa);
CanonicalKey canonical_key(const PhyloNetwork& g);
CanonicalKey canonical_key(const PrunedGraph& g);

// Rebuild a graph from its key. Vertex ids follow canonical positions. If
// `taxa` is given it must hold the names stored in the key.
Multigraph decode_graph(const CanonicalKey& key);
PhyloNetwork decode_network(const CanonicalKey& key, TaxaPtr taxa = nullptr);
PrunedGraph decode_pruned(const CanonicalKey& key, TaxaPtr taxa = nullptr);
std::vector<std::string> decode_taxa(const CanonicalKey& key);

// Label-preserving isomorphism from `a` onto `b`.
struct Isomorphism {
  std::vector<int> vertex_map;
  std::vector<int> edge_map;
};
std::optional<Isomorphism> find_isomorphism(const Multigraph& a, const Multigraph& b,
                                            const TaxaSet& taxa);

// Short printable digest for logs.
std::string key_digest(const CanonicalKey& key);

}  // namespace netdist
