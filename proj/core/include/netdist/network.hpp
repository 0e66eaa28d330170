#pragma once

#include <string>
#include <vector>

#include "netdist/multigraph.hpp"
#include "netdist/taxa.hpp"

namespace netdist {

enum class VertexKind { Root, Leaf, InnerTree, Reticulation, Other };

const char* to_string(VertexKind kind);

struct Violation {
  std::string invariant;  // short name, e.g. "degree profile", "acyclic"
  std::string detail;
  std::vector<int> vertices;
  std::vector<int> edges;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(Violation v) {
    ok = false;
    violations.push_back(std::move(v));
  }
  bool has(const std::string& invariant) const;
  std::string summary() const;
};

// Rooted binary phylogenetic network. The root carries kRootLabel, leaves
// carry taxon indices, every other vertex is unlabeled. Instances built by
// the library are valid; hand-built ones can be checked with validate().
class PhyloNetwork {
 public:
  PhyloNetwork() = default;
  PhyloNetwork(TaxaPtr taxa, Multigraph graph)
      : taxa_(std::move(taxa)), graph_(std::move(graph)) {}

  const TaxaPtr& taxa_ptr() const { return taxa_; }
  const TaxaSet& taxa() const { return *taxa_; }
  const Multigraph& graph() const { return graph_; }

  int vertex_count() const { return graph_.vertex_count(); }
  int edge_count() const { return graph_.edge_count(); }
  VertexKind kind(int v) const;
  int root() const { return graph_.find_label(kRootLabel); }
  int leaf(int taxon) const { return graph_.find_label(taxon); }
  bool is_tree() const;

 private:
  TaxaPtr taxa_;
  Multigraph graph_;
};

ValidationReport validate(const PhyloNetwork& g);
int reticulation_count(const PhyloNetwork& g);

// The network rho -> leaf on a single taxon.
PhyloNetwork single_leaf_network(TaxaPtr taxa);

}  // namespace netdist
