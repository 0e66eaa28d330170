#pragma once

#include <vector>

#include "netdist/multigraph.hpp"
#include "netdist/network.hpp"
#include "netdist/taxa.hpp"

namespace netdist {

// Directed graph reachable from a network by prunings: labelled root and
// leaves, sprouts, degree-two remnants and degree-three vertices.
class PrunedGraph {
 public:
  PrunedGraph() = default;
  PrunedGraph(TaxaPtr taxa, Multigraph graph)
      : taxa_(std::move(taxa)), graph_(std::move(graph)) {}
  explicit PrunedGraph(const PhyloNetwork& n) : taxa_(n.taxa_ptr()), graph_(n.graph()) {}

  const TaxaPtr& taxa_ptr() const { return taxa_; }
  const TaxaSet& taxa() const { return *taxa_; }
  const Multigraph& graph() const { return graph_; }
  int vertex_count() const { return graph_.vertex_count(); }
  int edge_count() const { return graph_.edge_count(); }

  // Unlabelled degree-one vertex.
  bool is_sprout(int v) const;
  bool is_t_sprout(int v) const { return is_sprout(v) && graph_.out_degree(v) == 1; }
  bool is_h_sprout(int v) const { return is_sprout(v) && graph_.in_degree(v) == 1; }
  int sprout_count() const;
  std::vector<int> sprouts() const;
  // The single edge incident to a sprout.
  int sprout_edge(int v) const;

  std::vector<std::vector<int>> components() const { return graph_.weak_components(); }
  // True for a component that is one edge between two sprouts.
  bool is_bare_edge_component(const std::vector<int>& component) const;

 private:
  TaxaPtr taxa_;
  Multigraph graph_;
};

ValidationReport validate(const PrunedGraph& g);

// Subgraph without the listed edges' components. Every listed edge must be a
// bare edge component. `vertex_map` receives old-id -> new-id (-1 removed).
struct Restriction {
  PrunedGraph graph;
  std::vector<int> vertex_map;
  std::vector<int> edge_map;
};
Restriction remove_bare_edges(const PrunedGraph& g, const std::vector<int>& edges);

}  // namespace netdist
