#pragma once

#include <span>
#include <vector>

namespace netdist {

// Vertex label values. Non-negative labels are taxon indices.
inline constexpr int kUnlabeled = -2;
inline constexpr int kRootLabel = -1;

struct Edge {
  int tail;
  int head;
  bool operator==(const Edge&) const = default;
};

// Directed multigraph with dense vertex and edge ids. Parallel edges are
// distinct ids over the same endpoint pair.
class Multigraph {
 public:
  int add_vertex(int label = kUnlabeled);
  int add_edge(int tail, int head);

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int label(int v) const { return labels_[v]; }
  bool is_labeled(int v) const { return labels_[v] != kUnlabeled; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& labels() const { return labels_; }

  std::span<const int> out_edges(int v) const { return out_[v]; }
  std::span<const int> in_edges(int v) const { return in_[v]; }
  int out_degree(int v) const { return static_cast<int>(out_[v].size()); }
  int in_degree(int v) const { return static_cast<int>(in_[v].size()); }
  int degree(int v) const { return in_degree(v) + out_degree(v); }

  // First vertex carrying `label`, or -1.
  int find_label(int label) const;

  // Reflexive reachability: result[x] is true iff x == v or x is reachable
  // from v (descendants), resp. v is reachable from x (ancestors).
  std::vector<char> descendants_of(int v) const;
  std::vector<char> ancestors_of(int v) const;

  bool is_acyclic() const;
  // Vertices in a topological order; empty if the graph has a cycle and
  // vertex_count() > 0.
  std::vector<int> topological_order() const;

  // Weakly connected components, each a sorted vertex list, ordered by
  // smallest vertex id.
  std::vector<std::vector<int>> weak_components() const;

 private:
  std::vector<int> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

}  // namespace netdist
