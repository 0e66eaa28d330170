#pragma once

#include <vector>

#include "netdist/errors.hpp"
#include "netdist/multigraph.hpp"

namespace netdist::detail {

// Editable copy of a multigraph. Deleted vertices and edges keep their slot
// until compact() renumbers the survivors in id order.
class GraphEdit {
 public:
  explicit GraphEdit(const Multigraph& g) {
    for (int v = 0; v < g.vertex_count(); ++v) labels_.push_back(g.label(v));
    vertex_alive_.assign(labels_.size(), 1);
    edges_ = g.edges();
    edge_alive_.assign(edges_.size(), 1);
  }

  int add_vertex(int label = kUnlabeled) {
    labels_.push_back(label);
    vertex_alive_.push_back(1);
    return static_cast<int>(labels_.size()) - 1;
  }
  int add_edge(int tail, int head) {
    edges_.push_back({tail, head});
    edge_alive_.push_back(1);
    return static_cast<int>(edges_.size()) - 1;
  }
  void remove_edge(int e) { edge_alive_[e] = 0; }
  void remove_vertex(int v) { vertex_alive_[v] = 0; }

  Edge& edge(int e) { return edges_[e]; }
  int label(int v) const { return labels_[v]; }

  int in_degree(int v) const {
    int d = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) d += edge_alive_[e] && edges_[e].head == v;
    return d;
  }
  int out_degree(int v) const {
    int d = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) d += edge_alive_[e] && edges_[e].tail == v;
    return d;
  }
  int first_in(int v) const {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edge_alive_[e] && edges_[e].head == v) return static_cast<int>(e);
    return -1;
  }
  int first_out(int v) const {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edge_alive_[e] && edges_[e].tail == v) return static_cast<int>(e);
    return -1;
  }

  // Split e = (t, h) into (t, x) keeping e's id and (x, h) as a new edge.
  int subdivide(int e, int* lower = nullptr) {
    int x = add_vertex();
    int h = edges_[e].head;
    edges_[e].head = x;
    int f = add_edge(x, h);
    if (lower) *lower = f;
    return x;
  }

  // Replace an unlabeled in1/out1 vertex by a single edge keeping the in-edge id.
  void suppress(int v) {
    int a = first_in(v), b = first_out(v);
    if (labels_[v] != kUnlabeled || a < 0 || b < 0 || in_degree(v) != 1 || out_degree(v) != 1)
      throw InternalInvariantError("suppress on a vertex that is not unlabeled in1/out1");
    edges_[a].head = edges_[b].head;
    edge_alive_[b] = 0;
    vertex_alive_[v] = 0;
  }

  void suppress_if_needed(int v) {
    if (vertex_alive_[v] && labels_[v] == kUnlabeled && in_degree(v) == 1 && out_degree(v) == 1) suppress(v);
  }

  Multigraph compact(std::vector<int>* vertex_map = nullptr, std::vector<int>* edge_map = nullptr) const {
    std::vector<int> vmap(labels_.size(), -1);
    Multigraph g;
    for (std::size_t v = 0; v < labels_.size(); ++v)
      if (vertex_alive_[v]) vmap[v] = g.add_vertex(labels_[v]);
    std::vector<int> emap(edges_.size(), -1);
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edge_alive_[e]) emap[e] = g.add_edge(vmap[edges_[e].tail], vmap[edges_[e].head]);
    if (vertex_map) *vertex_map = std::move(vmap);
    if (edge_map) *edge_map = std::move(emap);
    return g;
  }

 private:
  std::vector<int> labels_;
  std::vector<char> vertex_alive_;
  std::vector<Edge> edges_;
  std::vector<char> edge_alive_;
};

}  // namespace netdist::detail
