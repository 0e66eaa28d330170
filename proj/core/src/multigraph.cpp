#include "netdist/multigraph.hpp"

#include <algorithm>
#include <numeric>

namespace netdist {

int Multigraph::add_vertex(int label) {
  labels_.push_back(label);
  out_.emplace_back();
  in_.emplace_back();
  return vertex_count() - 1;
}

int Multigraph::add_edge(int tail, int head) {
  int id = edge_count();
  edges_.push_back({tail, head});
  out_[tail].push_back(id);
  in_[head].push_back(id);
  return id;
}

int Multigraph::find_label(int label) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (labels_[v] == label) return v;
  return -1;
}

std::vector<char> Multigraph::descendants_of(int v) const {
  std::vector<char> seen(vertex_count(), 0);
  std::vector<int> stack{v};
  seen[v] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int e : out_[x]) {
      int y = edges_[e].head;
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return seen;
}

std::vector<char> Multigraph::ancestors_of(int v) const {
  std::vector<char> seen(vertex_count(), 0);
  std::vector<int> stack{v};
  seen[v] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int e : in_[x]) {
      int y = edges_[e].tail;
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return seen;
}

std::vector<int> Multigraph::topological_order() const {
  std::vector<int> indeg(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) indeg[v] = in_degree(v);
  std::vector<int> order;
  order.reserve(vertex_count());
  for (int v = 0; v < vertex_count(); ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int e : out_[order[i]]) {
      int h = edges_[e].head;
      if (--indeg[h] == 0) order.push_back(h);
    }
  }
  if (static_cast<int>(order.size()) != vertex_count()) order.clear();
  return order;
}

bool Multigraph::is_acyclic() const {
  return vertex_count() == 0 || !topological_order().empty();
}

std::vector<std::vector<int>> Multigraph::weak_components() const {
  std::vector<int> parent(vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges_) {
    int a = find(e.tail), b = find(e.head);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> index(vertex_count(), -1);
  for (int v = 0; v < vertex_count(); ++v) {
    int r = find(v);
    if (index[r] < 0) {
      index[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[index[r]].push_back(v);
  }
  return comps;
}

}  // namespace netdist
