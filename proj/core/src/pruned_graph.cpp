#include "netdist/pruned_graph.hpp"

#include <sstream>

#include "netdist/errors.hpp"

namespace netdist {

bool PrunedGraph::is_sprout(int v) const {
  return !graph_.is_labeled(v) && graph_.degree(v) == 1;
}

int PrunedGraph::sprout_count() const {
  int c = 0;
  for (int v = 0; v < vertex_count(); ++v) c += is_sprout(v) ? 1 : 0;
  return c;
}

std::vector<int> PrunedGraph::sprouts() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (is_sprout(v)) out.push_back(v);
  return out;
}

int PrunedGraph::sprout_edge(int v) const {
  if (graph_.out_degree(v) == 1) return graph_.out_edges(v)[0];
  return graph_.in_edges(v)[0];
}

bool PrunedGraph::is_bare_edge_component(const std::vector<int>& component) const {
  return component.size() == 2 && is_sprout(component[0]) && is_sprout(component[1]) &&
         graph_.degree(component[0]) == 1;
}

ValidationReport validate(const PrunedGraph& g) {
  ValidationReport report;
  const Multigraph& m = g.graph();
  int n = g.taxa().size();
  int roots = 0;
  std::vector<int> seen(n, 0);
  for (int v = 0; v < m.vertex_count(); ++v) {
    int label = m.label(v);
    int in = m.in_degree(v), out = m.out_degree(v);
    if (label == kRootLabel) {
      ++roots;
      if (in != 0 || out > 1)
        report.add({"degree profile", "root-labelled vertex must have in-degree 0 and out-degree <= 1", {v}, {}});
    } else if (label >= 0) {
      if (label >= n) {
        report.add({"labels", "label outside the taxa set", {v}, {}});
        continue;
      }
      ++seen[label];
      if (in > 1 || out != 0)
        report.add({"degree profile", "leaf-labelled vertex must have in-degree <= 1 and out-degree 0", {v}, {}});
    } else {
      bool allowed = (in == 1 && out == 0) || (in == 0 && out == 1) || (in == 0 && out == 2) ||
                     (in == 2 && out == 0) || (in == 1 && out == 2) || (in == 2 && out == 1);
      if (!allowed) {
        std::ostringstream d;
        d << "unlabelled vertex has in-degree " << in << " and out-degree " << out;
        report.add({"degree profile", d.str(), {v}, {}});
      }
    }
  }
  if (roots != 1) report.add({"labels", "expected one root-labelled vertex, found " + std::to_string(roots), {}, {}});
  for (int t = 0; t < n; ++t)
    if (seen[t] != 1)
      report.add({"labels", "taxon '" + g.taxa().name(t) + "' labels " + std::to_string(seen[t]) + " vertices", {}, {}});
  if (!m.is_acyclic()) report.add({"acyclic", "directed cycle present", {}, {}});
  return report;
}

Restriction remove_bare_edges(const PrunedGraph& g, const std::vector<int>& edges) {
  const Multigraph& m = g.graph();
  std::vector<char> drop_v(m.vertex_count(), 0), drop_e(m.edge_count(), 0);
  for (int e : edges) {
    const Edge& ed = m.edge(e);
    if (!g.is_sprout(ed.tail) || !g.is_sprout(ed.head))
      throw PreconditionError("edge " + std::to_string(e) + " is not a bare edge component");
    drop_e[e] = 1;
    drop_v[ed.tail] = drop_v[ed.head] = 1;
  }
  Restriction r;
  r.vertex_map.assign(m.vertex_count(), -1);
  r.edge_map.assign(m.edge_count(), -1);
  Multigraph out;
  for (int v = 0; v < m.vertex_count(); ++v)
    if (!drop_v[v]) r.vertex_map[v] = out.add_vertex(m.label(v));
  for (int e = 0; e < m.edge_count(); ++e)
    if (!drop_e[e]) r.edge_map[e] = out.add_edge(r.vertex_map[m.edge(e).tail], r.vertex_map[m.edge(e).head]);
  r.graph = PrunedGraph(g.taxa_ptr(), std::move(out));
  return r;
}

}  // namespace netdist
