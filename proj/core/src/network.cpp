#include "netdist/network.hpp"

#include <sstream>

namespace netdist {

const char* to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::Root: return "root";
    case VertexKind::Leaf: return "leaf";
    case VertexKind::InnerTree: return "inner-tree";
    case VertexKind::Reticulation: return "reticulation";
    case VertexKind::Other: return "other";
  }
  return "other";
}

bool ValidationReport::has(const std::string& invariant) const {
  for (const auto& v : violations)
    if (v.invariant == invariant) return true;
  return false;
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].invariant << ": " << violations[i].detail;
  }
  return out.str();
}

VertexKind PhyloNetwork::kind(int v) const {
  int label = graph_.label(v);
  if (label == kRootLabel) return VertexKind::Root;
  if (label >= 0) return VertexKind::Leaf;
  int in = graph_.in_degree(v), out = graph_.out_degree(v);
  if (in == 1 && out == 2) return VertexKind::InnerTree;
  if (in == 2 && out == 1) return VertexKind::Reticulation;
  return VertexKind::Other;
}

bool PhyloNetwork::is_tree() const { return reticulation_count(*this) == 0; }

ValidationReport validate(const PhyloNetwork& g) {
  ValidationReport report;
  const Multigraph& m = g.graph();
  if (!g.taxa_ptr()) {
    report.add({"taxa", "network has no taxa set", {}, {}});
    return report;
  }
  for (int e = 0; e < m.edge_count(); ++e) {
    const Edge& ed = m.edge(e);
    if (ed.tail == ed.head) report.add({"acyclic", "self loop", {ed.tail}, {e}});
  }

  int roots = 0;
  std::vector<int> leaf_of(g.taxa().size(), -1);
  for (int v = 0; v < m.vertex_count(); ++v) {
    int label = m.label(v);
    int in = m.in_degree(v), out = m.out_degree(v);
    if (label == kRootLabel) {
      ++roots;
      if (in != 0 || out != 1)
        report.add({"degree profile", "root must have in-degree 0 and out-degree 1", {v}, {}});
    } else if (label >= 0) {
      if (label >= g.taxa().size()) {
        report.add({"leaf labels", "leaf label outside the taxa set", {v}, {}});
        continue;
      }
      if (leaf_of[label] >= 0)
        report.add({"leaf labels", "taxon '" + g.taxa().name(label) + "' labels two vertices", {leaf_of[label], v}, {}});
      leaf_of[label] = v;
      if (in != 1 || out != 0)
        report.add({"degree profile", "leaf must have in-degree 1 and out-degree 0", {v}, {}});
    } else if (!((in == 1 && out == 2) || (in == 2 && out == 1))) {
      std::ostringstream d;
      d << "unlabelled vertex has in-degree " << in << " and out-degree " << out;
      report.add({"degree profile", d.str(), {v}, {}});
    }
  }
  if (roots != 1) report.add({"root", "expected exactly one root, found " + std::to_string(roots), {}, {}});
  for (int t = 0; t < g.taxa().size(); ++t)
    if (leaf_of[t] < 0) report.add({"leaf labels", "taxon '" + g.taxa().name(t) + "' has no leaf", {}, {}});

  if (!m.is_acyclic()) report.add({"acyclic", "directed cycle present", {}, {}});

  int root = g.root();
  if (roots == 1 && root >= 0) {
    auto reach = m.descendants_of(root);
    std::vector<int> missing;
    for (int v = 0; v < m.vertex_count(); ++v)
      if (!reach[v]) missing.push_back(v);
    if (!missing.empty()) report.add({"reachable", "vertices not reachable from the root", missing, {}});
  }
  return report;
}

int reticulation_count(const PhyloNetwork& g) {
  int r = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.kind(v) == VertexKind::Reticulation) ++r;
  return r;
}

PhyloNetwork single_leaf_network(TaxaPtr taxa) {
  Multigraph m;
  int root = m.add_vertex(kRootLabel);
  int leaf = m.add_vertex(0);
  m.add_edge(root, leaf);
  return PhyloNetwork(std::move(taxa), std::move(m));
}

}  // namespace netdist
