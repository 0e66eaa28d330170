#include "netdist/rearrangement.hpp"

#include <algorithm>
#include <map>

#include "graph_edit.hpp"
#include "netdist/errors.hpp"

namespace netdist {

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::PR0Tail: return "PR0-tail";
    case OpKind::PR0Head: return "PR0-head";
    case OpKind::PRPlus: return "PR+";
    case OpKind::PRMinus: return "PR-";
  }
  return "?";
}

const char* to_string(OpSet set) {
  switch (set) {
    case OpSet::PR: return "pr";
    case OpSet::SNPR: return "snpr";
    case OpSet::RSPR: return "rspr";
  }
  return "?";
}

OpSet parse_opset(const std::string& name) {
  if (name == "pr") return OpSet::PR;
  if (name == "snpr") return OpSet::SNPR;
  if (name == "rspr") return OpSet::RSPR;
  throw PreconditionError("unknown op set '" + name + "'");
}

std::string to_string(const RearrangementOp& op) {
  std::string s = to_string(op.kind);
  s += "(e" + std::to_string(op.edge);
  if (op.kind != OpKind::PRMinus) s += ", e" + std::to_string(op.target);
  return s + ")";
}

bool op_in_set(const RearrangementOp& op, OpSet set) {
  switch (set) {
    case OpSet::PR: return true;
    case OpSet::SNPR: return op.kind != OpKind::PR0Head;
    case OpSet::RSPR: return op.kind == OpKind::PR0Tail;
  }
  return false;
}

std::string op_violation(const PhyloNetwork& g, const RearrangementOp& op) {
  const Multigraph& m = g.graph();
  int E = m.edge_count();
  if (op.edge < 0 || op.edge >= E) return "edge id out of range";
  if (op.kind != OpKind::PRMinus && (op.target < 0 || op.target >= E)) return "target edge id out of range";
  const Edge& e = m.edge(op.edge);
  switch (op.kind) {
    case OpKind::PR0Tail: {
      if (g.kind(e.tail) != VertexKind::InnerTree) return "tail of the moved edge is not an inner tree vertex";
      if (op.target == op.edge) return "target equals the moved edge";
      for (int x : m.in_edges(e.tail))
        if (x == op.target) return "target is incident to the pruned vertex";
      for (int x : m.out_edges(e.tail))
        if (x == op.target) return "target is incident to the pruned vertex";
      if (m.descendants_of(e.head)[m.edge(op.target).tail]) return "target is a descendant of the moved edge's head";
      return {};
    }
    case OpKind::PR0Head: {
      if (g.kind(e.head) != VertexKind::Reticulation) return "head of the moved edge is not a reticulation";
      if (op.target == op.edge) return "target equals the moved edge";
      for (int x : m.in_edges(e.head))
        if (x == op.target) return "target is incident to the pruned vertex";
      for (int x : m.out_edges(e.head))
        if (x == op.target) return "target is incident to the pruned vertex";
      if (m.ancestors_of(e.tail)[m.edge(op.target).head]) return "target is an ancestor of the moved edge's tail";
      return {};
    }
    case OpKind::PRPlus: {
      if (op.target != op.edge && m.descendants_of(e.head)[m.edge(op.target).tail])
        return "target is a descendant of the new reticulation";
      return {};
    }
    case OpKind::PRMinus: {
      if (g.kind(e.tail) != VertexKind::InnerTree) return "tail is not an inner tree vertex";
      if (g.kind(e.head) != VertexKind::Reticulation) return "head is not a reticulation";
      return {};
    }
  }
  return "unknown op kind";
}

bool is_valid_op(const PhyloNetwork& g, const RearrangementOp& op) { return op_violation(g, op).empty(); }

namespace {

PhyloNetwork apply_unchecked(const PhyloNetwork& g, const RearrangementOp& op) {
  detail::GraphEdit ed(g.graph());
  Edge e = g.graph().edge(op.edge);
  switch (op.kind) {
    case OpKind::PR0Tail: {
      int x = ed.subdivide(op.target);
      ed.edge(op.edge).tail = x;
      ed.suppress(e.tail);
      break;
    }
    case OpKind::PR0Head: {
      int x = ed.subdivide(op.target);
      ed.edge(op.edge).head = x;
      ed.suppress(e.head);
      break;
    }
    case OpKind::PRPlus: {
      int head = ed.subdivide(op.edge);
      int tail = ed.subdivide(op.target);
      ed.add_edge(tail, head);
      break;
    }
    case OpKind::PRMinus: {
      ed.remove_edge(op.edge);
      ed.suppress(e.tail);
      ed.suppress(e.head);
      break;
    }
  }
  return PhyloNetwork(g.taxa_ptr(), ed.compact());
}

}  // namespace

PhyloNetwork apply_op(const PhyloNetwork& g, const RearrangementOp& op) {
  std::string why = op_violation(g, op);
  if (!why.empty()) throw InvalidOpError(to_string(op) + ": " + why);
  return apply_unchecked(g, op);
}

std::vector<RearrangementOp> enumerate_ops(const PhyloNetwork& g, OpSet set) {
  const Multigraph& m = g.graph();
  int V = m.vertex_count(), E = m.edge_count();
  std::vector<std::vector<char>> desc(V), anc(V);
  auto descendants = [&](int v) -> const std::vector<char>& {
    if (desc[v].empty()) desc[v] = m.descendants_of(v);
    return desc[v];
  };
  auto ancestors = [&](int v) -> const std::vector<char>& {
    if (anc[v].empty()) anc[v] = m.ancestors_of(v);
    return anc[v];
  };
  auto incident = [&](int v, int f) {
    const Edge& ef = m.edge(f);
    return ef.tail == v || ef.head == v;
  };

  std::vector<RearrangementOp> ops;
  for (int e = 0; e < E; ++e) {
    const Edge& ed = m.edge(e);
    if (g.kind(ed.tail) == VertexKind::InnerTree) {
      const auto& d = descendants(ed.head);
      for (int f = 0; f < E; ++f)
        if (f != e && !incident(ed.tail, f) && !d[m.edge(f).tail]) ops.push_back({OpKind::PR0Tail, e, f});
    }
    if (set == OpSet::PR && g.kind(ed.head) == VertexKind::Reticulation) {
      const auto& a = ancestors(ed.tail);
      for (int f = 0; f < E; ++f)
        if (f != e && !incident(ed.head, f) && !a[m.edge(f).head]) ops.push_back({OpKind::PR0Head, e, f});
    }
  }
  if (set == OpSet::RSPR) return ops;
  for (int e = 0; e < E; ++e) {
    const auto& d = descendants(m.edge(e).head);
    for (int f = 0; f < E; ++f)
      if (f == e || !d[m.edge(f).tail]) ops.push_back({OpKind::PRPlus, e, f});
  }
  for (int e = 0; e < E; ++e)
    if (g.kind(m.edge(e).tail) == VertexKind::InnerTree && g.kind(m.edge(e).head) == VertexKind::Reticulation)
      ops.push_back({OpKind::PRMinus, e, -1});
  return ops;
}

std::vector<Neighbor> enumerate_neighbors(const PhyloNetwork& g, OpSet set) {
  if (set == OpSet::RSPR && !g.is_tree()) throw PreconditionError("rSPR neighbourhood requires a tree");
  CanonicalKey self = canonical_key(g);
  std::map<CanonicalKey, Neighbor> found;
  for (const auto& op : enumerate_ops(g, set)) {
    PhyloNetwork h = apply_unchecked(g, op);
    CanonicalKey key = canonical_key(h);
    if (key == self || found.count(key)) continue;
    found.emplace(key, Neighbor{op, key, std::move(h)});
  }
  std::vector<Neighbor> out;
  out.reserve(found.size());
  for (auto& [k, n] : found) out.push_back(std::move(n));
  return out;
}

std::vector<CanonicalKey> neighbor_keys(const PhyloNetwork& g, OpSet set, int max_reticulations, bool* capped) {
  if (set == OpSet::RSPR && !g.is_tree()) throw PreconditionError("rSPR neighbourhood requires a tree");
  bool plus_allowed = max_reticulations < 0 || reticulation_count(g) + 1 <= max_reticulations;
  CanonicalKey self = canonical_key(g);
  std::vector<CanonicalKey> keys;
  for (const auto& op : enumerate_ops(g, set)) {
    if (op.kind == OpKind::PRPlus && !plus_allowed) {
      if (capped) *capped = true;
      continue;
    }
    CanonicalKey key = canonical_key(apply_unchecked(g, op));
    if (key != self) keys.push_back(std::move(key));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

}  // namespace netdist
