#include "netdist/agreement.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "graph_edit.hpp"
#include "json.hpp"
#include "netdist/errors.hpp"
#include "parallel.hpp"

namespace netdist {
namespace {

int pruned_vertex(const Multigraph& m, const Pruning& p) {
  const Edge& e = m.edge(p.edge);
  return p.end == PruneEnd::AtTail ? e.tail : e.head;
}

bool legal(const Multigraph& m, const Pruning& p) {
  if (p.edge < 0 || p.edge >= m.edge_count()) return false;
  int v = pruned_vertex(m, p);
  return m.is_labeled(v) || m.degree(v) == 3;
}

PrunedGraph prune(const Multigraph& m, const TaxaPtr& taxa, const Pruning& p) {
  if (!legal(m, p))
    throw PreconditionError("pruning of edge " + std::to_string(p.edge) +
                            " must be at a labelled or degree-three vertex");
  detail::GraphEdit ed(m);
  int v = pruned_vertex(m, p);
  int x = ed.add_vertex();
  if (p.end == PruneEnd::AtTail)
    ed.edge(p.edge).tail = x;
  else
    ed.edge(p.edge).head = x;
  ed.suppress_if_needed(v);
  return PrunedGraph(taxa, ed.compact());
}

std::vector<Pruning> prunings_of(const Multigraph& m) {
  std::vector<Pruning> out;
  for (int e = 0; e < m.edge_count(); ++e)
    for (PruneEnd end : {PruneEnd::AtTail, PruneEnd::AtHead})
      if (legal(m, {e, end})) out.push_back({e, end});
  return out;
}

}  // namespace

bool is_legal_pruning(const PrunedGraph& g, const Pruning& p) { return legal(g.graph(), p); }
PrunedGraph apply_pruning(const PrunedGraph& g, const Pruning& p) { return prune(g.graph(), g.taxa_ptr(), p); }
PrunedGraph apply_pruning(const PhyloNetwork& g, const Pruning& p) { return prune(g.graph(), g.taxa_ptr(), p); }
std::vector<Pruning> enumerate_prunings(const PrunedGraph& g) { return prunings_of(g.graph()); }
std::vector<Pruning> enumerate_prunings(const PhyloNetwork& g) { return prunings_of(g.graph()); }

// ---------------------------------------------------------------------------
// Embedding search

namespace {

enum class GuestKind { Labeled, Sprout, Full, Partial };

class EmbeddingSearch {
 public:
  EmbeddingSearch(const PrunedGraph& guest, const PhyloNetwork& host)
      : G_(guest.graph()), H_(host.graph()) {
    kind_.resize(G_.vertex_count());
    for (int v = 0; v < G_.vertex_count(); ++v) {
      if (G_.is_labeled(v))
        kind_[v] = GuestKind::Labeled;
      else if (G_.degree(v) == 1)
        kind_[v] = GuestKind::Sprout;
      else if (G_.degree(v) == 3)
        kind_[v] = GuestKind::Full;
      else
        kind_[v] = GuestKind::Partial;
    }
    map_.assign(G_.vertex_count(), -1);
    occupants_.resize(H_.vertex_count());
    passed_.assign(H_.vertex_count(), 0);
    used_.assign(H_.edge_count(), 0);
    paths_.resize(G_.edge_count());
    assigned_.assign(G_.edge_count(), 0);
    unused_ = H_.edge_count();
  }

  bool run() {
    if (!counts_match()) return false;
    for (int v = 0; v < G_.vertex_count(); ++v) {
      if (kind_[v] != GuestKind::Labeled) continue;
      int w = H_.find_label(G_.label(v));
      if (w < 0 || !occupants_[w].empty()) return false;
      place(v, w);
    }
    for (int w = 0; w < H_.vertex_count(); ++w)
      if (H_.is_labeled(w) && occupants_[w].empty()) return false;
    return solve();
  }

  const std::vector<int>& vertex_map() const { return found_map_; }
  const std::vector<std::vector<int>>& paths() const { return found_paths_; }

 private:
  bool counts_match() const {
    int sprouts = 0, partial = 0, isolated = 0;
    for (int v = 0; v < G_.vertex_count(); ++v) {
      if (kind_[v] == GuestKind::Sprout) ++sprouts;
      if (kind_[v] == GuestKind::Partial) ++partial;
      if (kind_[v] == GuestKind::Labeled && G_.degree(v) == 0) ++isolated;
      if (kind_[v] == GuestKind::Partial && G_.degree(v) != 2) return false;
    }
    return H_.edge_count() == G_.edge_count() + sprouts - partial - isolated;
  }

  bool is_partner(int g) const {
    return kind_[g] == GuestKind::Partial || (kind_[g] == GuestKind::Labeled && G_.degree(g) == 0);
  }

  bool profile_fits(int g, int w) const {
    switch (kind_[g]) {
      case GuestKind::Labeled: return H_.label(w) == G_.label(g);
      case GuestKind::Full:
        return !H_.is_labeled(w) && H_.in_degree(w) == G_.in_degree(g) && H_.out_degree(w) == G_.out_degree(g);
      case GuestKind::Partial:
        return !H_.is_labeled(w) && (G_.in_degree(g) == 2 ? H_.in_degree(w) == 2 : H_.out_degree(w) == 2);
      case GuestKind::Sprout: return true;
    }
    return false;
  }

  bool can_place(int g, int w) const {
    if (!profile_fits(g, w)) return false;
    const auto& occ = occupants_[w];
    if (passed_[w]) return kind_[g] == GuestKind::Sprout && occ.empty();
    if (occ.empty()) return kind_[g] != GuestKind::Sprout || !H_.is_labeled(w);
    if (occ.size() >= 2) return false;
    int a = occ[0];
    int sprout = kind_[g] == GuestKind::Sprout ? g : a;
    int other = sprout == g ? a : g;
    if (kind_[sprout] != GuestKind::Sprout || !is_partner(other)) return false;
    // The partner leaves exactly one host edge for the sprout.
    bool t_sprout = G_.out_degree(sprout) == 1;
    if (kind_[other] == GuestKind::Partial) return t_sprout == (G_.in_degree(other) == 2);
    return t_sprout == (G_.label(other) == kRootLabel);
  }

  bool can_pass(int w) const {
    if (passed_[w] || H_.is_labeled(w) || H_.degree(w) != 3) return false;
    for (int g : occupants_[w])
      if (kind_[g] != GuestKind::Sprout) return false;
    return true;
  }

  void place(int g, int w) {
    map_[g] = w;
    occupants_[w].push_back(g);
  }
  void unplace(int g) {
    occupants_[map_[g]].pop_back();
    map_[g] = -1;
  }

  // Calls visit() for every feasible path of guest edge ge starting from its
  // mapped end; the state reflects the path during the call.
  template <class Visit>
  bool enumerate(int ge, Visit&& visit) {
    const Edge& e = G_.edge(ge);
    bool forward = map_[e.tail] >= 0;
    int from = forward ? map_[e.tail] : map_[e.head];
    int other = forward ? e.head : e.tail;
    std::vector<int>& path = paths_[ge];
    path.clear();
    std::function<bool(int)> walk = [&](int w) -> bool {
      auto edges = forward ? H_.out_edges(w) : H_.in_edges(w);
      for (int he : edges) {
        if (used_[he]) continue;
        int y = forward ? H_.edge(he).head : H_.edge(he).tail;
        used_[he] = 1;
        --unused_;
        if (forward)
          path.push_back(he);
        else
          path.insert(path.begin(), he);
        bool stop = false;
        if (map_[other] >= 0) {
          if (map_[other] == y) stop = visit();
        } else if (can_place(other, y)) {
          place(other, y);
          stop = visit();
          unplace(other);
        }
        if (!stop && can_pass(y)) {
          passed_[y] = 1;
          stop = walk(y);
          passed_[y] = 0;
        }
        if (forward)
          path.pop_back();
        else
          path.erase(path.begin());
        ++unused_;
        used_[he] = 0;
        if (stop) return true;
      }
      return false;
    };
    bool stop = walk(from);
    if (!stop) path.clear();
    return stop;
  }

  int remaining() const {
    int r = 0;
    for (char a : assigned_) r += !a;
    return r;
  }

  bool solve() {
    int left = remaining();
    if (left == 0) {
      if (unused_ != 0) return false;
      found_map_ = map_;
      found_paths_ = paths_;
      return true;
    }
    if (unused_ < left) return false;

    // Most constrained anchored edge first.
    int best = -1;
    long best_count = -1;
    for (int ge = 0; ge < G_.edge_count(); ++ge) {
      if (assigned_[ge]) continue;
      const Edge& e = G_.edge(ge);
      if (map_[e.tail] < 0 && map_[e.head] < 0) continue;
      long count = 0;
      enumerate(ge, [&] { return ++count >= best_count && best_count >= 0; });
      if (count == 0) return false;
      if (best < 0 || count < best_count) {
        best = ge;
        best_count = count;
      }
    }
    if (best >= 0) {
      assigned_[best] = 1;
      bool ok = enumerate(best, [&] { return solve(); });
      if (!ok) assigned_[best] = 0;
      return ok;
    }

    // No anchored edge: seed an unanchored component.
    int seed = -1;
    for (int ge = 0; ge < G_.edge_count() && seed < 0; ++ge) {
      if (assigned_[ge]) continue;
      for (int v : {G_.edge(ge).tail, G_.edge(ge).head})
        if (seed < 0 || (kind_[seed] == GuestKind::Sprout && kind_[v] != GuestKind::Sprout)) seed = v;
    }
    for (int w = 0; w < H_.vertex_count(); ++w) {
      if (!can_place(seed, w)) continue;
      place(seed, w);
      if (solve()) return true;
      unplace(seed);
    }
    return false;
  }

  const Multigraph& G_;
  const Multigraph& H_;
  std::vector<GuestKind> kind_;
  std::vector<int> map_;
  std::vector<std::vector<int>> occupants_;
  std::vector<char> passed_;
  std::vector<char> used_;
  std::vector<std::vector<int>> paths_;
  std::vector<char> assigned_;
  int unused_ = 0;
  std::vector<int> found_map_;
  std::vector<std::vector<int>> found_paths_;
};

}  // namespace

std::optional<AgreementEmbedding> find_agreement_embedding(const PrunedGraph& guest, const PhyloNetwork& host) {
  if (!same_taxa(guest.taxa_ptr(), host.taxa_ptr())) throw TaxaMismatchError();
  EmbeddingSearch search(guest, host);
  if (!search.run()) return std::nullopt;
  return AgreementEmbedding{host, guest, search.vertex_map(), search.paths()};
}

ValidationReport verify_agreement_embedding(const AgreementEmbedding& emb) {
  ValidationReport rep;
  const Multigraph& G = emb.guest.graph();
  const Multigraph& H = emb.host.graph();
  if (static_cast<int>(emb.vertex_map.size()) != G.vertex_count() ||
      static_cast<int>(emb.edge_paths.size()) != G.edge_count()) {
    rep.add({"path", "vertex or edge map has the wrong size", {}, {}});
    return rep;
  }
  for (int v = 0; v < G.vertex_count(); ++v) {
    int w = emb.vertex_map[v];
    if (w < 0 || w >= H.vertex_count()) rep.add({"path", "guest vertex is not mapped", {v}, {}});
  }
  if (!rep.ok) return rep;

  std::vector<int> usage(H.edge_count(), 0);
  for (int ge = 0; ge < G.edge_count(); ++ge) {
    const auto& path = emb.edge_paths[ge];
    const Edge& e = G.edge(ge);
    bool ok = !path.empty();
    for (std::size_t i = 0; ok && i < path.size(); ++i) {
      if (path[i] < 0 || path[i] >= H.edge_count()) ok = false;
      else if (i > 0 && H.edge(path[i - 1]).head != H.edge(path[i]).tail) ok = false;
    }
    if (ok) ok = H.edge(path.front()).tail == emb.vertex_map[e.tail] && H.edge(path.back()).head == emb.vertex_map[e.head];
    if (!ok) {
      rep.add({"path", "guest edge is not mapped to a path between its endpoint images", {}, {ge}});
      continue;
    }
    for (int he : path) ++usage[he];
  }
  for (int he = 0; he < H.edge_count(); ++he) {
    if (usage[he] == 0) rep.add({"cover", "host edge is not covered", {}, {he}});
    if (usage[he] > 1) rep.add({"cover", "host edge is used by more than one path", {}, {he}});
  }

  std::vector<std::vector<int>> at(H.vertex_count());
  for (int v = 0; v < G.vertex_count(); ++v) at[emb.vertex_map[v]].push_back(v);
  auto sprout = [&](int v) { return !G.is_labeled(v) && G.degree(v) == 1; };
  auto partner = [&](int v) {
    if (G.is_labeled(v)) return G.degree(v) == 0;
    return (G.in_degree(v) == 2 && G.out_degree(v) == 0) || (G.in_degree(v) == 0 && G.out_degree(v) == 2);
  };
  for (int w = 0; w < H.vertex_count(); ++w) {
    const auto& vs = at[w];
    bool ok = vs.size() <= 1 ||
              (vs.size() == 2 && ((sprout(vs[0]) && partner(vs[1])) || (sprout(vs[1]) && partner(vs[0]))));
    if (!ok)
      rep.add({"collision", "at most two guest vertices per host vertex, and then one is a sprout", vs, {}});
  }

  for (int v = 0; v < G.vertex_count(); ++v)
    if (G.is_labeled(v) && H.label(emb.vertex_map[v]) != G.label(v))
      rep.add({"labels", "labelled vertex mapped to a vertex with another label", {v}, {}});
  for (int w = 0; w < H.vertex_count(); ++w) {
    if (!H.is_labeled(w)) continue;
    int count = 0;
    for (int v = 0; v < G.vertex_count(); ++v) count += G.label(v) == H.label(w);
    if (count != 1) rep.add({"labels", "host label does not occur exactly once in the guest", {w}, {}});
  }
  return rep;
}

int attached_edge(const AgreementEmbedding& e, int sprout) {
  int y = e.vertex_map[sprout];
  const Multigraph& H = e.host.graph();
  for (std::size_t ge = 0; ge < e.edge_paths.size(); ++ge) {
    const auto& p = e.edge_paths[ge];
    for (std::size_t i = 1; i < p.size(); ++i)
      if (H.edge(p[i]).tail == y) return static_cast<int>(ge);
  }
  return -1;
}

int attached_vertex(const AgreementEmbedding& e, int sprout) {
  for (std::size_t v = 0; v < e.vertex_map.size(); ++v)
    if (static_cast<int>(v) != sprout && e.vertex_map[v] >= 0 && e.vertex_map[v] == e.vertex_map[sprout])
      return static_cast<int>(v);
  return -1;
}

AgreementEmbedding embedding_change(const AgreementEmbedding& emb, int u, int v) {
  const PrunedGraph& G = emb.guest;
  const Multigraph& H = emb.host.graph();
  if (u == v || !G.is_sprout(u) || !G.is_sprout(v)) throw PreconditionError("embedding change needs two sprouts");
  bool tail = G.is_t_sprout(u);
  if (tail != G.is_t_sprout(v)) throw PreconditionError("embedding change needs sprouts of the same orientation");
  int eu = G.sprout_edge(u), fv = G.sprout_edge(v);
  if (eu == fv) throw PreconditionError("sprouts share their edge");
  const auto& pf = emb.edge_paths[fv];
  int y = emb.vertex_map[u];
  // Position k with the path passing through y between pf[k-1] and pf[k].
  int k = -1;
  for (std::size_t i = 1; i < pf.size(); ++i)
    if (H.edge(pf[i]).tail == y) k = static_cast<int>(i);
  if (k < 0) throw PreconditionError("sprout is not attached to the other sprout's edge");

  AgreementEmbedding out = emb;
  auto& pu = out.edge_paths[eu];
  auto& pv = out.edge_paths[fv];
  std::vector<int> before(pf.begin(), pf.begin() + k), after(pf.begin() + k, pf.end());
  if (tail) {
    before.insert(before.end(), pu.begin(), pu.end());
    pu = std::move(before);
    pv = std::move(after);
  } else {
    pu.insert(pu.end(), after.begin(), after.end());
    pv = std::move(before);
  }
  out.vertex_map[u] = emb.vertex_map[v];
  out.vertex_map[v] = y;
  return out;
}

// ---------------------------------------------------------------------------
// Agreement graphs

int AgreementGraph::disagreement_index_of_edge(int e) const {
  for (std::size_t j = 0; j < disagreement_edges.size(); ++j)
    if (disagreement_edges[j] == e) return static_cast<int>(j);
  return -1;
}

int AgreementGraph::disagreement_index_of_vertex(int v) const {
  const Multigraph& m = graph.graph();
  for (std::size_t j = 0; j < disagreement_edges.size(); ++j) {
    const Edge& e = m.edge(disagreement_edges[j]);
    if (e.tail == v || e.head == v) return static_cast<int>(j);
  }
  return -1;
}

AgreementGraph make_agreement_graph(PrunedGraph g, std::vector<int> disagreement_edges) {
  AgreementGraph a;
  Restriction r = remove_bare_edges(g, disagreement_edges);
  a.graph = std::move(g);
  a.disagreement_edges = std::move(disagreement_edges);
  a.agreement_part = std::move(r.graph);
  a.part_vertex = std::move(r.vertex_map);
  a.part_edge = std::move(r.edge_map);
  return a;
}

AgreementEmbedding lift_embedding(const AgreementGraph& g, const AgreementEmbedding& part) {
  AgreementEmbedding out{part.host, g.graph, std::vector<int>(g.graph.vertex_count(), -1),
                         std::vector<std::vector<int>>(g.graph.edge_count())};
  for (int v = 0; v < g.graph.vertex_count(); ++v)
    if (g.part_vertex[v] >= 0) out.vertex_map[v] = part.vertex_map[g.part_vertex[v]];
  for (int e = 0; e < g.graph.edge_count(); ++e)
    if (g.part_edge[e] >= 0) out.edge_paths[e] = part.edge_paths[g.part_edge[e]];
  return out;
}

namespace {

// Sprout of E_j with the same orientation as `like`.
int matching_sprout(const AgreementGraph& g, int j, int like) {
  const Edge& e = g.graph.graph().edge(g.disagreement_edges[j]);
  return g.graph.is_t_sprout(like) ? e.tail : e.head;
}

}  // namespace

bool is_normalized(const AgreementGraph& g, const AgreementEmbedding& e) {
  for (int v : g.graph.sprouts()) {
    int fe = attached_edge(e, v);
    if (fe < 0) continue;
    int j = g.disagreement_index_of_edge(fe);
    if (j < 0) continue;
    int i = g.disagreement_index_of_vertex(v);
    if (i < 0 || j >= i) return false;
  }
  return true;
}

AgreementEmbedding normalize_embedding(const AgreementGraph& g, const PhyloNetwork& host, const AgreementEmbedding& e) {
  if (canonical_key(e.host) != canonical_key(host) || e.guest.vertex_count() != g.graph.vertex_count())
    throw PreconditionError("embedding does not belong to this agreement graph and host");
  ValidationReport rep = verify_agreement_embedding(e);
  if (!rep.ok) throw PreconditionError("embedding is not a valid agreement embedding: " + rep.summary());
  AgreementEmbedding cur = e;
  if (g.l() == 0) return cur;
  const int guard = 4 * (g.graph.vertex_count() + 1) * (g.l() + 1);

  // Agreement-subgraph sprouts move off disagreement edges.
  for (int u : g.graph.sprouts()) {
    if (g.disagreement_index_of_vertex(u) >= 0) continue;
    for (int step = 0;; ++step) {
      if (step > guard) throw InternalInvariantError("normalization did not terminate");
      int fe = attached_edge(cur, u);
      int j = fe < 0 ? -1 : g.disagreement_index_of_edge(fe);
      if (j < 0) break;
      cur = embedding_change(cur, u, matching_sprout(g, j, u));
    }
  }
  // E_i may only hang on E_j with j < i.
  for (int i = 0; i < g.l(); ++i) {
    const Edge& ei = g.graph.graph().edge(g.disagreement_edges[i]);
    for (int u : {ei.tail, ei.head}) {
      for (int step = 0;; ++step) {
        if (step > guard) throw InternalInvariantError("normalization did not terminate");
        int fe = attached_edge(cur, u);
        int j = fe < 0 ? -1 : g.disagreement_index_of_edge(fe);
        if (j <= i) break;
        cur = embedding_change(cur, u, matching_sprout(g, j, u));
      }
    }
  }
  if (!is_normalized(g, cur) || !verify_agreement_embedding(cur).ok)
    throw InternalInvariantError("normalization produced an embedding without the required properties");
  return cur;
}

AgreementCheck is_agreement_graph(const AgreementGraph& g, const PhyloNetwork& n, const PhyloNetwork& nprime) {
  if (!same_taxa(n.taxa_ptr(), nprime.taxa_ptr()) || !same_taxa(g.graph.taxa_ptr(), n.taxa_ptr()))
    throw TaxaMismatchError();
  AgreementCheck out;
  int r = reticulation_count(n), rp = reticulation_count(nprime);
  if (g.l() != std::abs(rp - r)) return out;
  for (int e : g.disagreement_edges) {
    const Edge& ed = g.graph.graph().edge(e);
    if (!g.graph.is_sprout(ed.tail) || !g.graph.is_sprout(ed.head)) return out;
  }
  bool n_richer = r > rp;
  out.into_n = find_agreement_embedding(n_richer ? g.graph : g.agreement_part, n);
  if (!out.into_n) return out;
  out.into_nprime = find_agreement_embedding(n_richer ? g.agreement_part : g.graph, nprime);
  out.ok = out.into_nprime.has_value();
  return out;
}

// ---------------------------------------------------------------------------
// Maximum agreement graphs

namespace {

class Levels {
 public:
  Levels(const PhyloNetwork& start, const SearchOptions& opt, long long* stored)
      : taxa_(start.taxa_ptr()), opt_(opt), stored_(stored) {
    levels_.push_back({canonical_key(start)});
    *stored_ += 1;
  }

  const std::vector<CanonicalKey>& at(int k, int lower_bound) {
    while (static_cast<int>(levels_.size()) <= k) expand(lower_bound);
    return levels_[k];
  }

 private:
  void expand(int lower_bound) {
    const auto& cur = levels_.back();
    auto parts = detail::parallel_map<std::vector<CanonicalKey>>(cur.size(), opt_.threads, [&](std::size_t i) {
      PrunedGraph g = decode_pruned(cur[i], taxa_);
      std::vector<CanonicalKey> keys;
      for (const auto& p : enumerate_prunings(g)) keys.push_back(canonical_key(apply_pruning(g, p)));
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      return keys;
    });
    std::vector<CanonicalKey> next;
    for (auto& p : parts) next.insert(next.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    *stored_ += static_cast<long long>(next.size());
    if (opt_.budget_states > 0 && *stored_ > opt_.budget_states)
      throw BudgetExceededError("agreement search exceeded its state budget", lower_bound);
    levels_.push_back(std::move(next));
  }

  TaxaPtr taxa_;
  SearchOptions opt_;
  long long* stored_;
  std::vector<std::vector<CanonicalKey>> levels_;
};

// The graph with l extra components that are single edges between sprouts,
// appended as the last l edges.
PrunedGraph with_bare_edges(const PrunedGraph& g, int l) {
  Multigraph m = g.graph();
  for (int i = 0; i < l; ++i) {
    int t = m.add_vertex();
    m.add_edge(t, m.add_vertex());
  }
  return PrunedGraph(g.taxa_ptr(), std::move(m));
}

}  // namespace

std::vector<std::vector<CanonicalKey>> pruning_levels(const PhyloNetwork& start, int depth, const SearchOptions& opt) {
  long long stored = 0;
  Levels levels(start, opt, &stored);
  std::vector<std::vector<CanonicalKey>> out;
  for (int k = 0; k <= depth; ++k) out.push_back(levels.at(k, 0));
  return out;
}

AgreementResult agreement_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const SearchOptions& opt) {
  if (!same_taxa(n.taxa_ptr(), nprime.taxa_ptr())) throw TaxaMismatchError();
  int r = reticulation_count(n), rp = reticulation_count(nprime);
  bool n_richer = r > rp;
  const PhyloNetwork& poor = n_richer ? nprime : n;
  const PhyloNetwork& rich = n_richer ? n : nprime;
  int l = std::abs(r - rp);

  long long stored = 0;
  Levels a(poor, opt, &stored);
  std::optional<Levels> b;
  if (l == 0) b.emplace(rich, opt, &stored);
  for (int s = 0;; ++s) {
    const auto& as = a.at(s, s + l);
    PrunedGraph found;
    std::optional<AgreementEmbedding> into_rich;
    if (l == 0) {
      // Same number of prunings on both sides: intersect the key sets.
      const auto& bs = b->at(s, s);
      std::vector<CanonicalKey> common;
      std::set_intersection(as.begin(), as.end(), bs.begin(), bs.end(), std::back_inserter(common));
      if (common.empty()) continue;
      found = decode_pruned(common.front(), rich.taxa_ptr());
      into_rich = find_agreement_embedding(found, rich);
    } else {
      // The poorer side plus l bare edges must be reachable from the richer
      // network, which holds exactly when it embeds there.
      stored += static_cast<long long>(as.size());
      if (opt.budget_states > 0 && stored > opt.budget_states)
        throw BudgetExceededError("agreement search exceeded its state budget", s + l);
      auto hits = detail::parallel_map<char>(as.size(), opt.threads, [&](std::size_t i) -> char {
        PrunedGraph g = with_bare_edges(decode_pruned(as[i], rich.taxa_ptr()), l);
        return find_agreement_embedding(g, rich) ? 1 : 0;
      });
      auto it = std::find(hits.begin(), hits.end(), 1);
      if (it == hits.end()) continue;
      found = with_bare_edges(decode_pruned(as[it - hits.begin()], rich.taxa_ptr()), l);
      into_rich = find_agreement_embedding(found, rich);
    }

    std::vector<int> bare;
    for (int e = found.edge_count() - l; e < found.edge_count(); ++e) bare.push_back(e);
    AgreementResult res;
    res.d = s + l;
    res.s = s;
    res.l = l;
    res.n_is_richer = n_richer;
    res.mag = make_agreement_graph(std::move(found), bare);
    auto into_poor = find_agreement_embedding(res.mag.agreement_part, poor);
    if (!into_rich || !into_poor) throw InternalInvariantError("agreement graph found without an embedding");
    AgreementEmbedding rich_emb = normalize_embedding(res.mag, rich, *into_rich);
    res.embedding_n = n_richer ? rich_emb : *into_poor;
    res.embedding_nprime = n_richer ? *into_poor : rich_emb;
    return res;
  }
}

std::string witness_json(const AgreementResult& r) {
  using nlohmann::ordered_json;
  const Multigraph& m = r.mag.graph.graph();
  const TaxaSet& taxa = r.mag.graph.taxa();
  ordered_json out;
  out["d"] = r.d;
  out["s"] = r.s;
  out["l"] = r.l;

  auto graph = [&](const Multigraph& g) {
    ordered_json vertices = ordered_json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
      ordered_json jv;
      jv["id"] = v;
      if (g.label(v) == kRootLabel) jv["label"] = kRootName;
      else if (g.label(v) >= 0) jv["label"] = taxa.name(g.label(v));
      else jv["label"] = nullptr;
      vertices.push_back(jv);
    }
    ordered_json edges = ordered_json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.tail, e.head});
    return ordered_json{{"vertices", vertices}, {"edges", edges}};
  };
  out["graph"] = graph(m);
  out["host_N"] = graph(r.embedding_n.host.graph());
  out["host_Nprime"] = graph(r.embedding_nprime.host.graph());

  ordered_json comps = ordered_json::array();
  int agreement_index = 0;
  for (const auto& comp : r.mag.graph.components()) {
    ordered_json jc;
    std::vector<int> ces;
    for (int e = 0; e < m.edge_count(); ++e)
      if (std::binary_search(comp.begin(), comp.end(), m.edge(e).tail)) ces.push_back(e);
    int j = ces.size() == 1 ? r.mag.disagreement_index_of_edge(ces[0]) : -1;
    if (j >= 0) {
      jc["kind"] = "disagreement";
      jc["name"] = "E" + std::to_string(j + 1);
    } else {
      jc["kind"] = "agreement";
      jc["name"] = "S" + std::to_string(++agreement_index);
    }
    jc["vertices"] = comp;
    jc["edges"] = ces;
    comps.push_back(jc);
  }
  out["components"] = comps;

  auto embedding = [&](const AgreementEmbedding& e) {
    bool part = e.guest.edge_count() != m.edge_count();
    AgreementEmbedding full = part ? lift_embedding(r.mag, e) : e;
    ordered_json list = ordered_json::array();
    for (int ge = 0; ge < m.edge_count(); ++ge) {
      if (full.edge_paths[ge].empty()) continue;
      list.push_back({{"edge", ge},
                      {"tail_image", full.vertex_map[m.edge(ge).tail]},
                      {"head_image", full.vertex_map[m.edge(ge).head]},
                      {"path", full.edge_paths[ge]}});
    }
    for (int v = 0; v < m.vertex_count(); ++v)
      if (m.degree(v) == 0) list.push_back({{"vertex", v}, {"image", full.vertex_map[v]}});
    return list;
  };
  out["embedding_N"] = embedding(r.embedding_n);
  out["embedding_Nprime"] = embedding(r.embedding_nprime);
  return out.dump();
}

}  // namespace netdist
