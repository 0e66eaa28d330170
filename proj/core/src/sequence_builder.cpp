// Builds a PR-sequence from a maximum agreement graph G.
//
// Every network along the way is described as H (G plus shadow edges, with
// sprouts merged as they reach their final place) together with an
// attachment state: each sprout of H sits on an edge of H at some position,
// at a vertex of H, or nowhere (a disagreement edge not added yet). Gluing
// the state yields the network. The target network has its own attachment
// state over the same H. Moves edit the current state; embedding changes and
// merges rewrite both states without changing the glued network.

#include <algorithm>
#include <sstream>

#include "netdist/distances.hpp"
#include "netdist/errors.hpp"

namespace netdist {
namespace {

enum AttKind { kNone = 0, kOnEdge = 1, kAtVertex = 2 };

struct Att {
  int kind = kNone;
  int id = -1;
  bool operator==(const Att&) const = default;
};

struct Side {
  std::vector<Att> at;               // per vertex of H
  std::vector<std::vector<int>> on;  // per edge of H, top to bottom
};

struct Glued {
  Multigraph m;
  std::vector<int> image;              // H vertex -> glued vertex, -1 if absent
  std::vector<std::vector<int>> path;  // H edge -> glued edges
  bool valid = false;
};

class Builder {
 public:
  Builder(const AgreementGraph& g, const AgreementEmbedding& poor, const AgreementEmbedding& rich) : taxa_(g.graph.taxa_ptr()) {
    const Multigraph& m = g.graph.graph();
    for (int v = 0; v < m.vertex_count(); ++v) add_vertex(m.label(v));
    for (int e = 0; e < m.edge_count(); ++e) add_edge(m.edge(e).tail, m.edge(e).head, false);
    disagreement_ = g.disagreement_edges;
    std::vector<int> part_to_h_v(g.agreement_part.vertex_count(), -1), part_to_h_e(g.agreement_part.edge_count(), -1);
    for (int v = 0; v < m.vertex_count(); ++v)
      if (g.part_vertex[v] >= 0) part_to_h_v[g.part_vertex[v]] = v;
    for (int e = 0; e < m.edge_count(); ++e)
      if (g.part_edge[e] >= 0) part_to_h_e[g.part_edge[e]] = e;
    load(cur_, poor, part_to_h_v, part_to_h_e);
    std::vector<int> id_v(m.vertex_count()), id_e(m.edge_count());
    for (int v = 0; v < m.vertex_count(); ++v) id_v[v] = v;
    for (int e = 0; e < m.edge_count(); ++e) id_e[e] = e;
    load(tgt_, rich, id_v, id_e);
    d_used_.assign(label_.size(), 0);
  }

  std::vector<CanonicalKey> run(const CanonicalKey& start_key, const CanonicalKey& end_key) {
    keys_.push_back(key_of(cur_));
    if (keys_.back() != start_key) fail("glued start state differs from the start network");
    for (int guard = 0;; ++guard) {
      if (guard > 10000) fail("no progress");
      free_merges();
      if (done()) break;
      if (case_a(false) || case_b(false) || case_c() || case_a(true) || case_b(true) || case_d() || case_d_prime() ||
          case_c_double_prime())
        continue;
      fail("no case applies");
    }
    if (keys_.back() != end_key) fail("glued final state differs from the target network");
    return keys_;
  }

 private:
  // ---- H ----
  int add_vertex(int label) {
    label_.push_back(label);
    vdead_.push_back(0);
    for (Side* s : {&cur_, &tgt_}) s->at.emplace_back();
    d_used_.push_back(0);
    return static_cast<int>(label_.size()) - 1;
  }
  int add_edge(int t, int h, bool shadow) {
    edge_.push_back({t, h});
    edead_.push_back(0);
    shadow_.push_back(shadow);
    for (Side* s : {&cur_, &tgt_}) s->on.emplace_back();
    return static_cast<int>(edge_.size()) - 1;
  }
  int degree(int v) const {
    int d = 0;
    for (std::size_t e = 0; e < edge_.size(); ++e)
      if (!edead_[e]) d += (edge_[e].tail == v) + (edge_[e].head == v);
    return d;
  }
  bool is_sprout(int v) const { return !vdead_[v] && label_[v] == kUnlabeled && degree(v) == 1; }
  int sprout_edge(int v) const {
    for (std::size_t e = 0; e < edge_.size(); ++e)
      if (!edead_[e] && (edge_[e].tail == v || edge_[e].head == v)) return static_cast<int>(e);
    return -1;
  }
  bool is_t(int v) const { return edge_[sprout_edge(v)].tail == v; }
  bool is_shadow_sprout(int v) const { return shadow_[sprout_edge(v)]; }
  std::vector<int> sprouts() const {
    std::vector<int> out;
    for (std::size_t v = 0; v < label_.size(); ++v)
      if (is_sprout(static_cast<int>(v))) out.push_back(static_cast<int>(v));
    return out;
  }
  bool unplaced_disagreement(int e) const {
    return !edead_[e] && is_sprout(edge_[e].tail) && is_sprout(edge_[e].head) && cur_.at[edge_[e].tail].kind == kNone;
  }

  // ---- states ----
  void load(Side& s, const AgreementEmbedding& emb, const std::vector<int>& vmap, const std::vector<int>& emap) {
    const PrunedGraph& guest = emb.guest;
    std::vector<std::vector<int>> occ(emb.host.vertex_count());
    for (int v = 0; v < guest.vertex_count(); ++v)
      if (emb.vertex_map[v] >= 0) occ[emb.vertex_map[v]].push_back(vmap[v]);
    const Multigraph& host = emb.host.graph();
    for (int ge = 0; ge < guest.edge_count(); ++ge) {
      const auto& p = emb.edge_paths[ge];
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        int hv = host.edge(p[i]).head;
        if (occ[hv].size() != 1 || !is_sprout(occ[hv][0])) fail("inner path vertex without a single sprout");
        int sp = occ[hv][0];
        s.at[sp] = {kOnEdge, emap[ge]};
        s.on[emap[ge]].push_back(sp);
      }
    }
    for (int v = 0; v < guest.vertex_count(); ++v) {
      int h = vmap[v];
      if (!guest.is_sprout(v) || s.at[h].kind != kNone) continue;
      for (int x : occ[emb.vertex_map[v]])
        if (x != h && !is_sprout(x)) s.at[h] = {kAtVertex, x};
      if (s.at[h].kind == kNone) fail("sprout neither on an edge nor at a vertex");
    }
  }

  bool present(const Side& s, int v) const { return !vdead_[v] && (!is_sprout(v) || s.at[v].kind != kNone); }
  bool edge_present(const Side& s, int e) const { return !edead_[e] && present(s, edge_[e].tail) && present(s, edge_[e].head); }

  Glued glue(const Side& s) const {
    Glued g;
    int n = static_cast<int>(label_.size());
    g.image.assign(n, -1);
    g.path.assign(edge_.size(), {});
    for (int v = 0; v < n; ++v)
      if (!vdead_[v] && !is_sprout(v)) g.image[v] = g.m.add_vertex(label_[v]);
    for (int v = 0; v < n; ++v)
      if (is_sprout(v) && s.at[v].kind == kOnEdge) g.image[v] = g.m.add_vertex();
    for (int v = 0; v < n; ++v)
      if (is_sprout(v) && s.at[v].kind == kAtVertex) g.image[v] = g.image[s.at[v].id];
    for (std::size_t e = 0; e < edge_.size(); ++e) {
      if (!edge_present(s, static_cast<int>(e))) continue;
      int prev = g.image[edge_[e].tail];
      for (int x : s.on[e]) {
        g.path[e].push_back(g.m.add_edge(prev, g.image[x]));
        prev = g.image[x];
      }
      g.path[e].push_back(g.m.add_edge(prev, g.image[edge_[e].head]));
    }
    g.valid = validate(PhyloNetwork(taxa_, g.m)).ok;
    return g;
  }
  CanonicalKey key_of(const Side& s) const {
    Glued g = glue(s);
    if (!g.valid) fail("glued state is not a network");
    return canonical_key(PhyloNetwork(taxa_, g.m));
  }
  bool cur_valid() const { return glue(cur_).valid; }
  void commit() {
    CanonicalKey k = key_of(cur_);
    if (k != keys_.back()) keys_.push_back(std::move(k));
  }

  int occupant(const Side& s, int x) const {
    for (std::size_t v = 0; v < label_.size(); ++v)
      if (!vdead_[v] && s.at[v] == Att{kAtVertex, x}) return static_cast<int>(v);
    return -1;
  }

  void detach(Side& s, int v) {
    if (s.at[v].kind == kOnEdge) {
      auto& l = s.on[s.at[v].id];
      l.erase(std::find(l.begin(), l.end(), v));
    }
    s.at[v] = {};
  }
  void place(Side& s, int v, int e, int index) {
    s.on[e].insert(s.on[e].begin() + index, v);
    s.at[v] = {kOnEdge, e};
  }

  // Embedding change in the current state: u sits on v's edge.
  void change(int u, int v) {
    int ev = sprout_edge(v), eu = sprout_edge(u);
    auto lv = cur_.on[ev];
    auto k = std::find(lv.begin(), lv.end(), u) - lv.begin();
    if (cur_.at[u] != Att{kOnEdge, ev} || k == static_cast<long>(lv.size())) fail("embedding change on an unattached sprout");
    std::vector<int> above(lv.begin(), lv.begin() + k), below(lv.begin() + k + 1, lv.end());
    Att old_v = cur_.at[v];
    std::vector<int> moved;
    if (is_t(u)) {
      std::vector<int> nu = above;
      nu.push_back(v);
      nu.insert(nu.end(), cur_.on[eu].begin(), cur_.on[eu].end());
      cur_.on[eu] = nu;
      cur_.on[ev] = below;
      moved = above;
    } else {
      std::vector<int> nu = cur_.on[eu];
      nu.push_back(v);
      nu.insert(nu.end(), below.begin(), below.end());
      cur_.on[eu] = nu;
      cur_.on[ev] = above;
      moved = below;
    }
    for (int x : moved) cur_.at[x] = {kOnEdge, eu};
    cur_.at[v] = {kOnEdge, eu};
    cur_.at[u] = old_v;
    if (old_v.kind == kOnEdge) std::replace(cur_.on[old_v.id].begin(), cur_.on[old_v.id].end(), v, u);
  }

  void split(Side& s, int e, int u, int e2) {
    auto& l = s.on[e];
    auto it = std::find(l.begin(), l.end(), u);
    std::vector<int> tail(it + 1, l.end());
    l.erase(it, l.end());
    s.on[e2] = tail;
    for (int x : tail) s.at[x] = {kOnEdge, e2};
    s.at[u] = {};
  }

  // u has the same attachment in both states and stops being a sprout.
  void merge(int u) {
    Att a = cur_.at[u];
    if (a != tgt_.at[u] || a.kind == kNone) fail("merging a sprout that is not in place");
    if (a.kind == kOnEdge) {
      int e = a.id;
      int e2 = add_edge(u, edge_[e].head, false);
      edge_[e].head = u;
      split(cur_, e, u, e2);
      split(tgt_, e, u, e2);
    } else {
      int se = sprout_edge(u);
      (edge_[se].tail == u ? edge_[se].tail : edge_[se].head) = a.id;
      cur_.at[u] = tgt_.at[u] = {};
      vdead_[u] = 1;
    }
  }

  // Where a sprout goes in the current state to reach attachment `target`:
  // top of the edge for t-sprouts, bottom for h-sprouts, and for a vertex
  // the edge of its occupant next to the vertex.
  struct Slot {
    int edge = -1;
    int index = 0;
    int occupant = -1;
  };
  bool slot(Att target, bool t, Slot* out) const {
    if (target.kind == kOnEdge) {
      if (!edge_present(cur_, target.id)) return false;
      out->edge = target.id;
      out->occupant = -1;
    } else if (target.kind == kAtVertex) {
      int o = occupant(cur_, target.id);
      if (o < 0) return false;
      out->edge = sprout_edge(o);
      out->occupant = o;
    } else {
      return false;
    }
    const auto& l = cur_.on[out->edge];
    if (t) {
      out->index = 0;
    } else {
      int i = static_cast<int>(l.size());
      if (out->occupant >= 0)
        while (i > 0 && is_shadow_sprout(l[i - 1])) --i;
      out->index = i;
    }
    return true;
  }
  bool target_has_shadow(int u) const {
    if (tgt_.at[u].kind != kAtVertex) return false;
    int o = occupant(cur_, tgt_.at[u].id);
    return o >= 0 && is_shadow_sprout(o);
  }

  // Moves u (currently detached or attached anywhere) to its target slot and
  // merges it. Returns false if the target is not available.
  bool move_to_target(int u) {
    detach(cur_, u);
    Slot sl;
    if (!slot(tgt_.at[u], is_t(u), &sl)) return false;
    place(cur_, u, sl.edge, sl.index);
    return true;
  }
  void settle(int u) {
    if (tgt_.at[u].kind == kAtVertex) change(u, occupant(cur_, tgt_.at[u].id));
    merge(u);
  }

  // Removes a shadow edge whose ends both sit on edges, with a PR-.
  bool remove_shadows() {
    bool any = false;
    for (std::size_t e = 0; e < edge_.size(); ++e) {
      if (edead_[e] || !shadow_[e]) continue;
      int w = edge_[e].tail, z = edge_[e].head;
      if (cur_.at[w].kind != kOnEdge || cur_.at[z].kind != kOnEdge || !cur_.on[e].empty()) continue;
      Builder trial = *this;
      trial.drop_shadow(static_cast<int>(e));
      if (!trial.cur_valid()) continue;
      drop_shadow(static_cast<int>(e));
      commit();
      ++stats_.shadow_removed;
      any = true;
    }
    return any;
  }
  void drop_shadow(int e) {
    int w = edge_[e].tail, z = edge_[e].head;
    detach(cur_, w);
    detach(cur_, z);
    edead_[e] = 1;
    vdead_[w] = vdead_[z] = 1;
  }

  void free_merges() {
    bool progress = true;
    while (progress) {
      progress = remove_shadows();
      for (int u : sprouts()) {
        if (is_shadow_sprout(u) || cur_.at[u].kind == kNone) continue;
        if (cur_.at[u] == tgt_.at[u]) {
          merge(u);
          progress = true;
          break;
        }
        if (tgt_.at[u].kind != kAtVertex || cur_.at[u].kind != kOnEdge) continue;
        int o = occupant(cur_, tgt_.at[u].id);
        if (o < 0 || cur_.at[u].id != sprout_edge(o)) continue;
        // Already next to the vertex; the move would not change the network.
        Builder trial = *this;
        Slot sl;
        trial.detach(trial.cur_, u);
        trial.slot(tgt_.at[u], is_t(u), &sl);
        trial.place(trial.cur_, u, sl.edge, sl.index);
        if (trial.key_of(trial.cur_) != keys_.back()) continue;
        *this = std::move(trial);
        settle(u);
        progress = true;
        break;
      }
    }
  }

  bool done() const { return sprouts().empty(); }

  std::vector<int> agreement_sprouts() const {
    std::vector<int> out;
    for (int u : sprouts())
      if (!is_shadow_sprout(u) && cur_.at[u].kind != kNone) out.push_back(u);
    return out;
  }

  // Trial of the move of a prunable sprout to its target.
  bool try_move(int u, bool shadow_target) {
    if (cur_.at[u].kind != kOnEdge || target_has_shadow(u) != shadow_target) return false;
    Builder trial = *this;
    if (!trial.move_to_target(u) || !trial.cur_valid()) return false;
    trial.commit();
    trial.settle(u);
    *this = std::move(trial);
    return true;
  }

  // (A) and (A'): prunable, unblocked sprout.
  bool case_a(bool shadow_target) {
    for (int u : agreement_sprouts())
      if (try_move(u, shadow_target)) {
        ++(shadow_target ? stats_.a_shadow : stats_.a);
        return true;
      }
    return false;
  }

  // (B) and (B'): addable disagreement edge.
  bool case_b(bool with_shadow) {
    for (int e : disagreement_) {
      if (!unplaced_disagreement(e)) continue;
      int u = edge_[e].tail, v = edge_[e].head;
      bool shadow = target_has_shadow(u) || target_has_shadow(v);
      if (shadow != with_shadow) continue;
      Builder trial = *this;
      if (with_shadow && target_has_shadow(v)) {
        if (!trial.reuse_shadow_for(e)) continue;
      } else {
        Slot su, sv;
        if (!trial.slot(tgt_.at[u], true, &su)) continue;
        trial.place(trial.cur_, u, su.edge, su.index);
        if (!trial.slot(tgt_.at[v], false, &sv)) continue;
        trial.place(trial.cur_, v, sv.edge, sv.index);
        if (!trial.cur_valid()) continue;
        trial.commit();
        trial.settle(u);
        trial.settle(v);
      }
      *this = std::move(trial);
      ++(with_shadow ? stats_.b_shadow : stats_.b);
      return true;
    }
    return false;
  }

  // (B') with v's target holding the head of a shadow edge (w, z): move w to
  // u's target and let the shadow edge become E.
  bool reuse_shadow_for(int e) {
    int u = edge_[e].tail, v = edge_[e].head;
    int z = occupant(cur_, tgt_.at[v].id);
    int se = sprout_edge(z);
    int w = edge_[se].tail;
    if (!move_to_target_as(w, tgt_.at[u]) || !cur_valid()) return false;
    commit();
    for (auto [from, to] : {std::pair{w, u}, std::pair{z, v}}) {
      cur_.at[to] = cur_.at[from];
      if (cur_.at[to].kind == kOnEdge) std::replace(cur_.on[cur_.at[to].id].begin(), cur_.on[cur_.at[to].id].end(), from, to);
      cur_.at[from] = {};
    }
    cur_.on[e] = cur_.on[se];
    for (int x : cur_.on[e]) cur_.at[x] = {kOnEdge, e};
    cur_.on[se].clear();
    edead_[se] = 1;
    vdead_[w] = vdead_[z] = 1;
    settle(u);
    merge(v);
    return true;
  }
  bool move_to_target_as(int w, Att target) {
    detach(cur_, w);
    Slot sl;
    if (!slot(target, true, &sl)) return false;
    place(cur_, w, sl.edge, sl.index);
    return true;
  }

  // Shadow edge that makes the unprunable sprout u prunable: from u's edge
  // to the edge into leaf 1 for t-sprouts, from the root edge to u's edge for
  // h-sprouts. Returns false if not possible.
  bool add_shadow_for(int u) {
    Slot leaf_or_root;
    int w = add_vertex(kUnlabeled), z = add_vertex(kUnlabeled);
    int se = add_edge(w, z, true);
    int eu = sprout_edge(u);
    if (is_t(u)) {
      if (!edge_slot_at_label(0, false, &leaf_or_root)) return false;
      place(cur_, w, eu, 0);
      place(cur_, z, leaf_or_root.edge, leaf_or_root.index);
      change(w, u);
    } else {
      if (!edge_slot_at_label(kRootLabel, true, &leaf_or_root)) return false;
      place(cur_, w, leaf_or_root.edge, leaf_or_root.index);
      place(cur_, z, eu, static_cast<int>(cur_.on[eu].size()));
      change(z, u);
    }
    (void)se;
    ++stats_.shadow_added;
    return true;
  }
  // Top of the root's outgoing edge or bottom of a leaf's incoming edge.
  bool edge_slot_at_label(int label, bool top, Slot* out) const {
    int x = -1;
    for (std::size_t v = 0; v < label_.size(); ++v)
      if (!vdead_[v] && label_[v] == label) x = static_cast<int>(v);
    if (x < 0) return false;
    int e = -1;
    for (std::size_t i = 0; i < edge_.size(); ++i)
      if (!edead_[i] && (edge_[i].tail == x || edge_[i].head == x)) e = static_cast<int>(i);
    if (e < 0) {
      int o = occupant(cur_, x);
      if (o < 0) return false;
      e = sprout_edge(o);
    }
    out->edge = e;
    out->index = top ? 0 : static_cast<int>(cur_.on[e].size());
    return true;
  }

  // (C) and (C'): unprunable sprout whose target is the root or a leaf.
  bool case_c() {
    for (int u : agreement_sprouts()) {
      if (cur_.at[u].kind != kAtVertex || tgt_.at[u].kind != kAtVertex) continue;
      if (label_[tgt_.at[u].id] == kUnlabeled) continue;
      if (unprunable_move(u)) {
        ++stats_.c;
        return true;
      }
    }
    return false;
  }
  // (C''): any unprunable, unblocked sprout.
  bool case_c_double_prime() {
    for (bool shadow : {false, true})
      for (int u : agreement_sprouts())
        if (cur_.at[u].kind == kAtVertex && target_has_shadow(u) == shadow && unprunable_move(u)) {
          ++stats_.c_general;
          return true;
        }
    return false;
  }
  bool unprunable_move(int u) {
    Builder trial = *this;
    if (!trial.add_shadow_for(u) || !trial.cur_valid()) return false;
    Builder moved = trial;
    if (!moved.move_to_target(u) || !moved.cur_valid()) return false;
    trial.commit();
    moved.keys_ = trial.keys_;
    moved.commit();
    moved.settle(u);
    *this = std::move(moved);
    return true;
  }

  // Blocking sprouts of a blocked sprout u with respect to the current state.
  std::vector<int> blocking(int u) const {
    Glued g = glue(cur_);
    Slot sl;
    if (!slot(tgt_.at[u], is_t(u), &sl)) return {};
    const auto& own = g.path[sprout_edge(u)];
    const auto& tp = g.path[sl.edge];
    if (own.empty() || tp.empty()) return {};
    std::vector<char> below, above;
    if (is_t(u)) {
      int f = tp[std::min<std::size_t>(sl.index, tp.size() - 1)];
      below = g.m.descendants_of(g.m.edge(own.front()).head);
      above = g.m.ancestors_of(g.m.edge(f).tail);
    } else {
      int f = tp[std::min<std::size_t>(sl.index, tp.size() - 1)];
      above = g.m.ancestors_of(g.m.edge(own.back()).tail);
      below = g.m.descendants_of(g.m.edge(f).head);
    }
    std::vector<int> out;
    for (int v : agreement_sprouts()) {
      if (v == u || g.image[v] < 0) continue;
      if (below[g.image[v]] && above[g.image[v]]) out.push_back(v);
    }
    return out;
  }
  bool is_blocked(int u) const {
    Builder trial = *this;
    if (trial.cur_.at[u].kind == kAtVertex && !trial.add_shadow_for(u)) return true;
    if (!trial.move_to_target(u)) return false;
    return !trial.cur_valid();
  }

  // (D): move a prunable, blocked, blocking sprout next to the root or leaf 1.
  bool case_d() {
    std::vector<char> is_blocking(label_.size(), 0);
    for (int u : agreement_sprouts())
      if (is_blocked(u))
        for (int v : blocking(u)) is_blocking[v] = 1;
    for (int u : agreement_sprouts()) {
      if (d_used_[u] || cur_.at[u].kind != kOnEdge || !is_blocking[u] || !is_blocked(u)) continue;
      Builder trial = *this;
      trial.detach(trial.cur_, u);
      Slot sl;
      if (!trial.edge_slot_at_label(is_t(u) ? kRootLabel : 0, is_t(u), &sl)) continue;
      trial.place(trial.cur_, u, sl.edge, sl.index);
      if (!trial.cur_valid() || trial.key_of(trial.cur_) == keys_.back()) continue;
      trial.commit();
      trial.d_used_[u] = 1;
      *this = std::move(trial);
      ++stats_.d;
      return true;
    }
    return false;
  }

  // (D'): non-addable disagreement edge whose head goes to a vertex: add it
  // from the root edge and settle the head.
  bool case_d_prime() {
    for (int e : disagreement_) {
      if (!unplaced_disagreement(e)) continue;
      int u = edge_[e].tail, v = edge_[e].head;
      if (tgt_.at[v].kind != kAtVertex) continue;
      Builder trial = *this;
      Slot su, sv;
      if (!trial.edge_slot_at_label(kRootLabel, true, &su)) continue;
      trial.place(trial.cur_, u, su.edge, su.index);
      if (!trial.slot(tgt_.at[v], false, &sv)) continue;
      trial.place(trial.cur_, v, sv.edge, sv.index);
      if (!trial.cur_valid()) continue;
      trial.commit();
      trial.settle(v);
      trial.d_used_[u] = 1;
      *this = std::move(trial);
      ++stats_.d_prime;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream out;
    out << "sequence builder: " << why << "; state:";
    for (std::size_t e = 0; e < edge_.size(); ++e) {
      if (edead_[e]) continue;
      out << " e" << e << "=(" << edge_[e].tail << "," << edge_[e].head << ")" << (shadow_[e] ? "s" : "") << "[";
      for (int x : cur_.on[e]) out << x << ' ';
      out << "|";
      for (int x : tgt_.on[e]) out << ' ' << x;
      out << "]";
    }
    for (std::size_t v = 0; v < label_.size(); ++v)
      if (!vdead_[v] && (cur_.at[v].kind == kAtVertex || tgt_.at[v].kind == kAtVertex))
        out << " v" << v << "@" << (cur_.at[v].kind == kAtVertex ? cur_.at[v].id : -1) << "/"
            << (tgt_.at[v].kind == kAtVertex ? tgt_.at[v].id : -1);
    throw InternalInvariantError(out.str());
  }

  TaxaPtr taxa_;
  std::vector<int> label_;
  std::vector<char> vdead_;
  std::vector<Edge> edge_;
  std::vector<char> edead_, shadow_;
  std::vector<int> disagreement_;
  Side cur_, tgt_;
  std::vector<char> d_used_;
  std::vector<CanonicalKey> keys_;

 public:
  BuilderStats stats_;
};

}  // namespace

RearrangementSequence mag_to_pr_sequence(const PhyloNetwork& n, const PhyloNetwork& nprime, const AgreementResult& mag,
                                         BuilderStats* stats) {
  if (!same_taxa(n.taxa_ptr(), nprime.taxa_ptr())) throw TaxaMismatchError();
  const AgreementEmbedding& into_n = mag.embedding_n;
  const AgreementEmbedding& into_np = mag.embedding_nprime;
  CanonicalKey kn = canonical_key(n), knp = canonical_key(nprime);
  if (canonical_key(into_n.host) != kn || canonical_key(into_np.host) != knp)
    throw PreconditionError("agreement witness does not belong to these networks");
  const AgreementEmbedding& poor = mag.n_is_richer ? into_np : into_n;
  const AgreementEmbedding& rich = mag.n_is_richer ? into_n : into_np;
  for (const auto* e : {&poor, &rich}) {
    ValidationReport rep = verify_agreement_embedding(*e);
    if (!rep.ok) throw PreconditionError("agreement embedding rejected: " + rep.summary());
  }
  if (!is_normalized(mag.mag, rich)) throw PreconditionError("embedding into the richer network is not normalized");

  Builder b(mag.mag, poor, rich);
  std::vector<CanonicalKey> keys = mag.n_is_richer ? b.run(knp, kn) : b.run(kn, knp);
  if (stats) {
    const BuilderStats& x = b.stats_;
    stats->a += x.a;
    stats->a_shadow += x.a_shadow;
    stats->b += x.b;
    stats->b_shadow += x.b_shadow;
    stats->c += x.c;
    stats->c_general += x.c_general;
    stats->d += x.d;
    stats->d_prime += x.d_prime;
    stats->shadow_added += x.shadow_added;
    stats->shadow_removed += x.shadow_removed;
  }
  if (mag.n_is_richer) std::reverse(keys.begin(), keys.end());
  keys.erase(keys.begin());
  return sequence_through(n, keys, OpSet::PR);
}

RearrangementSequence pr_to_snpr_sequence(const RearrangementSequence& seq) {
  ValidationReport rep = verify_sequence(seq);
  if (!rep.ok) throw PreconditionError("input sequence is not valid: " + rep.summary());
  RearrangementSequence out;
  out.start = seq.start;
  out.opset = OpSet::SNPR;
  out.end = seq.end;
  // `orig` follows the input's edge ids; `cur` is the same network as built
  // here, possibly numbered differently after a simulated head move.
  PhyloNetwork orig = seq.start, cur = seq.start;
  bool renumbered = false;
  for (const SequenceStep& st : seq.steps) {
    RearrangementOp op = st.op;
    if (renumbered) {
      auto iso = find_isomorphism(orig.graph(), cur.graph(), orig.taxa());
      if (!iso) throw InternalInvariantError("converted sequence drifted from its input");
      op.edge = iso->edge_map[op.edge];
      if (op.kind != OpKind::PRMinus) op.target = iso->edge_map[op.target];
    }
    orig = apply_op(orig, st.op);
    if (op.kind != OpKind::PR0Head) {
      cur = apply_op(cur, op);
      out.steps.push_back({op, st.key});
      continue;
    }
    // Head move of e onto f: add an edge from e into f, then remove the
    // lower half of e.
    RearrangementOp plus{OpKind::PRPlus, op.target, op.edge};
    PhyloNetwork mid = apply_op(cur, plus);
    out.steps.push_back({plus, canonical_key(mid)});
    bool found = false;
    for (const RearrangementOp& minus : enumerate_ops(mid, OpSet::SNPR)) {
      if (minus.kind != OpKind::PRMinus) continue;
      PhyloNetwork next = apply_op(mid, minus);
      if (canonical_key(next) == st.key) {
        out.steps.push_back({minus, st.key});
        cur = std::move(next);
        found = true;
        break;
      }
    }
    if (!found) throw InternalInvariantError("no PR- completes the simulated head move " + to_string(op));
    renumbered = true;
  }
  return out;
}

}  // namespace netdist
