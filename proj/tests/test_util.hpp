#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "netdist/agreement.hpp"
#include "netdist/canonical.hpp"
#include "netdist/network.hpp"
#include "netdist/random.hpp"

namespace testutil {

inline netdist::TaxaPtr taxa(int n) {
  return std::make_shared<const netdist::TaxaSet>(netdist::TaxaSet::numbered(n));
}

// Same graph with shuffled vertex and edge ids.
inline netdist::Multigraph permuted(const netdist::Multigraph& g, netdist::Rng& rng) {
  std::vector<int> vp(g.vertex_count()), ep(g.edge_count());
  std::iota(vp.begin(), vp.end(), 0);
  std::iota(ep.begin(), ep.end(), 0);
  for (int i = static_cast<int>(vp.size()) - 1; i > 0; --i) std::swap(vp[i], vp[rng.index(i + 1)]);
  for (int i = static_cast<int>(ep.size()) - 1; i > 0; --i) std::swap(ep[i], ep[rng.index(i + 1)]);
  std::vector<int> inv(vp.size());
  for (std::size_t i = 0; i < vp.size(); ++i) inv[vp[i]] = static_cast<int>(i);
  netdist::Multigraph h;
  for (std::size_t i = 0; i < vp.size(); ++i) h.add_vertex(g.label(vp[i]));
  for (int e : ep) h.add_edge(inv[g.edge(e).tail], inv[g.edge(e).head]);
  return h;
}

// Agreement distance from pruning levels of both networks: the smallest
// s for which s + 2l prunings of the richer network, minus l bare edges,
// match s prunings of the poorer one.
inline int ad_by_levels(const netdist::PhyloNetwork& n, const netdist::PhyloNetwork& nprime) {
  using namespace netdist;
  int r = reticulation_count(n), rp = reticulation_count(nprime);
  const PhyloNetwork& poor = r > rp ? nprime : n;
  const PhyloNetwork& rich = r > rp ? n : nprime;
  int l = std::abs(r - rp);
  for (int s = 0;; ++s) {
    auto a = pruning_levels(poor, s)[s];
    auto b = pruning_levels(rich, s + 2 * l)[s + 2 * l];
    for (const auto& k : b) {
      PrunedGraph g = decode_pruned(k, rich.taxa_ptr());
      std::vector<int> bare;
      for (int e = 0; e < g.edge_count(); ++e)
        if (g.is_sprout(g.graph().edge(e).tail) && g.is_sprout(g.graph().edge(e).head)) bare.push_back(e);
      if (static_cast<int>(bare.size()) < l) continue;
      bare.resize(l);
      if (std::binary_search(a.begin(), a.end(), canonical_key(remove_bare_edges(g, bare).graph))) return s + l;
    }
  }
}

}  // namespace testutil
