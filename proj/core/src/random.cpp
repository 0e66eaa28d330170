#include "netdist/random.hpp"

#include <map>

#include "graph_edit.hpp"
#include "netdist/canonical.hpp"
#include "netdist/errors.hpp"
#include "netdist/rearrangement.hpp"

namespace netdist {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("empty range");
  // Rejection sampling keeps the draw identical across standard libraries.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  while (true) {
    std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

namespace {

// Attach a new leaf for `taxon` on edge e.
PhyloNetwork insert_leaf(const PhyloNetwork& g, int e, int taxon) {
  detail::GraphEdit ed(g.graph());
  int x = ed.subdivide(e);
  int leaf = ed.add_vertex(taxon);
  ed.add_edge(x, leaf);
  return PhyloNetwork(g.taxa_ptr(), ed.compact());
}

}  // namespace

PhyloNetwork random_network(TaxaPtr taxa, int r, Rng& rng) {
  if (r < 0) throw PreconditionError("reticulation count must be non-negative");
  PhyloNetwork g = single_leaf_network(taxa);
  for (int t = 1; t < taxa->size(); ++t) g = insert_leaf(g, rng.index(g.edge_count()), t);
  for (int i = 0; i < r; ++i) {
    std::vector<RearrangementOp> plus;
    for (const auto& op : enumerate_ops(g, OpSet::PR))
      if (op.kind == OpKind::PRPlus) plus.push_back(op);
    g = apply_op(g, plus[rng.index(plus.size())]);
  }
  return g;
}

PhyloNetwork random_network(TaxaPtr taxa, int r, std::uint64_t seed) {
  Rng rng(seed);
  return random_network(std::move(taxa), r, rng);
}

std::vector<PhyloNetwork> enumerate_trees(TaxaPtr taxa) {
  std::map<CanonicalKey, PhyloNetwork> level;
  PhyloNetwork start = single_leaf_network(taxa);
  level.emplace(canonical_key(start), start);
  for (int t = 1; t < taxa->size(); ++t) {
    std::map<CanonicalKey, PhyloNetwork> next;
    for (const auto& [k, g] : level)
      for (int e = 0; e < g.edge_count(); ++e) {
        PhyloNetwork h = insert_leaf(g, e, t);
        next.emplace(canonical_key(h), std::move(h));
      }
    level = std::move(next);
  }
  std::vector<PhyloNetwork> out;
  for (auto& [k, g] : level) out.push_back(std::move(g));
  return out;
}

std::vector<PhyloNetwork> enumerate_networks(TaxaPtr taxa, int r) {
  // Every network with r >= 1 reticulations has a PR- neighbour with r - 1,
  // so the PR+ closure of level r - 1 is complete.
  std::vector<PhyloNetwork> level = enumerate_trees(taxa);
  for (int i = 0; i < r; ++i) {
    std::map<CanonicalKey, PhyloNetwork> next;
    for (const auto& g : level)
      for (const auto& op : enumerate_ops(g, OpSet::PR)) {
        if (op.kind != OpKind::PRPlus) continue;
        PhyloNetwork h = apply_op(g, op);
        CanonicalKey k = canonical_key(h);
        if (!next.count(k)) next.emplace(std::move(k), std::move(h));
      }
    level.clear();
    for (auto& [k, g] : next) level.push_back(std::move(g));
  }
  return level;
}

std::uint64_t tree_count(int n) {
  std::uint64_t c = 1;
  for (int k = 3; k <= 2 * n - 3; k += 2) c *= static_cast<std::uint64_t>(k);
  return c;
}

}  // namespace netdist
