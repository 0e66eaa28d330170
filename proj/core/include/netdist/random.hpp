#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "netdist/network.hpp"
#include "netdist/taxa.hpp"

namespace netdist {

// Seeded generator with a platform-independent bounded draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  int index(std::size_t n) { return static_cast<int>(below(n)); }

 private:
  std::mt19937_64 engine_;
};

// Random tree by sequential leaf insertion, then r random valid PR+ moves.
PhyloNetwork random_network(TaxaPtr taxa, int r, std::uint64_t seed);
PhyloNetwork random_network(TaxaPtr taxa, int r, Rng& rng);

// All rooted binary trees on the taxa, one per isomorphism class, sorted by key.
std::vector<PhyloNetwork> enumerate_trees(TaxaPtr taxa);
// All networks with exactly r reticulations, one per class, sorted by key.
std::vector<PhyloNetwork> enumerate_networks(TaxaPtr taxa, int r);

// Number of rooted binary trees on n leaves, (2n-3)!!.
std::uint64_t tree_count(int n);

}  // namespace netdist
