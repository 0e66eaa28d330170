#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netdist/canonical.hpp"
#include "netdist/network.hpp"
#include "netdist/pruned_graph.hpp"

namespace netdist {

enum class PruneEnd { AtTail, AtHead };

struct Pruning {
  int edge = -1;
  PruneEnd end = PruneEnd::AtTail;
  bool operator==(const Pruning&) const = default;
};

bool is_legal_pruning(const PrunedGraph& g, const Pruning& p);
// Throws PreconditionError unless the pruned-at vertex is labelled or has degree three.
PrunedGraph apply_pruning(const PrunedGraph& g, const Pruning& p);
PrunedGraph apply_pruning(const PhyloNetwork& g, const Pruning& p);
std::vector<Pruning> enumerate_prunings(const PrunedGraph& g);
std::vector<Pruning> enumerate_prunings(const PhyloNetwork& g);

// Guest edges map to host paths given as host edge ids.
struct AgreementEmbedding {
  PhyloNetwork host;
  PrunedGraph guest;
  std::vector<int> vertex_map;
  std::vector<std::vector<int>> edge_paths;
};

std::optional<AgreementEmbedding> find_agreement_embedding(const PrunedGraph& guest, const PhyloNetwork& host);
// Violations are named "path", "cover", "collision" and "labels".
ValidationReport verify_agreement_embedding(const AgreementEmbedding& e);

// -1 if the sprout is not attached to an edge, else the guest edge whose
// path has the sprout's image as an inner vertex.
int attached_edge(const AgreementEmbedding& e, int sprout);
// Other guest vertex with the same image, or -1.
int attached_vertex(const AgreementEmbedding& e, int sprout);

// u and v are sprouts of the same orientation and u is attached to v's edge.
// u's edge takes over the part of v's path before u; v moves to u's old image.
AgreementEmbedding embedding_change(const AgreementEmbedding& e, int u, int v);

// A graph whose components are agreement subgraphs plus l disagreement edges.
struct AgreementGraph {
  PrunedGraph graph;
  std::vector<int> disagreement_edges;  // E_1..E_l in order
  // The graph without the disagreement edges, and id maps into it (-1 removed).
  PrunedGraph agreement_part;
  std::vector<int> part_vertex;
  std::vector<int> part_edge;

  int l() const { return static_cast<int>(disagreement_edges.size()); }
  // Sprouts of the agreement subgraphs.
  int s() const { return agreement_part.sprout_count(); }
  // Index j of E_j owning the guest vertex or edge, or -1.
  int disagreement_index_of_vertex(int v) const;
  int disagreement_index_of_edge(int e) const;
};

AgreementGraph make_agreement_graph(PrunedGraph g, std::vector<int> disagreement_edges);

// Embedding of the agreement part (guest = agreement_part) lifted to full ids:
// disagreement edges get empty paths and their vertices -1.
AgreementEmbedding lift_embedding(const AgreementGraph& g, const AgreementEmbedding& part);

// Makes an embedding of g.graph into the reticulation-richer host satisfy:
// no agreement-subgraph sprout is attached to a disagreement edge, and E_i
// is attached to E_j only if j < i. Identity when l = 0.
AgreementEmbedding normalize_embedding(const AgreementGraph& g, const PhyloNetwork& host, const AgreementEmbedding& e);
// The properties normalize_embedding establishes.
bool is_normalized(const AgreementGraph& g, const AgreementEmbedding& e);

struct AgreementCheck {
  bool ok = false;
  std::optional<AgreementEmbedding> into_n;       // guest = agreement part if n is poorer
  std::optional<AgreementEmbedding> into_nprime;  // guest = agreement part if nprime is poorer
};

// Throws TaxaMismatchError.
AgreementCheck is_agreement_graph(const AgreementGraph& g, const PhyloNetwork& n, const PhyloNetwork& nprime);

struct AgreementResult {
  int d = 0;
  int s = 0;
  int l = 0;
  AgreementGraph mag;
  AgreementEmbedding embedding_n;       // guest = mag.agreement_part when n is poorer
  AgreementEmbedding embedding_nprime;  // guest = mag.agreement_part when nprime is poorer
  bool n_is_richer = false;
};

struct SearchOptions {
  int threads = 1;
  // Upper limit on stored states per search; 0 for none.
  long long budget_states = 0;
};

// Exact maximum agreement graph by meet in the middle over pruning counts.
// Throws TaxaMismatchError and BudgetExceededError.
AgreementResult agreement_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const SearchOptions& opt = {});

// Distinct pruned graphs reachable from `start` by exactly k prunings, as
// sorted keys, for k = 0..depth.
std::vector<std::vector<CanonicalKey>> pruning_levels(const PhyloNetwork& start, int depth, const SearchOptions& opt = {});

// {"d","s","l","graph","host_N","host_Nprime","components","embedding_N","embedding_Nprime"}.
// Embedding paths use the edge ids of the host graphs listed alongside.
std::string witness_json(const AgreementResult& r);

}  // namespace netdist
