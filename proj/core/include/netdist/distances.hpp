#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netdist/agreement.hpp"
#include "netdist/canonical.hpp"
#include "netdist/network.hpp"
#include "netdist/rearrangement.hpp"

namespace netdist {

struct SequenceStep {
  RearrangementOp op;
  CanonicalKey key;  // key of the network after this step
};

struct RearrangementSequence {
  PhyloNetwork start;
  std::vector<SequenceStep> steps;
  OpSet opset = OpSet::PR;
  CanonicalKey end;  // declared endpoint

  int length() const { return static_cast<int>(steps.size()); }
};

// Networks visited by the sequence, start first. Throws InvalidOpError.
std::vector<PhyloNetwork> replay(const RearrangementSequence& seq);

// Violations: "step" (detail names the index) and "endpoint".
ValidationReport verify_sequence(const RearrangementSequence& seq);

// Sequence through the given networks: each consecutive pair must be one op
// of `set` apart. Throws InternalInvariantError otherwise.
RearrangementSequence sequence_through(const PhyloNetwork& start, const std::vector<CanonicalKey>& keys, OpSet set);

struct DistanceResult {
  std::string metric;  // "ad", "pr", "snpr" or "rspr"
  int value = 0;
  bool exhausted = true;
  std::optional<RearrangementSequence> sequence;
  std::optional<AgreementResult> agreement;
};

struct BfsOptions {
  int cap = -1;  // maximum reticulations in intermediates, -1 for max(r, r') + 1
  int threads = 1;
  long long budget_states = 0;  // 0 for none
};

// Bidirectional BFS over canonical keys. `exhausted` is false when the
// reticulation cap removed some move, in which case the value is the exact
// distance within the cap. Throws TaxaMismatchError, PreconditionError and
// BudgetExceededError.
DistanceResult pr_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const BfsOptions& opt = {});
DistanceResult snpr_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const BfsOptions& opt = {});
DistanceResult rspr_distance(const PhyloNetwork& t, const PhyloNetwork& tprime, const BfsOptions& opt = {});
DistanceResult ad_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const SearchOptions& opt = {});

DistanceResult distance(const std::string& metric, const PhyloNetwork& n, const PhyloNetwork& nprime,
                        const BfsOptions& opt = {});

// All pairwise distances among `nets` under one op set by single-source BFS
// from every network. Entries are -1 when unreachable within the cap.
std::vector<std::vector<int>> distance_table(const std::vector<PhyloNetwork>& nets, OpSet set, int cap,
                                             int threads = 1);

// How often each case of the construction fired.
struct BuilderStats {
  int a = 0, a_shadow = 0;  // (A), (A')
  int b = 0, b_shadow = 0;  // (B), (B')
  int c = 0, c_general = 0; // (C)/(C'), (C'')
  int d = 0, d_prime = 0;   // (D), (D')
  int shadow_added = 0, shadow_removed = 0;
};

// PR-sequence from n to nprime of length at most 3 d, built from a maximum
// agreement graph. Case counts are added to `stats`. Throws PreconditionError
// and InternalInvariantError.
RearrangementSequence mag_to_pr_sequence(const PhyloNetwork& n, const PhyloNetwork& nprime, const AgreementResult& mag,
                                         BuilderStats* stats = nullptr);

// Replaces every head PR0 by a PR+ followed by a PR-.
RearrangementSequence pr_to_snpr_sequence(const RearrangementSequence& seq);

std::string distance_json(const DistanceResult& r, bool with_witness);
std::string sequence_json(const RearrangementSequence& seq);

}  // namespace netdist
