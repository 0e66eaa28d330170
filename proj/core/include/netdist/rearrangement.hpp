#pragma once

#include <string>
#include <vector>

#include "netdist/canonical.hpp"
#include "netdist/network.hpp"

namespace netdist {

enum class OpKind { PR0Tail, PR0Head, PRPlus, PRMinus };
enum class OpSet { PR, SNPR, RSPR };

const char* to_string(OpKind kind);
const char* to_string(OpSet set);
OpSet parse_opset(const std::string& name);

// One prune-and-regraft move addressed by edge ids of the network it applies to.
//   PR0Tail  detach `edge` = (u,v) at u, regraft u onto `target`.
//   PR0Head  detach `edge` = (u,v) at v, regraft v onto `target`.
//   PRPlus   subdivide `edge` with a new head vertex and `target` with a new
//            tail vertex, then join them. target == edge subdivides the upper
//            half of `edge`, giving a pair of parallel edges.
//   PRMinus  delete `edge` = (u,v) where u is a tree vertex and v a reticulation.
struct RearrangementOp {
  OpKind kind = OpKind::PR0Tail;
  int edge = -1;
  int target = -1;
  bool operator==(const RearrangementOp&) const = default;
};

std::string to_string(const RearrangementOp& op);

// Empty string when op is valid, otherwise the violated clause.
std::string op_violation(const PhyloNetwork& g, const RearrangementOp& op);
bool is_valid_op(const PhyloNetwork& g, const RearrangementOp& op);
bool op_in_set(const RearrangementOp& op, OpSet set);

// Throws InvalidOpError naming the violated clause.
PhyloNetwork apply_op(const PhyloNetwork& g, const RearrangementOp& op);

// Every valid op of the set in a fixed order.
std::vector<RearrangementOp> enumerate_ops(const PhyloNetwork& g, OpSet set);

struct Neighbor {
  RearrangementOp op;
  CanonicalKey key;
  PhyloNetwork network;
};

// Distinct neighbours of g, sorted by key, excluding g itself. The op kept for
// each key is the first in enumeration order.
std::vector<Neighbor> enumerate_neighbors(const PhyloNetwork& g, OpSet set);

// Keys only; same content as enumerate_neighbors. `max_reticulations` < 0
// disables the cap; `capped` is set when a PR+ was skipped because of it.
std::vector<CanonicalKey> neighbor_keys(const PhyloNetwork& g, OpSet set,
                                        int max_reticulations = -1, bool* capped = nullptr);

}  // namespace netdist
