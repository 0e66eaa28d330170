#include "netdist/distances.hpp"

#include <algorithm>
#include <unordered_map>

#include "netdist/errors.hpp"
#include "netdist/newick.hpp"
#include "parallel.hpp"
#include "json.hpp"

namespace netdist {

std::vector<PhyloNetwork> replay(const RearrangementSequence& seq) {
  std::vector<PhyloNetwork> out{seq.start};
  for (const SequenceStep& st : seq.steps) out.push_back(apply_op(out.back(), st.op));
  return out;
}

ValidationReport verify_sequence(const RearrangementSequence& seq) {
  ValidationReport rep;
  PhyloNetwork cur = seq.start;
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const SequenceStep& st = seq.steps[i];
    std::string why;
    if (!op_in_set(st.op, seq.opset))
      why = to_string(st.op.kind) + std::string(" is not a ") + to_string(seq.opset) + " operation";
    else
      why = op_violation(cur, st.op);
    if (!why.empty()) {
      rep.add({"step", "step " + std::to_string(i) + ": " + to_string(st.op) + ": " + why, {}, {st.op.edge}});
      return rep;
    }
    cur = apply_op(cur, st.op);
    if (canonical_key(cur) != st.key) {
      rep.add({"step", "step " + std::to_string(i) + ": result differs from the recorded network", {}, {}});
      return rep;
    }
  }
  if (canonical_key(cur) != seq.end) rep.add({"endpoint", "final network differs from the declared endpoint", {}, {}});
  return rep;
}

RearrangementSequence sequence_through(const PhyloNetwork& start, const std::vector<CanonicalKey>& keys, OpSet set) {
  RearrangementSequence seq;
  seq.start = start;
  seq.opset = set;
  PhyloNetwork cur = start;
  for (const CanonicalKey& k : keys) {
    bool found = false;
    for (const RearrangementOp& op : enumerate_ops(cur, set)) {
      PhyloNetwork next = apply_op(cur, op);
      if (canonical_key(next) == k) {
        seq.steps.push_back({op, k});
        cur = std::move(next);
        found = true;
        break;
      }
    }
    if (!found)
      throw InternalInvariantError("consecutive networks are not one " + std::string(to_string(set)) + " operation apart: " +
                                   write_enewick(cur) + " -> " + write_enewick(decode_network(k, start.taxa_ptr())));
  }
  seq.end = canonical_key(cur);
  return seq;
}

namespace {

using DepthMap = std::unordered_map<CanonicalKey, int>;

struct Frontier {
  DepthMap depth;
  std::vector<CanonicalKey> last;
  int level = 0;
};

// Predecessor chain from `key` back to depth 0 of `side`.
std::vector<CanonicalKey> chain_back(const CanonicalKey& key, const DepthMap& side, OpSet set, int cap,
                                     const TaxaPtr& taxa) {
  std::vector<CanonicalKey> out{key};
  int d = side.at(key);
  while (d > 0) {
    PhyloNetwork g = decode_network(out.back(), taxa);
    CanonicalKey best;
    for (const CanonicalKey& k : neighbor_keys(g, set, cap)) {
      auto it = side.find(k);
      if (it != side.end() && it->second == d - 1) {
        best = k;
        break;
      }
    }
    if (best.empty()) throw InternalInvariantError("search tree has no predecessor");
    out.push_back(best);
    --d;
  }
  return out;
}

DistanceResult bfs_distance(const char* metric, const PhyloNetwork& n, const PhyloNetwork& nprime, OpSet set,
                            const BfsOptions& opt) {
  if (!same_taxa(n.taxa_ptr(), nprime.taxa_ptr())) throw TaxaMismatchError();
  int r = reticulation_count(n), rp = reticulation_count(nprime);
  int cap = opt.cap;
  if (set == OpSet::RSPR) {
    if (r || rp) throw PreconditionError("rspr distance is defined on trees only");
    cap = 0;
  } else {
    if (cap < 0) cap = std::max(r, rp) + 1;
    if (cap < std::max(r, rp)) throw PreconditionError("cap is below the reticulation number of an input network");
  }

  DistanceResult res;
  res.metric = metric;
  CanonicalKey ka = canonical_key(n), kb = canonical_key(nprime);
  bool capped = false;
  Frontier a, b;
  a.depth[ka] = 0;
  a.last = {ka};
  b.depth[kb] = 0;
  b.last = {kb};
  CanonicalKey meet;
  if (ka == kb) meet = ka;
  long long stored = 2;

  while (meet.empty()) {
    if (a.last.empty() || b.last.empty()) break;
    bool grow_a = a.last.size() <= b.last.size();
    Frontier& f = grow_a ? a : b;
    const Frontier& other = grow_a ? b : a;
    auto expanded = detail::parallel_map<std::pair<std::vector<CanonicalKey>, char>>(
        f.last.size(), opt.threads, [&](std::size_t i) {
          bool c = false;
          auto keys = neighbor_keys(decode_network(f.last[i], n.taxa_ptr()), set, set == OpSet::RSPR ? -1 : cap, &c);
          return std::pair{std::move(keys), static_cast<char>(c)};
        });
    std::vector<CanonicalKey> next;
    int best = -1;
    for (auto& [keys, c] : expanded) {
      capped = capped || c;
      for (auto& k : keys) {
        if (f.depth.count(k)) continue;
        f.depth.emplace(k, f.level + 1);
        auto it = other.depth.find(k);
        if (it != other.depth.end() && (best < 0 || it->second < best || (it->second == best && k < meet))) {
          best = it->second;
          meet = k;
        }
        next.push_back(std::move(k));
      }
    }
    f.level += 1;
    f.last = std::move(next);
    stored += static_cast<long long>(f.last.size());
    if (meet.empty() && opt.budget_states > 0 && stored > opt.budget_states)
      throw BudgetExceededError("search budget of " + std::to_string(opt.budget_states) + " states exceeded",
                                a.level + b.level + 1);
  }
  if (meet.empty()) {
    // Unreachable within the cap: report the explored depth as a bound.
    throw BudgetExceededError("target not reachable within the reticulation cap", a.level + b.level + 1);
  }

  auto front = chain_back(meet, a.depth, set, cap, n.taxa_ptr());
  auto back = chain_back(meet, b.depth, set, cap, n.taxa_ptr());
  std::reverse(front.begin(), front.end());
  std::vector<CanonicalKey> path(front.begin() + 1, front.end());
  path.insert(path.end(), back.begin() + 1, back.end());
  res.value = static_cast<int>(path.size());
  res.exhausted = !capped;
  res.sequence = sequence_through(n, path, set);
  return res;
}

}  // namespace

DistanceResult pr_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const BfsOptions& opt) {
  return bfs_distance("pr", n, nprime, OpSet::PR, opt);
}
DistanceResult snpr_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const BfsOptions& opt) {
  return bfs_distance("snpr", n, nprime, OpSet::SNPR, opt);
}
DistanceResult rspr_distance(const PhyloNetwork& t, const PhyloNetwork& tprime, const BfsOptions& opt) {
  return bfs_distance("rspr", t, tprime, OpSet::RSPR, opt);
}

DistanceResult ad_distance(const PhyloNetwork& n, const PhyloNetwork& nprime, const SearchOptions& opt) {
  DistanceResult res;
  res.metric = "ad";
  res.agreement = agreement_distance(n, nprime, opt);
  res.value = res.agreement->d;
  return res;
}

DistanceResult distance(const std::string& metric, const PhyloNetwork& n, const PhyloNetwork& nprime,
                        const BfsOptions& opt) {
  if (metric == "ad") return ad_distance(n, nprime, SearchOptions{opt.threads, opt.budget_states});
  if (metric == "pr") return pr_distance(n, nprime, opt);
  if (metric == "snpr") return snpr_distance(n, nprime, opt);
  if (metric == "rspr") return rspr_distance(n, nprime, opt);
  throw PreconditionError("unknown metric '" + metric + "'");
}

std::vector<std::vector<int>> distance_table(const std::vector<PhyloNetwork>& nets, OpSet set, int cap, int threads) {
  std::size_t count = nets.size();
  std::vector<CanonicalKey> keys;
  for (const auto& g : nets) keys.push_back(canonical_key(g));
  return detail::parallel_map<std::vector<int>>(count, threads, [&](std::size_t i) {
    std::vector<int> row(count, -1);
    std::unordered_map<CanonicalKey, std::vector<std::size_t>> wanted;
    for (std::size_t j = 0; j < count; ++j) wanted[keys[j]].push_back(j);
    std::size_t left = count;
    DepthMap seen{{keys[i], 0}};
    std::vector<CanonicalKey> level{keys[i]};
    for (int d = 0; !level.empty() && left > 0; ++d) {
      std::vector<CanonicalKey> next;
      for (const auto& k : level) {
        auto it = wanted.find(k);
        if (it != wanted.end()) {
          for (std::size_t j : it->second) row[j] = d;
          left -= it->second.size();
          wanted.erase(it);
        }
        for (auto& nk : neighbor_keys(decode_network(k, nets[i].taxa_ptr()), set, cap))
          if (seen.emplace(nk, d + 1).second) next.push_back(std::move(nk));
      }
      level = std::move(next);
    }
    return row;
  });
}

namespace {

// Same moves with edge ids of `start`, an isomorphic copy of seq.start.
RearrangementSequence rebase(const RearrangementSequence& seq, const PhyloNetwork& start) {
  RearrangementSequence out = seq;
  out.start = start;
  PhyloNetwork orig = seq.start, cur = start;
  for (SequenceStep& st : out.steps) {
    auto iso = find_isomorphism(orig.graph(), cur.graph(), orig.taxa());
    if (!iso) throw InternalInvariantError("sequence start is not isomorphic to its rebased copy");
    orig = apply_op(orig, st.op);
    st.op.edge = iso->edge_map[st.op.edge];
    if (st.op.kind != OpKind::PRMinus) st.op.target = iso->edge_map[st.op.target];
    cur = apply_op(cur, st.op);
  }
  return out;
}

// Edge ids refer to the network obtained by parsing "start" and then
// applying the earlier steps.
nlohmann::ordered_json sequence_to_json(const RearrangementSequence& raw) {
  const std::string start = write_enewick(raw.start);
  const RearrangementSequence seq = rebase(raw, parse_enewick(start, raw.start.taxa_ptr()));
  nlohmann::ordered_json out;
  out["opset"] = to_string(seq.opset);
  out["start"] = start;
  out["length"] = seq.length();
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const SequenceStep& st : seq.steps) {
    nlohmann::ordered_json js;
    js["op"] = to_string(st.op.kind);
    js["edge"] = st.op.edge;
    if (st.op.kind != OpKind::PRMinus) js["target"] = st.op.target;
    js["network"] = write_enewick(decode_network(st.key, seq.start.taxa_ptr()));
    steps.push_back(std::move(js));
  }
  out["steps"] = std::move(steps);
  return out;
}

}  // namespace

std::string sequence_json(const RearrangementSequence& seq) { return sequence_to_json(seq).dump(); }

std::string distance_json(const DistanceResult& r, bool with_witness) {
  nlohmann::ordered_json out;
  out["metric"] = r.metric;
  out["value"] = r.value;
  out["exhausted"] = r.exhausted;
  if (with_witness) {
    if (r.agreement)
      out["witness"] = nlohmann::ordered_json::parse(witness_json(*r.agreement));
    else if (r.sequence)
      out["witness"] = sequence_to_json(*r.sequence);
    else
      out["witness"] = nullptr;
  }
  return out.dump();
}

}  // namespace netdist
