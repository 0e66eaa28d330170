#include "netdist/canonical.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>

#include "netdist/errors.hpp"

namespace netdist {
namespace {

// Flat adjacency of a vertex subset, in local ids.
struct Csr {
  int n = 0;
  std::vector<int> label;
  std::vector<int> out_off, out_adj, in_off, in_adj;
  int max_degree = 0;
};

Csr make_csr(const Multigraph& g, const std::vector<int>& verts, const std::vector<int>& local) {
  Csr c;
  c.n = static_cast<int>(verts.size());
  c.label.resize(c.n);
  c.out_off.assign(c.n + 1, 0);
  c.in_off.assign(c.n + 1, 0);
  for (int i = 0; i < c.n; ++i) {
    int v = verts[i];
    c.label[i] = g.label(v);
    c.out_off[i + 1] = c.out_off[i] + g.out_degree(v);
    c.in_off[i + 1] = c.in_off[i] + g.in_degree(v);
    c.max_degree = std::max({c.max_degree, g.out_degree(v), g.in_degree(v)});
  }
  c.out_adj.resize(c.out_off[c.n]);
  c.in_adj.resize(c.in_off[c.n]);
  for (int i = 0; i < c.n; ++i) {
    int v = verts[i];
    int k = c.out_off[i];
    for (int e : g.out_edges(v)) c.out_adj[k++] = local[g.edge(e).head];
    k = c.in_off[i];
    for (int e : g.in_edges(v)) c.in_adj[k++] = local[g.edge(e).tail];
  }
  return c;
}

// Re-rank colors by (color, out-neighbour colors, in-neighbour colors) until
// stable. Ranks are assigned in sorted signature order, so the result only
// depends on the isomorphism class of (graph, initial coloring).
constexpr int kSigDegree = 4;
using Sig = std::array<int, 1 + 2 * kSigDegree>;

template <class Signature, class Fill>
int refine_with(const Csr& c, std::vector<int>& color, std::vector<Signature>& sig, std::vector<int>& idx, Fill fill) {
  int n = c.n;
  int classes = -1;
  while (true) {
    for (int v = 0; v < n; ++v) fill(v, sig[v]);
    for (int v = 0; v < n; ++v) idx[v] = v;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    int rank = -1;
    for (int i = 0; i < n; ++i) {
      if (i == 0 || sig[idx[i]] != sig[idx[i - 1]]) ++rank;
      color[idx[i]] = rank;
    }
    int now = rank + 1;
    if (now == classes) return classes;
    classes = now;
  }
}

struct Refiner {
  const Csr& c;
  std::vector<Sig> small;
  std::vector<std::vector<int>> general;
  std::vector<int> idx;

  explicit Refiner(const Csr& csr) : c(csr), idx(csr.n) {
    if (c.max_degree <= kSigDegree)
      small.resize(c.n);
    else
      general.resize(c.n);
  }

  int operator()(std::vector<int>& color) {
    if (!small.empty() || c.n == 0) {
      return refine_with(c, color, small, idx, [&](int v, Sig& s) {
        s.fill(-1);
        s[0] = color[v];
        for (int i = c.out_off[v]; i < c.out_off[v + 1]; ++i) s[1 + i - c.out_off[v]] = color[c.out_adj[i]];
        for (int i = c.in_off[v]; i < c.in_off[v + 1]; ++i) s[1 + kSigDegree + i - c.in_off[v]] = color[c.in_adj[i]];
        std::sort(s.begin() + 1, s.begin() + 1 + kSigDegree);
        std::sort(s.begin() + 1 + kSigDegree, s.end());
      });
    }
    return refine_with(c, color, general, idx, [&](int v, std::vector<int>& s) {
      s.clear();
      s.push_back(color[v]);
      for (int i = c.out_off[v]; i < c.out_off[v + 1]; ++i) s.push_back(color[c.out_adj[i]]);
      std::sort(s.begin() + 1, s.end());
      s.push_back(-1);
      std::size_t mark = s.size();
      for (int i = c.in_off[v]; i < c.in_off[v + 1]; ++i) s.push_back(color[c.in_adj[i]]);
      std::sort(s.begin() + mark, s.end());
    });
  }
};

std::vector<int> code_for(const Csr& c, const std::vector<int>& color) {
  int n = c.n;
  std::vector<int> code;
  code.reserve(2 + n + 2 * c.out_adj.size());
  code.push_back(n);
  code.push_back(static_cast<int>(c.out_adj.size()));
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[color[v]] = v;
  for (int i = 0; i < n; ++i) code.push_back(c.label[order[i]]);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(c.out_adj.size());
  for (int v = 0; v < n; ++v)
    for (int i = c.out_off[v]; i < c.out_off[v + 1]; ++i) edges.emplace_back(color[v], color[c.out_adj[i]]);
  std::sort(edges.begin(), edges.end());
  for (auto [t, h] : edges) {
    code.push_back(t);
    code.push_back(h);
  }
  return code;
}

struct Search {
  const Csr& c;
  Refiner refine;
  std::vector<int> best_code;
  std::vector<int> best_color;

  void run(std::vector<int> color) {
    int classes = refine(color);
    int n = c.n;
    if (classes == n) {
      auto code = code_for(c, color);
      if (best_code.empty() || code < best_code) {
        best_code = std::move(code);
        best_color = color;
      }
      return;
    }
    // Smallest color whose cell has more than one vertex.
    std::vector<int> count(classes, 0);
    for (int x : color) ++count[x];
    int target = 0;
    while (count[target] < 2) ++target;
    for (int v = 0; v < n; ++v) {
      if (color[v] != target) continue;
      std::vector<int> next(n);
      for (int w = 0; w < n; ++w) next[w] = 2 * color[w] + (color[w] == target && w != v ? 1 : 0);
      run(std::move(next));
    }
  }
};

struct ComponentForm {
  std::vector<int> code;
  std::vector<int> order;  // position -> global vertex
};

ComponentForm component_form(const Multigraph& g, const TaxaSet& taxa, const std::vector<int>& verts,
                             const std::vector<int>& local) {
  Csr c = make_csr(g, verts, local);
  std::vector<int> color(c.n);
  for (int i = 0; i < c.n; ++i) {
    int label = c.label[i];
    color[i] = label != kUnlabeled ? label + 1
                                   : taxa.size() + 1 + (c.in_off[i + 1] - c.in_off[i]) * 16 + (c.out_off[i + 1] - c.out_off[i]);
  }
  Search search{c, Refiner(c), {}, {}};
  search.run(std::move(color));
  ComponentForm f;
  f.code = std::move(search.best_code);
  f.order.resize(c.n);
  for (int i = 0; i < c.n; ++i) f.order[search.best_color[i]] = verts[i];
  return f;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Canonical vertex order: components are put in canonical form separately
// and concatenated in code order, which avoids branching over permutations
// of isomorphic components.
std::vector<int> canonical_order(const Multigraph& g, const TaxaSet& taxa) {
  int n = g.vertex_count();
  std::vector<int> parent(n);
  for (int v = 0; v < n; ++v) parent[v] = v;
  for (const Edge& e : g.edges()) {
    int a = find_root(parent, e.tail), b = find_root(parent, e.head);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> comp_of(n, -1), local(n);
  std::vector<std::vector<int>> comps;
  for (int v = 0; v < n; ++v) {
    int r = find_root(parent, v);
    if (comp_of[r] < 0) {
      comp_of[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    local[v] = static_cast<int>(comps[comp_of[r]].size());
    comps[comp_of[r]].push_back(v);
  }
  if (comps.size() <= 1) {
    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    return component_form(g, taxa, all, local).order;
  }
  std::vector<ComponentForm> forms;
  forms.reserve(comps.size());
  for (const auto& comp : comps) forms.push_back(component_form(g, taxa, comp, local));
  std::stable_sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
  std::vector<int> order;
  order.reserve(n);
  for (const auto& f : forms) order.insert(order.end(), f.order.begin(), f.order.end());
  return order;
}

std::vector<int> global_code(const Multigraph& g, const std::vector<int>& color) {
  int n = g.vertex_count();
  std::vector<int> code;
  code.reserve(2 + n + 2 * g.edge_count());
  code.push_back(n);
  code.push_back(g.edge_count());
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[color[v]] = v;
  for (int i = 0; i < n; ++i) code.push_back(g.label(order[i]));
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.emplace_back(color[e.tail], color[e.head]);
  std::sort(edges.begin(), edges.end());
  for (auto [t, h] : edges) {
    code.push_back(t);
    code.push_back(h);
  }
  return code;
}

void put_varint(std::string& out, std::uint64_t x) {
  while (x >= 0x80) {
    out.push_back(static_cast<char>((x & 0x7f) | 0x80));
    x >>= 7;
  }
  out.push_back(static_cast<char>(x));
}

struct Reader {
  const std::string& s;
  std::size_t pos = 0;

  std::uint64_t varint() {
    std::uint64_t x = 0;
    int shift = 0;
    while (true) {
      if (pos >= s.size()) throw PreconditionError("truncated canonical key");
      auto b = static_cast<unsigned char>(s[pos++]);
      x |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return x;
      shift += 7;
    }
  }
  std::string bytes(std::size_t n) {
    if (pos + n > s.size()) throw PreconditionError("truncated canonical key");
    std::string out = s.substr(pos, n);
    pos += n;
    return out;
  }
};

std::vector<std::string> read_taxa(Reader& r) {
  std::vector<std::string> names(r.varint());
  for (auto& name : names) name = r.bytes(r.varint());
  return names;
}

Multigraph read_graph(Reader& r) {
  int n = static_cast<int>(r.varint());
  int m = static_cast<int>(r.varint());
  Multigraph g;
  for (int i = 0; i < n; ++i) g.add_vertex(static_cast<int>(r.varint()) - 2);
  for (int i = 0; i < m; ++i) {
    int t = static_cast<int>(r.varint());
    int h = static_cast<int>(r.varint());
    if (t >= n || h >= n) throw PreconditionError("malformed canonical key");
    g.add_edge(t, h);
  }
  return g;
}

TaxaPtr taxa_for(Reader& r, TaxaPtr taxa) {
  auto names = read_taxa(r);
  if (!taxa) return make_taxa(std::move(names));
  if (taxa->labels() != names) throw TaxaMismatchError();
  return taxa;
}

}  // namespace

CanonicalForm canonical_form(const Multigraph& g, const TaxaSet& taxa) {
  CanonicalForm form;
  int n = g.vertex_count();
  form.order = canonical_order(g, taxa);
  std::vector<int> color(n);
  for (int i = 0; i < n; ++i) color[form.order[i]] = i;
  std::vector<int> code = global_code(g, color);
  std::string& key = form.key;
  put_varint(key, static_cast<std::uint64_t>(taxa.size()));
  for (const auto& name : taxa.labels()) {
    put_varint(key, name.size());
    key += name;
  }
  put_varint(key, static_cast<std::uint64_t>(code[0]));
  put_varint(key, static_cast<std::uint64_t>(code[1]));
  for (int i = 0; i < n; ++i) put_varint(key, static_cast<std::uint64_t>(code[2 + i] + 2));
  for (std::size_t i = 2 + n; i < code.size(); ++i) put_varint(key, static_cast<std::uint64_t>(code[i]));
  return form;
}

CanonicalKey canonical_key(const Multigraph& g, const TaxaSet& taxa) {
  return canonical_form(g, taxa).key;
}

CanonicalKey canonical_key(const PhyloNetwork& g) { return canonical_key(g.graph(), g.taxa()); }
CanonicalKey canonical_key(const PrunedGraph& g) { return canonical_key(g.graph(), g.taxa()); }

std::vector<std::string> decode_taxa(const CanonicalKey& key) {
  Reader r{key};
  return read_taxa(r);
}

Multigraph decode_graph(const CanonicalKey& key) {
  Reader r{key};
  read_taxa(r);
  return read_graph(r);
}

PhyloNetwork decode_network(const CanonicalKey& key, TaxaPtr taxa) {
  Reader r{key};
  taxa = taxa_for(r, std::move(taxa));
  return PhyloNetwork(std::move(taxa), read_graph(r));
}

PrunedGraph decode_pruned(const CanonicalKey& key, TaxaPtr taxa) {
  Reader r{key};
  taxa = taxa_for(r, std::move(taxa));
  return PrunedGraph(std::move(taxa), read_graph(r));
}

std::optional<Isomorphism> find_isomorphism(const Multigraph& a, const Multigraph& b,
                                            const TaxaSet& taxa) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return std::nullopt;
  CanonicalForm fa = canonical_form(a, taxa);
  CanonicalForm fb = canonical_form(b, taxa);
  if (fa.key != fb.key) return std::nullopt;
  Isomorphism iso;
  int n = a.vertex_count();
  iso.vertex_map.assign(n, -1);
  for (int i = 0; i < n; ++i) iso.vertex_map[fa.order[i]] = fb.order[i];
  // Parallel edges are interchangeable: pair them up in id order.
  std::vector<std::pair<std::pair<int, int>, int>> eb;
  for (int e = 0; e < b.edge_count(); ++e) eb.push_back({{b.edge(e).tail, b.edge(e).head}, e});
  std::sort(eb.begin(), eb.end());
  std::vector<char> used(eb.size(), 0);
  iso.edge_map.assign(a.edge_count(), -1);
  for (int e = 0; e < a.edge_count(); ++e) {
    std::pair<int, int> ends{iso.vertex_map[a.edge(e).tail], iso.vertex_map[a.edge(e).head]};
    auto it = std::lower_bound(eb.begin(), eb.end(), std::make_pair(ends, -1));
    while (it != eb.end() && it->first == ends && used[it - eb.begin()]) ++it;
    if (it == eb.end() || it->first != ends) return std::nullopt;
    used[it - eb.begin()] = 1;
    iso.edge_map[e] = it->second;
  }
  return iso;
}

std::string key_digest(const CanonicalKey& key) {
  std::size_t h = std::hash<std::string>{}(key);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016zx", h);
  return buf;
}

}  // namespace netdist
