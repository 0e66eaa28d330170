#include "netdist/newick.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "netdist/canonical.hpp"
#include "netdist/errors.hpp"

namespace netdist {
namespace {

struct Node {
  std::vector<int> children;
  std::string name;
  long tag = -1;        // hybrid tag number, -1 if none
  bool internal = false;
  std::size_t offset = 0;
};

bool is_name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && std::string_view("(),;:#[]'\"").find(c) == std::string_view::npos;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  int parse_line() {
    skip_ws();
    int top = parse_subtree();
    skip_ws();
    if (pos_ >= s_.size()) fail("expected ';'");
    if (s_[pos_] != ';') fail(std::string("unexpected '") + s_[pos_] + "', expected ';'");
    ++pos_;
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after ';'");
    return top;
  }

  std::vector<Node> nodes;

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what + " at offset " + std::to_string(pos_), pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  int parse_subtree() {
    skip_ws();
    Node node;
    node.offset = pos_;
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      node.internal = true;
      while (true) {
        node.children.push_back(parse_subtree());
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input, expected ',' or ')'");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail(std::string("unexpected '") + s_[pos_] + "', expected ',' or ')'");
      }
      skip_ws();
      if (pos_ < s_.size() && is_name_char(s_[pos_])) fail("internal node names are not supported");
    } else if (is_name_char(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
      node.name = std::string(s_.substr(start, pos_ - start));
      if (pos_ < s_.size() && s_[pos_] == '#') fail("hybrid tag on a leaf; write (" + node.name + ")#H<k>");
    } else if (c != '#') {
      fail(std::string("unexpected '") + c + "'");
    }
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '#') node.tag = parse_tag();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ':') fail("branch lengths are not supported");
    if (pos_ < s_.size() && s_[pos_] == '[') fail("comments and annotations are not supported");
    if (!node.internal && node.name.empty() && node.tag < 0) fail("expected a subtree");
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size()) - 1;
  }

  long parse_tag() {
    ++pos_;
    if (pos_ >= s_.size() || s_[pos_] != 'H') fail("expected 'H' after '#'");
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || pos_ - start > 9) fail("expected a hybrid number");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void semantic(const std::string& what, std::size_t offset) {
  throw ParseError(what + " at offset " + std::to_string(offset), offset);
}

}  // namespace

PhyloNetwork parse_enewick(std::string_view line, TaxaPtr taxa) {
  Parser p(line);
  int top = p.parse_line();
  const auto& nodes = p.nodes;

  std::map<long, int> definition;
  std::map<long, int> occurrences;
  std::map<long, std::size_t> first_offset;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.tag >= 0) {
      ++occurrences[n.tag];
      first_offset.emplace(n.tag, n.offset);
      if (n.internal) {
        if (definition.count(n.tag)) semantic("hybrid #H" + std::to_string(n.tag) + " defined twice", n.offset);
        definition[n.tag] = static_cast<int>(i);
      }
    }
    if (!n.name.empty()) names.push_back(n.name);
  }
  for (const auto& [tag, count] : occurrences) {
    if (!definition.count(tag)) semantic("hybrid #H" + std::to_string(tag) + " has no subtree", first_offset[tag]);
    if (count != 2)
      semantic("hybrid #H" + std::to_string(tag) + " occurs " + std::to_string(count) + " times, expected 2",
               first_offset[tag]);
  }

  if (!taxa) {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      std::size_t at = 0;
      for (const Node& n : nodes)
        if (n.name == *dup) at = std::max(at, n.offset);
      semantic("duplicate taxon '" + *dup + "'", at);
    }
    for (const Node& n : nodes)
      if (n.name == kRootName) semantic("taxon name '" + kRootName + "' is reserved", n.offset);
    taxa = make_taxa(names);
  }

  Multigraph m;
  int rho = m.add_vertex(kRootLabel);
  std::vector<int> vertex(nodes.size(), -1);
  std::vector<char> seen_taxon(taxa->size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.internal) {
      std::size_t want = n.tag >= 0 ? 1 : 2;
      if (n.children.size() != want) {
        semantic(std::string(n.tag >= 0 ? "reticulation" : "tree vertex") + " has " + std::to_string(n.children.size()) +
                     " children, expected " + std::to_string(want),
                 n.offset);
      }
      vertex[i] = m.add_vertex();
    } else if (!n.name.empty()) {
      auto t = taxa->index_of(n.name);
      if (!t) semantic("unknown taxon '" + n.name + "'", n.offset);
      if (seen_taxon[*t]) semantic("duplicate taxon '" + n.name + "'", n.offset);
      seen_taxon[*t] = 1;
      vertex[i] = m.add_vertex(*t);
    }
  }
  for (int t = 0; t < taxa->size(); ++t)
    if (!seen_taxon[t]) semantic("taxon '" + taxa->name(t) + "' is missing", line.size());
  auto resolve = [&](int i) { return nodes[i].internal ? vertex[i] : (nodes[i].name.empty() ? vertex[definition.at(nodes[i].tag)] : vertex[i]); };
  m.add_edge(rho, resolve(top));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (int c : nodes[i].children) m.add_edge(vertex[i], resolve(c));

  PhyloNetwork g(taxa, std::move(m));
  ValidationReport rep = validate(g);
  if (!rep.ok) {
    if (rep.has("acyclic")) {
      for (const auto& [tag, i] : definition) {
        int v = vertex[i];
        int child = g.graph().edge(g.graph().out_edges(v)[0]).head;
        if (g.graph().descendants_of(child)[v]) semantic("cyclic hybrid reference #H" + std::to_string(tag), nodes[i].offset);
      }
    }
    semantic("invalid network: " + rep.summary(), 0);
  }
  return g;
}

std::vector<ParsedLine> parse_enewick_document(std::string_view text) {
  std::vector<ParsedLine> out;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') {
      try {
        out.push_back({number, parse_enewick(line)});
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(number) + ": " + e.what(), e.offset());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

std::string write_enewick(const PhyloNetwork& g) {
  // Writing the canonical representative makes the text an isomorphism invariant.
  PhyloNetwork c = decode_network(canonical_key(g), g.taxa_ptr());
  const Multigraph& m = c.graph();
  std::vector<int> tag(m.vertex_count(), 0);
  int next_tag = 0;
  std::string out;
  auto write = [&](auto&& self, int v) -> void {
    if (m.label(v) >= 0) {
      out += c.taxa().name(m.label(v));
      return;
    }
    bool reticulation = m.in_degree(v) == 2;
    if (reticulation && tag[v] > 0) {
      out += "#H" + std::to_string(tag[v]);
      return;
    }
    if (reticulation) tag[v] = ++next_tag;
    std::vector<int> children;
    for (int e : m.out_edges(v)) children.push_back(m.edge(e).head);
    std::sort(children.begin(), children.end());
    out += '(';
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i) out += ',';
      self(self, children[i]);
    }
    out += ')';
    if (reticulation) out += "#H" + std::to_string(tag[v]);
  };
  write(write, m.edge(m.out_edges(c.root())[0]).head);
  return out + ";";
}

namespace {

std::string dot_body(const Multigraph& m, const TaxaSet& taxa, bool pruned) {
  std::ostringstream out;
  out << "digraph " << (pruned ? "G" : "N") << " {\n";
  for (int v = 0; v < m.vertex_count(); ++v) {
    out << "  v" << v << " [";
    int label = m.label(v);
    if (label == kRootLabel) {
      out << "label=\"" << kRootName << "\", shape=plaintext";
    } else if (label >= 0) {
      out << "label=\"" << taxa.name(label) << "\", shape=plaintext";
    } else if (m.degree(v) == 1) {
      out << "label=\"\", shape=circle, width=0.12";
    } else if (m.in_degree(v) == 2) {
      out << "label=\"\", shape=box, style=filled, fillcolor=lightcoral, width=0.15, height=0.15";
    } else {
      out << "label=\"\", shape=point";
    }
    out << "];\n";
  }
  for (int e = 0; e < m.edge_count(); ++e) {
    const Edge& ed = m.edge(e);
    out << "  v" << ed.tail << " -> v" << ed.head << " [id=\"e" << e << "\"";
    if (m.in_degree(ed.head) == 2) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_dot(const PhyloNetwork& g) { return dot_body(g.graph(), g.taxa(), false); }
std::string export_dot(const PrunedGraph& g) { return dot_body(g.graph(), g.taxa(), true); }

}  // namespace netdist
