#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "netdist/distances.hpp"
#include "netdist/errors.hpp"
#include "netdist/newick.hpp"
#include "netdist/random.hpp"
#include "netdist/rearrangement.hpp"

namespace netdist::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Source {
  std::string where;  // "inline" or "path:line"
  std::string text;
};

// Arguments naming an existing file contribute one entry per non-blank line
// that does not start with '#'; anything else is an inline eNewick string.
std::vector<Source> sources(const std::vector<std::string>& inputs) {
  std::vector<Source> out;
  for (const std::string& in : inputs) {
    if (!std::filesystem::is_regular_file(in)) {
      out.push_back({"inline", in});
      continue;
    }
    std::ifstream f(in);
    std::string line;
    for (int n = 1; std::getline(f, line); ++n) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      out.push_back({in + ":" + std::to_string(n), line});
    }
  }
  return out;
}

PhyloNetwork parse_source(const Source& s) {
  try {
    return parse_enewick(s.text);
  } catch (const ParseError& e) {
    if (s.where == "inline") throw;
    throw ParseError(s.where + ": " + e.what(), e.offset());
  }
}

std::vector<PhyloNetwork> networks(const std::vector<std::string>& inputs) {
  std::vector<PhyloNetwork> out;
  for (const Source& s : sources(inputs)) out.push_back(parse_source(s));
  return out;
}

std::pair<PhyloNetwork, PhyloNetwork> pair_of(const std::vector<std::string>& inputs) {
  auto nets = networks(inputs);
  if (nets.size() != 2)
    throw CLI::ValidationError("inputs", "expected two networks, got " + std::to_string(nets.size()));
  return {std::move(nets[0]), std::move(nets[1])};
}

void print_networks(std::ostream& out, const std::string& format, const std::vector<PhyloNetwork>& nets) {
  if (format == "dot") {
    for (const auto& g : nets) out << export_dot(g);
  } else if (format == "enewick") {
    for (const auto& g : nets) out << write_enewick(g) << '\n';
  } else {
    Json arr = Json::array();
    for (const auto& g : nets) arr.push_back(write_enewick(g));
    out << arr.dump() << '\n';
  }
}

std::vector<PhyloNetwork> path_of(const RearrangementSequence& seq) {
  std::vector<PhyloNetwork> nets{seq.start};
  for (const auto& st : seq.steps) nets.push_back(decode_network(st.key, seq.start.taxa_ptr()));
  return nets;
}

void check_sequence(const RearrangementSequence& seq) {
  ValidationReport rep = verify_sequence(seq);
  if (!rep.ok) throw InternalInvariantError("emitted sequence does not verify: " + rep.summary());
}

struct Options {
  std::vector<std::string> inputs;
  std::string metric = "ad";
  std::string sequence_metric = "pr";
  std::string ops = "pr";
  std::string format = "json";
  int cap = -1;
  int threads = 1;
  long long budget = 0;
  std::uint64_t seed = 1;
  bool witness = false;
  int taxa = 3;
  int reticulations = 0;
  int random = 0;
};

int cmd_validate(const Options& o, std::ostream& out) {
  Json arr = Json::array();
  std::vector<PhyloNetwork> good;
  bool all_ok = true;
  for (const Source& s : sources(o.inputs)) {
    Json rec;
    rec["source"] = s.where;
    try {
      PhyloNetwork g = parse_source(s);
      ValidationReport rep = validate(g);
      rec["ok"] = rep.ok;
      rec["leaves"] = g.taxa().size();
      rec["reticulations"] = reticulation_count(g);
      if (!rep.ok) rec["error"] = rep.summary();
      all_ok = all_ok && rep.ok;
      if (rep.ok) good.push_back(std::move(g));
    } catch (const ParseError& e) {
      rec["ok"] = false;
      rec["error"] = e.what();
      rec["offset"] = e.offset();
      all_ok = false;
    }
    arr.push_back(std::move(rec));
  }
  if (o.format == "json")
    out << arr.dump() << '\n';
  else
    print_networks(out, o.format, good);
  if (!all_ok)
    for (const auto& rec : arr)
      if (!rec["ok"].get<bool>()) spdlog::info("{}: {}", rec["source"].get<std::string>(), rec["error"].get<std::string>());
  return all_ok ? kOk : kData;
}

int cmd_distance(const Options& o, std::ostream& out) {
  auto [a, b] = pair_of(o.inputs);
  BfsOptions bo{o.cap, o.threads, o.budget};
  auto t0 = std::chrono::steady_clock::now();
  DistanceResult r = distance(o.metric, a, b, bo);
  spdlog::debug("{} distance {} in {:.3f}s", o.metric, r.value,
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  if (o.witness) {
    if (r.sequence) check_sequence(*r.sequence);
    if (r.agreement && !is_agreement_graph(r.agreement->mag, a, b).ok)
      throw InternalInvariantError("agreement witness does not verify");
  }
  if (o.format == "json") {
    out << distance_json(r, o.witness) << '\n';
  } else if (o.format == "enewick") {
    out << r.value << '\n';
    if (o.witness && r.sequence) print_networks(out, "enewick", path_of(*r.sequence));
  } else {
    if (!o.witness) throw CLI::ValidationError("--format", "dot output needs --witness");
    if (r.agreement)
      out << export_dot(r.agreement->mag.graph);
    else
      print_networks(out, "dot", path_of(*r.sequence));
  }
  return kOk;
}

int cmd_neighbors(const Options& o, std::ostream& out) {
  auto nets = networks(o.inputs);
  if (nets.size() != 1) throw CLI::ValidationError("inputs", "expected one network");
  OpSet set = parse_opset(o.ops);
  if (set == OpSet::RSPR && !nets[0].is_tree()) throw PreconditionError("rspr neighbours are defined on trees only");
  Json arr = Json::array();
  std::vector<PhyloNetwork> list;
  for (const Neighbor& nb : enumerate_neighbors(nets[0], set)) {
    if (o.cap >= 0 && reticulation_count(nb.network) > o.cap) continue;
    Json rec;
    rec["op"] = to_string(nb.op.kind);
    rec["edge"] = nb.op.edge;
    if (nb.op.kind != OpKind::PRMinus) rec["target"] = nb.op.target;
    rec["network"] = write_enewick(nb.network);
    arr.push_back(std::move(rec));
    list.push_back(nb.network);
  }
  if (o.format == "json")
    out << arr.dump() << '\n';
  else
    print_networks(out, o.format, list);
  return kOk;
}

int cmd_sequence(const Options& o, std::ostream& out) {
  auto [a, b] = pair_of(o.inputs);
  AgreementResult mag = agreement_distance(a, b, SearchOptions{o.threads, o.budget});
  RearrangementSequence seq = mag_to_pr_sequence(a, b, mag);
  if (o.sequence_metric == "snpr") seq = pr_to_snpr_sequence(seq);
  check_sequence(seq);
  if (o.format == "json") {
    Json js;
    js["agreement_distance"] = mag.d;
    js["sequence"] = Json::parse(sequence_json(seq));
    out << js.dump() << '\n';
  } else {
    print_networks(out, o.format, path_of(seq));
  }
  return kOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  auto taxa = std::make_shared<const TaxaSet>(TaxaSet::numbered(o.taxa));
  std::vector<PhyloNetwork> nets;
  if (o.random > 0) {
    Rng rng(o.seed);
    for (int i = 0; i < o.random; ++i) nets.push_back(random_network(taxa, o.reticulations, rng));
  } else {
    nets = enumerate_networks(taxa, o.reticulations);
  }
  spdlog::debug("{} networks", nets.size());
  print_networks(out, o.format, nets);
  return kOk;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  struct Check {
    const char* name;
    bool (*fn)(std::uint64_t);
  };
  static const Check checks[] = {
      {"enewick roundtrip", [](std::uint64_t seed) {
         Rng rng(seed);
         for (int i = 0; i < 50; ++i) {
           auto taxa = std::make_shared<const TaxaSet>(TaxaSet::numbered(1 + rng.index(5)));
           PhyloNetwork g = random_network(taxa, rng.index(3), rng);
           if (canonical_key(parse_enewick(write_enewick(g))) != canonical_key(g)) return false;
         }
         return true;
       }},
      {"agreement equals rspr on 3-leaf trees", [](std::uint64_t) {
         auto trees = enumerate_trees(std::make_shared<const TaxaSet>(TaxaSet::numbered(3)));
         for (const auto& a : trees)
           for (const auto& b : trees)
             if (agreement_distance(a, b).d != rspr_distance(a, b).value) return false;
         return true;
       }},
      {"bounds on random pairs", [](std::uint64_t seed) {
         Rng rng(seed);
         auto taxa = std::make_shared<const TaxaSet>(TaxaSet::numbered(3));
         for (int i = 0; i < 10; ++i) {
           PhyloNetwork a = random_network(taxa, rng.index(2), rng), b = random_network(taxa, rng.index(2), rng);
           int ad = agreement_distance(a, b).d, pr = pr_distance(a, b).value;
           if (ad > pr || pr > 3 * ad) return false;
         }
         return true;
       }},
      {"constructive sequences verify", [](std::uint64_t seed) {
         Rng rng(seed);
         auto taxa = std::make_shared<const TaxaSet>(TaxaSet::numbered(4));
         for (int i = 0; i < 10; ++i) {
           PhyloNetwork a = random_network(taxa, rng.index(3), rng), b = random_network(taxa, rng.index(3), rng);
           AgreementResult r = agreement_distance(a, b);
           RearrangementSequence seq = mag_to_pr_sequence(a, b, r);
           if (!verify_sequence(seq).ok || seq.length() > 3 * r.d) return false;
           if (!verify_sequence(pr_to_snpr_sequence(seq)).ok) return false;
         }
         return true;
       }},
  };
  bool all = true;
  Json arr = Json::array();
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.fn(o.seed);
    } catch (const std::exception& e) {
      spdlog::error("{}: {}", c.name, e.what());
    }
    all = all && ok;
    if (o.format == "json")
      arr.push_back({{"check", c.name}, {"ok", ok}});
    else
      out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
  }
  if (o.format == "json") out << arr.dump() << '\n';
  return all ? kOk : kInternal;
}

void setup_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("netdist", sink);
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("NETDIST_LOG");
  std::string level = env ? env : "off";
  if (level == "1") level = "debug";
  logger->set_level(spdlog::level::from_str(level));
  spdlog::set_default_logger(logger);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging(err);
  Options o;
  CLI::App app{"Distances between rooted binary phylogenetic networks", "netdist"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"json", "enewick", "dot"};
  const std::vector<std::string> metrics{"ad", "pr", "snpr", "rspr"};

  auto add_inputs = [&](CLI::App* c) {
    c->add_option("inputs", o.inputs, "eNewick strings or files with one network per line")->required();
  };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Parse and validate networks");
  add_inputs(validate_cmd);
  add_format(validate_cmd);

  CLI::App* distance_cmd = app.add_subcommand("distance", "Distance between two networks");
  add_inputs(distance_cmd);
  distance_cmd->add_option("--metric", o.metric)->check(CLI::IsMember(metrics))->capture_default_str();
  distance_cmd->add_option("--cap", o.cap, "Reticulation cap for intermediates, -1 for max(r, r') + 1")
      ->capture_default_str();
  distance_cmd->add_option("--threads", o.threads)->check(CLI::PositiveNumber)->capture_default_str();
  distance_cmd->add_option("--budget-states", o.budget, "State budget, 0 for none")->check(CLI::NonNegativeNumber);
  distance_cmd->add_flag("--witness", o.witness, "Include a verified witness");
  add_format(distance_cmd);

  CLI::App* neighbors_cmd = app.add_subcommand("neighbors", "Networks one operation away");
  add_inputs(neighbors_cmd);
  neighbors_cmd->add_option("--ops", o.ops)->check(CLI::IsMember({"pr", "snpr", "rspr"}))->capture_default_str();
  neighbors_cmd->add_option("--cap", o.cap, "Drop neighbours with more reticulations, -1 for no cap");
  add_format(neighbors_cmd);

  CLI::App* sequence_cmd = app.add_subcommand("sequence", "Constructive sequence from a maximum agreement graph");
  add_inputs(sequence_cmd);
  sequence_cmd->add_option("--metric", o.sequence_metric)->check(CLI::IsMember({"pr", "snpr"}))->capture_default_str();
  sequence_cmd->add_option("--threads", o.threads)->check(CLI::PositiveNumber);
  sequence_cmd->add_option("--budget-states", o.budget)->check(CLI::NonNegativeNumber);
  add_format(sequence_cmd);

  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "All or random networks of a given size");
  enumerate_cmd->add_option("--taxa", o.taxa)->check(CLI::Range(1, 8))->capture_default_str();
  enumerate_cmd->add_option("--reticulations", o.reticulations)->check(CLI::Range(0, 6))->capture_default_str();
  enumerate_cmd->add_option("--random", o.random, "Sample this many networks instead")->check(CLI::NonNegativeNumber);
  enumerate_cmd->add_option("--seed", o.seed)->capture_default_str();
  add_format(enumerate_cmd);

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Quick internal consistency checks");
  selftest_cmd->add_option("--seed", o.seed)->capture_default_str();
  add_format(selftest_cmd);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (distance_cmd->parsed()) return cmd_distance(o, out);
    if (neighbors_cmd->parsed()) return cmd_neighbors(o, out);
    if (sequence_cmd->parsed()) return cmd_sequence(o, out);
    if (enumerate_cmd->parsed()) return cmd_enumerate(o, out);
    return cmd_selftest(o, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kData;
  } catch (const BudgetExceededError& e) {
    err << "budget exceeded: " << e.what() << "; distance is at least " << e.lower_bound() << '\n';
    return kBudget;
  } catch (const InternalInvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace netdist::cli
