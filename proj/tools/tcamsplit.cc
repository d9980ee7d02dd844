// tcamsplit: command-line front end.
//
// Exit codes: 0 success, 1 input error, 2 internal invariant violation.

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcamsplit/bit_matcher.h"
#include "tcamsplit/forced_constructions.h"
#include "tcamsplit/harness.h"
#include "tcamsplit/oracles.h"
#include "tcamsplit/order_search.h"
#include "tcamsplit/segmented_coloring.h"
#include "tcamsplit/structure_analysis.h"

using namespace tcamsplit;
using json = nlohmann::json;

namespace {

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

void ensure(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

struct Globals {
  bool json = false;
  std::optional<unsigned> width;
  unsigned max_oracle_sum = kBruteLambdaMaxSum;
};

std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Accepts "13,13,6", "[13, 13, 6]" and similar.
Partition read_partition(std::string text, const Globals& g) {
  std::erase_if(text, [](char c) { return c == '[' || c == ']' || std::isspace(static_cast<unsigned char>(c)); });
  return validate_partition(parse_partition(text), g.width);
}

std::vector<int> read_order(std::string text) {
  std::erase_if(text, [](char c) { return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c)); });
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad order entry '" + item + "'");
    }
  }
  return out;
}

std::vector<TargetPair> read_pairs(const std::string& text) {
  static const std::regex pair_re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::vector<TargetPair> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pair_re); it != std::sregex_iterator(); ++it)
    out.emplace_back(std::stoi((*it)[1]), std::stoi((*it)[2]));
  std::string tail = std::regex_replace(text, pair_re, "");
  std::erase_if(tail, [](char c) { return c == ';' || std::isspace(static_cast<unsigned char>(c)); });
  if (!tail.empty()) throw Error(ErrorCode::ParseError, "bad pair list '" + text + "'");
  return out;
}

std::string format_order(const std::vector<int>& o) {
  std::string s;
  for (std::size_t i = 0; i < o.size(); ++i) s += (i ? "," : "") + std::to_string(o[i]);
  return s;
}

json table_json(const TcamTable& t) {
  json rules = json::array();
  for (const auto& r : t.rules) rules.push_back({{"pattern", format_prefix(r.prefix, t.width)}, {"target", r.target}});
  return rules;
}

json weights_json(const WeightVector& w) {
  json a = json::array();
  for (const auto& x : w) a.push_back(to_string(x));
  return a;
}

json sequence_json(const TransactionSequence& s) {
  json a = json::array();
  for (const auto& t : s) a.push_back(format_transaction(t));
  return a;
}

// Fast run-length coloring, materialized as a table.
TcamTable segmented_table(const Partition& p, const std::vector<int>& order) {
  auto fc = color_segments_fast(segments_in_order(p, order));
  auto table = table_from_coloring(coloring_from_fast(fc, p.width));
  ensure(table.rules.size() == fc.count, "segmented table size differs from conflict count");
  return table;
}

int cmd_synth(const Globals& g, const std::string& text) {
  Partition p = read_partition(text, g);
  TcamTable t = synthesize_table(p);
  ensure(t.rules.size() == lambda(p), "synthesized table is not minimal");
  if (g.json) {
    std::cout << json{{"partition", weights_json(p.weights)}, {"width", p.width}, {"lambda", t.rules.size()},
                      {"rules", table_json(t)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << format_table(t) << "# rules=" << t.rules.size() << "\n";
  }
  return 0;
}

int cmd_segmented(const Globals& g, const std::string& text, const std::string& order_text,
                  const std::string& search) {
  Partition p = read_partition(text, g);
  std::vector<int> order;
  if (!order_text.empty()) {
    order = read_order(order_text);
  } else if (search == "exhaustive") {
    order = exhaustive_best_order(p).best_order;
  } else if (search == "derand") {
    order = derandomized_order(p);
  } else if (search == "greedy") {
    order = greedy_order(p);
  } else if (search.empty()) {
    for (std::size_t i = 1; i <= p.k(); ++i) order.push_back(static_cast<int>(i));
  } else {
    throw Error(ErrorCode::ParseError, "unknown search '" + search + "'");
  }
  TcamTable t = segmented_table(p, order);
  const std::size_t lam = lambda(p);
  ensure(t.rules.size() >= lam, "segmented table below lambda");
  const std::size_t gap = t.rules.size() - lam;
  if (g.json) {
    std::cout << json{{"partition", weights_json(p.weights)}, {"width", p.width}, {"order", order},
                      {"rules", table_json(t)}, {"size", t.rules.size()}, {"lambda", lam}, {"gap", gap}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << format_table(t) << "# order=" << format_order(order) << " rules=" << t.rules.size()
              << " lambda=" << lam << " gap=" << gap << "\n";
  }
  return 0;
}

int cmd_lambda(const Globals& g, const std::string& text, bool oracle) {
  Partition p = read_partition(text, g);
  const std::size_t lam = lambda(p);
  std::optional<std::size_t> brute;
  if (oracle) {
    brute = brute_lambda(p, g.max_oracle_sum);
    ensure(*brute == lam, "bit matcher disagrees with the search oracle");
  }
  if (g.json) {
    json out{{"partition", weights_json(p.weights)}, {"lambda", lam}};
    if (brute) out["oracle"] = *brute;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << lam << "\n";
  }
  return 0;
}

json fragmentation_json(const FragmentationProfile& f) {
  return {{"segments", f.segments}, {"max", f.max_segments}};
}

void print_analysis(const Globals& g, const TransactionsGraph& graph, const FragmentationProfile* frag) {
  if (g.json) {
    json edges = json::array();
    for (auto [i, j] : graph.edges) edges.push_back({i, j});
    json out{{"k", graph.k},        {"L", graph.cutoff},  {"A_L", sequence_json(graph.contributing)},
             {"edges", edges},      {"clique", graph.is_clique()}};
    if (frag) out["fragmentation"] = fragmentation_json(*frag);
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << "L=" << graph.cutoff << "\nA_L:";
  for (const auto& t : graph.contributing) std::cout << " " << format_transaction(t) << ";";
  std::cout << "\nedges:";
  for (auto [i, j] : graph.edges) std::cout << " (" << i << "," << j << ")";
  std::cout << "\nclique: " << (graph.is_clique() ? "yes" : "no") << "\n";
  if (frag) {
    std::cout << "fragmentation: m=[";
    for (std::size_t i = 0; i < frag->segments.size(); ++i) std::cout << (i ? "," : "") << frag->segments[i];
    std::cout << "] M=" << frag->max_segments << "\n";
  }
}

int cmd_analyze(const Globals& g, const std::string& seq_file, const std::string& table_file) {
  if (seq_file.empty() == table_file.empty())
    throw Error(ErrorCode::ParseError, "analyze needs exactly one of --sequence, --table");
  if (!table_file.empty()) {
    TrieColoring c = coloring_from_table(parse_table(read_file(table_file)));
    Partition p = validate_partition(induced_partition(c), c.width);
    auto graph = transactions_graph(sequence_from_coloring(c), p);
    auto frag = fragmentation(c);
    print_analysis(g, graph, &frag);
    return 0;
  }
  TransactionSequence s = parse_sequence(read_file(seq_file));
  Partition p = validate_partition(source_of(s), g.width);
  auto graph = transactions_graph(s, p);
  std::optional<FragmentationProfile> frag;
  try {
    frag = fragmentation(realize_sequence(s, p.width));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnrealizableSequence && e.code() != ErrorCode::WidthCapExceeded) throw;
    if (!g.json) std::cerr << "note: no fragmentation profile (" << e.what() << ")\n";
  }
  print_analysis(g, graph, frag ? &*frag : nullptr);
  return 0;
}

void print_constructed(const Globals& g, const Partition& q, const TransactionSequence& forced) {
  if (g.json) {
    std::cout << json{{"partition", weights_json(q.weights)}, {"width", q.width}, {"forced", sequence_json(forced)}}
                     .dump(2)
              << "\n";
    return;
  }
  std::cout << format_partition(q.weights) << "\n# width=" << q.width << " forced:";
  for (const auto& t : forced) std::cout << " " << format_transaction(t) << ";";
  std::cout << "\n";
}

int cmd_force(const Globals& g, const std::string& base, const std::string& pairs_text) {
  auto pairs = read_pairs(pairs_text);
  Partition q = force_sequence(read_partition(base, g), pairs);
  print_constructed(g, q, forced_transactions(pairs));
  return 0;
}

int cmd_clique(const Globals& g, std::size_t k, const std::string& base) {
  Partition q = clique_partition(k, read_partition(base, g));
  print_constructed(g, q, forced_transactions(clique_pairs(k)));
  return 0;
}

int cmd_enumerate(const Globals& g, unsigned width, std::optional<std::size_t> k, unsigned jobs) {
  auto report = segment_optimality_report(width, k, jobs);
  if (g.json) {
    json rows = json::array();
    for (const auto& r : report.rows)
      rows.push_back({{"partition", weights_json(r.partition)}, {"lambda", r.lambda}, {"minN", r.min_n},
                      {"gap", r.gap}});
    json out{{"width", report.width}, {"unordered", report.unordered}, {"ordered", report.ordered}, {"rows", rows}};
    out["k"] = report.k ? json(*report.k) : json("all");
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << format_report_csv(report);
  }
  return 0;
}

int cmd_verify(const Globals& g, const std::string& table_file, const std::string& text) {
  TcamTable t = parse_table(read_file(table_file));
  TrieColoring c = coloring_from_table(t);
  Partition want = read_partition(text, g);
  if (want.width != t.width)
    throw Error(ErrorCode::WidthMismatch,
                "table width " + std::to_string(t.width) + ", partition width " + std::to_string(want.width));
  WeightVector got = induced_partition(c, want.k());
  const bool ok = got == want.weights;
  const std::size_t effective = conflicts(c).count;
  if (g.json) {
    std::cout << json{{"ok", ok}, {"induced", weights_json(got)}, {"rules", t.rules.size()},
                      {"effective_rules", effective}, {"lambda", lambda(want)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << (ok ? "ok" : "mismatch") << " induced=" << format_partition(got) << " rules=" << t.rules.size()
              << " effective=" << effective << " lambda=" << lambda(want) << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prefix-rule tables that split an address space among targets."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Structured output");
  app.add_option("--width", g.width, "Explicit address width W");
  app.add_option("--max-oracle-sum", g.max_oracle_sum, "Guard for brute-force oracles");

  std::string part, order, search, seq_file, table_file, pairs, base;
  bool oracle = false;
  std::size_t k_clique = 0;
  unsigned enum_width = 0, jobs = 1;
  std::optional<std::size_t> enum_k;
  std::function<int()> action;

  auto* synth = app.add_subcommand("synth", "Minimal table for a partition");
  synth->add_option("partition", part)->required();
  synth->callback([&] { action = [&] { return cmd_synth(g, part); }; });

  auto* seg = app.add_subcommand("segmented", "Table with one contiguous segment per target");
  seg->add_option("partition", part)->required();
  auto* order_opt = seg->add_option("--order", order, "Segment order, e.g. 1,2,3");
  seg->add_option("--search", search, "Order search")
      ->check(CLI::IsMember({"exhaustive", "derand", "greedy"}))
      ->excludes(order_opt);
  seg->callback([&] { action = [&] { return cmd_segmented(g, part, order, search); }; });

  auto* lam = app.add_subcommand("lambda", "Minimum table size");
  lam->add_option("partition", part)->required();
  lam->add_flag("--oracle", oracle, "Cross-check against exhaustive search");
  lam->callback([&] { action = [&] { return cmd_lambda(g, part, oracle); }; });

  auto* an = app.add_subcommand("analyze", "Transactions-graph and fragmentation");
  an->add_option("--sequence", seq_file, "Transaction sequence file ('-' for stdin)");
  an->add_option("--table", table_file, "Table file ('-' for stdin)");
  an->callback([&] { action = [&] { return cmd_analyze(g, seq_file, table_file); }; });

  auto* force = app.add_subcommand("force", "Partition forcing the given transactions");
  force->add_option("--base", base)->required();
  force->add_option("--pairs", pairs, "Sender/receiver pairs, e.g. \"(2,1);(3,2)\"");
  force->callback([&] { action = [&] { return cmd_force(g, base, pairs); }; });

  auto* clique = app.add_subcommand("clique-partition", "Partition whose transactions-graph is a clique");
  clique->add_option("--k", k_clique)->required();
  clique->add_option("--base", base)->required();
  clique->callback([&] { action = [&] { return cmd_clique(g, k_clique, base); }; });

  auto* en = app.add_subcommand("enumerate", "Partitions with no optimal segmented table");
  en->add_option("--width", enum_width)->required();
  en->add_option("--k", enum_k, "Number of targets (default: all)");
  en->add_option("--jobs", jobs)->check(CLI::Range(1u, 256u));
  en->callback([&] { action = [&] { return cmd_enumerate(g, enum_width, enum_k, jobs); }; });

  auto* ver = app.add_subcommand("verify", "Check a table against a partition");
  ver->add_option("--table", table_file)->required();
  ver->add_option("--partition", part)->required();
  ver->callback([&] { action = [&] { return cmd_verify(g, table_file, part); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
