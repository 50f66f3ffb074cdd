// monex: command-line front end for forging near-identity free generator
// sets, expanding them into interval map families, discretizing to layered
// monotone graphs, and measuring expansion and growth.
//
// Subcommands: forge, verify, expand, build-graph, measure, walk, growth,
// export. Reports are JSON with sorted keys; every report embeds the exact
// configuration that produced it plus a 64-bit hash of that configuration,
// and default file names are derived from the hash, so identical runs write
// byte-identical files at identical paths. Messages go to stderr; data goes
// to files or stdout only.
//
// Exit codes: 0 success; 1 a verification or certification check failed;
// 2 usage or input-format error; 3 a size or sampling budget was exhausted;
// 4 unexpected internal failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "monex/errors.hpp"
#include "monex/exec.hpp"
#include "monex/expansion.hpp"
#include "monex/family.hpp"
#include "monex/forge.hpp"
#include "monex/graph.hpp"
#include "monex/growth.hpp"
#include "monex/reports.hpp"
#include "monex/words.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void usage(std::ostream& os) {
  os << "usage: monex <command> [--flag value | --flag=value]...\n"
        "\n"
        "commands:\n"
        "  forge        forge a near-identity free generator set and certify it\n"
        "               --q N --ell N --epsilon RAT|min|huge --seed sanov|search\n"
        "               --depth N --budget N --search-len N --kmax N\n"
        "               --min-cell N --rounds N --gens-out PATH\n"
        "  verify       re-certify a saved generator set (P3 freeness, P4 grid,\n"
        "               P5 closeness, D@k separation)\n"
        "               --gens PATH --kmax N --depth N --budget N\n"
        "  expand       exact family-expansion ratio over an interval-set corpus\n"
        "               --gens PATH --K N --corpus builtin|random|cantor|cells|preimage\n"
        "               --count N --parts N --cantor-depth N --per-map N --seed N\n"
        "  build-graph  discretize the map family to a layered bipartite graph\n"
        "               --gens PATH --K N --n N --graph-out PATH\n"
        "  measure      measure a graph: --spectral (--tol X --seed N),\n"
        "               --exact (--cap N), --dimension (--p N --D N --trials N)\n"
        "               --graph PATH\n"
        "  walk         exact return probabilities of the rank-k free walk\n"
        "               --rank N --steps 50,100,200,500\n"
        "  growth       covering growth of a generator set under triple products\n"
        "               --gens PATH --op product|flatness --delta X --budget N\n"
        "               --samples N --ell N --seed N\n"
        "  export       write a graph in edge-csv, matrix-csv, dot, or layered-json\n"
        "               --graph PATH --format NAME\n"
        "\n"
        "common flags: --config FILE (flat key=value with [command] sections),\n"
        "  --out PATH|- (report file or stdout), --outdir DIR, --serial\n"
        "\n"
        "MONEX_BUDGET overrides the budget default of any command that takes\n"
        "--budget; an explicit --budget flag wins over the environment.\n"
        "\n"
        "exit codes: 0 ok, 1 verification failure, 2 usage error, 3 budget\n"
        "exhausted, 4 internal error\n";
}

const std::map<std::string, std::set<std::string>>& command_flags() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"forge",
       {"q", "ell", "epsilon", "seed", "depth", "budget", "search-len", "kmax",
        "min-cell", "rounds", "gens-out"}},
      {"verify", {"gens", "kmax", "depth", "budget"}},
      {"expand",
       {"gens", "K", "corpus", "count", "parts", "cantor-depth", "per-map", "seed"}},
      {"build-graph", {"gens", "K", "n", "graph-out"}},
      {"measure",
       {"graph", "spectral", "exact", "dimension", "tol", "seed", "cap", "p", "D",
        "trials"}},
      {"walk", {"rank", "steps"}},
      {"growth", {"gens", "op", "delta", "budget", "samples", "ell", "seed"}},
      {"export", {"graph", "format"}},
  };
  return table;
}

const std::set<std::string>& common_flags() {
  static const std::set<std::string> table = {"config", "out", "outdir", "serial"};
  return table;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write file: " + path);
  out << bytes;
  if (!out) throw UsageError("write failed: " + path);
}

std::string hex16(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Flat config file: '#' comments, [section] headers naming commands, and
// key = value lines. Only the section matching the running command applies.
std::map<std::string, std::string> config_file_section(const std::string& path,
                                                       const std::string& command,
                                                       const std::set<std::string>& allowed) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_file(path));
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw UsageError(path + ":" + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      if (!command_flags().count(section))
        throw UsageError(path + ":" + std::to_string(lineno) + ": unknown section [" +
                         section + "]");
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty())
      throw UsageError(path + ":" + std::to_string(lineno) + ": key outside any section");
    if (section != command) continue;
    if (key == "config" || (!allowed.count(key) && !common_flags().count(key)))
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                       "' for [" + command + "]");
    out[key] = value;
  }
  return out;
}

// Merged flag values with typed accessors. Precedence: built-in default,
// then config file, then MONEX_BUDGET (budget key only), then explicit flag.
class Options {
 public:
  Options(const std::string& command, int argc, char** argv) : command_(command) {
    auto spec_it = command_flags().find(command);
    if (spec_it == command_flags().end()) throw UsageError("unknown command: " + command);
    const auto& allowed = spec_it->second;

    std::map<std::string, std::string> flags;
    for (int i = 2; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg.rfind("--", 0) != 0)
        throw UsageError("unexpected argument '" + arg + "' (flags start with --)");
      std::string key, value;
      size_t eq = arg.find('=');
      if (eq != std::string::npos) {
        key = arg.substr(2, eq - 2);
        value = arg.substr(eq + 1);
      } else {
        key = arg.substr(2);
        if (i + 1 < argc && std::string(argv[i + 1]).rfind("--", 0) != 0)
          value = argv[++i];
        else
          value = "true";  // bare flag
      }
      if (key.empty()) throw UsageError("empty flag name");
      if (!allowed.count(key) && !common_flags().count(key))
        throw UsageError("unknown flag --" + key + " for command '" + command + "'");
      if (flags.count(key)) throw UsageError("flag --" + key + " given twice");
      flags[key] = value;
    }

    if (flags.count("config")) {
      for (auto& [k, v] : config_file_section(flags.at("config"), command, allowed))
        kv_[k] = v;
    }
    if (allowed.count("budget")) {
      if (const char* env = std::getenv("MONEX_BUDGET")) kv_["budget"] = env;
    }
    for (auto& [k, v] : flags)
      if (k != "config") kv_[k] = v;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  std::string required(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
      throw UsageError(command_ + ": missing required flag --" + key);
    return it->second;
  }

  uint64_t u64(const std::string& key, uint64_t def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    return parse_u64(key, it->second);
  }

  uint32_t u32(const std::string& key, uint32_t def) const {
    uint64_t v = u64(key, def);
    if (v > UINT32_MAX) throw UsageError("--" + key + ": value out of range");
    return static_cast<uint32_t>(v);
  }

  double real(const std::string& key, double def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing text");
      return v;
    } catch (const std::exception&) {
      throw UsageError("--" + key + ": expected a number, got '" + it->second + "'");
    }
  }

  bool flag(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return false;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("--" + key + ": expected a boolean, got '" + v + "'");
  }

  monex::Exec exec() const { return flag("serial") ? monex::Exec::serial : monex::Exec::parallel; }

 private:
  uint64_t parse_u64(const std::string& key, const std::string& text) const {
    try {
      size_t pos = 0;
      if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
      unsigned long long v = std::stoull(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("trailing text");
      return v;
    } catch (const std::exception&) {
      throw UsageError("--" + key + ": expected a non-negative integer, got '" + text + "'");
    }
  }

  std::string command_;
  std::map<std::string, std::string> kv_;
};

// Assembles and writes the report. The config hash covers the command name
// and the semantic configuration only (never output locations), so the same
// run lands on the same default file name regardless of where it is written.
struct Report {
  std::string command;
  json config;                    // semantic parameters, sorted keys
  json inputs = json::object();   // input file paths (informational)
  json outputs = json::object();  // sibling files written, by base name

  std::string stem() const {
    return command + "-" + hex16(monex::fnv1a64(command + "\n" + config.dump()));
  }

  // Returns the path the report was written to, or "-" for stdout.
  std::string emit(const json& result, const Options& o) const {
    json rep{{"command", command},
             {"config", config},
             {"config_hash", hex16(monex::fnv1a64(command + "\n" + config.dump()))},
             {"result", result}};
    if (!inputs.empty()) rep["inputs"] = inputs;
    if (!outputs.empty()) rep["outputs"] = outputs;
    std::string body = rep.dump(2) + "\n";
    std::string out = o.str("out", "");
    if (out == "-") {
      std::cout << body;
      return "-";
    }
    std::string path = out.empty()
                           ? (std::filesystem::path(o.str("outdir", ".")) / (stem() + ".json"))
                                 .string()
                           : out;
    write_file(path, body);
    std::cout << path << "\n";
    return path;
  }

  // Sibling data files (generator sets, graphs) print their paths to stdout
  // unless the report itself streams there, in which case the notice moves
  // to stderr to keep the stdout JSON intact.
  void note_sibling(const std::string& path, const Options& o) const {
    if (o.str("out", "") == "-")
      std::cerr << "wrote " << path << "\n";
    else
      std::cout << path << "\n";
  }
};

json family_json(const monex::MapFamily& fam) {
  return {{"K", fam.K},
          {"dropped", fam.dropped},
          {"epsilon", fam.epsilon.str()},
          {"map_count", fam.maps.size()},
          {"warnings", fam.warnings}};
}

monex::SeedMode parse_seed_mode(const std::string& text) {
  if (text == "sanov" || text == "sanov_power") return monex::SeedMode::sanov_power;
  if (text == "search" || text == "paper_search") return monex::SeedMode::paper_search;
  throw UsageError("--seed: expected sanov or search, got '" + text + "'");
}

int fail_verification(const std::vector<std::string>& failed) {
  std::cerr << "verification failed:";
  for (const auto& name : failed) std::cerr << " " << name;
  std::cerr << "\n";
  return 1;
}

// ---------------------------------------------------------------- forge --

int run_forge(const Options& o) {
  monex::ForgeConfig cfg;
  cfg.q = o.u32("q", 3);
  cfg.ell = o.u32("ell", 8);
  std::string eps_text = o.str("epsilon", "1");
  cfg.seed_mode = parse_seed_mode(o.str("seed", "sanov"));
  cfg.freeness_depth = o.u32("depth", 10);
  cfg.word_budget = o.u64("budget", 10'000'000);
  cfg.search_len = o.u32("search-len", 6);
  unsigned kmax = o.u32("kmax", 4);
  uint64_t min_cell = o.u64("min-cell", 3);
  unsigned rounds = o.u32("rounds", 40);

  Report rep;
  rep.command = "forge";
  rep.config = {{"budget", cfg.word_budget},
                {"depth", cfg.freeness_depth},
                {"ell", cfg.ell},
                {"epsilon", eps_text},
                {"kmax", kmax},
                {"min-cell", min_cell},
                {"q", cfg.q},
                {"rounds", rounds},
                {"search-len", cfg.search_len},
                {"seed", seed_mode_name(cfg.seed_mode)},
                {"serial", o.flag("serial")}};

  // Word enumeration does not depend on epsilon, so the symbolic radius
  // forms resolve against one shared pipeline. "min" is the smallest radius
  // whose densest cell holds >= min-cell words; "huge" is 2 * norm_cap^2,
  // the radius that provably swallows the whole word set (every word has
  // norm <= norm_cap, so the set has diameter <= 2 * norm_cap and the
  // eps/N-ball at eps = 2N^2 covers it).
  monex::ForgePipeline pipe = monex::forge_prepare(cfg, o.exec());
  if (eps_text == "min")
    cfg.epsilon = monex::forge_min_epsilon(cfg, min_cell, o.exec(), rounds);
  else if (eps_text == "huge")
    cfg.epsilon = monex::Rational(2) * pipe.stats.norm_cap * pipe.stats.norm_cap;
  else
    cfg.epsilon = monex::Rational::parse(eps_text);

  monex::GeneratorSet gs = monex::forge_from(pipe, cfg, o.exec());
  monex::PropertyReport props =
      monex::verify_properties(gs, kmax, cfg.freeness_depth, cfg.word_budget, o.exec());
  gs.certificates = props;

  std::string gens_path = o.str("gens-out", "");
  if (gens_path.empty())
    gens_path = (std::filesystem::path(o.str("outdir", ".")) / (rep.stem() + ".gens")).string();
  write_file(gens_path, monex::save_generator_set(gs));
  rep.outputs["generators"] = std::filesystem::path(gens_path).filename().string();

  json result{{"epsilon_resolved", gs.epsilon.str()},
              {"generator_set", monex::to_json(gs)}};
  rep.emit(result, o);
  rep.note_sibling(gens_path, o);
  if (!props.all_pass()) return fail_verification(monex::failed_properties(props));
  return 0;
}

// --------------------------------------------------------------- verify --

int run_verify(const Options& o) {
  std::string gens_path = o.required("gens");
  std::string bytes = read_file(gens_path);
  monex::GeneratorSet gs = monex::load_generator_set(bytes);

  unsigned kmax = o.u32("kmax", 4);
  unsigned depth = o.u32("depth", 6);
  uint64_t budget = o.u64("budget", 10'000'000);

  Report rep;
  rep.command = "verify";
  rep.config = {{"budget", budget},
                {"depth", depth},
                {"gens_hash", hex16(monex::fnv1a64(bytes))},
                {"kmax", kmax},
                {"serial", o.flag("serial")}};
  rep.inputs["gens"] = gens_path;

  monex::PropertyReport props = monex::verify_properties(gs, kmax, depth, budget, o.exec());
  json result{{"properties", monex::to_json(props)},
              {"set", {{"Q", gs.Q.get_str()},
                       {"epsilon", gs.epsilon.str()},
                       {"size", gs.gens.size()}}}};
  rep.emit(result, o);
  if (!props.all_pass()) return fail_verification(monex::failed_properties(props));
  return 0;
}

// --------------------------------------------------------------- expand --

int run_expand(const Options& o) {
  std::string gens_path = o.required("gens");
  std::string bytes = read_file(gens_path);
  monex::GeneratorSet gs = monex::load_generator_set(bytes);

  unsigned K = o.u32("K", 0);
  std::string corpus_name = o.str("corpus", "builtin");
  uint32_t count = o.u32("count", 200);
  uint32_t parts = o.u32("parts", 4);
  uint32_t cantor_depth = o.u32("cantor-depth", 12);
  uint32_t per_map = o.u32("per-map", 2);
  uint64_t seed = o.u64("seed", 0xc0de);

  monex::MapFamily fam = monex::build_family(gs, K);

  std::vector<monex::IntervalSet> corpus;
  if (corpus_name == "builtin") corpus = monex::builtin_corpus(fam);
  else if (corpus_name == "random") corpus = monex::corpus_random(count, parts, seed);
  else if (corpus_name == "cantor") corpus = monex::corpus_cantor(cantor_depth);
  else if (corpus_name == "cells") corpus = monex::corpus_cells(fam.K);
  else if (corpus_name == "preimage") corpus = monex::corpus_preimage(fam, per_map, seed);
  else
    throw UsageError("--corpus: expected builtin|random|cantor|cells|preimage, got '" +
                     corpus_name + "'");

  Report rep;
  rep.command = "expand";
  rep.config = {{"K", K},
                {"cantor-depth", cantor_depth},
                {"corpus", corpus_name},
                {"count", count},
                {"gens_hash", hex16(monex::fnv1a64(bytes))},
                {"parts", parts},
                {"per-map", per_map},
                {"seed", seed}};
  rep.inputs["gens"] = gens_path;

  monex::CorpusReport cr = monex::continuous_corpus_test(fam, corpus);
  json result{{"corpus_size", corpus.size()},
              {"expansion", monex::to_json(cr)},
              {"family", family_json(fam)}};
  rep.emit(result, o);
  if (!cr.all_above_one) {
    std::cerr << "family expansion failed: min ratio " << cr.min_ratio.str()
              << " at corpus index " << cr.argmin_index << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------- build-graph --

int run_build_graph(const Options& o) {
  std::string gens_path = o.required("gens");
  std::string bytes = read_file(gens_path);
  monex::GeneratorSet gs = monex::load_generator_set(bytes);

  unsigned K = o.u32("K", 0);
  uint32_t n = o.u32("n", 0);
  if (n == 0) throw UsageError("build-graph: missing required flag --n");

  Report rep;
  rep.command = "build-graph";
  rep.config = {{"K", K},
                {"gens_hash", hex16(monex::fnv1a64(bytes))},
                {"n", n},
                {"serial", o.flag("serial")}};
  rep.inputs["gens"] = gens_path;

  monex::MapFamily fam = monex::build_family(gs, K);
  monex::LayeredBipartiteGraph g = monex::discretize(fam, n, o.exec());

  std::string graph_path = o.str("graph-out", "");
  if (graph_path.empty())
    graph_path =
        (std::filesystem::path(o.str("outdir", ".")) / (rep.stem() + ".graph.json")).string();
  write_file(graph_path, monex::export_graph(g, "layered-json"));
  rep.outputs["graph"] = std::filesystem::path(graph_path).filename().string();

  json result{{"family", family_json(fam)}, {"graph", monex::graph_summary_json(g)}};
  rep.emit(result, o);
  rep.note_sibling(graph_path, o);
  return 0;
}

// -------------------------------------------------------------- measure --

int run_measure(const Options& o) {
  std::string graph_path = o.required("graph");
  std::string bytes = read_file(graph_path);
  monex::LayeredBipartiteGraph g = monex::import_layered_json(bytes);

  bool spectral = o.flag("spectral");
  bool exact = o.flag("exact");
  bool dimension = o.flag("dimension");
  if (!spectral && !exact && !dimension) spectral = true;

  double tol = o.real("tol", 1e-6);
  uint64_t seed = o.u64("seed", 0x5eed);
  uint32_t cap = o.u32("cap", 24);
  uint32_t p = o.u32("p", 2);
  uint32_t D = o.u32("D", 16);
  uint32_t trials = o.u32("trials", 100);
  if (p > 65535) throw UsageError("--p: value out of range");

  Report rep;
  rep.command = "measure";
  rep.config = {{"D", D},
                {"cap", cap},
                {"dimension", dimension},
                {"exact", exact},
                {"graph_hash", hex16(monex::fnv1a64(bytes))},
                {"p", p},
                {"seed", seed},
                {"serial", o.flag("serial")},
                {"spectral", spectral},
                {"tol", tol},
                {"trials", trials}};
  rep.inputs["graph"] = graph_path;

  json result{{"graph", monex::graph_summary_json(g)}};
  if (spectral) result["spectral"] = monex::to_json(monex::spectral_gap_report(g, tol, seed));
  if (exact)
    result["exact"] = monex::to_json(monex::vertex_expansion_exact(g, cap, o.exec()));
  if (dimension) {
    auto mats = monex::dimension_matrices(g);
    result["dimension"] = monex::to_json(monex::subspace_dimension_test(
        mats, static_cast<uint16_t>(p), D, trials, seed, o.exec()));
  }
  rep.emit(result, o);
  return 0;
}

// ----------------------------------------------------------------- walk --

int run_walk(const Options& o) {
  uint32_t rank = o.u32("rank", 2);
  if (rank < 1) throw UsageError("--rank: must be at least 1");
  std::string steps_text = o.str("steps", "50,100,200,500");

  std::vector<uint32_t> steps;
  std::istringstream in(steps_text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) throw UsageError("--steps: empty entry");
    try {
      size_t pos = 0;
      unsigned long v = std::stoul(tok, &pos);
      if (pos != tok.size() || v < 1 || v > 5000) throw std::invalid_argument("range");
      steps.push_back(static_cast<uint32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("--steps: expected integers in [1, 5000], got '" + tok + "'");
    }
  }
  if (steps.empty()) throw UsageError("--steps: no steps given");

  Report rep;
  rep.command = "walk";
  rep.config = {{"rank", rank}, {"steps", steps_text}};

  double target = std::sqrt(2.0 * rank - 1) / rank;
  json rows = json::array();
  for (uint32_t t : steps) {
    monex::Rational pt = monex::kesten_return_prob(rank, t);
    double pd = pt.to_double();
    rows.push_back({{"p", pt.str()},
                    {"p_double", pd},
                    {"root", pd > 0 ? std::pow(pd, 1.0 / t) : 0.0},
                    {"t", t}});
  }
  json result{{"rank", rank}, {"rows", rows}, {"target", target}};
  rep.emit(result, o);
  return 0;
}

// --------------------------------------------------------------- growth --

int run_growth(const Options& o) {
  std::string gens_path = o.required("gens");
  std::string bytes = read_file(gens_path);
  monex::GeneratorSet gs = monex::load_generator_set(bytes);

  std::string op = o.str("op", "product");
  uint64_t seed = o.u64("seed", 0x6006);

  Report rep;
  rep.command = "growth";
  rep.inputs["gens"] = gens_path;

  json result;
  if (op == "product") {
    double delta = o.real("delta", 1e-3);
    uint64_t budget = o.u64("budget", 4'000'000);
    rep.config = {{"budget", budget},
                  {"delta", delta},
                  {"gens_hash", hex16(monex::fnv1a64(bytes))},
                  {"op", op},
                  {"seed", seed},
                  {"serial", o.flag("serial")}};
    monex::ProductGrowthReport pg =
        monex::product_growth(monex::float_of_all(gs.gens), delta, budget, seed, o.exec());
    result["product"] = monex::to_json(pg);
  } else if (op == "flatness") {
    double delta = o.real("delta", 0.1);
    uint32_t ell = o.u32("ell", 8);
    uint32_t samples = o.u32("samples", 100'000);
    rep.config = {{"delta", delta},
                  {"ell", ell},
                  {"gens_hash", hex16(monex::fnv1a64(bytes))},
                  {"op", op},
                  {"samples", samples},
                  {"seed", seed},
                  {"serial", o.flag("serial")}};
    double value = monex::flatness(gs, ell, delta, samples, seed, o.exec());
    result["flatness"] = {{"delta", delta},
                          {"ell", ell},
                          {"samples", samples},
                          {"seed", seed},
                          {"value", value}};
  } else {
    throw UsageError("--op: expected product or flatness, got '" + op + "'");
  }
  rep.emit(result, o);
  return 0;
}

// --------------------------------------------------------------- export --

int run_export(const Options& o) {
  std::string graph_path = o.required("graph");
  std::string format = o.required("format");
  std::string bytes = read_file(graph_path);
  monex::LayeredBipartiteGraph g = monex::import_layered_json(bytes);

  std::string data = monex::export_graph(g, format);  // rejects unknown formats

  Report rep;
  rep.command = "export";
  rep.config = {{"format", format}, {"graph_hash", hex16(monex::fnv1a64(bytes))}};

  std::string ext = format == "dot" ? ".dot"
                    : format == "layered-json" ? ".json"
                                               : ".csv";
  std::string out = o.str("out", "");
  if (out == "-") {
    std::cout << data;
    return 0;
  }
  std::string path =
      out.empty()
          ? (std::filesystem::path(o.str("outdir", ".")) / (rep.stem() + ext)).string()
          : out;
  write_file(path, data);
  std::cout << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return 2;
  }
  std::string cmd = argv[1];
  if (cmd == "help" || cmd == "--help" || cmd == "-h") {
    usage(std::cout);
    return 0;
  }
  try {
    Options o(cmd, argc, argv);
    if (cmd == "forge") return run_forge(o);
    if (cmd == "verify") return run_verify(o);
    if (cmd == "expand") return run_expand(o);
    if (cmd == "build-graph") return run_build_graph(o);
    if (cmd == "measure") return run_measure(o);
    if (cmd == "walk") return run_walk(o);
    if (cmd == "growth") return run_growth(o);
    if (cmd == "export") return run_export(o);
    usage(std::cerr);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const monex::TooLarge& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const monex::BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const monex::NoCollision& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const monex::NoPairFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const monex::PoleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
