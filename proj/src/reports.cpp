#include "monex/reports.hpp"

#include <sstream>
#include <string>

#include "monex/errors.hpp"

namespace monex {

namespace {

nlohmann::json rat_str(const Rational& r) { return r.str(); }

nlohmann::json word_str(const Word& w) { return w.str(); }

nlohmann::json mat_str(const Mat2& m) { return m.str(); }

// The empty word serializes to the empty string, which a line-oriented
// "key value" format cannot carry. "e" marks it in both directions; real
// words always start with '+' or '-', so the sentinel cannot collide.
std::string word_field(const Word& w) { return w.empty() ? "e" : w.str(); }

Word parse_word_field(const std::string& text) {
  return text == "e" ? Word() : Word::parse(text);
}

}  // namespace

nlohmann::json to_json(const ForgeConfig& cfg) {
  return {
      {"ell", cfg.ell},
      {"epsilon", rat_str(cfg.epsilon)},
      {"freeness_depth", cfg.freeness_depth},
      {"q", cfg.q},
      {"search_len", cfg.search_len},
      {"seed_mode", seed_mode_name(cfg.seed_mode)},
      {"word_budget", cfg.word_budget},
  };
}

nlohmann::json to_json(const ForgeStats& st) {
  return {
      {"ball_size", st.ball_size},
      {"cell_side", rat_str(st.cell_side)},
      {"denominator_cap", st.denominator_cap.get_str()},
      {"denominator_cap_ok", st.denominator_cap_ok},
      {"densest_cell", st.densest_cell},
      {"frobenius_bound", rat_str(st.frobenius_bound)},
      {"max_norm_sq", rat_str(st.max_norm_sq)},
      {"norm_cap", rat_str(st.norm_cap)},
      {"operator_bound", rat_str(st.operator_bound)},
      {"q_rule_pass", st.q_rule_pass},
      {"q_rule_value", rat_str(st.q_rule_value)},
      {"word_count", st.word_count},
  };
}

nlohmann::json to_json(const SeedPair& sp) {
  return {
      {"cert_depth", sp.cert_depth},
      {"g1", mat_str(sp.g1)},
      {"g2", mat_str(sp.g2)},
      {"r", sp.r},
      {"w1", word_str(sp.w1)},
      {"w2", word_str(sp.w2)},
  };
}

nlohmann::json to_json(const FreenessResult& fr) {
  return {
      {"depth", fr.depth},
      {"pass", fr.pass},
      {"witness", word_str(fr.witness)},
      {"words_checked", fr.words_checked},
  };
}

nlohmann::json to_json(const SeparationRow& row) {
  return {
      {"bound", rat_str(row.bound)},
      {"elements", row.elements},
      {"exponent", row.exponent},
      {"k", row.k},
      {"min_dist_sq", rat_str(row.min_dist_sq)},
      {"pass", row.pass},
      {"words", row.words},
  };
}

nlohmann::json to_json(const PropertyReport& pr) {
  nlohmann::json sep = nlohmann::json::array();
  for (const auto& row : pr.separation) sep.push_back(to_json(row));
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& name : failed_properties(pr)) failed.push_back(name);
  return {
      {"Q", pr.Q.get_str()},
      {"all_pass", pr.all_pass()},
      {"close_offender", pr.close_offender},
      {"close_pass", pr.close_pass},
      {"exp_q_eps", pr.exp_q_eps},
      {"exp_q_size", pr.exp_q_size},
      {"failed", failed},
      {"freeness", to_json(pr.freeness)},
      {"freeness_depth", pr.freeness_depth},
      {"grid_offender", pr.grid_offender},
      {"grid_pass", pr.grid_pass},
      {"separation", sep},
      {"size", pr.size},
  };
}

nlohmann::json to_json(const GeneratorSet& gs) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : gs.gens) gens.push_back(mat_str(g));
  nlohmann::json out = {
      {"Q", gs.Q.get_str()},
      {"config", to_json(gs.config)},
      {"epsilon", rat_str(gs.epsilon)},
      {"epsilon_achieved_sq", rat_str(gs.epsilon_achieved)},
      {"gens", gens},
      {"seed", to_json(gs.seed)},
      {"size", gs.gens.size()},
      {"stats", to_json(gs.stats)},
      {"w0", mat_str(gs.w0)},
      {"w0_word", word_str(gs.w0_word)},
  };
  if (gs.certificates) out["certificates"] = to_json(*gs.certificates);
  return out;
}

nlohmann::json to_json(const SpectralReport& rep) {
  return {
      {"iterations", rep.iterations},
      {"left", rep.left},
      {"method", rep.method},
      {"residual", rep.residual},
      {"right", rep.right},
      {"seed", rep.seed},
      {"sigma2", rep.sigma2},
      {"tolerance", rep.tolerance},
  };
}

nlohmann::json to_json(const ExpansionReport& rep) {
  return {
      {"argmin_set", rep.argmin_set},
      {"method", rep.method},
      {"min_ratio", rat_str(rep.min_ratio)},
      {"min_ratio_double", rep.min_ratio.to_double()},
      {"n", rep.n},
      {"subsets", rep.subsets},
  };
}

nlohmann::json to_json(const CorpusReport& rep) {
  return {
      {"all_above_one", rep.all_above_one},
      {"argmin_index", rep.argmin_index},
      {"count", rep.count},
      {"method", rep.method},
      {"min_ratio", rat_str(rep.min_ratio)},
      {"min_ratio_double", rep.min_ratio.to_double()},
      {"skipped", rep.skipped},
  };
}

nlohmann::json to_json(const DimensionReport& rep) {
  return {
      {"D", rep.D},
      {"k", rep.k},
      {"mean_growth", rep.mean_growth},
      {"method", rep.method},
      {"min_growth", rat_str(rep.min_growth)},
      {"min_growth_double", rep.min_growth.to_double()},
      {"n", rep.n},
      {"p", rep.p},
      {"resamples", rep.resamples},
      {"seed", rep.seed},
      {"span_dims", rep.span_dims},
      {"trials", rep.trials},
  };
}

nlohmann::json to_json(const ProductGrowthReport& rep) {
  nlohmann::json sep = nlohmann::json::array();
  for (const auto& pt : rep.separation)
    sep.push_back({{"rho", pt.rho}, {"separated", pt.separated}});
  return {
      {"a_cover", {{"lower", rep.a_cover.lower}, {"upper", rep.a_cover.upper}}},
      {"aaa_cover", {{"lower", rep.aaa_cover.lower}, {"upper", rep.aaa_cover.upper}}},
      {"delta", rep.delta},
      {"exponent", rep.exponent},
      {"method", rep.method},
      {"n_a", rep.n_a},
      {"n_aaa", rep.n_aaa},
      {"products", rep.products},
      {"sampled", rep.sampled},
      {"seed", rep.seed},
      {"separation", sep},
      {"set_size", rep.set_size},
  };
}

std::vector<std::string> failed_properties(const PropertyReport& pr) {
  std::vector<std::string> out;
  if (!pr.freeness.pass) out.push_back("P3");
  if (!pr.grid_pass) out.push_back("P4");
  if (!pr.close_pass) out.push_back("P5");
  for (const auto& row : pr.separation)
    if (!row.pass) out.push_back("D@" + std::to_string(row.k));
  return out;
}

nlohmann::json graph_summary_json(const LayeredBipartiteGraph& g) {
  auto ldeg = g.left_degree();
  auto rdeg = g.right_degree();
  auto minmax = [](const std::vector<uint32_t>& v) {
    nlohmann::json j;
    uint32_t lo = v.empty() ? 0 : v[0], hi = lo;
    for (uint32_t x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    j["max"] = hi;
    j["min"] = lo;
    return j;
  };
  bool monotone = true;
  size_t defined = 0;
  for (const auto& layer : g.layers) {
    monotone = monotone && layer.strictly_increasing();
    defined += layer.defined();
  }
  uint32_t max_per_psi = 0;
  auto per_psi = g.layers_per_psi();
  for (uint32_t c : per_psi) max_per_psi = std::max(max_per_psi, c);
  return {
      {"defined_entries", defined},
      {"edges", g.edge_count()},
      {"layer_count", g.layers.size()},
      {"layers_per_psi", per_psi},
      {"left_degree", minmax(ldeg)},
      {"max_layers_per_psi", max_per_psi},
      {"monotone", monotone},
      {"n", g.n},
      {"right_degree", minmax(rdeg)},
      {"unique_edges", g.unique_edges().size()},
  };
}

std::string save_generator_set(const GeneratorSet& gs) {
  std::ostringstream out;
  out << "format generator-set-v1\n";
  out << "q " << gs.config.q << "\n";
  out << "ell " << gs.config.ell << "\n";
  out << "epsilon " << gs.config.epsilon.str() << "\n";
  out << "seed_mode " << seed_mode_name(gs.config.seed_mode) << "\n";
  out << "freeness_depth " << gs.config.freeness_depth << "\n";
  out << "word_budget " << gs.config.word_budget << "\n";
  out << "search_len " << gs.config.search_len << "\n";
  out << "Q " << gs.Q.get_str() << "\n";
  out << "epsilon_achieved_sq " << gs.epsilon_achieved.str() << "\n";
  out << "w0 " << gs.w0.str() << "\n";
  out << "w0_word " << word_field(gs.w0_word) << "\n";
  out << "seed_r " << gs.seed.r << "\n";
  out << "seed_cert_depth " << gs.seed.cert_depth << "\n";
  out << "seed_w1 " << word_field(gs.seed.w1) << "\n";
  out << "seed_w2 " << word_field(gs.seed.w2) << "\n";
  out << "seed_g1 " << gs.seed.g1.str() << "\n";
  out << "seed_g2 " << gs.seed.g2.str() << "\n";
  for (const auto& g : gs.gens) out << "gen " << g.str() << "\n";
  return out.str();
}

GeneratorSet load_generator_set(const std::string& bytes) {
  GeneratorSet gs;
  bool saw_format = false;
  std::vector<std::string> missing = {
      "q",      "ell",     "epsilon", "seed_mode", "freeness_depth",
      "word_budget", "search_len", "Q", "epsilon_achieved_sq", "w0",
      "w0_word", "seed_r", "seed_cert_depth", "seed_w1", "seed_w2",
      "seed_g1", "seed_g2"};
  auto consume = [&missing](const std::string& key) {
    for (auto it = missing.begin(); it != missing.end(); ++it)
      if (*it == key) {
        missing.erase(it);
        return true;
      }
    return false;  // repeated key
  };

  std::istringstream in(bytes);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string value = sp == std::string::npos ? "" : line.substr(sp + 1);
    auto fail = [&](const std::string& why) -> ParseError {
      return ParseError("generator set line " + std::to_string(lineno) + ": " + why);
    };
    try {
      if (key == "format") {
        if (value != "generator-set-v1") throw fail("unknown format '" + value + "'");
        saw_format = true;
      } else if (key == "gen") {
        // Unchecked on purpose: verification must be able to load entries
        // that violate the grid or determinant constraints and report them.
        gs.gens.push_back(Mat2::parse_unchecked(value));
      } else if (consume(key)) {
        if (key == "q") gs.config.q = static_cast<unsigned>(std::stoul(value));
        else if (key == "ell") gs.config.ell = static_cast<unsigned>(std::stoul(value));
        else if (key == "epsilon") gs.config.epsilon = Rational::parse(value);
        else if (key == "seed_mode") gs.config.seed_mode = seed_mode_parse(value);
        else if (key == "freeness_depth")
          gs.config.freeness_depth = static_cast<unsigned>(std::stoul(value));
        else if (key == "word_budget") gs.config.word_budget = std::stoull(value);
        else if (key == "search_len")
          gs.config.search_len = static_cast<unsigned>(std::stoul(value));
        else if (key == "Q") gs.Q = mpz_class(value);
        else if (key == "epsilon_achieved_sq") gs.epsilon_achieved = Rational::parse(value);
        else if (key == "w0") gs.w0 = Mat2::parse_unchecked(value);
        else if (key == "w0_word") gs.w0_word = parse_word_field(value);
        else if (key == "seed_r") gs.seed.r = static_cast<unsigned>(std::stoul(value));
        else if (key == "seed_cert_depth")
          gs.seed.cert_depth = static_cast<unsigned>(std::stoul(value));
        else if (key == "seed_w1") gs.seed.w1 = parse_word_field(value);
        else if (key == "seed_w2") gs.seed.w2 = parse_word_field(value);
        else if (key == "seed_g1") gs.seed.g1 = Mat2::parse_unchecked(value);
        else if (key == "seed_g2") gs.seed.g2 = Mat2::parse_unchecked(value);
      } else {
        throw fail("unknown or repeated key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(std::string("bad value for '") + key + "': " + e.what());
    }
  }
  if (!saw_format) throw ParseError("generator set: missing 'format generator-set-v1' line");
  if (!missing.empty())
    throw ParseError("generator set: missing key '" + missing.front() + "'");
  if (gs.gens.empty()) throw ParseError("generator set: no 'gen' lines");
  gs.epsilon = gs.config.epsilon;
  return gs;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace monex
