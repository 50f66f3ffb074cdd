#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "monex/expansion.hpp"
#include "monex/forge.hpp"
#include "monex/graph.hpp"
#include "monex/growth.hpp"

namespace monex {

// JSON views of the measurement and certification reports. nlohmann objects
// keep their keys sorted, which the report contract requires. All exact
// values (rationals, big integers, words, matrices) serialize as their
// canonical text forms so reports round-trip without precision loss.
nlohmann::json to_json(const ForgeConfig& cfg);
nlohmann::json to_json(const ForgeStats& st);
nlohmann::json to_json(const SeedPair& sp);
nlohmann::json to_json(const FreenessResult& fr);
nlohmann::json to_json(const SeparationRow& row);
nlohmann::json to_json(const PropertyReport& pr);
nlohmann::json to_json(const GeneratorSet& gs);
nlohmann::json to_json(const SpectralReport& rep);
nlohmann::json to_json(const ExpansionReport& rep);
nlohmann::json to_json(const CorpusReport& rep);
nlohmann::json to_json(const DimensionReport& rep);
nlohmann::json to_json(const ProductGrowthReport& rep);

// Labels of the failed checks in a property report: "P3" (freeness), "P4"
// (denominator grid), "P5" (identity closeness), "D@k" (word-ball
// separation at radius k). Empty when the report passes.
std::vector<std::string> failed_properties(const PropertyReport& pr);

// Structural summary of a layered graph (sizes, per-map layer counts).
nlohmann::json graph_summary_json(const LayeredBipartiteGraph& g);

// Flat text persistence for generator sets: one "key value" pair per line,
// exact fractions throughout, diff-friendly. load uses unchecked matrix
// parsing on purpose: verifiers must be able to load corrupted data and
// report on it instead of crashing.
std::string save_generator_set(const GeneratorSet& gs);
GeneratorSet load_generator_set(const std::string& bytes);

// FNV-1a 64-bit hash; names report files after the config that produced
// them, so identical runs land on identical paths.
uint64_t fnv1a64(std::string_view bytes);

}  // namespace monex
