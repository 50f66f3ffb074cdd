#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monex/exec.hpp"
#include "monex/family.hpp"

namespace monex {

// One layer of the bipartite graph: a partial map on {0..n-1} that is
// strictly increasing where defined, hence a partial permutation.
struct PartialMonotoneMap {
  uint32_t n = 0;
  std::vector<std::optional<uint32_t>> targets;

  explicit PartialMonotoneMap(uint32_t n_ = 0) : n(n_), targets(n_) {}

  size_t defined() const;
  bool strictly_increasing() const;

  friend bool operator==(const PartialMonotoneMap& a, const PartialMonotoneMap& b) {
    return a.n == b.n && a.targets == b.targets;
  }
};

// Which family map a layer came from and which overlap rank it carries.
// Layers born from tie splitting share the rank of their parent.
struct LayerProvenance {
  uint32_t psi = 0;
  uint32_t rank = 0;

  friend bool operator==(const LayerProvenance& a, const LayerProvenance& b) {
    return a.psi == b.psi && a.rank == b.rank;
  }
};

struct LayeredBipartiteGraph {
  uint32_t n = 0;
  std::vector<PartialMonotoneMap> layers;
  std::vector<LayerProvenance> provenance;  // one entry per layer

  // Edge multiset as (i, j) pairs sorted by (layer order preserved: layer
  // major, i minor). Layers never duplicate an edge internally.
  std::vector<std::pair<uint32_t, uint32_t>> edges() const;

  // Sorted deduplicated edge set across all layers (the biadjacency support).
  std::vector<std::pair<uint32_t, uint32_t>> unique_edges() const;

  size_t edge_count() const;  // multiset size, sum of layer sizes
  std::vector<uint32_t> left_degree() const;
  std::vector<uint32_t> right_degree() const;

  // Per-family-map layer counts indexed by psi; sized by the largest psi + 1.
  std::vector<uint32_t> layers_per_psi() const;

  friend bool operator==(const LayeredBipartiteGraph& a, const LayeredBipartiteGraph& b) {
    return a.n == b.n && a.layers == b.layers && a.provenance == b.provenance;
  }
};

// Cuts [0,1] into n equal cells and connects cell i to cell j when some
// family map sends a positive-measure part of cell i into cell j. Each map's
// relation is decomposed into strictly increasing layers. n >= 2.
LayeredBipartiteGraph discretize(const MapFamily& fam, uint32_t n, Exec exec = Exec::parallel);

// Splits one monotone relation into layers: layer r holds each source's
// r-th smallest target, and equal consecutive targets inside a rank are
// spread over extra layers first-fit so every layer is strictly increasing.
// A strictly decreasing target anywhere in a rank means the relation crosses.
std::vector<PartialMonotoneMap> monotone_decompose(
    uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& relation);

// One n*n 0-1 matrix per layer, row-major, entry [j*n + i] = 1 iff the layer
// maps i to j. Row and column sums are at most one.
std::vector<std::vector<uint8_t>> dimension_matrices(const LayeredBipartiteGraph& g);

// format is one of: "edge-csv", "layered-json", "dot", "matrix-csv".
// Vertex indices are 0-based everywhere; lines end in LF, no quoting.
std::string export_graph(const LayeredBipartiteGraph& g, const std::string& format);

// Inverse of the layered-json export; validates sizes and layer strictness.
LayeredBipartiteGraph import_layered_json(const std::string& bytes);

}  // namespace monex
