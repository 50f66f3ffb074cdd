#include "monex/graph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "monex/errors.hpp"

namespace monex {

size_t PartialMonotoneMap::defined() const {
  size_t c = 0;
  for (const auto& t : targets) c += t.has_value();
  return c;
}

bool PartialMonotoneMap::strictly_increasing() const {
  if (targets.size() != n) return false;
  bool seen = false;
  uint32_t last = 0;
  for (const auto& t : targets) {
    if (!t) continue;
    if (*t >= n) return false;
    if (seen && *t <= last) return false;
    last = *t;
    seen = true;
  }
  return true;
}

std::vector<std::pair<uint32_t, uint32_t>> LayeredBipartiteGraph::edges() const {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (const PartialMonotoneMap& layer : layers)
    for (uint32_t i = 0; i < layer.n; ++i)
      if (layer.targets[i]) out.emplace_back(i, *layer.targets[i]);
  return out;
}

std::vector<std::pair<uint32_t, uint32_t>> LayeredBipartiteGraph::unique_edges() const {
  auto out = edges();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

size_t LayeredBipartiteGraph::edge_count() const {
  size_t c = 0;
  for (const PartialMonotoneMap& layer : layers) c += layer.defined();
  return c;
}

std::vector<uint32_t> LayeredBipartiteGraph::left_degree() const {
  std::vector<uint32_t> deg(n, 0);
  for (const PartialMonotoneMap& layer : layers)
    for (uint32_t i = 0; i < layer.n; ++i)
      if (layer.targets[i]) ++deg[i];
  return deg;
}

std::vector<uint32_t> LayeredBipartiteGraph::right_degree() const {
  std::vector<uint32_t> deg(n, 0);
  for (const PartialMonotoneMap& layer : layers)
    for (uint32_t i = 0; i < layer.n; ++i)
      if (layer.targets[i]) ++deg[*layer.targets[i]];
  return deg;
}

std::vector<uint32_t> LayeredBipartiteGraph::layers_per_psi() const {
  std::vector<uint32_t> counts;
  for (const LayerProvenance& p : provenance) {
    if (p.psi >= counts.size()) counts.resize(p.psi + 1, 0);
    ++counts[p.psi];
  }
  return counts;
}

// Core decomposition from per-source sorted target lists. Minimum cover of
// the relation by strictly increasing partial maps: edges are scanned by
// source, targets high-to-low within a source, and each edge joins the
// layer with the largest last target still below its own (else a new
// layer). The layer count equals the largest antichain, which for a
// crossing-free relation is the larger of the two side degrees, so it never
// exceeds max degree + 1. For stall-free relations (no two consecutive
// sources sharing an equal-rank target) the layers coincide exactly with
// the overlap-rank classes; a tie displaces one edge into a neighboring
// layer instead of forcing an extra one.
static std::vector<PartialMonotoneMap> decompose_targets(
    uint32_t n, const std::vector<std::vector<uint32_t>>& targets) {
  // A pair i < i' with a target of i strictly above a target of i' cannot
  // come from a monotone map.
  bool seen = false;
  uint32_t run_hi = 0, run_src = 0;
  for (uint32_t i = 0; i < n; ++i) {
    if (targets[i].empty()) continue;
    if (seen && targets[i].front() < run_hi)
      throw NotMonotoneRelation("monotone_decompose: sources " + std::to_string(run_src) +
                                " and " + std::to_string(i) + " have crossing targets");
    if (!seen || targets[i].back() >= run_hi) {
      run_hi = targets[i].back();
      run_src = i;
    }
    seen = true;
  }

  std::vector<PartialMonotoneMap> layers;
  std::vector<uint32_t> last;  // last target per layer; stays non-increasing
  for (uint32_t i = 0; i < n; ++i) {
    for (auto it = targets[i].rbegin(); it != targets[i].rend(); ++it) {
      uint32_t t = *it;
      // First layer whose last target is below t: with `last` non-increasing
      // this is the largest compatible one. A layer that already took an
      // edge of source i holds a higher target (high-to-low order), so it is
      // never a candidate and source-strictness comes for free.
      size_t lo = 0, hi = last.size();
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (last[mid] < t)
          hi = mid;
        else
          lo = mid + 1;
      }
      if (lo == last.size()) {
        last.push_back(t);
        layers.emplace_back(n);
        layers.back().targets[i] = t;
      } else {
        last[lo] = t;
        layers[lo].targets[i] = t;
      }
    }
  }

  // Canonical rank order: by first defined source, then by its target.
  // Distinct layers never share a (source, target) pair, so this is a
  // strict order and the result is deterministic.
  std::sort(layers.begin(), layers.end(),
            [](const PartialMonotoneMap& x, const PartialMonotoneMap& y) {
              for (uint32_t i = 0; i < x.n; ++i) {
                bool dx = x.targets[i].has_value(), dy = y.targets[i].has_value();
                if (dx != dy) return dx;
                if (dx && *x.targets[i] != *y.targets[i]) return *x.targets[i] < *y.targets[i];
              }
              return false;
            });
  return layers;
}

std::vector<PartialMonotoneMap> monotone_decompose(
    uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& relation) {
  std::vector<std::vector<uint32_t>> targets(n);
  for (auto [i, j] : relation) {
    if (i >= n || j >= n)
      throw std::invalid_argument("monotone_decompose: vertex index out of range");
    targets[i].push_back(j);
  }
  for (auto& t : targets) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  return decompose_targets(n, targets);
}

// Target cells of one source cell under one map: the contiguous range of
// cells meeting the image in positive measure.
static std::vector<std::vector<uint32_t>> map_targets(const PiecewiseMap& m, uint32_t n) {
  std::vector<std::vector<uint32_t>> targets(n);
  Rational nn(static_cast<long>(n));
  for (uint32_t i = 0; i < n; ++i) {
    Rational lo = max(Rational(i, n), m.domain.lo);
    Rational hi = min(Rational(i + 1, n), m.domain.hi);
    if (!(lo < hi)) continue;
    Rational u = m.eval(lo) * nn, v = m.eval(hi) * nn;
    // Cells j with j < v and u < j+1, i.e. the integers in (u-1, v).
    mpz_class j_lo = u.is_integer() ? u.numerator() : floor_int(u);
    mpz_class j_hi = v.is_integer() ? v.numerator() - 1 : floor_int(v);
    for (mpz_class j = j_lo; j <= j_hi; ++j) {
      long cell = j.get_si();
      if (cell < 0 || cell >= static_cast<long>(n))
        throw std::logic_error("discretize: image cell out of range");
      targets[i].push_back(static_cast<uint32_t>(cell));
    }
  }
  return targets;
}

LayeredBipartiteGraph discretize(const MapFamily& fam, uint32_t n, Exec exec) {
  if (n < 2) throw InvalidN("discretize: n must be at least 2");
  LayeredBipartiteGraph g;
  g.n = n;

  std::vector<std::vector<PartialMonotoneMap>> per_map(fam.maps.size());
  int threads = thread_count(exec);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (size_t m = 0; m < fam.maps.size(); ++m)
    per_map[m] = decompose_targets(n, map_targets(fam.maps[m], n));

  for (size_t m = 0; m < per_map.size(); ++m) {
    for (size_t r = 0; r < per_map[m].size(); ++r) {
      g.layers.push_back(std::move(per_map[m][r]));
      g.provenance.push_back({static_cast<uint32_t>(m), static_cast<uint32_t>(r)});
    }
  }
  return g;
}

std::vector<std::vector<uint8_t>> dimension_matrices(const LayeredBipartiteGraph& g) {
  std::vector<std::vector<uint8_t>> mats;
  mats.reserve(g.layers.size());
  for (const PartialMonotoneMap& layer : g.layers) {
    std::vector<uint8_t> M(static_cast<size_t>(g.n) * g.n, 0);
    for (uint32_t i = 0; i < layer.n; ++i)
      if (layer.targets[i]) M[static_cast<size_t>(*layer.targets[i]) * g.n + i] = 1;
    mats.push_back(std::move(M));
  }
  return mats;
}

static std::string export_edge_csv(const LayeredBipartiteGraph& g) {
  std::string out = "layer,i,j\n";
  for (size_t l = 0; l < g.layers.size(); ++l)
    for (uint32_t i = 0; i < g.n; ++i)
      if (g.layers[l].targets[i])
        out += std::to_string(l) + "," + std::to_string(i) + "," +
               std::to_string(*g.layers[l].targets[i]) + "\n";
  return out;
}

static nlohmann::json graph_json(const LayeredBipartiteGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["layers"] = nlohmann::json::array();
  for (const PartialMonotoneMap& layer : g.layers) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& v : layer.targets) {
      if (v) {
        t.push_back(*v);
      } else {
        t.push_back(nullptr);
      }
    }
    j["layers"].push_back(std::move(t));
  }
  j["provenance"] = nlohmann::json::array();
  for (const LayerProvenance& p : g.provenance)
    j["provenance"].push_back(nlohmann::json::array({p.psi, p.rank}));
  return j;
}

static std::string export_dot(const LayeredBipartiteGraph& g) {
  std::string out = "digraph bipartite {\n  rankdir=LR;\n";
  out += "  subgraph cluster_left { label=\"L\";";
  for (uint32_t i = 0; i < g.n; ++i) out += " L" + std::to_string(i) + ";";
  out += " }\n  subgraph cluster_right { label=\"R\";";
  for (uint32_t i = 0; i < g.n; ++i) out += " R" + std::to_string(i) + ";";
  out += " }\n";
  for (size_t l = 0; l < g.layers.size(); ++l)
    for (uint32_t i = 0; i < g.n; ++i)
      if (g.layers[l].targets[i])
        out += "  L" + std::to_string(i) + " -> R" +
               std::to_string(*g.layers[l].targets[i]) + " [label=\"" +
               std::to_string(l) + "\"];\n";
  out += "}\n";
  return out;
}

static std::string export_matrix_csv(const LayeredBipartiteGraph& g) {
  auto mats = dimension_matrices(g);
  std::string out;
  for (size_t l = 0; l < mats.size(); ++l) {
    out += "# layer " + std::to_string(l) + " psi " + std::to_string(g.provenance[l].psi) +
           " rank " + std::to_string(g.provenance[l].rank) + "\n";
    for (uint32_t j = 0; j < g.n; ++j) {
      for (uint32_t i = 0; i < g.n; ++i) {
        if (i) out += ",";
        out += mats[l][static_cast<size_t>(j) * g.n + i] ? "1" : "0";
      }
      out += "\n";
    }
  }
  return out;
}

std::string export_graph(const LayeredBipartiteGraph& g, const std::string& format) {
  if (format == "edge-csv") return export_edge_csv(g);
  if (format == "layered-json") return graph_json(g).dump() + "\n";
  if (format == "dot") return export_dot(g);
  if (format == "matrix-csv") return export_matrix_csv(g);
  throw UnknownFormat("export_graph: unknown format '" + format + "'");
}

LayeredBipartiteGraph import_layered_json(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("import_layered_json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("layers") || !j.contains("provenance"))
    throw ParseError("import_layered_json: missing fields");
  LayeredBipartiteGraph g;
  g.n = j["n"].get<uint32_t>();
  for (const auto& layer : j["layers"]) {
    PartialMonotoneMap m(g.n);
    if (layer.size() != g.n) throw ParseError("import_layered_json: layer size mismatch");
    for (uint32_t i = 0; i < g.n; ++i)
      if (!layer[i].is_null()) m.targets[i] = layer[i].get<uint32_t>();
    if (!m.strictly_increasing())
      throw NotMonotoneRelation("import_layered_json: layer is not strictly increasing");
    g.layers.push_back(std::move(m));
  }
  for (const auto& p : j["provenance"]) {
    if (!p.is_array() || p.size() != 2) throw ParseError("import_layered_json: bad provenance");
    g.provenance.push_back({p[0].get<uint32_t>(), p[1].get<uint32_t>()});
  }
  if (g.provenance.size() != g.layers.size())
    throw ParseError("import_layered_json: provenance size mismatch");
  return g;
}

}  // namespace monex
