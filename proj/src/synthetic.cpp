#include "mgad/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "mgad/rng.hpp"

namespace mgad {

DatasetBundle make_two_block_dataset(const SyntheticConfig& config) {
  if (config.nodes_per_block < 8) throw std::invalid_argument("synthetic: blocks too small");
  if (config.attribute_dim < 6) throw std::invalid_argument("synthetic: attribute_dim must be >= 6");
  const std::size_t b = config.nodes_per_block;
  const std::size_t n = 2 * b;
  Rng rng(derive_seed(config.seed, "synthetic"));

  std::vector<Edge> edges;
  for (std::size_t block = 0; block < 2; ++block) {
    const NodeId base = static_cast<NodeId>(block * b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t k = 1; k <= config.ring_halfwidth; ++k)
        edges.emplace_back(base + static_cast<NodeId>(i), base + static_cast<NodeId>((i + k) % b));
  }
  for (std::size_t e = 0; e < config.cross_edges; ++e) {
    const NodeId u = static_cast<NodeId>(rng.uniform_below(b));
    const NodeId v = static_cast<NodeId>(b + rng.uniform_below(b));
    edges.emplace_back(u, v);
  }

  const std::size_t d = config.attribute_dim;
  const std::size_t harmonic_dims = d - 4;
  DenseMatrix attrs(n, d);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t block = v / b;
    const double block_sign = block == 0 ? 1.0 : -1.0;
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(v % b) / static_cast<double>(b);
    for (std::size_t j = 0; j < 4; ++j) attrs(v, j) = block_sign + config.noise * rng.gaussian();
    for (std::size_t j = 0; j < harmonic_dims; ++j) {
      const double k = static_cast<double>(j / 2 + 1);
      const double base = (j % 2 == 0) ? std::cos(k * theta) : std::sin(k * theta);
      attrs(v, 4 + j) = base + config.noise * rng.gaussian();
    }
  }

  DatasetBundle bundle;
  bundle.graph = AttributedGraph::build(edges, std::move(attrs));
  bundle.name = "two-block";
  bundle.provenance.set_u64("synthetic_seed", config.seed);
  bundle.provenance.set_u64("nodes_per_block", b);
  return bundle;
}

DatasetBundle make_citation_scale_dataset(std::size_t nodes, std::size_t edges,
                                          std::size_t attribute_dim, std::uint64_t seed) {
  if (nodes < 2) throw std::invalid_argument("citation fixture: need at least two nodes");
  if (edges < nodes - 1 || edges > nodes * (nodes - 1) / 2)
    throw std::invalid_argument("citation fixture: edge count out of range");
  Rng rng(derive_seed(seed, "citation-fixture"));

  std::vector<Edge> edge_list;
  edge_list.reserve(edges);
  std::set<Edge> seen;
  // Random spanning tree keeps the graph connected.
  for (NodeId v = 1; v < nodes; ++v) {
    const NodeId u = static_cast<NodeId>(rng.uniform_below(v));
    edge_list.emplace_back(std::min(u, v), std::max(u, v));
    seen.insert(edge_list.back());
  }
  while (edge_list.size() < edges) {
    const NodeId u = static_cast<NodeId>(rng.uniform_below(nodes));
    const NodeId v = static_cast<NodeId>(rng.uniform_below(nodes));
    if (u == v) continue;
    const Edge e{std::min(u, v), std::max(u, v)};
    if (seen.insert(e).second) edge_list.push_back(e);
  }

  // Sparse binary bag-of-words style attributes.
  DenseMatrix attrs(nodes, attribute_dim);
  const std::size_t ones_per_row = std::max<std::size_t>(1, attribute_dim / 100);
  for (std::size_t v = 0; v < nodes; ++v)
    for (std::size_t k = 0; k < ones_per_row; ++k)
      attrs(v, rng.uniform_below(attribute_dim)) = 1.0;

  DatasetBundle bundle;
  bundle.graph = AttributedGraph::build(edge_list, std::move(attrs));
  bundle.name = "citation-scale";
  bundle.provenance.set_u64("synthetic_seed", seed);
  return bundle;
}

}  // namespace mgad
