#pragma once

#include <cstdint>

#include "mgad/dataset.hpp"

namespace mgad {

// Two-community benchmark graph. Each block is a ring lattice (every node
// linked to its nearest ring neighbors) plus a few random inter-block edges;
// attributes encode the node's block and smoothed ring position, so a node's
// features are predictable from its neighborhood until an injection perturbs
// them.
struct SyntheticConfig {
  std::size_t nodes_per_block = 150;
  std::size_t attribute_dim = 16;   // >= 6; 4 block dims + harmonic pairs
  std::size_t ring_halfwidth = 2;   // link to the k nearest ring positions per side
  std::size_t cross_edges = 30;     // random block-to-block edges
  double noise = 0.05;              // attribute noise sigma
  std::uint64_t seed = 0;
};

DatasetBundle make_two_block_dataset(const SyntheticConfig& config);

// Random connected graph with exactly the requested node/edge counts and a
// sparse 0/1 attribute matrix; stands in for citation-network fixtures when
// exact dataset statistics are needed.
DatasetBundle make_citation_scale_dataset(std::size_t nodes, std::size_t edges,
                                          std::size_t attribute_dim, std::uint64_t seed);

}  // namespace mgad
