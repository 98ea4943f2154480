#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgad/graph.hpp"
#include "mgad/rng.hpp"

namespace mgad {

// Ordered label-type pattern a walk must realize, e.g. X-O-X.
struct MetapathSchema {
  std::vector<LabelType> pattern;

  std::size_t length() const { return pattern.size(); }
  bool contains_anomaly_type() const;
  std::string to_string() const;
};

// Parses strings like "XOX" (case-insensitive). Patterns without any O type
// cannot anchor an anomaly subgraph and are rejected unless `permissive`.
MetapathSchema parse_schema(const std::string& text, bool permissive = false);

// Comma-separated list, e.g. "XOX,OXO".
std::vector<MetapathSchema> parse_schema_list(const std::string& text, bool permissive = false);

struct Walk {
  std::vector<NodeId> nodes;
};

enum class SamplingMode : std::uint8_t {
  Rejection = 0,    // uniform neighbor steps, then filter by schema
  Constrained = 1,  // each step drawn uniformly from neighbors of the required type
};

struct SamplerConfig {
  std::size_t walks_per_node = 1;  // n, 1..5
  std::size_t walk_length = 3;     // l, 3..5
  std::vector<MetapathSchema> schemas;  // all of length l; default X-O-X family
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::Rejection;

  void validate() const;
};

// Built-in schema for a given walk length: XOX, XOOX, XOXOX.
MetapathSchema default_schema(std::size_t walk_length);

struct SamplerStats {
  std::uint64_t walks_attempted = 0;
  std::uint64_t walks_accepted = 0;
  std::uint64_t steps_taken = 0;  // neighbor transitions drawn
};

// Induced subgraph over the union of accepted-walk nodes, with the walks and
// the map back to parent node ids. Empty when no walk matched.
struct AnomalySubgraph {
  AttributedGraph graph;
  std::vector<NodeId> index_map;  // subgraph index -> parent NodeId
  std::vector<Walk> walks;
  std::vector<MetapathSchema> schemas;
  SamplerStats stats;

  bool empty() const { return index_map.empty(); }
};

// Uniform random walk of exactly `length` nodes starting at `start`; nullopt
// if any visited node has no neighbors.
std::optional<Walk> random_walk(const AttributedGraph& graph, NodeId start, std::size_t length,
                                Rng& rng, SamplerStats* stats = nullptr);

// Typed walk: step i goes to a uniform neighbor whose label matches
// schema.pattern[i]. Requires label(start) == pattern[0]; nullopt on any
// dead end.
std::optional<Walk> constrained_walk(const AttributedGraph& graph, NodeId start,
                                     const MetapathSchema& schema, Rng& rng,
                                     SamplerStats* stats = nullptr);

// True iff the walk's label sequence equals the schema position-wise.
bool matches_schema(const Walk& walk, const std::vector<LabelType>& labels,
                    const MetapathSchema& schema);

// Runs walks_per_node attempts from every node (ascending NodeId order with
// per-node derived RNG streams, so the result is independent of `threads`)
// and keeps walks matching any configured schema. O(|V| * n * l) walk steps.
AnomalySubgraph generate_anomaly_subgraph(const AttributedGraph& graph, const SamplerConfig& config,
                                          std::size_t threads = 1);

// Row-stochastic-on-support typed transition matrix: entry (i, j) is
// 1/deg_to_type(i) for from_type nodes i and to_type neighbors j, zero rows
// elsewhere. Serves as the measurable oracle for sampler step frequencies.
CsrMatrix typed_transition_probability(const AttributedGraph& graph, LabelType from_type,
                                       LabelType to_type);

}  // namespace mgad
