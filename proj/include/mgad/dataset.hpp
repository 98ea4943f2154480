#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mgad/graph.hpp"
#include "mgad/rng.hpp"

namespace mgad {

// How attribute anomalies pick their donor row.
enum class AttributeInjection : std::uint8_t {
  CopyRandom = 0,    // overwrite with a uniformly chosen donor's row
  FarthestOfK = 1,   // pick the Euclidean-farthest of k random candidates
};

struct InjectionConfig {
  std::size_t clique_size = 15;
  std::size_t num_structural = 0;
  std::size_t num_attribute = 0;
  std::uint64_t seed = 0;
  AttributeInjection attribute_mode = AttributeInjection::CopyRandom;
  std::size_t attribute_candidates = 50;  // k for FarthestOfK

  // num_structural must be a multiple of clique_size and equal num_attribute.
  void validate() const;
};

// Ordered key-value record; order is preserved so serialization is stable.
class Provenance {
 public:
  void set(const std::string& key, std::string value);
  void set_u64(const std::string& key, std::uint64_t value);
  void set_double(const std::string& key, double value);
  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct DatasetBundle {
  AttributedGraph graph;
  std::string name;
  Provenance provenance;
};

// Reads the plain-text edge/attribute(/truth) files. Node count comes from
// the attribute row count; labels start all-X. Parse errors report the file
// and line number.
DatasetBundle load_dataset(const std::filesystem::path& edge_path,
                           const std::filesystem::path& attribute_path,
                           const std::filesystem::path& truth_path = {});

// Picks count/clique_size disjoint groups uniformly from non-anomalous nodes
// and makes each a complete subgraph (adding only missing edges). Returns the
// new graph and the chosen nodes; truth flags are set on them.
std::pair<AttributedGraph, std::vector<NodeId>> inject_structural_anomalies(
    const AttributedGraph& graph, std::size_t count, std::size_t clique_size, Rng& rng);

// Overwrites count uniformly chosen non-anomalous targets with a donor row.
// Donors are never the target and never an anomaly themselves.
std::pair<AttributedGraph, std::vector<NodeId>> inject_attribute_anomalies(
    const AttributedGraph& graph, std::size_t count, Rng& rng,
    AttributeInjection mode = AttributeInjection::CopyRandom, std::size_t candidates = 50);

// Labels ceil(ratio * |truth anomalies|) uniformly chosen true anomalies as O;
// every other node stays X. ratio must be in (0, 1].
AttributedGraph reveal_labels(const AttributedGraph& graph, double ratio, Rng& rng);

// Structural first, then attribute over the remaining pool, both from named
// sub-streams of config.seed. Provenance is stamped with the parameters.
DatasetBundle inject_anomalies(const DatasetBundle& base, const InjectionConfig& config);

// Bundle directory: edges.txt, attributes.txt, truth.txt, provenance.txt.
void save_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle load_bundle(const std::filesystem::path& dir);

}  // namespace mgad
