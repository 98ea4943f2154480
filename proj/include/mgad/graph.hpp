#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mgad/matrix.hpp"

namespace mgad {

using NodeId = std::uint32_t;

// O = node revealed as a known anomaly, X = unknown status.
enum class LabelType : std::uint8_t { X = 0, O = 1 };

inline char label_char(LabelType t) { return t == LabelType::O ? 'O' : 'X'; }

using Edge = std::pair<NodeId, NodeId>;

// Sparse matrix in compressed row form. For adjacency use the values vector
// is empty (pattern-only); sym_normalize fills it.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // rows + 1 entries
  std::vector<NodeId> col_idx;
  std::vector<double> values;  // empty or col_idx.size() entries

  std::span<const NodeId> row_cols(std::size_t i) const {
    return {col_idx.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }
  std::span<const double> row_vals(std::size_t i) const {
    return {values.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }
  std::size_t nnz() const { return col_idx.size(); }
};

// Symmetrically normalized self-looped adjacency: entries 1/sqrt(d~_i d~_j)
// on the pattern of A + I, with d~_i = 1 + degree(i).
struct NormalizedAdjacency {
  CsrMatrix matrix;
  std::size_t dim() const { return matrix.rows; }
};

// Undirected, unweighted attributed graph. Adjacency is stored symmetric with
// sorted, deduplicated neighbor lists and no self-loops. Immutable after
// construction; label/truth changes go through with_labels / with_truth copies.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  // Symmetrizes and deduplicates `edges`, drops self-edges. Node count is
  // taken from the attribute row count. Throws std::invalid_argument on
  // out-of-range endpoints or a label count mismatch.
  static AttributedGraph build(const std::vector<Edge>& edges, DenseMatrix attributes,
                               std::vector<LabelType> labels);

  // Same, with all labels initialized to X.
  static AttributedGraph build(const std::vector<Edge>& edges, DenseMatrix attributes);

  std::size_t num_nodes() const { return adjacency_.rows; }
  std::size_t num_edges() const { return adjacency_.nnz() / 2; }  // undirected count
  std::size_t attribute_dim() const { return attributes_.cols(); }

  // Sorted, deduplicated adjacency list of v (never contains v).
  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  // Every undirected edge once, as (min, max) pairs in lexicographic order.
  std::vector<Edge> edge_list() const;

  const CsrMatrix& adjacency() const { return adjacency_; }
  const DenseMatrix& attributes() const { return attributes_; }

  LabelType label(NodeId v) const { return labels_[v]; }
  const std::vector<LabelType>& labels() const { return labels_; }
  std::size_t count_labeled_anomalies() const;

  bool has_truth() const { return truth_.has_value(); }
  const std::vector<bool>& truth() const { return *truth_; }
  bool is_true_anomaly(NodeId v) const { return truth_.has_value() && (*truth_)[v]; }
  std::size_t count_true_anomalies() const;

  AttributedGraph with_labels(std::vector<LabelType> labels) const;
  AttributedGraph with_truth(std::vector<bool> truth) const;
  AttributedGraph with_attributes(DenseMatrix attributes) const;

 private:
  CsrMatrix adjacency_;
  DenseMatrix attributes_;
  std::vector<LabelType> labels_;
  std::optional<std::vector<bool>> truth_;
};

NormalizedAdjacency sym_normalize(const AttributedGraph& graph);

// Subgraph induced by `nodes`: their attribute rows, labels, truth flags, and
// every parent edge between them. The returned index map sends subgraph index
// -> parent NodeId (ascending). Duplicate input nodes are collapsed.
std::pair<AttributedGraph, std::vector<NodeId>> induced_subgraph(const AttributedGraph& graph,
                                                                 std::span<const NodeId> nodes);

// out = S * dense, with S treated as a general sparse matrix.
DenseMatrix spmm(const CsrMatrix& sparse, const DenseMatrix& dense, std::size_t threads = 1);

inline DenseMatrix spmm(const NormalizedAdjacency& adj, const DenseMatrix& dense,
                        std::size_t threads = 1) {
  return spmm(adj.matrix, dense, threads);
}

}  // namespace mgad
