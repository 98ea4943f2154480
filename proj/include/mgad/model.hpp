#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mgad/graph.hpp"
#include "mgad/matrix.hpp"
#include "mgad/metapath.hpp"
#include "mgad/nn.hpp"

namespace mgad {

struct MGADConfig {
  double alpha = 0.8;  // attribute weight in loss and score
  std::vector<std::size_t> graph_encoder_dims{64, 64};     // input dim d is implied
  std::vector<std::size_t> subgraph_encoder_dims{64, 64};  // input dim d is implied
  std::vector<std::size_t> attr_decoder_hidden{64};        // output dim d is implied
  std::size_t epochs = 300;
  AdamConfig optimizer{};
  SamplerConfig sampler{};  // schemas default to the walk-length family when empty
  double reveal_ratio = 0.10;
  std::uint64_t seed = 0;
  std::size_t block_size = 1024;  // structure-decoder streaming rows
  bool attr_decoder_sigmoid = false;
  std::size_t threads = 1;

  std::size_t graph_embed_dim() const { return graph_encoder_dims.back(); }
  std::size_t subgraph_embed_dim() const { return subgraph_encoder_dims.back(); }
  std::size_t fused_dim() const { return graph_embed_dim() + subgraph_embed_dim(); }

  // Fills in default schemas for the configured walk length if none are set.
  SamplerConfig resolved_sampler() const;

  void validate() const;
};

// Dual GCN encoders plus the GCN attribute decoder; the structure decoder
// sigmoid(Z Z^T) is parameter-free.
struct MGADModel {
  std::vector<GCNLayer> graph_encoder;
  std::vector<GCNLayer> subgraph_encoder;
  std::vector<GCNLayer> attr_decoder;

  std::vector<Parameter*> parameters();
  void zero_grads();
};

MGADModel init_model(const MGADConfig& config, std::size_t attribute_dim, Rng& rng);

// Inputs that stay fixed across a training run: the normalized adjacencies
// and the subgraph lift map.
struct ForwardContext {
  const AttributedGraph* graph = nullptr;
  const AnomalySubgraph* subgraph = nullptr;  // may be empty
  NormalizedAdjacency adj;
  NormalizedAdjacency sub_adj;  // only when subgraph nonempty
  std::size_t threads = 1;

  ForwardContext(const AttributedGraph& g, const AnomalySubgraph& s, std::size_t threads = 1);
  bool has_subgraph() const { return subgraph != nullptr && !subgraph->empty(); }
};

struct ForwardPass {
  DenseMatrix z_graph;   // n x d_g
  DenseMatrix h_sub;     // k x d_s (empty without subgraph)
  DenseMatrix h_lifted;  // n x d_s, zero outside subgraph rows
  DenseMatrix z;         // n x (d_g + d_s)
  DenseMatrix x_hat;     // n x d
  std::vector<GCNCache> graph_caches;
  std::vector<GCNCache> sub_caches;
  std::vector<GCNCache> dec_caches;
};

// Whole-graph encoder chain.
DenseMatrix encode_graph(const MGADModel& model, const NormalizedAdjacency& adj,
                         const DenseMatrix& attributes, std::vector<GCNCache>* caches = nullptr,
                         std::size_t threads = 1);

// Subgraph encoder on the induced subgraph, lifted to parent size: row
// index_map[j] of the result holds the embedding of subgraph node j, all
// other rows are zero. `h_sub_out` receives the unlifted k x d_s embedding.
DenseMatrix encode_subgraph(const MGADModel& model, const AnomalySubgraph& subgraph,
                            const NormalizedAdjacency& sub_adj, std::size_t parent_n,
                            DenseMatrix* h_sub_out = nullptr,
                            std::vector<GCNCache>* caches = nullptr, std::size_t threads = 1);

// Row-wise concatenation [left | right].
DenseMatrix fuse(const DenseMatrix& left, const DenseMatrix& right);

// sigmoid(Z[row_begin:row_end] Z^T); the full matrix is never materialized
// for larger graphs, callers stream over row blocks.
DenseMatrix decode_structure_block(const DenseMatrix& z, std::size_t row_begin,
                                   std::size_t row_end, std::size_t threads = 1);

DenseMatrix decode_attributes(const MGADModel& model, const NormalizedAdjacency& adj,
                              const DenseMatrix& z, std::vector<GCNCache>* caches = nullptr,
                              std::size_t threads = 1);

ForwardPass forward(const MGADModel& model, const ForwardContext& ctx);

// One streamed pass over sigma(Z_block Z^T) against the stored adjacency
// (self-loops excluded from the target; the diagonal still participates).
struct StructureDecode {
  double loss_sq = 0.0;                // sum_ij (A_ij - Ahat_ij)^2
  DenseMatrix dz_term;                 // d(loss_sq)/dZ, when requested
  std::vector<double> row_residual_sq; // per-row sum_j (A_ij - Ahat_ij)^2, when requested
};
StructureDecode decode_structure_streamed(const AttributedGraph& graph, const DenseMatrix& z,
                                          std::size_t block_size, std::size_t threads,
                                          bool want_grad, bool want_rows);

struct LossBreakdown {
  double total = 0.0;
  double structure_sq = 0.0;  // ||A - Ahat||_F^2
  double attribute_sq = 0.0;  // ||X - Xhat||_F^2
};

// L = (1 - alpha) ||A - Ahat||_F^2 + alpha ||X - Xhat||_F^2. Throws
// std::runtime_error on a non-finite value.
LossBreakdown loss(const AttributedGraph& graph, const ForwardPass& fwd, double alpha,
                   std::size_t block_size, std::size_t threads = 1);

// Populates gradients for every model parameter (adds to existing values, so
// call model.zero_grads() between steps).
void backward(const AttributedGraph& graph, MGADModel& model, const ForwardContext& ctx,
              ForwardPass& fwd, double alpha, std::size_t block_size);

struct TrainHistory {
  std::vector<double> losses;         // one per epoch
  std::vector<double> epoch_seconds;  // wall clock, reporting only
};

std::pair<MGADModel, TrainHistory> train(const AttributedGraph& graph,
                                         const AnomalySubgraph& subgraph,
                                         const MGADConfig& config);

struct ScoreReport {
  std::vector<double> scores;   // per node, >= 0
  std::vector<NodeId> ranking;  // descending score, ties by ascending NodeId
};

std::vector<NodeId> rank_by_score(const std::vector<double>& scores);

// score(v_i) = (1-alpha) ||a_i - ahat_i||_2 + alpha ||x_i - xhat_i||_2,
// structure rows streamed.
ScoreReport anomaly_scores(const AttributedGraph& graph, const MGADModel& model,
                           const AnomalySubgraph& subgraph, double alpha,
                           std::size_t block_size = 1024, std::size_t threads = 1);

// Checkpoint: magic, config echo, then per-chain layer dims and row-major
// float64 weights (little-endian).
void save_checkpoint(const MGADModel& model, const MGADConfig& config,
                     const std::filesystem::path& path);
std::pair<MGADModel, MGADConfig> load_checkpoint(const std::filesystem::path& path);

// Key-value form of MGADConfig used by checkpoints and the CLI config file.
std::vector<std::pair<std::string, std::string>> config_to_entries(const MGADConfig& config);
void apply_config_entry(MGADConfig& config, const std::string& key, const std::string& value);

void write_matrix_text(const DenseMatrix& m, const std::filesystem::path& path);

}  // namespace mgad
