#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mgad/graph.hpp"
#include "mgad/matrix.hpp"
#include "mgad/rng.hpp"

namespace mgad {

enum class Activation : std::uint8_t { Identity = 0, ReLU = 1, Sigmoid = 2 };

double sigmoid(double x);
double relu(double x);
double sigmoid_derivative_from_pre(double x);
double relu_derivative_from_pre(double x);

void apply_activation(Activation act, const DenseMatrix& pre, DenseMatrix& out);
// grad := grad (.) act'(pre), evaluated at the cached pre-activations.
void apply_activation_derivative(Activation act, const DenseMatrix& pre, DenseMatrix& grad);

// Weight matrix plus its gradient accumulator. Named for diagnostics.
struct Parameter {
  std::string name;
  DenseMatrix value;
  DenseMatrix grad;

  Parameter() = default;
  Parameter(std::string param_name, DenseMatrix initial)
      : name(std::move(param_name)),
        value(std::move(initial)),
        grad(DenseMatrix::zeros(value.rows(), value.cols())) {}

  void zero_grad() { grad.fill(0.0); }
};

// One graph convolution: H_out = act(S * H_in * W).
struct GCNLayer {
  Parameter weight;  // d_in x d_out
  Activation activation = Activation::ReLU;

  std::size_t d_in() const { return weight.value.rows(); }
  std::size_t d_out() const { return weight.value.cols(); }
};

// Forward cache for one layer application; consumed by gcn_backward.
struct GCNCache {
  DenseMatrix sh;   // S * H_in
  DenseMatrix pre;  // S * H_in * W
};

DenseMatrix gcn_forward(const NormalizedAdjacency& adj, const DenseMatrix& h_in,
                        const GCNLayer& layer, GCNCache& cache, std::size_t threads = 1);

// Accumulates into layer.weight.grad and returns the gradient w.r.t. H_in.
// grad_out is consumed (overwritten with grad (.) act'(pre)).
DenseMatrix gcn_backward(const NormalizedAdjacency& adj, GCNLayer& layer, const GCNCache& cache,
                         DenseMatrix grad_out, std::size_t threads = 1);

// Entries uniform in [-a, a], a = sqrt(6 / (d_in + d_out)).
DenseMatrix xavier_init(std::size_t d_in, std::size_t d_out, Rng& rng);

struct AdamConfig {
  double learning_rate = 5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed parameter list. Accumulator slots are
// keyed by position, so the same parameter order must be passed every step.
class AdamState {
 public:
  explicit AdamState(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const { return config_; }
  std::size_t step_count() const { return step_; }

  // Applies one update in place and zeroes the gradients. Throws
  // std::runtime_error naming the parameter on a non-finite gradient.
  void step(std::vector<Parameter*>& params);

 private:
  AdamConfig config_;
  std::size_t step_ = 0;
  std::vector<DenseMatrix> m_;
  std::vector<DenseMatrix> v_;
};

// Central-difference gradient check. `loss` must be deterministic; `params`
// must already hold the analytic gradients for the current point. Checks
// every coordinate, or `max_coords_per_param` evenly strided ones when a
// parameter is larger. Returns the max relative discrepancy, with the
// denominator floored at `scale` to keep near-zero coordinates meaningful.
double finite_difference_check(const std::function<double()>& loss, std::vector<Parameter*>& params,
                               double eps, double scale = 1e-6,
                               std::size_t max_coords_per_param = 0);

}  // namespace mgad
