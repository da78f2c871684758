#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace isadre {

// Forward-mode scalar: value plus directional derivative along one fixed
// input direction.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator*(double c, Dual a) { return {c * a.v, c * a.d}; }
  friend Dual operator/(Dual a, Dual b) {
    double inv = 1.0 / b.v;
    return {a.v * inv, (a.d - a.v * b.d * inv) * inv};
  }
};

inline Dual tanh(Dual a) {
  double t = std::tanh(a.v);
  return {t, (1.0 - t * t) * a.d};
}
inline Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual exp(Dual a) {
  double e = std::exp(a.v);
  return {e, e * a.d};
}

// Shape of one affine layer: weight is rows x cols, bias is rows.
struct LayerShape {
  int rows = 0;
  int cols = 0;
};

// Flat parameter storage for a stack of affine layers. The flat view is what
// the optimizer and checkpoints consume; the layout gives per-layer slices.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::vector<LayerShape> layout);

  std::size_t size() const { return values_.size(); }
  const std::vector<LayerShape>& layout() const { return layout_; }
  std::size_t layer_count() const { return layout_.size(); }

  double* weights(std::size_t layer) { return values_.data() + w_offset_[layer]; }
  const double* weights(std::size_t layer) const { return values_.data() + w_offset_[layer]; }
  double* biases(std::size_t layer) { return values_.data() + b_offset_[layer]; }
  const double* biases(std::size_t layer) const { return values_.data() + b_offset_[layer]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  void set_zero();
  bool all_finite() const;
  void add(const ParamVector& other);  // elementwise; layouts must match

 private:
  std::vector<double> values_;
  std::vector<LayerShape> layout_;
  std::vector<std::size_t> w_offset_;
  std::vector<std::size_t> b_offset_;
};

// Topology of the scalar MLP u(x, times...). `time_inputs` is 2 for the
// secant model u(x, l, t) and 1 for the tangent baseline s(x, t). Each time
// input is expanded to [s, sin(2^k pi s), cos(2^k pi s)] for k = 0..F-1
// before the first layer.
struct NetSpec {
  int data_dim = 1;
  int time_inputs = 2;
  std::vector<int> hidden = {128, 128, 128};
  int time_freqs = 4;

  int time_feature_dim() const { return 1 + 2 * time_freqs; }
  int embedded_dim() const { return data_dim + time_inputs * time_feature_dim(); }
  std::vector<LayerShape> layer_layout() const;
};

// Scalar MLP with tanh hidden units, reverse-mode parameter gradients and
// exact forward-mode input JVPs. Evaluation never mutates members, so a net
// may be shared read-only across threads; only init/param writes are
// single-writer.
class SecantNet {
 public:
  explicit SecantNet(NetSpec spec);

  // Fan-in uniform init for all layers; the final layer is zeroed so the
  // freshly built net is identically zero.
  void init_params(std::mt19937_64& rng);

  const NetSpec& spec() const { return spec_; }
  ParamVector& params() { return params_; }
  const ParamVector& params() const { return params_; }

  // Scratch space for one evaluation; reuse across calls to avoid churn.
  // acts[0] is the embedded input, acts[1..H] the hidden post-activations.
  struct Trace {
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> tangents;  // used only by the jvp path
  };
  Trace make_trace() const;

  double forward(std::span<const double> x, std::span<const double> times) const;
  double forward(std::span<const double> x, std::span<const double> times, Trace& tr) const;

  // Directional derivative of forward with respect to the (x, times) inputs
  // along (x_dir, times_dir), with parameters treated as constants. Exact for
  // the smooth primitives used here.
  double jvp(std::span<const double> x, std::span<const double> times,
             std::span<const double> x_dir, std::span<const double> times_dir) const;

  // Fused primal + tangent pass; fills tr with the primal activations so a
  // subsequent backward() can reuse them.
  std::pair<double, double> forward_jvp(std::span<const double> x,
                                        std::span<const double> times,
                                        std::span<const double> x_dir,
                                        std::span<const double> times_dir,
                                        Trace& tr) const;

  // Accumulate upstream * d(output)/d(theta) into grad using the primal
  // activations recorded in tr. grad must share this net's layout.
  void backward_params(const Trace& tr, double upstream, ParamVector& grad) const;

  // Convenience wrappers for the secant signature u(x, l, t).
  double forward(std::span<const double> x, double l, double t) const;
  double jvp(std::span<const double> x, double l, double t,
             std::span<const double> x_dir, double dl, double dt) const;

 private:
  void check_inputs(std::span<const double> x, std::span<const double> times) const;
  void embed(std::span<const double> x, std::span<const double> times,
             std::vector<double>& out) const;
  void embed_with_tangent(std::span<const double> x, std::span<const double> times,
                          std::span<const double> x_dir, std::span<const double> times_dir,
                          std::vector<double>& out, std::vector<double>& out_dot) const;

  NetSpec spec_;
  ParamVector params_;
};

// Reverse-mode gradient of a batch loss with upstream = dLoss/du per sample.
// Returns the sum over samples of upstream[i] * d u(x_i, times_i)/d theta.
// Chunked accumulation keeps the result bit-identical for any thread count.
ParamVector grad_params(const SecantNet& net,
                        std::span<const std::vector<double>> x_batch,
                        std::span<const std::vector<double>> times_batch,
                        std::span<const double> upstream, int threads = 1);

// First/second-moment adaptive optimizer state (bias-corrected update).
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  ParamVector m;
  ParamVector v;
  std::int64_t step = 0;
  std::int64_t skipped = 0;

  AdamState() = default;
  explicit AdamState(const ParamVector& like);

  // Applies one update in place. Non-finite gradients skip the step and bump
  // the skipped counter instead of poisoning the moments.
  bool apply(const AdamConfig& cfg, const ParamVector& grad, ParamVector& params);
};

}  // namespace isadre
