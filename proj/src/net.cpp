#include "isadre/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isadre/parallel.hpp"
#include "isadre/rng.hpp"

namespace isadre {

namespace {
constexpr double kPi = 3.141592653589793238462643;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

ParamVector::ParamVector(std::vector<LayerShape> layout) : layout_(std::move(layout)) {
  std::size_t total = 0;
  w_offset_.reserve(layout_.size());
  b_offset_.reserve(layout_.size());
  for (const auto& s : layout_) {
    require(s.rows > 0 && s.cols > 0, "ParamVector: layer shape must be positive");
    w_offset_.push_back(total);
    total += static_cast<std::size_t>(s.rows) * s.cols;
    b_offset_.push_back(total);
    total += static_cast<std::size_t>(s.rows);
  }
  values_.assign(total, 0.0);
}

void ParamVector::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

bool ParamVector::all_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void ParamVector::add(const ParamVector& other) {
  require(other.values_.size() == values_.size(), "ParamVector::add: size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
}

std::vector<LayerShape> NetSpec::layer_layout() const {
  std::vector<LayerShape> shapes;
  int in = embedded_dim();
  for (int h : hidden) {
    shapes.push_back({h, in});
    in = h;
  }
  shapes.push_back({1, in});
  return shapes;
}

SecantNet::SecantNet(NetSpec spec) : spec_(std::move(spec)), params_(spec_.layer_layout()) {
  require(spec_.data_dim >= 1, "SecantNet: data_dim must be >= 1");
  require(spec_.time_inputs == 1 || spec_.time_inputs == 2,
          "SecantNet: time_inputs must be 1 or 2");
  require(spec_.time_freqs >= 0, "SecantNet: time_freqs must be >= 0");
  for (int h : spec_.hidden) require(h >= 1, "SecantNet: hidden widths must be >= 1");
}

void SecantNet::init_params(std::mt19937_64& rng) {
  const auto& layout = params_.layout();
  for (std::size_t layer = 0; layer < layout.size(); ++layer) {
    const bool last = layer + 1 == layout.size();
    const double bound = last ? 0.0 : 1.0 / std::sqrt(static_cast<double>(layout[layer].cols));
    double* w = params_.weights(layer);
    const std::size_t n = static_cast<std::size_t>(layout[layer].rows) * layout[layer].cols;
    for (std::size_t i = 0; i < n; ++i) w[i] = rngutil::uniform(rng, -bound, bound);
    double* b = params_.biases(layer);
    for (int i = 0; i < layout[layer].rows; ++i) b[i] = 0.0;
  }
}

SecantNet::Trace SecantNet::make_trace() const {
  Trace tr;
  tr.acts.resize(spec_.hidden.size() + 1);
  tr.acts[0].resize(spec_.embedded_dim());
  for (std::size_t i = 0; i < spec_.hidden.size(); ++i) tr.acts[i + 1].resize(spec_.hidden[i]);
  tr.tangents.resize(tr.acts.size());
  for (std::size_t i = 0; i < tr.acts.size(); ++i) tr.tangents[i].resize(tr.acts[i].size());
  return tr;
}

void SecantNet::check_inputs(std::span<const double> x, std::span<const double> times) const {
  require(static_cast<int>(x.size()) == spec_.data_dim, "SecantNet: x dimension mismatch");
  require(static_cast<int>(times.size()) == spec_.time_inputs,
          "SecantNet: time input count mismatch");
  for (double v : x) require(std::isfinite(v), "SecantNet: non-finite input");
  for (double v : times) require(std::isfinite(v), "SecantNet: non-finite time input");
}

void SecantNet::embed(std::span<const double> x, std::span<const double> times,
                      std::vector<double>& out) const {
  out.resize(spec_.embedded_dim());
  std::size_t k = 0;
  for (double v : x) out[k++] = v;
  for (double s : times) {
    out[k++] = s;
    double freq = kPi;
    for (int f = 0; f < spec_.time_freqs; ++f) {
      out[k++] = std::sin(freq * s);
      out[k++] = std::cos(freq * s);
      freq *= 2.0;
    }
  }
}

void SecantNet::embed_with_tangent(std::span<const double> x, std::span<const double> times,
                                   std::span<const double> x_dir,
                                   std::span<const double> times_dir, std::vector<double>& out,
                                   std::vector<double>& out_dot) const {
  out.resize(spec_.embedded_dim());
  out_dot.resize(spec_.embedded_dim());
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[k] = x[i];
    out_dot[k] = x_dir[i];
    ++k;
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = times[i];
    const double ds = times_dir[i];
    out[k] = s;
    out_dot[k] = ds;
    ++k;
    double freq = kPi;
    for (int f = 0; f < spec_.time_freqs; ++f) {
      out[k] = std::sin(freq * s);
      out_dot[k] = freq * std::cos(freq * s) * ds;
      ++k;
      out[k] = std::cos(freq * s);
      out_dot[k] = -freq * std::sin(freq * s) * ds;
      ++k;
      freq *= 2.0;
    }
  }
}

double SecantNet::forward(std::span<const double> x, std::span<const double> times) const {
  Trace tr = make_trace();
  return forward(x, times, tr);
}

double SecantNet::forward(std::span<const double> x, std::span<const double> times,
                          Trace& tr) const {
  check_inputs(x, times);
  embed(x, times, tr.acts[0]);
  const auto& layout = params_.layout();
  const std::size_t hidden_layers = spec_.hidden.size();
  for (std::size_t layer = 0; layer < hidden_layers; ++layer) {
    const auto& in = tr.acts[layer];
    auto& outv = tr.acts[layer + 1];
    const double* w = params_.weights(layer);
    const double* b = params_.biases(layer);
    const int rows = layout[layer].rows;
    const int cols = layout[layer].cols;
    for (int r = 0; r < rows; ++r) {
      double z = b[r];
      const double* wr = w + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) z += wr[c] * in[c];
      outv[r] = std::tanh(z);
    }
  }
  const std::size_t last = hidden_layers;
  const double* w = params_.weights(last);
  const double* b = params_.biases(last);
  const auto& in = tr.acts[hidden_layers];
  double z = b[0];
  for (std::size_t c = 0; c < in.size(); ++c) z += w[c] * in[c];
  return z;
}

double SecantNet::jvp(std::span<const double> x, std::span<const double> times,
                      std::span<const double> x_dir, std::span<const double> times_dir) const {
  Trace tr = make_trace();
  return forward_jvp(x, times, x_dir, times_dir, tr).second;
}

std::pair<double, double> SecantNet::forward_jvp(std::span<const double> x,
                                                 std::span<const double> times,
                                                 std::span<const double> x_dir,
                                                 std::span<const double> times_dir,
                                                 Trace& tr) const {
  check_inputs(x, times);
  require(x_dir.size() == x.size(), "SecantNet::jvp: direction dimension mismatch");
  require(times_dir.size() == times.size(), "SecantNet::jvp: time direction mismatch");
  embed_with_tangent(x, times, x_dir, times_dir, tr.acts[0], tr.tangents[0]);
  const auto& layout = params_.layout();
  const std::size_t hidden_layers = spec_.hidden.size();
  for (std::size_t layer = 0; layer < hidden_layers; ++layer) {
    const auto& in = tr.acts[layer];
    const auto& din = tr.tangents[layer];
    auto& outv = tr.acts[layer + 1];
    auto& doutv = tr.tangents[layer + 1];
    const double* w = params_.weights(layer);
    const double* b = params_.biases(layer);
    const int rows = layout[layer].rows;
    const int cols = layout[layer].cols;
    for (int r = 0; r < rows; ++r) {
      double z = b[r];
      double dz = 0.0;
      const double* wr = w + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) {
        z += wr[c] * in[c];
        dz += wr[c] * din[c];
      }
      const double a = std::tanh(z);
      outv[r] = a;
      doutv[r] = (1.0 - a * a) * dz;
    }
  }
  const std::size_t last = hidden_layers;
  const double* w = params_.weights(last);
  const double* b = params_.biases(last);
  const auto& in = tr.acts[hidden_layers];
  const auto& din = tr.tangents[hidden_layers];
  double z = b[0];
  double dz = 0.0;
  for (std::size_t c = 0; c < in.size(); ++c) {
    z += w[c] * in[c];
    dz += w[c] * din[c];
  }
  return {z, dz};
}

void SecantNet::backward_params(const Trace& tr, double upstream, ParamVector& grad) const {
  const auto& layout = params_.layout();
  const std::size_t hidden_layers = spec_.hidden.size();

  // Output layer: linear, one row.
  const auto& top_in = tr.acts[hidden_layers];
  {
    double* gw = grad.weights(hidden_layers);
    double* gb = grad.biases(hidden_layers);
    for (std::size_t c = 0; c < top_in.size(); ++c) gw[c] += upstream * top_in[c];
    gb[0] += upstream;
  }

  // delta holds dLoss/d(post-activation) of the current layer.
  std::vector<double> delta(top_in.size());
  {
    const double* w = params_.weights(hidden_layers);
    for (std::size_t c = 0; c < top_in.size(); ++c) delta[c] = upstream * w[c];
  }

  for (std::size_t layer = hidden_layers; layer-- > 0;) {
    const auto& in = tr.acts[layer];
    const auto& out = tr.acts[layer + 1];
    const int rows = layout[layer].rows;
    const int cols = layout[layer].cols;
    double* gw = grad.weights(layer);
    double* gb = grad.biases(layer);
    const double* w = params_.weights(layer);

    std::vector<double> next_delta(cols, 0.0);
    for (int r = 0; r < rows; ++r) {
      const double dz = delta[r] * (1.0 - out[r] * out[r]);
      gb[r] += dz;
      double* gwr = gw + static_cast<std::size_t>(r) * cols;
      const double* wr = w + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) {
        gwr[c] += dz * in[c];
        next_delta[c] += dz * wr[c];
      }
    }
    delta.swap(next_delta);
  }
}

double SecantNet::forward(std::span<const double> x, double l, double t) const {
  const double times[2] = {l, t};
  return forward(x, std::span<const double>(times, 2));
}

double SecantNet::jvp(std::span<const double> x, double l, double t,
                      std::span<const double> x_dir, double dl, double dt) const {
  const double times[2] = {l, t};
  const double tdir[2] = {dl, dt};
  return jvp(x, std::span<const double>(times, 2), x_dir, std::span<const double>(tdir, 2));
}

ParamVector grad_params(const SecantNet& net, std::span<const std::vector<double>> x_batch,
                        std::span<const std::vector<double>> times_batch,
                        std::span<const double> upstream, int threads) {
  if (x_batch.size() != times_batch.size() || x_batch.size() != upstream.size())
    throw std::invalid_argument("grad_params: batch size mismatch");
  constexpr std::size_t kChunk = 64;
  const std::size_t n = x_batch.size();
  const std::size_t n_chunks = n == 0 ? 0 : (n + kChunk - 1) / kChunk;
  std::vector<ParamVector> partial(n_chunks, ParamVector(net.spec().layer_layout()));
  parallel_chunks(n, kChunk, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    SecantNet::Trace tr = net.make_trace();
    for (std::size_t i = begin; i < end; ++i) {
      if (upstream[i] == 0.0) continue;
      net.forward(x_batch[i], times_batch[i], tr);
      net.backward_params(tr, upstream[i], partial[chunk]);
    }
  });
  ParamVector grad(net.spec().layer_layout());
  for (const auto& p : partial) grad.add(p);
  return grad;
}

AdamState::AdamState(const ParamVector& like) : m(like.layout()), v(like.layout()) {}

bool AdamState::apply(const AdamConfig& cfg, const ParamVector& grad, ParamVector& params) {
  if (grad.size() != params.size() || m.size() != params.size())
    throw std::invalid_argument("AdamState::apply: size mismatch");
  if (!grad.all_finite()) {
    ++skipped;
    return false;
  }
  ++step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  auto& mv = m.values();
  auto& vv = v.values();
  auto& pv = params.values();
  const auto& gv = grad.values();
  for (std::size_t i = 0; i < pv.size(); ++i) {
    mv[i] = cfg.beta1 * mv[i] + (1.0 - cfg.beta1) * gv[i];
    vv[i] = cfg.beta2 * vv[i] + (1.0 - cfg.beta2) * gv[i] * gv[i];
    const double mhat = mv[i] / bc1;
    const double vhat = vv[i] / bc2;
    pv[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
  return true;
}

}  // namespace isadre
