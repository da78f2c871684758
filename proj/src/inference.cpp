#include "isadre/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "isadre/stats.hpp"

namespace isadre {

Partition Partition::uniform(int K) {
  if (K < 1) throw std::invalid_argument("Partition::uniform: K must be >= 1");
  Partition p;
  p.knots.resize(K + 1);
  for (int k = 0; k <= K; ++k) p.knots[k] = static_cast<double>(k) / static_cast<double>(K);
  p.knots.front() = 0.0;
  p.knots.back() = 1.0;
  return p;
}

void Partition::validate() const {
  if (knots.size() < 2) throw std::invalid_argument("Partition: need at least two knots");
  if (knots.front() != 0.0 || knots.back() != 1.0)
    throw std::invalid_argument("Partition: knots must span [0, 1]");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw std::invalid_argument("Partition: knots must be strictly increasing");
}

double log_ratio_secant(const SecantFn& u, std::span<const double> x,
                        const Partition& partition) {
  partition.validate();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < partition.knots.size(); ++k) {
    const double l = partition.knots[k];
    const double t = partition.knots[k + 1];
    acc += (t - l) * u(x, l, t);
  }
  return acc;
}

double log_ratio_secant(const SecantNet& net, std::span<const double> x,
                        const Partition& partition) {
  return log_ratio_secant(secant_fn(net), x, partition);
}

double log_ratio_tangent_quadrature(const TangentFn& s, std::span<const double> x, int K) {
  if (K < 2) throw std::invalid_argument("log_ratio_tangent_quadrature: need K >= 2 knots");
  const double h = 1.0 / static_cast<double>(K - 1);
  double acc = 0.5 * (s(x, 0.0) + s(x, 1.0));
  for (int k = 1; k + 1 < K; ++k) acc += s(x, static_cast<double>(k) * h);
  return acc * h;
}

double log_ratio_tangent_quadrature(const SecantNet& net, std::span<const double> x, int K) {
  return log_ratio_tangent_quadrature(tangent_fn(net), x, K);
}

double log_density(const SecantFn& u, std::span<const double> x,
                   const std::function<double(std::span<const double>)>& base_log_pdf,
                   const Partition& partition) {
  return log_ratio_secant(u, x, partition) + base_log_pdf(x);
}

double log_density(const SecantNet& net, std::span<const double> x,
                   const std::function<double(std::span<const double>)>& base_log_pdf,
                   const Partition& partition) {
  return log_density(secant_fn(net), x, base_log_pdf, partition);
}

MiEstimate estimate_mi(const SecantFn& u, std::span<const std::vector<double>> joint_samples,
                       const Partition& partition) {
  if (joint_samples.empty()) throw std::invalid_argument("estimate_mi: empty sample set");
  std::vector<double> ratios(joint_samples.size());
  for (std::size_t i = 0; i < joint_samples.size(); ++i)
    ratios[i] = log_ratio_secant(u, joint_samples[i], partition);
  MiEstimate est;
  est.n = static_cast<int>(ratios.size());
  est.mi = stats::mean(ratios);
  est.stderr_ = ratios.size() > 1 ? stats::stderr_of_mean(ratios) : 0.0;
  return est;
}

MiEstimate estimate_mi(const SecantNet& net, std::span<const std::vector<double>> joint_samples,
                       const Partition& partition) {
  return estimate_mi(secant_fn(net), joint_samples, partition);
}

SecantFn secant_fn(const SecantNet& net) {
  return [&net](std::span<const double> x, double l, double t) { return net.forward(x, l, t); };
}

TangentFn tangent_fn(const SecantNet& net) {
  return [&net](std::span<const double> x, double t) {
    const double times[1] = {t};
    return net.forward(x, std::span<const double>(times, 1));
  };
}

}  // namespace isadre
