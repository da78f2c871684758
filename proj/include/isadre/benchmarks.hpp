#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isadre/rng.hpp"

namespace isadre {

// A pair of samplers with optional analytic oracles. Samplers draw one vector
// per call from an explicit engine, so workers can run independent streams.
struct BenchmarkProblem {
  std::string name;
  int dim = 1;
  std::function<void(rngutil::Engine&, std::span<double>)> sample_p0;
  std::function<void(rngutil::Engine&, std::span<double>)> sample_p1;
  std::function<double(std::span<const double>)> oracle_log_ratio;  // may be empty
  std::function<double(std::span<const double>)> oracle_log_p1;     // may be empty
  std::optional<double> oracle_mi;                                  // nats

  std::vector<double> draw_p0(rngutil::Engine& rng) const;
  std::vector<double> draw_p1(rngutil::Engine& rng) const;
};

// p0 = N(0, I_d), p1 = N(mean1, diag(cov1_diag)); closed-form log-ratio.
BenchmarkProblem make_gaussian_ratio(int dim, std::vector<double> mean1,
                                     std::vector<double> cov1_diag);

// p1 = N(0, Sigma) with d/2 identical 2x2 blocks [[1, rho], [rho, 1]],
// p0 = N(0, I_d). rho is solved from the per-block value
// mi_block = 2 * target_mi / d via mi_block = -0.5 log(1 - rho^2).
BenchmarkProblem make_blockwise_gaussian_mi(int dim, double target_mi_nats);

enum class PathologicalKind { AdditiveNoise, EdgeSingularGauss, HalfCube, Asinh };

// 2-D joint laws from the pathological MI family. p1 draws the joint (x, y);
// p0 draws the product of marginals by pairing independent joint draws.
//   AdditiveNoise(eps):  x ~ U(0,1), y = x + U(-eps, eps), mi = log(2 eps) + 0.5
//   EdgeSingularGauss(rho): standard bivariate normal, mi = -0.5 log(1 - rho^2)
//   HalfCube / Asinh(rho): coordinatewise |v|^{3/2} sign(v) or asinh applied to
//   the Gaussian pair; both are homeomorphisms, so mi is unchanged.
BenchmarkProblem make_pathological_mi(PathologicalKind kind, double param);

enum class ShapeKind {
  Moons,
  Circles,
  EightGaussians,
  Swissroll,
  Checkerboard,
  Pinwheel,
  TwoSpirals,
  Rings
};

// 2-D structured datasets with p0 = N(0, I_2) and no closed-form oracle.
// Parametrization constants are documented at the generator definitions.
BenchmarkProblem make_2d_shapes(ShapeKind kind, double noise);

ShapeKind shape_kind_from_name(const std::string& name);
PathologicalKind pathological_kind_from_name(const std::string& name);

double score_mse(std::span<const double> estimates, std::span<const double> oracle);
double score_nll(std::span<const double> log_densities);

}  // namespace isadre
