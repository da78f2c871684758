#include "isadre/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace isadre {

namespace {
constexpr double kPi = 3.141592653589793238462643;

double half_cube(double v) { return std::pow(std::abs(v), 1.5) * (v < 0 ? -1.0 : 1.0); }
double half_cube_inv(double v) { return std::pow(std::abs(v), 2.0 / 3.0) * (v < 0 ? -1.0 : 1.0); }

// log N(0, [[1, rho], [rho, 1]]) - log N(0, I) at (x, y).
double gauss_pair_log_ratio(double x, double y, double rho) {
  const double det = 1.0 - rho * rho;
  const double quad = (x * x + y * y - 2.0 * rho * x * y) / det;
  return -0.5 * quad - 0.5 * std::log(det) + 0.5 * (x * x + y * y);
}

void draw_gauss_pair(rngutil::Engine& rng, double rho, double& x, double& y) {
  const double a = rngutil::normal(rng);
  const double b = rngutil::normal(rng);
  x = a;
  y = rho * a + std::sqrt(1.0 - rho * rho) * b;
}
}  // namespace

std::vector<double> BenchmarkProblem::draw_p0(rngutil::Engine& rng) const {
  std::vector<double> x(dim);
  sample_p0(rng, x);
  return x;
}

std::vector<double> BenchmarkProblem::draw_p1(rngutil::Engine& rng) const {
  std::vector<double> x(dim);
  sample_p1(rng, x);
  return x;
}

BenchmarkProblem make_gaussian_ratio(int dim, std::vector<double> mean1,
                                     std::vector<double> cov1_diag) {
  if (static_cast<int>(mean1.size()) != dim || static_cast<int>(cov1_diag.size()) != dim)
    throw std::invalid_argument("make_gaussian_ratio: parameter dimension mismatch");
  for (double v : cov1_diag)
    if (v <= 0.0) throw std::invalid_argument("make_gaussian_ratio: variances must be positive");

  BenchmarkProblem p;
  p.name = "gaussian_ratio";
  p.dim = dim;
  p.sample_p0 = [](rngutil::Engine& rng, std::span<double> out) {
    rngutil::fill_normal(rng, out.data(), out.size());
  };
  p.sample_p1 = [mean1, cov1_diag](rngutil::Engine& rng, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = mean1[i] + std::sqrt(cov1_diag[i]) * rngutil::normal(rng);
  };
  p.oracle_log_ratio = [mean1, cov1_diag](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = cov1_diag[i];
      const double r = x[i] - mean1[i];
      acc += -0.5 * std::log(v) - 0.5 * r * r / v + 0.5 * x[i] * x[i];
    }
    return acc;
  };
  p.oracle_log_p1 = [mean1, cov1_diag](std::span<const double> x) {
    constexpr double kLog2Pi = 1.837877066409345483560659;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = cov1_diag[i];
      const double r = x[i] - mean1[i];
      acc += -0.5 * (kLog2Pi + std::log(v)) - 0.5 * r * r / v;
    }
    return acc;
  };
  return p;
}

BenchmarkProblem make_blockwise_gaussian_mi(int dim, double target_mi_nats) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("make_blockwise_gaussian_mi: dim must be even and >= 2");
  if (target_mi_nats < 0.0)
    throw std::invalid_argument("make_blockwise_gaussian_mi: target MI must be >= 0");
  const int blocks = dim / 2;
  const double mi_block = 2.0 * target_mi_nats / static_cast<double>(dim);
  const double one_minus_rho2 = std::exp(-2.0 * mi_block);
  if (one_minus_rho2 <= 0.0)
    throw std::invalid_argument("make_blockwise_gaussian_mi: per-block MI infeasible");
  const double rho = std::sqrt(1.0 - one_minus_rho2);

  BenchmarkProblem p;
  p.name = "blockwise_gaussian_mi";
  p.dim = dim;
  p.oracle_mi = target_mi_nats;
  p.sample_p0 = [](rngutil::Engine& rng, std::span<double> out) {
    rngutil::fill_normal(rng, out.data(), out.size());
  };
  p.sample_p1 = [blocks, rho](rngutil::Engine& rng, std::span<double> out) {
    for (int b = 0; b < blocks; ++b) draw_gauss_pair(rng, rho, out[2 * b], out[2 * b + 1]);
  };
  p.oracle_log_ratio = [blocks, rho](std::span<const double> x) {
    double acc = 0.0;
    for (int b = 0; b < blocks; ++b) acc += gauss_pair_log_ratio(x[2 * b], x[2 * b + 1], rho);
    return acc;
  };
  return p;
}

BenchmarkProblem make_pathological_mi(PathologicalKind kind, double param) {
  BenchmarkProblem p;
  p.dim = 2;

  // Joint sampler of the underlying pair before any transform.
  std::function<void(rngutil::Engine&, double&, double&)> joint;

  switch (kind) {
    case PathologicalKind::AdditiveNoise: {
      const double eps = param;
      if (eps <= 0.0 || eps > 0.5)
        throw std::invalid_argument("make_pathological_mi: AdditiveNoise needs 0 < eps <= 0.5");
      p.name = "additive_noise";
      p.oracle_mi = std::log(2.0 * eps) + 0.5;
      joint = [eps](rngutil::Engine& rng, double& x, double& y) {
        x = rngutil::uniform01(rng);
        y = x + rngutil::uniform(rng, -eps, eps);
      };
      break;
    }
    case PathologicalKind::EdgeSingularGauss:
    case PathologicalKind::HalfCube:
    case PathologicalKind::Asinh: {
      const double rho = param;
      if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("make_pathological_mi: need |rho| < 1");
      p.oracle_mi = -0.5 * std::log(1.0 - rho * rho);
      joint = [rho](rngutil::Engine& rng, double& x, double& y) {
        draw_gauss_pair(rng, rho, x, y);
      };
      if (kind == PathologicalKind::EdgeSingularGauss) {
        p.name = "edge_singular_gauss";
        p.oracle_log_ratio = [rho](std::span<const double> v) {
          return gauss_pair_log_ratio(v[0], v[1], rho);
        };
      } else if (kind == PathologicalKind::HalfCube) {
        p.name = "half_cube";
        // Ratio of joint to product is invariant under coordinatewise
        // homeomorphisms; pull back to the Gaussian pair.
        p.oracle_log_ratio = [rho](std::span<const double> v) {
          return gauss_pair_log_ratio(half_cube_inv(v[0]), half_cube_inv(v[1]), rho);
        };
      } else {
        p.name = "asinh";
        p.oracle_log_ratio = [rho](std::span<const double> v) {
          return gauss_pair_log_ratio(std::sinh(v[0]), std::sinh(v[1]), rho);
        };
      }
      break;
    }
  }

  auto transform = [kind](double& x, double& y) {
    if (kind == PathologicalKind::HalfCube) {
      x = half_cube(x);
      y = half_cube(y);
    } else if (kind == PathologicalKind::Asinh) {
      x = std::asinh(x);
      y = std::asinh(y);
    }
  };

  p.sample_p1 = [joint, transform](rngutil::Engine& rng, std::span<double> out) {
    joint(rng, out[0], out[1]);
    transform(out[0], out[1]);
  };
  // Product of marginals: pair the x of one joint draw with the y of an
  // independent one (streaming version of permuting the y-half).
  p.sample_p0 = [joint, transform](rngutil::Engine& rng, std::span<double> out) {
    double x0, y0, x1, y1;
    joint(rng, x0, y0);
    joint(rng, x1, y1);
    out[0] = x0;
    out[1] = y1;
    transform(out[0], out[1]);
  };
  return p;
}

BenchmarkProblem make_2d_shapes(ShapeKind kind, double noise) {
  if (noise < 0.0) throw std::invalid_argument("make_2d_shapes: noise must be >= 0");

  BenchmarkProblem p;
  p.dim = 2;
  p.sample_p0 = [](rngutil::Engine& rng, std::span<double> out) {
    rngutil::fill_normal(rng, out.data(), out.size());
  };

  switch (kind) {
    case ShapeKind::EightGaussians: {
      // Modes on a circle of radius 2 at multiples of 45 degrees.
      p.name = "eight_gaussians";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const int k = static_cast<int>(rngutil::uniform01(rng) * 8.0) % 8;
        const double ang = kPi * 0.25 * static_cast<double>(k);
        out[0] = 2.0 * std::cos(ang) + noise * rngutil::normal(rng);
        out[1] = 2.0 * std::sin(ang) + noise * rngutil::normal(rng);
      };
      break;
    }
    case ShapeKind::Moons: {
      // Two half circles of radius 1, scaled by 2 and shifted by (-1, -0.25):
      // upper arc (cos a, sin a), lower arc (1 - cos a, 0.5 - sin a), a in [0, pi].
      p.name = "moons";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const double a = kPi * rngutil::uniform01(rng);
        double x, y;
        if (rngutil::uniform01(rng) < 0.5) {
          x = std::cos(a);
          y = std::sin(a);
        } else {
          x = 1.0 - std::cos(a);
          y = 0.5 - std::sin(a);
        }
        out[0] = 2.0 * x - 1.0 + noise * rngutil::normal(rng);
        out[1] = 2.0 * y - 0.25 + noise * rngutil::normal(rng);
      };
      break;
    }
    case ShapeKind::Circles: {
      // Concentric circles, radii 2.5 and 1.25, equal probability.
      p.name = "circles";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const double r = rngutil::uniform01(rng) < 0.5 ? 2.5 : 1.25;
        const double a = 2.0 * kPi * rngutil::uniform01(rng);
        out[0] = r * std::cos(a) + noise * rngutil::normal(rng);
        out[1] = r * std::sin(a) + noise * rngutil::normal(rng);
      };
      break;
    }
    case ShapeKind::Swissroll: {
      // Spiral arm t in [1.5 pi, 4.5 pi], scaled by 1/5.
      p.name = "swissroll";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const double t = 1.5 * kPi * (1.0 + 2.0 * rngutil::uniform01(rng));
        out[0] = t * std::cos(t) / 5.0 + noise * rngutil::normal(rng);
        out[1] = t * std::sin(t) / 5.0 + noise * rngutil::normal(rng);
      };
      break;
    }
    case ShapeKind::Checkerboard: {
      // Unit cells over [-2, 2]^2 with even floor(x) + floor(y); noise unused
      // so the parity of the supported grid stays exact.
      p.name = "checkerboard";
      p.sample_p1 = [](rngutil::Engine& rng, std::span<double> out) {
        int i = 0, j = 0;
        do {
          i = static_cast<int>(rngutil::uniform01(rng) * 4.0) - 2;
          j = static_cast<int>(rngutil::uniform01(rng) * 4.0) - 2;
        } while ((((i + j) % 2) + 2) % 2 != 0);
        out[0] = static_cast<double>(i) + rngutil::uniform01(rng);
        out[1] = static_cast<double>(j) + rngutil::uniform01(rng);
      };
      break;
    }
    case ShapeKind::Pinwheel: {
      // Five arms; radial std 0.3 around 1, tangential std 0.05, curl rate
      // 0.25, final scale 2.
      p.name = "pinwheel";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const int k = static_cast<int>(rngutil::uniform01(rng) * 5.0) % 5;
        const double a = 1.0 + 0.3 * rngutil::normal(rng);
        const double b = 0.05 * rngutil::normal(rng);
        const double ang = 2.0 * kPi * static_cast<double>(k) / 5.0 + 0.25 * std::exp(a);
        const double ca = std::cos(ang);
        const double sa = std::sin(ang);
        out[0] = 2.0 * (a * ca - b * sa) + noise * rngutil::normal(rng);
        out[1] = 2.0 * (a * sa + b * ca) + noise * rngutil::normal(rng);
      };
      break;
    }
    case ShapeKind::TwoSpirals: {
      // Arc length sqrt(u) * 3 pi, two mirrored branches, scaled by 1/3.
      p.name = "two_spirals";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const double n = 3.0 * kPi * std::sqrt(rngutil::uniform01(rng));
        const double sgn = rngutil::uniform01(rng) < 0.5 ? 1.0 : -1.0;
        out[0] = sgn * (-std::cos(n) * n) / 3.0 + noise * rngutil::normal(rng);
        out[1] = sgn * (std::sin(n) * n) / 3.0 + noise * rngutil::normal(rng);
      };
      break;
    }
    case ShapeKind::Rings: {
      // Four circles, radii 0.8 k for k = 1..4, equal probability.
      p.name = "rings";
      p.sample_p1 = [noise](rngutil::Engine& rng, std::span<double> out) {
        const int k = 1 + static_cast<int>(rngutil::uniform01(rng) * 4.0) % 4;
        const double r = 0.8 * static_cast<double>(k);
        const double a = 2.0 * kPi * rngutil::uniform01(rng);
        out[0] = r * std::cos(a) + noise * rngutil::normal(rng);
        out[1] = r * std::sin(a) + noise * rngutil::normal(rng);
      };
      break;
    }
    default:
      throw std::invalid_argument("make_2d_shapes: unknown kind");
  }
  return p;
}

ShapeKind shape_kind_from_name(const std::string& name) {
  if (name == "moons") return ShapeKind::Moons;
  if (name == "circles") return ShapeKind::Circles;
  if (name == "eight_gaussians" || name == "8gaussians") return ShapeKind::EightGaussians;
  if (name == "swissroll") return ShapeKind::Swissroll;
  if (name == "checkerboard") return ShapeKind::Checkerboard;
  if (name == "pinwheel") return ShapeKind::Pinwheel;
  if (name == "two_spirals" || name == "2spirals") return ShapeKind::TwoSpirals;
  if (name == "rings") return ShapeKind::Rings;
  throw std::invalid_argument("unknown 2d shape: " + name);
}

PathologicalKind pathological_kind_from_name(const std::string& name) {
  if (name == "additive_noise") return PathologicalKind::AdditiveNoise;
  if (name == "edge_singular_gauss") return PathologicalKind::EdgeSingularGauss;
  if (name == "half_cube") return PathologicalKind::HalfCube;
  if (name == "asinh") return PathologicalKind::Asinh;
  throw std::invalid_argument("unknown pathological MI kind: " + name);
}

double score_mse(std::span<const double> estimates, std::span<const double> oracle) {
  if (estimates.empty() || estimates.size() != oracle.size())
    throw std::invalid_argument("score_mse: empty or mismatched inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double r = estimates[i] - oracle[i];
    acc += r * r;
  }
  return acc / static_cast<double>(estimates.size());
}

double score_nll(std::span<const double> log_densities) {
  if (log_densities.empty()) throw std::invalid_argument("score_nll: empty input");
  double acc = 0.0;
  for (double v : log_densities) acc += v;
  return -acc / static_cast<double>(log_densities.size());
}

}  // namespace isadre
