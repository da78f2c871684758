#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "isadre/net.hpp"

namespace isadre {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Closed-form 1-D reference path used by the property checks: the linear
// deterministic interpolant between N(0, 1) and N(1, 1). The marginal at
// time t is N(t, (1-t)^2 + t^2), so the marginal time score and the log
// density are available exactly.
struct GaussianPath1D {
  double mean(double t) const { return t; }
  double var(double t) const { return (1.0 - t) * (1.0 - t) + t * t; }
  double dvar(double t) const { return 4.0 * t - 2.0; }
  double log_pdf(double x, double t) const;
  double tangent(double x, double t) const;            // d/dt log p_t(x)
  double secant_exact(double x, double l, double t) const;
  double secant_quadrature(double x, double l, double t, double tol = 1e-11) const;
};

using JvpImpl = std::function<double(const SecantNet&, std::span<const double>,
                                     std::span<const double>, std::span<const double>,
                                     std::span<const double>)>;

// Individual checks. Each returns pass/fail plus the measured values.
CheckResult check_grad_finite_difference(std::uint64_t seed, int trials);
CheckResult check_jvp_finite_difference(std::uint64_t seed, int trials,
                                        const JvpImpl& jvp_impl = {});
CheckResult check_jvp_jacobian_consistency(std::uint64_t seed, int trials);
CheckResult check_conditional_score_fd(std::uint64_t seed, int configs);
CheckResult check_velocity_fd(std::uint64_t seed, int configs);
CheckResult check_lemma1_eta_marginal(std::uint64_t seed, int n);
// Companion to the check above: the same sampling procedure against the
// analytically derived compound law of eta for the uniform sampler. Shows
// the procedure is implemented correctly even where the marginal-identity
// claim itself does not hold.
CheckResult check_eta_compound_law(std::uint64_t seed, int n);
CheckResult check_pair_ordering(std::uint64_t seed, int n);
CheckResult check_prop1_variance(std::uint64_t seed, int n);
CheckResult check_secant_additivity(std::uint64_t seed, int triples);
CheckResult check_lipschitz_secant();
CheckResult check_lambda_grid(std::uint64_t seed);
CheckResult check_cia_schedule();

// Trains two short runs on the blockwise d=8 problem: full-interval secant
// supervision from step 0 versus CIA. Reports max(loss)/loss(step 0) for
// both and requires the CIA ratio <= 2.
CheckResult check_bootstrap_stability(std::uint64_t seed, std::int64_t steps = 400,
                                      int batch = 128, double* fixed_ratio = nullptr,
                                      double* cia_ratio = nullptr);

// Full battery in cmd_verify order.
std::vector<CheckResult> run_verification(std::uint64_t seed, bool include_training_checks);

}  // namespace isadre
