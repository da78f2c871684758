#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "isadre/net.hpp"
#include "isadre/rng.hpp"
#include "isadre/verify.hpp"
#include "support.hpp"

using namespace isadre;

namespace {

SecantNet small_random_net(std::uint64_t seed, int data_dim = 2, int freqs = 2) {
  NetSpec spec;
  spec.data_dim = data_dim;
  spec.time_inputs = 2;
  spec.hidden = {6, 5};
  spec.time_freqs = freqs;
  SecantNet net(spec);
  rngutil::Engine rng(seed);
  for (double& p : net.params().values()) p = rngutil::uniform(rng, -0.8, 0.8);
  return net;
}

}  // namespace

TEST_CASE("dual numbers obey the product rule") {
  const Dual a{1.7, 0.3};
  const Dual b{-2.2, 1.1};
  const Dual p = a * b;
  CHECK(p.v == doctest::Approx(1.7 * -2.2));
  CHECK(p.d == doctest::Approx(0.3 * -2.2 + 1.7 * 1.1));
  const Dual q = a / b;
  CHECK(q.v == doctest::Approx(1.7 / -2.2));
  CHECK(q.d == doctest::Approx((0.3 * -2.2 - 1.7 * 1.1) / (2.2 * 2.2)));
}

TEST_CASE("param vector layout and invariants") {
  ParamVector pv({{3, 2}, {1, 3}});
  CHECK(pv.size() == 3 * 2 + 3 + 1 * 3 + 1);
  CHECK(pv.all_finite());
  pv.values()[0] = std::nan("");
  CHECK_FALSE(pv.all_finite());
}

TEST_CASE("zero-initialized final layer forces zero output") {
  NetSpec spec;
  spec.data_dim = 3;
  SecantNet net(spec);
  rngutil::Engine rng(42);
  net.init_params(rng);
  const std::vector<double> x = {0.3, -1.2, 2.0};
  CHECK(net.forward(x, 0.1, 0.9) == 0.0);
  CHECK(net.forward(x, 0.0, 0.0) == 0.0);
}

TEST_CASE("forward is deterministic and pure") {
  SecantNet a = small_random_net(7);
  SecantNet b = small_random_net(7);
  const std::vector<double> x = {0.5, -0.25};
  const double u1 = a.forward(x, 0.2, 0.8);
  const double u2 = a.forward(x, 0.2, 0.8);
  const double u3 = b.forward(x, 0.2, 0.8);
  CHECK(u1 == u2);
  CHECK(u1 == u3);
}

TEST_CASE("hand-evaluated one-hidden-unit net") {
  NetSpec spec;
  spec.data_dim = 1;
  spec.time_inputs = 2;
  spec.hidden = {1};
  spec.time_freqs = 0;  // embedding reduces to [x, l, t]
  SecantNet net(spec);
  auto& p = net.params();
  p.weights(0)[0] = 0.3;
  p.weights(0)[1] = -0.2;
  p.weights(0)[2] = 0.5;
  p.biases(0)[0] = 0.1;
  p.weights(1)[0] = 0.7;
  p.biases(1)[0] = -0.05;
  const std::vector<double> x = {0.0};
  // By hand: 0.7 * tanh(0.3*0 - 0.2*0 + 0.5*1 + 0.1) - 0.05
  const double expected = 0.7 * std::tanh(0.6) - 0.05;
  CHECK(net.forward(x, 0.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("non-finite inputs are rejected") {
  SecantNet net = small_random_net(3);
  const std::vector<double> bad = {std::nan(""), 0.0};
  CHECK_THROWS_AS(net.forward(bad, 0.1, 0.5), std::invalid_argument);
  const std::vector<double> ok = {0.0, 0.0};
  CHECK_THROWS_AS(net.forward(ok, std::nan(""), 0.5), std::invalid_argument);
}

TEST_CASE("jvp of the zero direction is zero") {
  SecantNet net = small_random_net(11);
  const std::vector<double> x = {0.4, 1.2};
  const std::vector<double> xd = {0.0, 0.0};
  CHECK(net.jvp(x, 0.3, 0.7, xd, 0.0, 0.0) == 0.0);
}

TEST_CASE("jvp matches central finite differences on unit directions") {
  rngutil::Engine rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    SecantNet net = small_random_net(100 + trial);
    std::vector<double> x = {rngutil::normal(rng), rngutil::normal(rng)};
    const double l = 0.2, t = 0.9;
    const double h = 1e-5;
    for (int coord = 0; coord < 2; ++coord) {
      std::vector<double> xd = {0.0, 0.0};
      xd[coord] = 1.0;
      const double got = net.jvp(x, l, t, xd, 0.0, 0.0);
      std::vector<double> xp = x, xm = x;
      xp[coord] += h;
      xm[coord] -= h;
      const double fd = (net.forward(xp, l, t) - net.forward(xm, l, t)) / (2.0 * h);
      worst = std::max(worst, testsup::rel_err(got, fd));
    }
    // also the l and t slots
    const std::vector<double> zero_dir = {0.0, 0.0};
    const double dl_got = net.jvp(x, l, t, zero_dir, 1.0, 0.0);
    const double dl_fd = (net.forward(x, l + h, t) - net.forward(x, l - h, t)) / (2.0 * h);
    worst = std::max(worst, testsup::rel_err(dl_got, dl_fd));
    const double dt_got = net.jvp(x, l, t, zero_dir, 0.0, 1.0);
    const double dt_fd = (net.forward(x, l, t + h) - net.forward(x, l, t - h)) / (2.0 * h);
    worst = std::max(worst, testsup::rel_err(dt_got, dt_fd));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("jvp is linear and consistent with the assembled jacobian") {
  rngutil::Engine rng(9);
  SecantNet net = small_random_net(55);
  const std::vector<double> x = {0.1, -0.6};
  const double l = 0.25, t = 0.75;
  auto jvp_of = [&](const std::vector<double>& dir) {
    return net.jvp(x, l, t, std::span<const double>(dir.data(), 2),
                   dir[2], dir[3]);
  };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> d1(4), d2(4), combo(4);
    for (int i = 0; i < 4; ++i) {
      d1[i] = rngutil::normal(rng);
      d2[i] = rngutil::normal(rng);
    }
    const double a = rngutil::uniform(rng, -2.0, 2.0);
    const double b = rngutil::uniform(rng, -2.0, 2.0);
    for (int i = 0; i < 4; ++i) combo[i] = a * d1[i] + b * d2[i];
    CHECK(std::abs(jvp_of(combo) - a * jvp_of(d1) - b * jvp_of(d2)) < 1e-10);

    double via_jac = 0.0;
    for (int i = 0; i < 4; ++i) {
      std::vector<double> unit(4, 0.0);
      unit[i] = 1.0;
      via_jac += jvp_of(unit) * d1[i];
    }
    CHECK(std::abs(via_jac - jvp_of(d1)) < 1e-10);
  }
}

TEST_CASE("zero upstream gives zero parameter gradient") {
  SecantNet net = small_random_net(21);
  const std::vector<std::vector<double>> xb = {{0.2, 0.3}};
  const std::vector<std::vector<double>> tb = {{0.1, 0.8}};
  const double upstream[1] = {0.0};
  ParamVector g = grad_params(net, xb, tb, upstream);
  for (double v : g.values()) CHECK(v == 0.0);
}

TEST_CASE("parameter gradients match central finite differences") {
  rngutil::Engine rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    SecantNet net = small_random_net(200 + trial, 1 + trial % 3, trial % 3);
    std::vector<double> x(net.spec().data_dim);
    for (double& v : x) v = rngutil::normal(rng);
    std::vector<double> times = {rngutil::uniform01(rng), rngutil::uniform01(rng)};
    if (times[0] > times[1]) std::swap(times[0], times[1]);
    const std::vector<std::vector<double>> xb = {x};
    const std::vector<std::vector<double>> tb = {times};
    const double upstream[1] = {1.0};
    ParamVector g = grad_params(net, xb, tb, upstream);
    auto& params = net.params().values();
    const double h = 1e-5;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double save = params[i];
      params[i] = save + h;
      const double fp = net.forward(x, times);
      params[i] = save - h;
      const double fm = net.forward(x, times);
      params[i] = save;
      worst = std::max(worst, testsup::rel_err(g.values()[i], (fp - fm) / (2.0 * h)));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("batch gradient equals the sum of per-sample gradients") {
  SecantNet net = small_random_net(77);
  rngutil::Engine rng(78);
  std::vector<std::vector<double>> xb, tb;
  std::vector<double> up;
  for (int i = 0; i < 5; ++i) {
    xb.push_back({rngutil::normal(rng), rngutil::normal(rng)});
    double a = rngutil::uniform01(rng), b = rngutil::uniform01(rng);
    tb.push_back({std::min(a, b), std::max(a, b)});
    up.push_back(rngutil::normal(rng));
  }
  ParamVector batch_grad = grad_params(net, xb, tb, up);
  ParamVector acc(net.spec().layer_layout());
  for (int i = 0; i < 5; ++i) {
    const std::vector<std::vector<double>> x1 = {xb[i]};
    const std::vector<std::vector<double>> t1 = {tb[i]};
    const double u1[1] = {up[i]};
    acc.add(grad_params(net, x1, t1, u1));
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    CHECK(std::abs(acc.values()[i] - batch_grad.values()[i]) < 1e-10);
}

TEST_CASE("gradients are identical for any thread count") {
  SecantNet net = small_random_net(79);
  rngutil::Engine rng(80);
  std::vector<std::vector<double>> xb, tb;
  std::vector<double> up;
  for (int i = 0; i < 200; ++i) {
    xb.push_back({rngutil::normal(rng), rngutil::normal(rng)});
    double a = rngutil::uniform01(rng), b = rngutil::uniform01(rng);
    tb.push_back({std::min(a, b), std::max(a, b)});
    up.push_back(rngutil::normal(rng));
  }
  ParamVector g1 = grad_params(net, xb, tb, up, 1);
  ParamVector g3 = grad_params(net, xb, tb, up, 3);
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1.values()[i] == g3.values()[i]);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  ParamVector params({{2, 2}});
  for (std::size_t i = 0; i < params.size(); ++i) params.values()[i] = 0.5 * (i + 1);
  const std::vector<double> before = params.values();
  AdamState opt(params);
  ParamVector zero({{2, 2}});
  AdamConfig cfg;
  CHECK(opt.apply(cfg, zero, params));
  CHECK(params.values() == before);
}

TEST_CASE("adam: constant gradient moves parameters against its sign") {
  ParamVector params({{1, 1}});
  params.values() = {0.0, 0.0};
  AdamState opt(params);
  ParamVector grad({{1, 1}});
  grad.values() = {2.5, -1.0};
  AdamConfig cfg;
  for (int i = 0; i < 50; ++i) opt.apply(cfg, grad, params);
  CHECK(params.values()[0] < 0.0);
  CHECK(params.values()[1] > 0.0);
}

TEST_CASE("adam: single unit-gradient step moves by -lr") {
  ParamVector params({{1, 1}});
  params.values() = {1.0, 1.0};
  AdamState opt(params);
  ParamVector grad({{1, 1}});
  grad.values() = {1.0, 1.0};
  AdamConfig cfg;
  cfg.lr = 0.1;
  opt.apply(cfg, grad, params);
  // bias-corrected mhat = 1, vhat = 1: delta = -lr / (1 + eps)
  CHECK(params.values()[0] == doctest::Approx(1.0 - 0.1).epsilon(1e-7));
}

TEST_CASE("adam: non-finite gradients skip the step and are flagged") {
  ParamVector params({{1, 1}});
  params.values() = {1.0, 2.0};
  const std::vector<double> before = params.values();
  AdamState opt(params);
  ParamVector grad({{1, 1}});
  grad.values() = {std::nan(""), 1.0};
  AdamConfig cfg;
  CHECK_FALSE(opt.apply(cfg, grad, params));
  CHECK(opt.skipped == 1);
  CHECK(opt.step == 0);
  CHECK(params.values() == before);
}

TEST_CASE("randomized autodiff property battery passes") {
  const CheckResult g = check_grad_finite_difference(123, 100);
  CHECK_MESSAGE(g.pass, g.detail);
  const CheckResult j = check_jvp_finite_difference(124, 100);
  CHECK_MESSAGE(j.pass, j.detail);
}

TEST_CASE("negative control: a broken jvp fails the finite-difference check") {
  JvpImpl broken = [](const SecantNet& net, std::span<const double> x,
                      std::span<const double> times, std::span<const double> xd,
                      std::span<const double> td) {
    return net.jvp(x, times, xd, td) + 1e-2;
  };
  const CheckResult r = check_jvp_finite_difference(125, 20, broken);
  CHECK_FALSE(r.pass);
}
