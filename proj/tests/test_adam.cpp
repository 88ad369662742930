#include <cmath>

#include "doctest.h"
#include "gamot/adam.hpp"
#include "gamot/rng.hpp"

using namespace gamot;

TEST_CASE("one step on x^2 moves downhill") {
  Parameter x("x", Tensor::scalar(1.0));
  AdamState adam;
  x.grad = Tensor::scalar(2.0);  // d/dx x^2 at x=1
  adam.step({&x});
  CHECK(x.value.item() < 1.0);
  CHECK(x.value.item() > 0.99);  // first Adam step is about lr-sized
  CHECK(adam.iterations() == 1);
}

TEST_CASE("zero gradient and zero weight decay leave the parameter unchanged") {
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  Parameter x("x", Tensor::vector({1.5, -2.5}));
  Tensor before = x.value;
  AdamState adam(cfg);
  adam.step({&x});
  CHECK(exactly_equal(x.value, before));
}

TEST_CASE("weight decay alone shrinks weights toward zero") {
  Parameter x("x", Tensor::scalar(4.0));
  AdamState adam;  // default decoupled decay 5e-4, lr 1e-3
  adam.step({&x});
  CHECK(x.value.item() == doctest::Approx(4.0 * (1.0 - 1e-3 * 5e-4)).epsilon(1e-12));
}

TEST_CASE("step consumes and zeroes gradients") {
  Parameter x("x", Tensor::vector({1.0, 2.0}));
  x.grad = Tensor::vector({0.5, -0.5});
  AdamState adam;
  adam.step({&x});
  for (double g : x.grad.data()) CHECK(g == 0.0);
}

TEST_CASE("two hundred steps crush a seeded quadratic") {
  // f(x) = sum_i c_i x_i^2 with positive curvatures; Adam as its own oracle.
  Rng rng(2024);
  Tensor start = Tensor::vector({0, 0, 0, 0});
  Tensor curv = Tensor::vector({0, 0, 0, 0});
  for (double& v : start.data()) v = rng.uniform(-1.0, 1.0);
  for (double& v : curv.data()) v = rng.uniform(0.5, 2.0);

  Parameter x("x", start);
  AdamConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.weight_decay = 0.0;
  AdamState adam(cfg);

  auto loss = [&] {
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += curv[i] * x.value[i] * x.value[i];
    return total;
  };
  double initial = loss();
  REQUIRE(initial > 0.0);
  for (int iter = 0; iter < 200; ++iter) {
    for (int i = 0; i < 4; ++i) x.grad[i] = 2.0 * curv[i] * x.value[i];
    adam.step({&x});
  }
  CHECK(loss() < 1e-3 * initial);
}

TEST_CASE("explicit learning-rate override is honored") {
  Parameter a("a", Tensor::scalar(1.0));
  Parameter b("b", Tensor::scalar(1.0));
  a.grad = Tensor::scalar(1.0);
  b.grad = Tensor::scalar(1.0);
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  AdamState fast(cfg), slow(cfg);
  fast.step({&a}, 0.1);
  slow.step({&b}, 0.001);
  CHECK(1.0 - a.value.item() > 10.0 * (1.0 - b.value.item()));
}

TEST_CASE("global norm clip rescales only oversized gradients") {
  Parameter x("x", Tensor::vector({0.0, 0.0}));
  x.grad = Tensor::vector({3.0, 4.0});  // norm 5
  double pre = clip_global_norm({&x}, 1.0);
  CHECK(pre == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(x.grad[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(x.grad[1] == doctest::Approx(0.8).epsilon(1e-12));

  Parameter y("y", Tensor::vector({0.0}));
  y.grad = Tensor::vector({0.5});
  clip_global_norm({&y}, 1.0);
  CHECK(y.grad[0] == 0.5);
}
