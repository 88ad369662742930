#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "gamot/tensor.hpp"
#include "gamot/text.hpp"

using namespace gamot;

TEST_CASE("tensor factories produce row-major data") {
  Tensor m = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.size() == 6);
  CHECK(m.at(0, 0) == 1);
  CHECK(m.at(0, 2) == 3);
  CHECK(m.at(1, 0) == 4);
  CHECK(m[5] == 6);

  Tensor v = Tensor::vector({7, 8, 9});
  CHECK(v.rank() == 1);
  CHECK(v.size() == 3);
  CHECK(v[1] == 8);

  Tensor s = Tensor::scalar(3.5);
  CHECK(s.item() == 3.5);

  Tensor z = Tensor::zeros(2, 2);
  for (double x : z.data()) CHECK(x == 0.0);

  Tensor r = Tensor::from_rows({{1, 2}, {3, 4}});
  CHECK(exactly_equal(r, Tensor::matrix(2, 2, {1, 2, 3, 4})));
}

TEST_CASE("tensor row view and shape description") {
  Tensor m = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
  auto row1 = m.row(1);
  REQUIRE(row1.size() == 3);
  CHECK(row1[0] == 4);
  CHECK(row1[2] == 6);
  CHECK(m.shape_str() == "[2x3]");
  CHECK(Tensor::vector({1}).shape_str() == "[1]");
}

TEST_CASE("tensor equality and max_abs_diff") {
  Tensor a = Tensor::matrix(2, 2, {1, 2, 3, 4});
  Tensor b = a;
  CHECK(exactly_equal(a, b));
  b.at(1, 1) += 0.25;
  CHECK_FALSE(exactly_equal(a, b));
  CHECK(max_abs_diff(a, b) == 0.25);
}

TEST_CASE("all_finite rejects NaN and infinity") {
  Tensor a = Tensor::vector({1, 2, 3});
  CHECK(a.all_finite());
  a[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(a.all_finite());
  a[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(a.all_finite());
}

TEST_CASE("mutation helpers") {
  Tensor a = Tensor::zeros(2, 2);
  a.fill(1.5);
  for (double x : a.data()) CHECK(x == 1.5);
  CHECK_FALSE(a.empty());
  CHECK(Tensor{}.empty());
}

TEST_CASE("format_double round-trips the exact bits") {
  const double cases[] = {0.0,        -0.0,       0.1,          1.0 / 3.0,
                          1e-300,     1e300,      123456.789,   -2.5e-7,
                          3.0,        1.0 + 1e-15};
  for (double v : cases) {
    double back = parse_double(format_double(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("parse helpers reject malformed input") {
  CHECK_THROWS(parse_double("1.2.3"));
  CHECK_THROWS(parse_double(""));
  CHECK_THROWS(parse_long("12x"));
  CHECK(parse_long("-42") == -42);
}
