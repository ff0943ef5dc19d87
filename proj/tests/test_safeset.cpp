#include <doctest.h>

#include "scert/safeset.hpp"

using namespace scert;
using nlohmann::json;

TEST_CASE("safety level examples") {
  const SafeRow row{Vector{{0.0, 1.0}}, 0.5};
  CHECK(safety_level(row, Vector{{1.3, 0.0}}) == 0.5);
  CHECK(safety_level(row, Vector{{0.0, -0.5}}) == 0.0);
  CHECK(safety_level(SafeRow{Vector{{2.0, -1.0}}, 1.0}, Vector{{1.0, 4.0}}) == -1.0);
  CHECK_THROWS_AS(safety_level(row, Vector{{1.0}}), DimensionError);
}

TEST_CASE("rows decompose the safe set") {
  const auto one = parse_safe_set(json::parse(R"({"A":[[0,1]],"b":[0.5]})"));
  CHECK(one.size() == 1);
  CHECK(one.row(0).b == 0.5);

  const SafeSet two(Matrix::Identity(2, 2), Vector::Zero(2));
  const auto rows = two.rows();
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].a == Vector{{1.0, 0.0}});
  CHECK(rows[1].a == Vector{{0.0, 1.0}});
  CHECK(rows[1].b == 0.0);

  Matrix A(3, 2);
  A << 1, 0, 0, 1, -1, -1;
  const SafeSet three(A, Vector{{1.0, 2.0, 3.0}});
  const Vector y{{0.5, -1.0}};
  double expected = 1e300;
  for (const auto& r : three.rows()) expected = std::min(expected, safety_level(r, y));
  CHECK(three.rows().size() == 3);
  CHECK(min_safety_level(three, y) == expected);
}

TEST_CASE("zero rows and malformed sets are rejected") {
  Matrix A(2, 2);
  A << 1, 0, 0, 0;
  CHECK_THROWS_AS(SafeSet(A, Vector{{0.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(SafeSet(Matrix::Identity(2, 2), Vector::Zero(3)), DimensionError);
  CHECK_THROWS(parse_safe_set(json::parse(R"({"A":[[0,1]]})")));
  CHECK_THROWS(parse_safe_set(json::parse(R"({"A":[[0,"x"]],"b":[1]})")));
  CHECK_THROWS(load_safe_set("/nonexistent/safe.json"));
}

TEST_CASE("safety level is affine") {
  const SafeRow row{Vector{{0.3, -1.7, 2.2}}, -0.4};
  for (int t = 0; t < 200; ++t) {
    const Vector y1 = Vector::Random(3) * 10;
    const Vector y2 = Vector::Random(3) * 10;
    const double alpha = (t % 11) / 10.0;
    const double lhs = safety_level(row, alpha * y1 + (1 - alpha) * y2);
    const double rhs = alpha * safety_level(row, y1) + (1 - alpha) * safety_level(row, y2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(10));
  }
}

TEST_CASE("min row level is nonnegative iff Ay + b >= 0") {
  Matrix A(3, 2);
  A << 1, 2, -1, 0.5, 0, -1;
  const SafeSet set(A, Vector{{1.0, 0.5, 2.0}});
  for (int t = 0; t < 500; ++t) {
    const Vector y = Vector::Random(2) * 3;
    const bool componentwise = ((A * y + set.b()).array() >= 0.0).all();
    CHECK((min_safety_level(set, y) >= 0.0) == componentwise);
  }
}

TEST_CASE("batched levels match single levels exactly") {
  const SafeRow row{Vector{{0.1, -3.0, 0.7}}, 0.25};
  Batch ys = Batch::Random(53, 3);
  const Vector levels = safety_levels(row, ys);
  for (Eigen::Index i = 0; i < ys.rows(); ++i)
    CHECK(levels(i) == safety_level(row, ys.row(i).transpose()));
}

TEST_CASE("safe set JSON round trip") {
  Matrix A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  const SafeSet set(A, Vector{{-1.0, 0.5}});
  const SafeSet back = parse_safe_set(to_json(set));
  CHECK(back.A() == set.A());
  CHECK(back.b() == set.b());
}
