#include <cmath>
#include <vector>

#include "doctest.h"
#include "reference.hpp"
#include "stars/errors.hpp"
#include "stars/oracle.hpp"
#include "stars/problems.hpp"

using stars::NoiseKind;
using stars::NoisyOracle;
using stars::RngStream;
using stars::Vector;

TEST_CASE("noise kind names round-trip") {
  CHECK(stars::to_string(NoiseKind::Additive) == "add");
  CHECK(stars::to_string(NoiseKind::Multiplicative) == "mult");
  CHECK(stars::parse_noise_kind("add") == NoiseKind::Additive);
  CHECK(stars::parse_noise_kind("mult") == NoiseKind::Multiplicative);
  CHECK_THROWS_AS(stars::parse_noise_kind("gauss"), stars::InvalidArgument);
}

TEST_CASE("noiseless additive oracle returns f exactly") {
  const auto p = stars::f1_make(8);
  NoisyOracle o(p, {NoiseKind::Additive, 0.0}, RngStream(1, 0));
  CHECK(o.eval(Vector::Zero(8)) == 0.0);
}

TEST_CASE("multiplicative noise vanishes where f does") {
  const auto p = stars::f1_make(8);
  for (double s : {1e-6, 1e-3, 0.1, 0.5}) {
    NoisyOracle o(p, {NoiseKind::Multiplicative, s}, RngStream(2, 0));
    for (int i = 0; i < 10; ++i) CHECK(o.eval(Vector::Zero(8)) == 0.0);
  }
}

TEST_CASE("additive oracle is unbiased at x_star") {
  const auto p = stars::f1_make(8);
  const double sigma = 1e-3;
  const int m = 100000;
  NoisyOracle o(p, {NoiseKind::Additive, sigma}, RngStream(3, 0));
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += o.eval(p.x_star);
  CHECK(std::abs(sum / m - p.f_star) <= 4 * sigma / std::sqrt(double(m)));
}

TEST_CASE("additive oracle mean within five standard errors at a generic x") {
  const auto p = stars::f1_make(8);
  const double sigma = 1e-2;
  const int m = 100000;
  Vector x = Vector::LinSpaced(8, -1.0, 1.0);
  NoisyOracle o(p, {NoiseKind::Additive, sigma}, RngStream(4, 0));
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += o.eval(x);
  CHECK(std::abs(sum / m - p.eval(x)) <= 5 * sigma / std::sqrt(double(m)));
}

TEST_CASE("eval_count counts noisy calls only") {
  const auto p = stars::f1_make(4);
  NoisyOracle o(p, {NoiseKind::Additive, 1e-3}, RngStream(5, 0));
  for (int i = 0; i < 37; ++i) o.eval(Vector::Ones(4));
  // A true-value probe goes through the problem and leaves the oracle alone.
  (void)o.problem().eval(Vector::Ones(4));
  CHECK(o.eval_count() == 37);
}

TEST_CASE("true-value probes do not perturb the noise stream") {
  const auto p = stars::f1_make(4);
  NoisyOracle a(p, {NoiseKind::Additive, 1e-3}, RngStream(6, 0));
  NoisyOracle b(p, {NoiseKind::Additive, 1e-3}, RngStream(6, 0));
  for (int i = 0; i < 50; ++i) {
    (void)b.problem().eval(Vector::Zero(4));
    CHECK(a.eval(Vector::Ones(4)) == b.eval(Vector::Ones(4)));
  }
}

TEST_CASE("oracle rejects a dimension mismatch") {
  const auto p = stars::f1_make(4);
  NoisyOracle o(p, {NoiseKind::Additive, 1e-3}, RngStream(5, 0));
  CHECK_THROWS_AS(o.eval(Vector::Zero(3)), stars::InvalidArgument);
  CHECK(o.eval_count() == 0);
}

TEST_CASE("relative noise at or above 3^{-1/2} is rejected") {
  const auto p = stars::f1_make(4);
  CHECK_THROWS_AS(NoisyOracle(p, {NoiseKind::Multiplicative, stars::kMaxRelativeSigma}, RngStream(0, 0)),
                  stars::ConfigRejected);
  CHECK_THROWS_AS(NoisyOracle(p, {NoiseKind::Multiplicative, 0.6}, RngStream(0, 0)),
                  stars::ConfigRejected);
  CHECK_NOTHROW(NoisyOracle(p, {NoiseKind::Multiplicative, 0.5}, RngStream(0, 0)));
  CHECK(stars::kMaxRelativeSigma == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-16));
}

TEST_CASE("negative sigma is rejected") {
  const auto p = stars::f1_make(4);
  CHECK_THROWS(NoisyOracle(p, {NoiseKind::Additive, -1.0}, RngStream(0, 0)));
}

TEST_CASE("identical seeds give identical noisy sequences") {
  const auto p = stars::f1_make(8);
  NoisyOracle a(p, {NoiseKind::Multiplicative, 0.1}, RngStream(9, 2));
  NoisyOracle b(p, {NoiseKind::Multiplicative, 0.1}, RngStream(9, 2));
  const Vector x = Vector::Constant(8, 0.3);
  for (int i = 0; i < 100; ++i) CHECK(a.eval(x) == b.eval(x));
}

TEST_CASE("multiplicative noise scales with f") {
  const auto p = stars::f1_make(8);
  const double sigma = 0.1;
  NoisyOracle o(p, {NoiseKind::Multiplicative, sigma}, RngStream(10, 0));
  const double f = p.eval(p.x_star);
  for (int i = 0; i < 1000; ++i) {
    const double v = o.eval(p.x_star);
    REQUIRE(std::abs(v / f - 1.0) <= std::sqrt(3.0) * sigma + 1e-15);
  }
}
