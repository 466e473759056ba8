#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "recon/quadrature.hpp"
#include "recon/sphere.hpp"

using namespace recon;
using recon::testing::ks_distance_one_sample;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("UnitVector enforces its invariants") {
  CHECK_THROWS_AS(UnitVector(std::vector<double>{}), DimensionError);
  CHECK_THROWS_AS(UnitVector({0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(UnitVector::normalized({0.0, 0.0}), DomainError);
  const UnitVector u = UnitVector::normalized({3.0, 4.0});
  CHECK(u[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(UnitVector::basis(3, 1)[1] == 1.0);
}

TEST_CASE("sample_uniform_direction rejects d = 0") {
  RngStream stream(1);
  CHECK_THROWS_AS(sample_uniform_direction(0, stream), DimensionError);
}

TEST_CASE("d = 1 sampling is a fair coin on {+1, -1}") {
  RngStream stream(11);
  const int trials = 40000;
  int plus = 0;
  for (int t = 0; t < trials; ++t) {
    const UnitVector v = sample_uniform_direction(1, stream);
    CHECK((v[0] == 1.0 || v[0] == -1.0));
    if (v[0] == 1.0) ++plus;
  }
  const double freq = static_cast<double>(plus) / trials;
  CHECK(std::fabs(freq - 0.5) <= 4.0 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("d = 3 sampling: unit norm, centered, uniform |<e1, phi>|") {
  RngStream stream(12);
  const int trials = 100000;
  double mean[3] = {0.0, 0.0, 0.0};
  std::vector<double> abs_ip;
  abs_ip.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const UnitVector v = sample_uniform_direction(3, stream);
    double norm2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      norm2 += v[i] * v[i];
      mean[i] += v[i];
    }
    CHECK(std::fabs(norm2 - 1.0) < 1e-12);
    abs_ip.push_back(std::fabs(v[0]));
  }
  double mean_norm = 0.0;
  for (double m : mean) mean_norm += (m / trials) * (m / trials);
  mean_norm = std::sqrt(mean_norm);
  CHECK(mean_norm <= 4.0 * std::sqrt(3.0) / std::sqrt(static_cast<double>(trials)));

  // For d = 3 the density of |<e1, phi>| is identically 1 on [0, 1].
  const double d_ks =
      ks_distance_one_sample(std::move(abs_ip), [](double z) { return z; });
  CHECK(d_ks <= 0.01);
}

TEST_CASE("geodesic_distance basics") {
  const UnitVector u = UnitVector::basis(2, 0);
  const UnitVector v = UnitVector::basis(2, 1);
  CHECK(geodesic_distance(u, u) == 0.0);
  CHECK(geodesic_distance(u, u.negated()) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(geodesic_distance(u, v) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(geodesic_distance(u, UnitVector::basis(3, 0)), DimensionError);

  RngStream stream(13);
  for (int t = 0; t < 100; ++t) {
    const UnitVector a = sample_uniform_direction(4, stream);
    const UnitVector b = sample_uniform_direction(4, stream);
    CHECK(geodesic_distance(a, b) == geodesic_distance(b, a));
  }
}

TEST_CASE("gamma_ratio_constant values and estimates") {
  CHECK_THROWS_AS(gamma_ratio_constant(1), DomainError);
  CHECK(gamma_ratio_constant(2) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(gamma_ratio_constant(3) == doctest::Approx(0.5).epsilon(1e-14));

  const double c10 = gamma_ratio_constant(10);
  CHECK(c10 >= std::sqrt(1.0 - 0.1) * std::sqrt(9.0 / (2.0 * kPi)));
  CHECK(c10 <= std::sqrt(9.0 / (2.0 * kPi)));
  for (int d = 2; d <= 64; ++d) {
    const double cd = gamma_ratio_constant(d);
    CHECK(cd >= std::sqrt(1.0 - 1.0 / d) * std::sqrt((d - 1.0) / (2.0 * kPi)));
    CHECK(cd <= std::sqrt((d - 1.0) / (2.0 * kPi)));
  }
  CHECK(std::fabs(gamma_ratio_constant(64) / 8.0 - 0.39894) < 0.01);
}

TEST_CASE("cap_relative_measure closed forms and domain") {
  CHECK_THROWS_AS(cap_relative_measure(1, 0.3), DomainError);
  CHECK_THROWS_AS(cap_relative_measure(3, 0.0), DomainError);
  CHECK_THROWS_AS(cap_relative_measure(3, kPi / 2), DomainError);
  CHECK_THROWS_AS(cap_relative_measure(3, -0.1), DomainError);

  CHECK(cap_relative_measure(2, kPi / 4) == doctest::Approx(0.25).epsilon(1e-10));
  for (double theta : {0.2, 0.7, 1.3}) {
    CHECK(cap_relative_measure(2, theta) == doctest::Approx(theta / kPi).epsilon(1e-10));
    CHECK(cap_relative_measure(3, theta) ==
          doctest::Approx(0.5 * (1.0 - std::cos(theta))).epsilon(1e-10));
  }
  CHECK(cap_relative_measure(3, kPi / 3) == doctest::Approx(0.25).epsilon(1e-10));
  for (int d : {2, 3, 7}) {
    CHECK(std::fabs(cap_relative_measure(d, kPi / 2 - 1e-8) - 0.5) < 1e-6);
  }
}

TEST_CASE("cap_relative_measure is increasing and matches membership frequency") {
  for (int d : {2, 3, 5}) {
    double prev = 0.0;
    for (double theta = 0.1; theta < kPi / 2; theta += 0.1) {
      const double r = cap_relative_measure(d, theta);
      CHECK(r > prev);
      prev = r;
    }

    const double theta = 0.7;
    const double p = cap_relative_measure(d, theta);
    const Cap cap{UnitVector::basis(d, 0), theta};
    RngStream stream(100 + d);
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      if (cap_contains(cap, sample_uniform_direction(d, stream))) ++hits;
    }
    const double freq = static_cast<double>(hits) / trials;
    const double se = std::sqrt(p * (1.0 - p) / trials);
    CHECK(std::fabs(freq - p) <= 3.0 * se);
  }
}

TEST_CASE("inner_product_abs_pdf values and normalization") {
  CHECK(inner_product_abs_pdf(3, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inner_product_abs_pdf(5, 1.5) == 0.0);
  CHECK(inner_product_abs_pdf(4, -0.2) == 0.0);

  for (int d = 3; d <= 16; ++d) {
    const double mass = integrate_adaptive_simpson(
        [d](double z) { return inner_product_abs_pdf(d, z); }, 0.0, 1.0, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
  // d = 2 has an integrable endpoint singularity; substitute z = sin t
  // (the transformed integrand is the constant 2/pi) and stop just short of
  // the endpoint, where 1 - sin^2 t underflows to zero.
  const double upper = kPi / 2 - 1e-7;
  const double mass2 = integrate_adaptive_simpson(
      [](double t) { return inner_product_abs_pdf(2, std::sin(t)) * std::cos(t); },
      0.0, upper, 1e-10);
  CHECK(mass2 == doctest::Approx(2.0 / kPi * upper).epsilon(1e-8));
  for (double z : {0.0, 0.3, 0.9}) {
    CHECK(inner_product_abs_pdf(2, z) ==
          doctest::Approx(2.0 / (kPi * std::sqrt(1.0 - z * z))).epsilon(1e-12));
  }
}

TEST_CASE("d = 2 inner-product law matches the arcsine CDF") {
  RngStream stream(21);
  const int trials = 100000;
  std::vector<double> samples;
  samples.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    samples.push_back(std::fabs(sample_uniform_direction(2, stream)[0]));
  }
  const double d_ks = ks_distance_one_sample(
      std::move(samples), [](double z) { return 2.0 / kPi * std::asin(z); });
  CHECK(d_ks <= 0.01);
}

TEST_CASE("cap_contains is strict and open") {
  const UnitVector center = UnitVector::basis(3, 0);
  CHECK(cap_contains(Cap{center, 0.1}, center));
  CHECK_FALSE(cap_contains(Cap{center, kPi / 2}, center.negated()));
  CHECK_FALSE(cap_contains(Cap{center, 0.0}, center));  // empty cap
  // Point exactly on the boundary: <u, c> == cos(theta).
  const double theta = 0.4;
  const UnitVector boundary({std::cos(theta), std::sin(theta), 0.0});
  CHECK_FALSE(cap_contains(Cap{center, theta}, boundary));
  CHECK_THROWS_AS(cap_contains(Cap{center, 0.3}, UnitVector::basis(2, 0)),
                  DimensionError);
}

TEST_CASE("build_geodesic_net: deterministic circle net") {
  RngStream stream(31);
  CHECK_THROWS_AS(build_geodesic_net(2, 0.0, stream), DomainError);

  const GeodesicNet net = build_geodesic_net(2, kPi / 8, stream);
  REQUIRE(net.points.size() == 8);
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * kPi * k / 8;
    CHECK(net.points[k][0] == doctest::Approx(std::cos(angle)).epsilon(1e-15));
    CHECK(net.points[k][1] == doctest::Approx(std::sin(angle)).epsilon(1e-15));
  }
}

TEST_CASE("build_geodesic_net: cardinality, separation, covering") {
  RngStream stream(32);
  const double eps = 0.5;
  const GeodesicNet net = build_geodesic_net(3, eps, stream);
  CHECK(static_cast<double>(net.points.size()) <= 256.0);  // (8/0.5)^2

  for (std::size_t i = 0; i < net.points.size(); ++i) {
    for (std::size_t j = i + 1; j < net.points.size(); ++j) {
      CHECK(geodesic_distance(net.points[i], net.points[j]) >= eps);
    }
  }

  for (const GeodesicNet* n : {&net}) {
    for (int t = 0; t < 10000; ++t) {
      const UnitVector probe = sample_uniform_direction(3, stream);
      double nearest = kPi;
      for (const UnitVector& p : n->points) {
        nearest = std::min(nearest, geodesic_distance(probe, p));
      }
      CHECK(nearest <= eps);
    }
  }

  const GeodesicNet circle = build_geodesic_net(2, 0.4, stream);
  for (int t = 0; t < 10000; ++t) {
    const UnitVector probe = sample_uniform_direction(2, stream);
    double nearest = kPi;
    for (const UnitVector& p : circle.points) {
      nearest = std::min(nearest, geodesic_distance(probe, p));
    }
    CHECK(nearest <= 0.4);
  }
}
