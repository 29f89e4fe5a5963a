#include "diffmac/sources.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace diffmac;

TEST_CASE("model validation") {
  CHECK_THROWS_AS(SourceModel(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(-1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(1.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(1.0, -0.1), std::invalid_argument);
  CHECK_NOTHROW(SourceModel(2.0, 0.999));
}

TEST_CASE("empirical variance and correlation match the model") {
  const SourceModel model(1.0, 0.5);
  Rng rng(201);
  const SourceBlock b = generate_block(model, 1000000, rng);
  const auto m1 = testing::moments(b.s1);
  // stderr of a Gaussian sample variance is var*sqrt(2/n)
  CHECK(std::abs(m1.var - 1.0) <= 3.0 * std::sqrt(2.0 / 1e6));
  CHECK(std::abs(testing::correlation(b.s1, b.s2) - 0.5) <= 3.0 / std::sqrt(1e6));
}

TEST_CASE("difference variance is 2*sigma2*(1-rho)") {
  Rng rng(202);
  for (const SourceModel model : {SourceModel(1.0, 0.5), SourceModel(2.0, 0.9),
                                  SourceModel(0.5, 0.1)}) {
    const SourceBlock b = generate_block(model, 1000000, rng);
    const auto m3 = testing::moments(b.s3);
    const double expected = 2.0 * model.sigma2 * (1.0 - model.rho);
    CHECK(std::abs(m3.var - expected) <= 3.0 * expected * std::sqrt(2.0 / 1e6));
  }
}

TEST_CASE("empirical covariance matches rho*sigma2") {
  const SourceModel model(2.0, 0.9);
  Rng rng(203);
  const SourceBlock b = generate_block(model, 1000000, rng);
  const std::size_t n = b.s1.size();
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += b.s1[i];
    m2 += b.s2[i];
  }
  m1 /= n;
  m2 /= n;
  double cov = 0;
  for (std::size_t i = 0; i < n; ++i) cov += (b.s1[i] - m1) * (b.s2[i] - m2);
  cov /= (n - 1);
  // Var(X*Y) for bivariate normal: sigma1^2*sigma2^2*(1+rho^2)
  const double se = std::sqrt(model.sigma2 * model.sigma2 *
                              (1.0 + model.rho * model.rho) / n);
  CHECK(std::abs(cov - 1.8) <= 3.0 * se);
}

TEST_CASE("cached difference is exact and antisymmetric") {
  const SourceModel model(1.0, 0.3);
  Rng rng(204);
  const SourceBlock b = generate_block(model, 4096, rng);
  for (std::size_t i = 0; i < b.s3.size(); ++i) {
    CHECK(b.s3[i] == b.s1[i] - b.s2[i]);
    CHECK(b.s2[i] - b.s1[i] == -b.s3[i]);
  }
}

TEST_CASE("decomposition reconstructs the sources exactly") {
  const SourceModel model(1.5, 0.7);
  Rng rng(205);
  SourceDecomposition parts;
  const SourceBlock b = generate_block(model, 100000, rng, &parts);
  const double sqrt_rho = std::sqrt(model.rho);
  for (std::size_t i = 0; i < b.s1.size(); ++i) {
    CHECK(b.s1[i] == sqrt_rho * parts.common[i] + parts.v1[i]);
    CHECK(b.s2[i] == sqrt_rho * parts.common[i] + parts.v2[i]);
  }
  const auto mc = testing::moments(parts.common);
  CHECK(std::abs(mc.var - model.sigma2) <=
        3.0 * model.sigma2 * std::sqrt(2.0 / 1e5));
}

TEST_CASE("identical seeds yield identical blocks") {
  const SourceModel model(1.0, 0.6);
  Rng a(77), b(77);
  const SourceBlock ba = generate_block(model, 1000, a);
  const SourceBlock bb = generate_block(model, 1000, b);
  CHECK(ba.s1 == bb.s1);
  CHECK(ba.s2 == bb.s2);
  CHECK(ba.s3 == bb.s3);
}

TEST_CASE("zero-length blocks are rejected") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_block(SourceModel(1.0, 0.5), 0, rng),
                  std::invalid_argument);
}
