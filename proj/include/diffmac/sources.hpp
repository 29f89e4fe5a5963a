// Correlated bivariate Gaussian source generation.
#pragma once

#include <cstddef>
#include <vector>

#include "diffmac/rng.hpp"

namespace diffmac {

// Per-source variance sigma2 and correlation rho; the setting requires
// 0 < rho < 1 (rho = 1 degenerates the difference, rho <= 0 is out of model).
struct SourceModel {
  double sigma2;
  double rho;
  SourceModel(double sigma2, double rho);
};

struct SourceBlock {
  std::vector<double> s1;
  std::vector<double> s2;
  std::vector<double> s3;  // s1 - s2, cached exactly
};

// The common/private parts behind a block: s_k = sqrt(rho)*common + v_k,
// Var(common) = sigma2, Var(v_k) = sigma2*(1-rho). Exposed for tests.
struct SourceDecomposition {
  std::vector<double> common;
  std::vector<double> v1;
  std::vector<double> v2;
};

SourceBlock generate_block(const SourceModel& model, std::size_t n, Rng& rng,
                           SourceDecomposition* parts = nullptr);

}  // namespace diffmac
