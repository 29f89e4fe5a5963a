#include "diffmac/sources.hpp"

#include <cmath>
#include <stdexcept>

namespace diffmac {

SourceModel::SourceModel(double sigma2_, double rho_) : sigma2(sigma2_), rho(rho_) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("sigma2 must be positive");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in the open interval (0, 1)");
}

SourceBlock generate_block(const SourceModel& model, std::size_t n, Rng& rng,
                           SourceDecomposition* parts) {
  if (n == 0) throw std::invalid_argument("block length must be >= 1");
  const double sd_common = std::sqrt(model.sigma2);
  const double sd_private = std::sqrt(model.sigma2 * (1.0 - model.rho));
  const double sqrt_rho = std::sqrt(model.rho);

  SourceBlock block;
  block.s1.resize(n);
  block.s2.resize(n);
  block.s3.resize(n);
  if (parts) {
    parts->common.resize(n);
    parts->v1.resize(n);
    parts->v2.resize(n);
  }
  // Frozen draw order: per sample, common then v1 then v2.
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sd_common * rng.normal();
    const double v1 = sd_private * rng.normal();
    const double v2 = sd_private * rng.normal();
    block.s1[i] = sqrt_rho * s + v1;
    block.s2[i] = sqrt_rho * s + v2;
    block.s3[i] = block.s1[i] - block.s2[i];
    if (parts) {
      parts->common[i] = s;
      parts->v1[i] = v1;
      parts->v2[i] = v2;
    }
  }
  return block;
}

}  // namespace diffmac
