#include "diffmac/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace diffmac {

namespace {
bool missed_genie(std::span<const double> mod_out, std::span<const double> genie,
                  double tol) {
  for (std::size_t i = 0; i < mod_out.size(); ++i)
    if (std::abs(mod_out[i] - genie[i]) > tol) return true;
  return false;
}
}  // namespace

double wrap_tolerance(const Lattice& lat) { return 1e-6 * lat.scale; }

ChannelInputPair encode_uncoded(const SourceBlock& block, const SourceModel& src,
                                const ChannelModel& ch) {
  const double c = std::sqrt(ch.power / src.sigma2);
  ChannelInputPair out;
  out.x1.resize(block.s1.size());
  out.x2.resize(block.s2.size());
  for (std::size_t i = 0; i < block.s1.size(); ++i) {
    out.x1[i] = c * block.s1[i];
    out.x2[i] = -c * block.s2[i];
  }
  return out;
}

double uncoded_mmse_coefficient(const SourceModel& src, const ChannelModel& ch) {
  const double one_minus_rho = 1.0 - src.rho;
  return 2.0 * std::sqrt(ch.power * src.sigma2) * one_minus_rho /
         (2.0 * ch.power * one_minus_rho + ch.noise);
}

DecodeOutcome decode_uncoded(std::span<const double> y, const SourceModel& src,
                             const ChannelModel& ch) {
  const double c = uncoded_mmse_coefficient(src, ch);
  DecodeOutcome out;
  out.estimate.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out.estimate[i] = c * y[i];
  out.wrapped = false;
  return out;
}

ChannelInputPair encode_lattice_independent(const SourceBlock& block,
                                            const SchemeParams& params,
                                            const Lattice& lat,
                                            std::span<const double> u1,
                                            std::span<const double> u2) {
  if (!params.gamma) throw std::invalid_argument("scheme parameters are missing gamma");
  const double gamma = *params.gamma;
  const std::size_t n = block.s1.size();
  std::vector<double> a1(n), a2(n);
  for (std::size_t i = 0; i < n; ++i) {
    a1[i] = gamma * block.s1[i] - u1[i];
    a2[i] = -gamma * block.s2[i] - u2[i];
  }
  return {mod_lattice(lat, a1), mod_lattice(lat, a2)};
}

DecodeOutcome decode_lattice_independent(std::span<const double> y,
                                         const SchemeParams& params,
                                         const Lattice& lat,
                                         std::span<const double> u1,
                                         std::span<const double> u2,
                                         std::span<const double> genie) {
  if (!params.gamma) throw std::invalid_argument("scheme parameters are missing gamma");
  if (!(params.alpha > 0.0) || !(params.k_coeff > 0.0))
    throw std::invalid_argument("scheme parameters are missing alpha or K");
  const std::size_t n = y.size();
  std::vector<double> arg(n);
  for (std::size_t i = 0; i < n; ++i) arg[i] = params.alpha * y[i] + u1[i] + u2[i];
  std::vector<double> folded = mod_lattice(lat, arg);
  DecodeOutcome out;
  out.wrapped = !genie.empty() && missed_genie(folded, genie, wrap_tolerance(lat));
  const double c = (1.0 - params.k_coeff) / *params.gamma;
  out.estimate.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.estimate[i] = c * folded[i];
  return out;
}

ChannelInputPair encode_lattice_common(const SourceBlock& block, const Lattice& lat,
                                       std::span<const double> u) {
  const std::size_t n = block.s1.size();
  std::vector<double> a1(n), a2(n);
  for (std::size_t i = 0; i < n; ++i) {
    a1[i] = block.s1[i] - u[i];
    a2[i] = block.s2[i] - u[i];
  }
  ChannelInputPair out;
  out.x1 = mod_lattice(lat, a1);
  out.x2 = mod_lattice(lat, a2);
  for (double& v : out.x2) v = -v;
  return out;
}

DecodeOutcome decode_lattice_common(std::span<const double> y, const Lattice& lat,
                                    std::span<const double> u, double alpha,
                                    double k_coeff, std::span<const double> genie) {
  (void)u;  // cancels between the two channel inputs
  if (!(alpha > 0.0 && alpha < 1.0) || !(k_coeff > 0.0 && k_coeff < 1.0))
    throw std::invalid_argument("alpha and K must lie in (0, 1)");
  const std::size_t n = y.size();
  std::vector<double> arg(n);
  for (std::size_t i = 0; i < n; ++i) arg[i] = alpha * y[i];
  std::vector<double> folded = mod_lattice(lat, arg);
  DecodeOutcome out;
  out.wrapped = !genie.empty() && missed_genie(folded, genie, wrap_tolerance(lat));
  out.estimate.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.estimate[i] = (1.0 - k_coeff) * folded[i];
  return out;
}

}  // namespace diffmac
