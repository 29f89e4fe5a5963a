#include "diffmac/analysis.hpp"

#include <cmath>

namespace diffmac {

namespace {
// Variance of the difference source, 2*sigma2*(1-rho).
double diff_variance(const SourceModel& src) {
  return 2.0 * src.sigma2 * (1.0 - src.rho);
}

void require_above_threshold(const ChannelModel& ch) {
  if (!(ch.snr() > 0.5))
    throw SnrThresholdError("scaled-lattice scheme requires P/N > 1/2");
}
}  // namespace

ChannelModel::ChannelModel(double power_, double noise_) : power(power_), noise(noise_) {
  if (!(power > 0.0) || !std::isfinite(power))
    throw std::invalid_argument("power must be positive");
  if (!(noise > 0.0) || !std::isfinite(noise))
    throw std::invalid_argument("noise variance must be positive");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "uncoded") return Scheme::Uncoded;
  if (name == "lattice-independent") return Scheme::LatticeIndependent;
  if (name == "lattice-common") return Scheme::LatticeCommon;
  throw std::invalid_argument("unknown scheme: " + name);
}

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Uncoded: return "uncoded";
    case Scheme::LatticeIndependent: return "lattice-independent";
    case Scheme::LatticeCommon: return "lattice-common";
  }
  return "?";
}

double distortion_lower_bound(const SourceModel& src, const ChannelModel& ch) {
  return diff_variance(src) / (1.0 + 2.0 * ch.power / ch.noise);
}

double uncoded_distortion(const SourceModel& src, const ChannelModel& ch) {
  return diff_variance(src) / (1.0 + 2.0 * ch.power * (1.0 - src.rho) / ch.noise);
}

double lattice_gamma(const SourceModel& src, const ChannelModel& ch) {
  require_above_threshold(ch);
  const double P = ch.power, N = ch.noise;
  const double effective_noise = 2.0 * P * N / (2.0 * P + N);
  return std::sqrt((P - effective_noise) / diff_variance(src));
}

double lattice_alpha(const ChannelModel& ch) {
  return 2.0 * ch.power / (2.0 * ch.power + ch.noise);
}

double lattice_k(const SourceModel& src, const ChannelModel& ch, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const double P = ch.power, N = ch.noise;
  const double pn = 2.0 * P * N;
  return pn / (pn + diff_variance(src) * gamma * gamma * (2.0 * P + N));
}

double lattice_distortion(const SourceModel& src, const ChannelModel& ch) {
  require_above_threshold(ch);
  return diff_variance(src) / (ch.snr() + 0.5);
}

double gap_bits(const SourceModel& src, const ChannelModel& ch) {
  return std::log2(lattice_distortion(src, ch) / distortion_lower_bound(src, ch));
}

double common_dither_alpha(const ChannelModel& ch, double rho_prime) {
  if (!(rho_prime >= -1.0 && rho_prime <= 1.0))
    throw std::invalid_argument("rho' must lie in [-1, 1]");
  const double a = 2.0 * ch.power * (1.0 + rho_prime);
  return a / (a + ch.noise);
}

namespace {
// Effective-noise variance 2P(1+rho')N / (2P(1+rho') + N); rho' > -1.
double common_effective_noise(const ChannelModel& ch, double rho_prime) {
  if (!(rho_prime > -1.0 && rho_prime <= 1.0))
    throw std::invalid_argument("rho' must lie in (-1, 1]");
  const double a = 2.0 * ch.power * (1.0 + rho_prime);
  return a * ch.noise / (a + ch.noise);
}
}  // namespace

double common_dither_k(const SourceModel& src, const ChannelModel& ch, double rho_prime) {
  const double w = common_effective_noise(ch, rho_prime);
  return w / (w + diff_variance(src));
}

double common_dither_distortion(const SourceModel& src, const ChannelModel& ch,
                                double rho_prime) {
  const double v = diff_variance(src);
  return v / (1.0 + v / common_effective_noise(ch, rho_prime));
}

bool common_dither_feasible(const SourceModel& src, const ChannelModel& ch,
                            double rho_prime) {
  return diff_variance(src) + common_effective_noise(ch, rho_prime) <= ch.power;
}

const char* to_string(CrossoverVerdict v) {
  switch (v) {
    case CrossoverVerdict::UncodedWins: return "uncoded";
    case CrossoverVerdict::LatticeWins: return "lattice-independent";
    case CrossoverVerdict::Tie: return "tie";
  }
  return "?";
}

CrossoverVerdict scheme_crossover(const SourceModel& src, const ChannelModel& ch) {
  require_above_threshold(ch);
  const double du = uncoded_distortion(src, ch);
  const double dl = lattice_distortion(src, ch);
  if (std::abs(du - dl) <= 1e-12 * std::max(du, dl)) return CrossoverVerdict::Tie;
  return du < dl ? CrossoverVerdict::UncodedWins : CrossoverVerdict::LatticeWins;
}

SchemeParams independent_scheme_params(const SourceModel& src, const ChannelModel& ch) {
  SchemeParams p;
  p.scheme = Scheme::LatticeIndependent;
  p.gamma = lattice_gamma(src, ch);
  p.alpha = lattice_alpha(ch);
  p.k_coeff = lattice_k(src, ch, *p.gamma);
  p.feasible = true;
  return p;
}

SchemeParams common_scheme_params(const SourceModel& src, const ChannelModel& ch,
                                  double rho_prime) {
  SchemeParams p;
  p.scheme = Scheme::LatticeCommon;
  p.alpha = common_dither_alpha(ch, rho_prime);
  p.k_coeff = common_dither_k(src, ch, rho_prime);
  p.rho_prime = rho_prime;
  p.feasible = common_dither_feasible(src, ch, rho_prime);
  return p;
}

}  // namespace diffmac
