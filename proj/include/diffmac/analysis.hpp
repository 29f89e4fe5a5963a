// Closed-form distortions, scheme constants and feasibility predicates.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "diffmac/sources.hpp"

namespace diffmac {

// Per-user average power P and channel noise variance N.
struct ChannelModel {
  double power;
  double noise;
  ChannelModel(double power, double noise);
  double snr() const { return power / noise; }
};

// The scaled-lattice scheme exists only for P/N > 1/2.
struct SnrThresholdError : std::domain_error {
  using std::domain_error::domain_error;
};

enum class Scheme { Uncoded, LatticeIndependent, LatticeCommon };

Scheme scheme_from_name(const std::string& name);
const char* to_string(Scheme scheme);

// Derived constants of a configured lattice scheme.
struct SchemeParams {
  Scheme scheme = Scheme::Uncoded;
  std::optional<double> gamma;      // independent-dither scaling
  double alpha = 0.0;               // receiver MMSE coefficient
  double k_coeff = 0.0;             // post-mod shrinkage K
  std::optional<double> rho_prime;  // common-dither input correlation
  bool feasible = false;
};

// Genie-aided lower bound 2*sigma2*(1-rho) / (1 + 2P/N).
double distortion_lower_bound(const SourceModel& src, const ChannelModel& ch);

// Uncoded MMSE distortion 2*sigma2*(1-rho) / (1 + 2P(1-rho)/N).
double uncoded_distortion(const SourceModel& src, const ChannelModel& ch);

// Positive root of gamma^2 * 2*sigma2*(1-rho) + 2PN/(2P+N) = P.
// Throws SnrThresholdError unless P/N > 1/2.
double lattice_gamma(const SourceModel& src, const ChannelModel& ch);

// MMSE coefficient 2P / (2P + N).
double lattice_alpha(const ChannelModel& ch);

// K = 2PN / (2PN + 2*sigma2*(1-rho)*gamma^2*(2P+N)).
double lattice_k(const SourceModel& src, const ChannelModel& ch, double gamma);

// D_lattice = 2*sigma2*(1-rho) / (P/N + 1/2); requires P/N > 1/2.
double lattice_distortion(const SourceModel& src, const ChannelModel& ch);

// log2(D_lattice / D_bound); identically 1 above the SNR threshold.
double gap_bits(const SourceModel& src, const ChannelModel& ch);

// Common-dither MMSE coefficient 2P(1+rho') / (2P(1+rho') + N).
double common_dither_alpha(const ChannelModel& ch, double rho_prime);

// Common-dither shrinkage K at a given rho'.
double common_dither_k(const SourceModel& src, const ChannelModel& ch, double rho_prime);

// Common-dither closed-form distortion at a given rho'.
double common_dither_distortion(const SourceModel& src, const ChannelModel& ch,
                                double rho_prime);

// Correct-decoding condition 2*sigma2*(1-rho) + 2P(1+rho')N/(2P(1+rho')+N) <= P.
bool common_dither_feasible(const SourceModel& src, const ChannelModel& ch,
                            double rho_prime);

enum class CrossoverVerdict { UncodedWins, LatticeWins, Tie };

const char* to_string(CrossoverVerdict v);

// Which of the uncoded / independent-dither closed forms is smaller;
// equivalently the sign of (2*rho - 1) * P/N - 1/2.
CrossoverVerdict scheme_crossover(const SourceModel& src, const ChannelModel& ch);

// Parameter bundles for the two lattice schemes.
SchemeParams independent_scheme_params(const SourceModel& src, const ChannelModel& ch);
SchemeParams common_scheme_params(const SourceModel& src, const ChannelModel& ch,
                                  double rho_prime);

}  // namespace diffmac
