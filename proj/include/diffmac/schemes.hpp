// Encoders and decoders for the three transmission schemes.
#pragma once

#include <span>
#include <vector>

#include "diffmac/analysis.hpp"
#include "diffmac/lattice.hpp"
#include "diffmac/sources.hpp"

namespace diffmac {

struct ChannelInputPair {
  std::vector<double> x1;
  std::vector<double> x2;
};

struct DecodeOutcome {
  std::vector<double> estimate;
  // Whether the mod-lattice unwrap assumption failed. Populated only when
  // the decoder runs with genie access to the true pre-mod signal.
  bool wrapped = false;
};

// Per-component wrap detection tolerance, relative to the lattice scale.
double wrap_tolerance(const Lattice& lat);

// x1 = sqrt(P/sigma2) * s1, x2 = -sqrt(P/sigma2) * s2.
ChannelInputPair encode_uncoded(const SourceBlock& block, const SourceModel& src,
                                const ChannelModel& ch);

// Scalar MMSE coefficient E[S3*Y]/E[Y^2] = 2*sqrt(P*sigma2)*(1-rho) / (2P(1-rho)+N).
double uncoded_mmse_coefficient(const SourceModel& src, const ChannelModel& ch);

DecodeOutcome decode_uncoded(std::span<const double> y, const SourceModel& src,
                             const ChannelModel& ch);

// x1 = (gamma*s1 - u1) mod L, x2 = (-gamma*s2 - u2) mod L.
ChannelInputPair encode_lattice_independent(const SourceBlock& block,
                                            const SchemeParams& params,
                                            const Lattice& lat,
                                            std::span<const double> u1,
                                            std::span<const double> u2);

// estimate = ((1-K)/gamma) * ([alpha*y + u1 + u2] mod L). When `genie`
// carries the true gamma*(s1-s2) + z1, `wrapped` reports whether the mod
// output missed it.
DecodeOutcome decode_lattice_independent(std::span<const double> y,
                                         const SchemeParams& params,
                                         const Lattice& lat,
                                         std::span<const double> u1,
                                         std::span<const double> u2,
                                         std::span<const double> genie = {});

// x1 = (s1 - u) mod L, x2 = -[(s2 - u) mod L]; sources enter unscaled.
ChannelInputPair encode_lattice_common(const SourceBlock& block, const Lattice& lat,
                                       std::span<const double> u);

// estimate = (1-K) * ([alpha*y] mod L). The shared dither enters x1 and x2
// with opposite signs and cancels in their sum, so the receiver adds no
// dither term back. `u` stays in the signature as receiver-side knowledge.
DecodeOutcome decode_lattice_common(std::span<const double> y, const Lattice& lat,
                                    std::span<const double> u, double alpha,
                                    double k_coeff,
                                    std::span<const double> genie = {});

}  // namespace diffmac
