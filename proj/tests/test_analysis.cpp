#include "diffmac/analysis.hpp"

#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace diffmac;

namespace {
const SourceModel kSrcA(1.0, 0.5);
const ChannelModel kChA(1.0, 1.0);
const SourceModel kSrcB(1.0, 0.9);
const ChannelModel kChB(10.0, 1.0);

// Random valid parameter tuple above the SNR threshold.
struct Tuple {
  SourceModel src;
  ChannelModel ch;
};
Tuple random_tuple(Rng& rng) {
  const double sigma2 = 0.1 + 5.0 * rng.uniform01();
  const double rho = 0.01 + 0.98 * rng.uniform01();
  const double noise = 0.1 + 3.0 * rng.uniform01();
  const double power = noise * (0.51 + 20.0 * rng.uniform01());
  return {SourceModel(sigma2, rho), ChannelModel(power, noise)};
}
}  // namespace

TEST_CASE("channel model validation") {
  CHECK_THROWS_AS(ChannelModel(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(-2.0, 1.0), std::invalid_argument);
}

TEST_CASE("distortion lower bound") {
  CHECK(distortion_lower_bound(kSrcA, kChA) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(distortion_lower_bound(kSrcB, kChB) ==
        doctest::Approx(0.2 / 21.0).epsilon(1e-12));
  // rho -> 1 limit collapses the bound
  CHECK(distortion_lower_bound(SourceModel(1.0, 1.0 - 1e-9), kChA) < 1e-8);
}

TEST_CASE("uncoded distortion") {
  CHECK(uncoded_distortion(kSrcA, kChA) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uncoded_distortion(kSrcB, kChB) == doctest::Approx(0.2 / 3.0).epsilon(1e-12));
  // N -> infinity: estimator collapses to the prior variance
  CHECK(uncoded_distortion(kSrcA, ChannelModel(1.0, 1e12)) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lattice gamma") {
  CHECK(lattice_gamma(kSrcA, kChA) ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  const double g = lattice_gamma(kSrcB, kChB);
  CHECK(g * g == doctest::Approx(950.0 / 21.0).epsilon(1e-12));
  CHECK(g == doctest::Approx(6.7259).epsilon(1e-4));
  CHECK_THROWS_AS(lattice_gamma(kSrcA, ChannelModel(0.5, 1.0)), SnrThresholdError);
  CHECK_THROWS_AS(lattice_gamma(kSrcA, ChannelModel(0.4, 1.0)), SnrThresholdError);
  CHECK_NOTHROW(lattice_gamma(kSrcA, ChannelModel(0.5 + 1e-9, 1.0)));
}

TEST_CASE("lattice alpha") {
  CHECK(lattice_alpha(kChA) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(lattice_alpha(kChB) == doctest::Approx(20.0 / 21.0).epsilon(1e-12));
  CHECK(lattice_alpha(ChannelModel(1.0, 1e-12)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lattice K") {
  CHECK(lattice_k(kSrcB, kChB, std::sqrt(950.0 / 21.0)) ==
        doctest::Approx(20.0 / 210.0).epsilon(1e-12));
  CHECK(lattice_k(kSrcA, kChA, std::sqrt(1.0 / 3.0)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(lattice_k(kSrcA, kChA, 1e9) < 1e-15);
  CHECK_THROWS_AS(lattice_k(kSrcA, kChA, 0.0), std::invalid_argument);
}

TEST_CASE("lattice distortion and the K-form agree") {
  CHECK(lattice_distortion(kSrcA, kChA) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(lattice_distortion(kSrcB, kChB) ==
        doctest::Approx(0.2 / 10.5).epsilon(1e-12));
  CHECK_THROWS_AS(lattice_distortion(kSrcA, ChannelModel(0.5, 1.0)),
                  SnrThresholdError);
  CHECK(lattice_distortion(SourceModel(1.0, 1.0 - 1e-9), kChB) < 1e-8);

  Rng rng(301);
  for (int i = 0; i < 200; ++i) {
    const Tuple t = random_tuple(rng);
    const double v = 2.0 * t.src.sigma2 * (1.0 - t.src.rho);
    const double g = lattice_gamma(t.src, t.ch);
    const double via_k =
        v / (1.0 + v * g * g * (2.0 * t.ch.power + t.ch.noise) /
                       (2.0 * t.ch.power * t.ch.noise));
    CHECK(lattice_distortion(t.src, t.ch) ==
          doctest::Approx(via_k).epsilon(1e-12));
  }
}

TEST_CASE("gap identity holds everywhere above threshold") {
  CHECK(gap_bits(kSrcA, kChA) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gap_bits(SourceModel(3.0, 0.2), ChannelModel(7.0, 2.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gap_bits(kSrcB, kChB) == doctest::Approx(1.0).epsilon(1e-12));
  Rng rng(302);
  for (int i = 0; i < 1000; ++i) {
    const Tuple t = random_tuple(rng);
    CHECK(std::abs(gap_bits(t.src, t.ch) - 1.0) <= 1e-12);
  }
}

TEST_CASE("common dither alpha") {
  CHECK(common_dither_alpha(kChB, 0.0) == doctest::Approx(20.0 / 21.0).epsilon(1e-12));
  CHECK(common_dither_alpha(kChB, 1.0) == doctest::Approx(40.0 / 41.0).epsilon(1e-12));
  CHECK(common_dither_alpha(kChB, -1.0) == doctest::Approx(0.0));
  CHECK(common_dither_alpha(kChB, 0.0) == doctest::Approx(lattice_alpha(kChB)));
  CHECK_THROWS_AS(common_dither_alpha(kChB, -1.5), std::invalid_argument);
  CHECK_THROWS_AS(common_dither_alpha(kChB, 1.5), std::invalid_argument);
}

TEST_CASE("common dither distortion") {
  CHECK(common_dither_distortion(kSrcB, kChB, 0.0) ==
        doctest::Approx(0.2 / 1.21).epsilon(1e-12));
  CHECK(common_dither_distortion(kSrcB, kChB, 1.0) ==
        doctest::Approx(0.2 / 1.205).epsilon(1e-12));
  CHECK(common_dither_distortion(SourceModel(1.0, 1.0 - 1e-9), kChB, 0.0) < 1e-8);
  CHECK_THROWS_AS(common_dither_distortion(kSrcB, kChB, -1.0),
                  std::invalid_argument);
}

TEST_CASE("common dither feasibility") {
  CHECK(common_dither_feasible(kSrcB, kChB, 0.0));
  CHECK_FALSE(common_dither_feasible(SourceModel(1.0, 0.1), ChannelModel(1.0, 1.0), 0.0));
  CHECK(common_dither_feasible(kSrcA, ChannelModel(1e9, 1.0), 0.0));
}

TEST_CASE("crossover verdict follows (2rho-1)*SNR - 1/2") {
  CHECK(scheme_crossover(kSrcB, kChB) == CrossoverVerdict::LatticeWins);
  CHECK(scheme_crossover(kSrcA, kChA) == CrossoverVerdict::UncodedWins);
  // criterion exactly zero: rho = 0.75, SNR = 1
  CHECK(scheme_crossover(SourceModel(1.0, 0.75), ChannelModel(1.0, 1.0)) ==
        CrossoverVerdict::Tie);
  CHECK_THROWS_AS(scheme_crossover(kSrcA, ChannelModel(0.4, 1.0)), SnrThresholdError);

  Rng rng(303);
  for (int i = 0; i < 1000; ++i) {
    const Tuple t = random_tuple(rng);
    const double criterion =
        (2.0 * t.src.rho - 1.0) * t.ch.snr() - 0.5;
    const CrossoverVerdict v = scheme_crossover(t.src, t.ch);
    if (v == CrossoverVerdict::LatticeWins) CHECK(criterion > 0.0);
    if (v == CrossoverVerdict::UncodedWins) CHECK(criterion < 0.0);
  }
}

TEST_CASE("uncoded and lattice closed forms dominate the bound") {
  Rng rng(304);
  for (int i = 0; i < 500; ++i) {
    const Tuple t = random_tuple(rng);
    const double bound = distortion_lower_bound(t.src, t.ch);
    CHECK(uncoded_distortion(t.src, t.ch) > bound);
    CHECK(lattice_distortion(t.src, t.ch) > bound);
  }
  // The common-dither closed form respects the bound wherever the scheme
  // both decodes (feasibility) and does not pretend to out-filter the
  // channel (v/w <= 2P/N); measured rho' operating points land there.
  const double rho_hat = -0.727;  // measured for E8 at (1, 0.9, 10, 1)
  CHECK(common_dither_distortion(kSrcB, kChB, rho_hat) >
        distortion_lower_bound(kSrcB, kChB));
  CHECK(common_dither_distortion(kSrcB, kChB, 0.0) >
        distortion_lower_bound(kSrcB, kChB));
}

TEST_CASE("bound and uncoded distortion coincide in the rho -> 0 limit") {
  const ChannelModel ch(3.0, 1.0);
  const SourceModel src(2.0, 1e-9);
  const double bound = distortion_lower_bound(src, ch);
  const double uncoded = uncoded_distortion(src, ch);
  CHECK(std::abs(uncoded - bound) <= 1e-6 * bound);
}

TEST_CASE("monotonicity of the closed forms") {
  // strictly decreasing in P, increasing in N, decreasing in rho
  const double eps = 1e-4;
  for (double rho : {0.2, 0.6, 0.9}) {
    for (double snr : {0.8, 2.0, 10.0}) {
      const SourceModel src(1.0, rho);
      const ChannelModel ch(snr, 1.0);
      const ChannelModel ch_p(snr + eps, 1.0);
      const ChannelModel ch_n(snr, 1.0 + eps);
      const SourceModel src_r(1.0, rho + eps);
      CHECK(distortion_lower_bound(src, ch_p) < distortion_lower_bound(src, ch));
      CHECK(distortion_lower_bound(src, ch_n) > distortion_lower_bound(src, ch));
      CHECK(distortion_lower_bound(src_r, ch) < distortion_lower_bound(src, ch));
      CHECK(uncoded_distortion(src, ch_p) < uncoded_distortion(src, ch));
      CHECK(uncoded_distortion(src, ch_n) > uncoded_distortion(src, ch));
      CHECK(uncoded_distortion(src_r, ch) < uncoded_distortion(src, ch));
      CHECK(lattice_distortion(src, ch_p) < lattice_distortion(src, ch));
      CHECK(lattice_distortion(src, ch_n) > lattice_distortion(src, ch));
      CHECK(lattice_distortion(src_r, ch) < lattice_distortion(src, ch));
    }
  }
}

TEST_CASE("scheme parameter bundles") {
  const SchemeParams ind = independent_scheme_params(kSrcB, kChB);
  CHECK(ind.scheme == Scheme::LatticeIndependent);
  CHECK(ind.feasible);
  CHECK(*ind.gamma == doctest::Approx(lattice_gamma(kSrcB, kChB)));
  CHECK(ind.alpha == doctest::Approx(20.0 / 21.0));
  CHECK(ind.k_coeff == doctest::Approx(20.0 / 210.0));
  CHECK_FALSE(ind.rho_prime.has_value());

  const SchemeParams com = common_scheme_params(kSrcB, kChB, -0.5);
  CHECK(com.scheme == Scheme::LatticeCommon);
  CHECK(*com.rho_prime == doctest::Approx(-0.5));
  CHECK_FALSE(com.gamma.has_value());
  CHECK(com.feasible ==
        common_dither_feasible(kSrcB, kChB, -0.5));
}

TEST_CASE("scheme names round trip") {
  CHECK(scheme_from_name("uncoded") == Scheme::Uncoded);
  CHECK(scheme_from_name("lattice-independent") == Scheme::LatticeIndependent);
  CHECK(scheme_from_name("lattice-common") == Scheme::LatticeCommon);
  CHECK_THROWS_AS(scheme_from_name("qam"), std::invalid_argument);
}
