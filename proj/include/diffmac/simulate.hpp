// Monte Carlo experiment engine: trials, statistics, wrap and rho' measurement.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffmac/analysis.hpp"
#include "diffmac/lattice.hpp"
#include "diffmac/schemes.hpp"

namespace diffmac {

struct ExperimentConfig {
  SourceModel src;
  ChannelModel ch;
  Scheme scheme = Scheme::Uncoded;
  std::optional<LatticeKind> lattice_kind;  // required for lattice schemes
  int lattice_dim = 0;                      // 0 = kind default (cubic-zn: 8)
  std::size_t blocks = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> n_override;    // block length for uncoded
  bool no_noise = false;                    // debug: zero the noise realization
};

struct SimulationReport {
  double empirical_distortion = 0.0;
  double std_error = 0.0;
  double conditional_distortion = 0.0;  // given no wrap; NaN if all wrapped
  double conditional_std_error = 0.0;
  double wrap_rate = 0.0;
  std::optional<double> rho_prime_hat;  // lattice-common only
  double analytic_distortion = 0.0;
  double analytic_bound = 0.0;
  std::size_t samples = 0;
  std::size_t blocks = 0;
  bool feasible = true;  // common-dither decodability at the measured rho'
};

struct RhoPrimeEstimate {
  double rho_prime_hat = 0.0;
  double std_error = 0.0;
};

// y = x1 + x2 + z with z iid N(0, N); noise_enabled=false zeroes z.
std::vector<double> apply_channel(const ChannelInputPair& x, const ChannelModel& ch,
                                  Rng& rng, bool noise_enabled = true);

// Runs cfg.blocks independent trials and aggregates per-block statistics.
// threads = 0 uses all hardware threads; results are identical for any
// thread count (per-block substreams, fixed reduction order).
SimulationReport run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

// Empirical correlation between the two channel inputs of the common-dither
// encoder, measured over a dedicated pass of fresh sources and dithers.
RhoPrimeEstimate estimate_rho_prime(const ExperimentConfig& cfg, unsigned threads = 0);

namespace detail {
// Shared machinery behind estimate_rho_prime; also runs the independent
// encoder as a control (its input correlation is 0).
RhoPrimeEstimate measure_input_correlation(const ExperimentConfig& cfg, Scheme encoder,
                                           std::size_t blocks, unsigned threads);
}  // namespace detail

// One sweep entry per config, in input order; failures are recorded per
// entry and do not abort the remaining configs.
struct SweepEntry {
  ExperimentConfig cfg;
  std::optional<SimulationReport> report;
  std::string error;
};

std::vector<SweepEntry> sweep(const std::vector<ExperimentConfig>& grid,
                              unsigned threads = 0);

}  // namespace diffmac
