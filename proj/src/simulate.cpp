#include "diffmac/simulate.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace diffmac {

namespace {

// Stream tags: the main trial pass and the rho' measurement pass draw from
// disjoint substream families of the config seed.
constexpr std::uint64_t kTagTrials = 0;
constexpr std::uint64_t kTagRhoPrime = 1;

constexpr std::size_t kRhoPrimePassBlocks = 100000;

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw != 0 ? hw : 1;
}

// Runs fn(i) for i in [0, count) across workers. Work items only ever write
// to their own slot of preallocated arrays, so any schedule gives the same
// result.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::size_t end = std::min(begin + kChunk, count);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sequential two-pass reduction in block order; independent of how the
// per-block values were produced.
MeanStdErr reduce_mean(const std::vector<double>& values) {
  const std::size_t n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

Lattice build_config_lattice(const ExperimentConfig& cfg) {
  if (!cfg.lattice_kind)
    throw std::invalid_argument("lattice schemes require a lattice kind");
  const LatticeKind kind = *cfg.lattice_kind;
  int dim = fixed_dim(kind);
  if (dim == 0) dim = cfg.lattice_dim > 0 ? cfg.lattice_dim : 8;
  else if (cfg.lattice_dim > 0 && cfg.lattice_dim != dim)
    throw std::invalid_argument("lattice dimension does not match kind");
  return scale_to_power(make_lattice(kind, dim, 1.0), cfg.ch.power);
}

std::vector<double> noise_vector(std::size_t n, double variance, bool enabled,
                                 Rng& rng) {
  std::vector<double> z(n, 0.0);
  if (!enabled) return z;
  const double sd = std::sqrt(variance);
  for (std::size_t i = 0; i < n; ++i) z[i] = sd * rng.normal();
  return z;
}

struct BlockResult {
  double mse = 0.0;
  bool wrapped = false;
};

// One uncoded trial block. Draw order: sources, then noise.
BlockResult run_block_uncoded(const ExperimentConfig& cfg, std::size_t n, Rng& rng) {
  const SourceBlock block = generate_block(cfg.src, n, rng);
  const ChannelInputPair x = encode_uncoded(block, cfg.src, cfg.ch);
  const std::vector<double> z = noise_vector(n, cfg.ch.noise, !cfg.no_noise, rng);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x.x1[i] + x.x2[i] + z[i];
  const DecodeOutcome out = decode_uncoded(y, cfg.src, cfg.ch);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = out.estimate[i] - block.s3[i];
    err += e * e;
  }
  return {err / n, false};
}

// One independent-dither trial block. Draw order: sources, u1, u2, noise.
BlockResult run_block_independent(const ExperimentConfig& cfg, const Lattice& lat,
                                  const SchemeParams& params, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(lat.dim);
  const SourceBlock block = generate_block(cfg.src, n, rng);
  const std::vector<double> u1 = sample_dither(lat, rng);
  const std::vector<double> u2 = sample_dither(lat, rng);
  const ChannelInputPair x = encode_lattice_independent(block, params, lat, u1, u2);
  const std::vector<double> z = noise_vector(n, cfg.ch.noise, !cfg.no_noise, rng);
  std::vector<double> y(n), genie(n);
  const double gamma = *params.gamma;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x.x1[i] + x.x2[i] + z[i];
    // true pre-mod signal gamma*(s1-s2) + z1
    genie[i] = gamma * block.s3[i] +
               (params.alpha - 1.0) * (x.x1[i] + x.x2[i]) + params.alpha * z[i];
  }
  const DecodeOutcome out = decode_lattice_independent(y, params, lat, u1, u2, genie);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = out.estimate[i] - block.s3[i];
    err += e * e;
  }
  return {err / n, out.wrapped};
}

// One common-dither trial block. Draw order: sources, u, noise.
BlockResult run_block_common(const ExperimentConfig& cfg, const Lattice& lat,
                             const SchemeParams& params, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(lat.dim);
  const SourceBlock block = generate_block(cfg.src, n, rng);
  const std::vector<double> u = sample_dither(lat, rng);
  const ChannelInputPair x = encode_lattice_common(block, lat, u);
  const std::vector<double> z = noise_vector(n, cfg.ch.noise, !cfg.no_noise, rng);
  std::vector<double> y(n), genie(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x.x1[i] + x.x2[i] + z[i];
    genie[i] = block.s3[i] +
               (params.alpha - 1.0) * (x.x1[i] + x.x2[i]) + params.alpha * z[i];
  }
  const DecodeOutcome out =
      decode_lattice_common(y, lat, u, params.alpha, params.k_coeff, genie);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = out.estimate[i] - block.s3[i];
    err += e * e;
  }
  return {err / n, out.wrapped};
}

}  // namespace

std::vector<double> apply_channel(const ChannelInputPair& x, const ChannelModel& ch,
                                  Rng& rng, bool noise_enabled) {
  if (x.x1.size() != x.x2.size())
    throw std::invalid_argument("channel input dimensions do not match");
  const std::size_t n = x.x1.size();
  std::vector<double> y = noise_vector(n, ch.noise, noise_enabled, rng);
  for (std::size_t i = 0; i < n; ++i) y[i] += x.x1[i] + x.x2[i];
  return y;
}

RhoPrimeEstimate detail::measure_input_correlation(const ExperimentConfig& cfg,
                                                   Scheme encoder, std::size_t blocks,
                                                   unsigned threads) {
  if (encoder == Scheme::Uncoded)
    throw std::invalid_argument("input correlation is measured for lattice encoders");
  const Lattice lat = build_config_lattice(cfg);
  const std::size_t n = static_cast<std::size_t>(lat.dim);
  SchemeParams params;
  if (encoder == Scheme::LatticeIndependent)
    params = independent_scheme_params(cfg.src, cfg.ch);

  struct Moments {
    double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  };
  std::vector<Moments> per_block(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    Rng rng = substream(cfg.seed, kTagRhoPrime, b);
    const SourceBlock block = generate_block(cfg.src, n, rng);
    ChannelInputPair x;
    if (encoder == Scheme::LatticeIndependent) {
      const std::vector<double> u1 = sample_dither(lat, rng);
      const std::vector<double> u2 = sample_dither(lat, rng);
      x = encode_lattice_independent(block, params, lat, u1, u2);
    } else {
      const std::vector<double> u = sample_dither(lat, rng);
      x = encode_lattice_common(block, lat, u);
    }
    Moments m;
    for (std::size_t i = 0; i < n; ++i) {
      m.s1 += x.x1[i];
      m.s2 += x.x2[i];
      m.s11 += x.x1[i] * x.x1[i];
      m.s22 += x.x2[i] * x.x2[i];
      m.s12 += x.x1[i] * x.x2[i];
    }
    per_block[b] = m;
  });

  Moments total;
  for (const Moments& m : per_block) {
    total.s1 += m.s1;
    total.s2 += m.s2;
    total.s11 += m.s11;
    total.s22 += m.s22;
    total.s12 += m.s12;
  }
  const double count = static_cast<double>(blocks) * static_cast<double>(n);
  const double cov = total.s12 - total.s1 * total.s2 / count;
  const double var1 = total.s11 - total.s1 * total.s1 / count;
  const double var2 = total.s22 - total.s2 * total.s2 / count;
  const double r = cov / std::sqrt(var1 * var2);

  // Standard error by the delta method on the block sums (a, p, q) =
  // (sum x1x2, sum x1^2, sum x2^2): components within a block share a
  // dither and are not independent pairs, so block-to-block variability is
  // the honest noise scale. Gradient of A/sqrt(PQ): (1/sqrt(PQ), -r/2P, -r/2Q).
  const double mean_a = total.s12 / blocks;
  const double mean_p = total.s11 / blocks;
  const double mean_q = total.s22 / blocks;
  double c[3][3] = {};
  for (const Moments& m : per_block) {
    const double d[3] = {m.s12 - mean_a, m.s11 - mean_p, m.s22 - mean_q};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[i][j] += d[i] * d[j];
  }
  // Cov of the totals is blocks * Cov_block; the sample covariance of the
  // per-block values carries 1/(blocks-1).
  const double bessel = static_cast<double>(blocks) /
                        std::max(1.0, static_cast<double>(blocks) - 1.0);
  const double g[3] = {1.0 / std::sqrt(total.s11 * total.s22),
                       -r / (2.0 * total.s11), -r / (2.0 * total.s22)};
  double var_r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) var_r += g[i] * g[j] * c[i][j];
  var_r *= bessel;
  return {r, std::sqrt(std::max(0.0, var_r))};
}

RhoPrimeEstimate estimate_rho_prime(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.scheme != Scheme::LatticeCommon)
    throw std::invalid_argument("rho' estimation applies to the lattice-common scheme");
  return detail::measure_input_correlation(cfg, Scheme::LatticeCommon,
                                           kRhoPrimePassBlocks, threads);
}

SimulationReport run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.blocks < 1) throw std::invalid_argument("blocks must be >= 1");

  SimulationReport report;
  report.blocks = cfg.blocks;
  report.analytic_bound = distortion_lower_bound(cfg.src, cfg.ch);

  std::size_t n = 0;
  Lattice lat;
  SchemeParams params;
  switch (cfg.scheme) {
    case Scheme::Uncoded:
      n = cfg.n_override.value_or(100);
      if (n == 0) throw std::invalid_argument("block length must be >= 1");
      report.analytic_distortion = uncoded_distortion(cfg.src, cfg.ch);
      break;
    case Scheme::LatticeIndependent:
      lat = build_config_lattice(cfg);
      n = static_cast<std::size_t>(lat.dim);
      params = independent_scheme_params(cfg.src, cfg.ch);  // throws below threshold
      report.analytic_distortion = lattice_distortion(cfg.src, cfg.ch);
      break;
    case Scheme::LatticeCommon: {
      lat = build_config_lattice(cfg);
      n = static_cast<std::size_t>(lat.dim);
      const RhoPrimeEstimate rp = estimate_rho_prime(cfg, threads);
      params = common_scheme_params(cfg.src, cfg.ch, rp.rho_prime_hat);
      report.rho_prime_hat = rp.rho_prime_hat;
      report.feasible = params.feasible;
      report.analytic_distortion =
          common_dither_distortion(cfg.src, cfg.ch, rp.rho_prime_hat);
      break;
    }
  }

  std::vector<double> mse(cfg.blocks);
  std::vector<unsigned char> wrapped(cfg.blocks, 0);
  parallel_for(cfg.blocks, threads, [&](std::size_t b) {
    Rng rng = substream(cfg.seed, kTagTrials, b);
    BlockResult r;
    switch (cfg.scheme) {
      case Scheme::Uncoded: r = run_block_uncoded(cfg, n, rng); break;
      case Scheme::LatticeIndependent: r = run_block_independent(cfg, lat, params, rng); break;
      case Scheme::LatticeCommon: r = run_block_common(cfg, lat, params, rng); break;
    }
    mse[b] = r.mse;
    wrapped[b] = r.wrapped ? 1 : 0;
  });

  const MeanStdErr overall = reduce_mean(mse);
  report.empirical_distortion = overall.mean;
  report.std_error = overall.std_error;
  report.samples = cfg.blocks * n;

  std::size_t wraps = 0;
  std::vector<double> unwrapped_mse;
  unwrapped_mse.reserve(cfg.blocks);
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    if (wrapped[b]) ++wraps;
    else unwrapped_mse.push_back(mse[b]);
  }
  report.wrap_rate = static_cast<double>(wraps) / static_cast<double>(cfg.blocks);
  if (unwrapped_mse.empty()) {
    report.conditional_distortion = std::numeric_limits<double>::quiet_NaN();
    report.conditional_std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    const MeanStdErr cond = reduce_mean(unwrapped_mse);
    report.conditional_distortion = cond.mean;
    report.conditional_std_error = cond.std_error;
  }
  return report;
}

std::vector<SweepEntry> sweep(const std::vector<ExperimentConfig>& grid,
                              unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<SweepEntry> entries;
  entries.reserve(grid.size());
  for (const ExperimentConfig& cfg : grid) {
    SweepEntry entry{cfg, std::nullopt, {}};
    try {
      entry.report = run_experiment(cfg, threads);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace diffmac
