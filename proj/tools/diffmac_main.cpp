// Command line front end: analyze / simulate / sweep.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diffmac/manifest.hpp"

namespace {

diffmac::SweepAxes collect_axes(const std::string& sigma2, const std::string& rho,
                                const std::string& power, const std::string& noise,
                                const std::vector<std::string>& schemes,
                                const std::string& lattice, int lattice_dim,
                                std::size_t blocks, std::uint64_t seed,
                                std::size_t n_override, bool no_noise) {
  diffmac::SweepAxes axes;
  axes.sigma2 = diffmac::parse_axis(sigma2);
  axes.rho = diffmac::parse_axis(rho);
  axes.power = diffmac::parse_axis(power);
  axes.noise = diffmac::parse_axis(noise);
  for (const std::string& s : schemes)
    axes.schemes.push_back(diffmac::scheme_from_name(s));
  if (!lattice.empty()) axes.lattice_kind = diffmac::lattice_kind_from_name(lattice);
  axes.lattice_dim = lattice_dim;
  axes.blocks = blocks;
  axes.seed = seed;
  if (n_override > 0) axes.n_override = n_override;
  axes.no_noise = no_noise;
  return axes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distortion analysis and Monte Carlo simulation of schemes for "
               "communicating the difference of correlated Gaussian sources over "
               "a Gaussian MAC"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // analyze
  double a_sigma2 = 1.0, a_rho = 0.5, a_power = 1.0, a_noise = 1.0;
  std::string a_rho_primes;
  CLI::App* analyze = app.add_subcommand("analyze", "print the closed-form table");
  analyze->add_option("--sigma2", a_sigma2, "source variance")->required();
  analyze->add_option("--rho", a_rho, "source correlation")->required();
  analyze->add_option("--power", a_power, "per-user power P")->required();
  analyze->add_option("--noise", a_noise, "noise variance N")->required();
  analyze->add_option("--rho-prime", a_rho_primes,
                      "rho' list for the common-dither distortion (list or range)");

  // shared simulate/sweep options
  struct RunOpts {
    std::string sigma2 = "1", rho, power, noise = "1";
    std::vector<std::string> schemes;
    std::string lattice;
    int lattice_dim = 0;
    std::size_t blocks = 10000;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    bool no_noise = false;
    std::string out;
    std::string format = "csv";
  };

  RunOpts sim;
  std::string manifest_path;
  CLI::App* simulate = app.add_subcommand("simulate", "run configured experiments");
  simulate->add_option("--manifest", manifest_path, "JSON manifest file");
  simulate->add_option("--scheme", sim.schemes, "scheme name")->delimiter(',');
  simulate->add_option("--lattice", sim.lattice, "lattice kind");
  simulate->add_option("--lattice-dim", sim.lattice_dim, "dimension for cubic-zn");
  simulate->add_option("--sigma2", sim.sigma2, "source variance");
  simulate->add_option("--rho", sim.rho, "source correlation");
  simulate->add_option("--power", sim.power, "per-user power P");
  simulate->add_option("--noise", sim.noise, "noise variance N");
  simulate->add_option("--blocks", sim.blocks, "number of trial blocks");
  simulate->add_option("--seed", sim.seed, "base RNG seed");
  simulate->add_option("--n", sim.n, "uncoded block length");
  simulate->add_flag("--no-noise", sim.no_noise, "zero the noise realization");
  simulate->add_option("--out", sim.out, "output file path");
  simulate->add_option("--format", sim.format, "csv or json");

  RunOpts sw;
  CLI::App* sweepcmd = app.add_subcommand("sweep", "Cartesian parameter sweep");
  sweepcmd->add_option("--schemes", sw.schemes, "scheme names")
      ->delimiter(',')
      ->required();
  sweepcmd->add_option("--lattice", sw.lattice, "lattice kind");
  sweepcmd->add_option("--lattice-dim", sw.lattice_dim, "dimension for cubic-zn");
  sweepcmd->add_option("--sigma2", sw.sigma2, "sigma2 axis (list or start:stop:count)");
  sweepcmd->add_option("--rho", sw.rho, "rho axis")->required();
  sweepcmd->add_option("--power", sw.power, "P axis")->required();
  sweepcmd->add_option("--noise", sw.noise, "N axis");
  sweepcmd->add_option("--blocks", sw.blocks, "trial blocks per config");
  sweepcmd->add_option("--seed", sw.seed, "base RNG seed");
  sweepcmd->add_option("--n", sw.n, "uncoded block length");
  sweepcmd->add_flag("--no-noise", sw.no_noise, "zero the noise realization");
  sweepcmd->add_option("--out", sw.out, "output file path");
  sweepcmd->add_option("--format", sw.format, "csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const diffmac::SourceModel src(a_sigma2, a_rho);
      const diffmac::ChannelModel ch(a_power, a_noise);
      std::vector<double> rho_primes;
      if (!a_rho_primes.empty()) rho_primes = diffmac::parse_axis(a_rho_primes);
      diffmac::print_analyze(std::cout, src, ch,
                             diffmac::analyze(src, ch, rho_primes));
      return 0;
    }

    diffmac::RunManifest manifest;
    if (simulate->parsed()) {
      if (!manifest_path.empty()) {
        manifest = diffmac::load_manifest(manifest_path);
        if (!sim.out.empty()) manifest.output_path = sim.out;
      } else {
        if (sim.schemes.empty() || sim.rho.empty() || sim.power.empty())
          throw std::invalid_argument(
              "simulate needs --manifest or --scheme/--rho/--power");
        manifest.command = "simulate";
        manifest.configs = diffmac::expand_grid(collect_axes(
            sim.sigma2, sim.rho, sim.power, sim.noise, sim.schemes, sim.lattice,
            sim.lattice_dim, sim.blocks, sim.seed, sim.n, sim.no_noise));
        manifest.output_path = sim.out.empty() ? "results.csv" : sim.out;
        manifest.format = diffmac::format_from_name(sim.format);
      }
    } else {
      manifest.command = "sweep";
      manifest.configs = diffmac::expand_grid(collect_axes(
          sw.sigma2, sw.rho, sw.power, sw.noise, sw.schemes, sw.lattice,
          sw.lattice_dim, sw.blocks, sw.seed, sw.n, sw.no_noise));
      manifest.output_path = sw.out.empty() ? "sweep.csv" : sw.out;
      manifest.format = diffmac::format_from_name(sw.format);
    }
    return diffmac::run_manifest(manifest, threads, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
