// Run manifests, grid expansion and CSV/JSON result emission.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "diffmac/simulate.hpp"

namespace diffmac {

enum class OutputFormat { Csv, Json };

OutputFormat format_from_name(const std::string& name);
const char* to_string(OutputFormat format);

struct RunManifest {
  std::string command;  // "simulate" or "sweep"
  std::vector<ExperimentConfig> configs;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
};

// Frozen record schema shared by the CSV and JSON writers.
inline constexpr const char* kCsvHeader =
    "scheme,lattice,sigma2,rho,P,N,blocks,seed,D_emp,stderr,D_cond,wrap_rate,"
    "rho_prime_hat,D_analytic,D_bound,gap_bits";

// Environment variable naming the default output directory for relative paths.
inline constexpr const char* kOutputDirEnv = "DIFFMAC_OUTPUT_DIR";

// 17 significant digits: parses back to the identical double.
std::string format_double(double v);

std::string csv_record(const ExperimentConfig& cfg, const SimulationReport& report);

// Serialized results for a whole run, in entry order.
std::string render_csv(const std::vector<SweepEntry>& entries);
std::string render_json(const std::vector<SweepEntry>& entries);

// Relative paths resolve under $DIFFMAC_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

// Round-trip support: parse one emitted CSV data line back into the config
// fields it echoes and the report values.
struct ParsedRecord {
  ExperimentConfig cfg;
  SimulationReport report;
};
ParsedRecord parse_csv_record(const std::string& line);

// Axis values given either as an explicit comma list "a,b,c" or as an
// inclusive range "start:stop:count".
std::vector<double> parse_axis(const std::string& text);

struct SweepAxes {
  std::vector<double> sigma2;
  std::vector<double> rho;
  std::vector<double> power;
  std::vector<double> noise;
  std::vector<Scheme> schemes;
  std::optional<LatticeKind> lattice_kind;
  int lattice_dim = 0;
  std::size_t blocks = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> n_override;
  bool no_noise = false;
};

// Cartesian expansion in frozen row order: sigma2, rho, P, N, scheme
// (innermost varies fastest).
std::vector<ExperimentConfig> expand_grid(const SweepAxes& axes);

// JSON manifest file loader (schema documented in the README).
RunManifest load_manifest(const std::string& path);

struct AnalyzeEntry {
  double rho_prime;
  double distortion;
  bool feasible;
};

// Everything cmd_analyze surfaces for one parameter point.
struct AnalyzeResult {
  double bound = 0.0;
  double uncoded = 0.0;
  std::optional<double> lattice;  // absent below the SNR threshold
  std::optional<double> gap;
  std::optional<double> gamma;
  double alpha = 0.0;
  std::optional<double> k_coeff;
  std::optional<CrossoverVerdict> crossover;
  std::vector<AnalyzeEntry> common;  // one entry per requested rho'
};

AnalyzeResult analyze(const SourceModel& src, const ChannelModel& ch,
                      const std::vector<double>& rho_primes);
void print_analyze(std::ostream& os, const SourceModel& src, const ChannelModel& ch,
                   const AnalyzeResult& result);

// Runs every config of the manifest and writes the result file. Returns 0
// on success, nonzero if any config failed validation (diagnostics go to
// `diag`, one line per failure).
int run_manifest(const RunManifest& manifest, unsigned threads, std::ostream& diag);

}  // namespace diffmac
