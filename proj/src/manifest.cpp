#include "diffmac/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace diffmac {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
  return v;
}

}  // namespace

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format: " + name);
}

const char* to_string(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_record(const ExperimentConfig& cfg, const SimulationReport& report) {
  std::ostringstream os;
  os << to_string(cfg.scheme) << ',';
  if (cfg.lattice_kind) os << to_string(*cfg.lattice_kind);
  os << ',' << format_double(cfg.src.sigma2) << ',' << format_double(cfg.src.rho)
     << ',' << format_double(cfg.ch.power) << ',' << format_double(cfg.ch.noise)
     << ',' << cfg.blocks << ',' << cfg.seed << ','
     << format_double(report.empirical_distortion) << ','
     << format_double(report.std_error) << ','
     << format_double(report.conditional_distortion) << ','
     << format_double(report.wrap_rate) << ',';
  if (report.rho_prime_hat) os << format_double(*report.rho_prime_hat);
  os << ',' << format_double(report.analytic_distortion) << ','
     << format_double(report.analytic_bound) << ','
     << format_double(std::log2(report.analytic_distortion / report.analytic_bound));
  return os.str();
}

std::string render_csv(const std::vector<SweepEntry>& entries) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const SweepEntry& e : entries)
    if (e.report) os << csv_record(e.cfg, *e.report) << '\n';
  return os.str();
}

std::string render_json(const std::vector<SweepEntry>& entries) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const SweepEntry& e : entries) {
    if (!e.report) continue;
    const SimulationReport& r = *e.report;
    nlohmann::ordered_json rec;
    rec["scheme"] = to_string(e.cfg.scheme);
    rec["lattice"] = e.cfg.lattice_kind
                         ? nlohmann::ordered_json(to_string(*e.cfg.lattice_kind))
                         : nlohmann::ordered_json(nullptr);
    rec["sigma2"] = e.cfg.src.sigma2;
    rec["rho"] = e.cfg.src.rho;
    rec["P"] = e.cfg.ch.power;
    rec["N"] = e.cfg.ch.noise;
    rec["blocks"] = e.cfg.blocks;
    rec["seed"] = e.cfg.seed;
    rec["D_emp"] = r.empirical_distortion;
    rec["stderr"] = r.std_error;
    rec["D_cond"] = std::isnan(r.conditional_distortion)
                        ? nlohmann::ordered_json(nullptr)
                        : nlohmann::ordered_json(r.conditional_distortion);
    rec["wrap_rate"] = r.wrap_rate;
    rec["rho_prime_hat"] = r.rho_prime_hat
                               ? nlohmann::ordered_json(*r.rho_prime_hat)
                               : nlohmann::ordered_json(nullptr);
    rec["D_analytic"] = r.analytic_distortion;
    rec["D_bound"] = r.analytic_bound;
    rec["gap_bits"] = std::log2(r.analytic_distortion / r.analytic_bound);
    records.push_back(std::move(rec));
  }
  return records.dump(2) + "\n";
}

std::string resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0')
    return (std::filesystem::path(dir) / p).string();
  return path;
}

ParsedRecord parse_csv_record(const std::string& line) {
  const std::vector<std::string> f = split(line, ',');
  if (f.size() != 16) throw std::invalid_argument("csv record must have 16 fields");
  ExperimentConfig cfg{SourceModel(parse_double(f[2]), parse_double(f[3])),
                       ChannelModel(parse_double(f[4]), parse_double(f[5]))};
  cfg.scheme = scheme_from_name(f[0]);
  if (!f[1].empty()) cfg.lattice_kind = lattice_kind_from_name(f[1]);
  cfg.blocks = std::stoull(f[6]);
  cfg.seed = std::stoull(f[7]);
  SimulationReport rep;
  rep.blocks = cfg.blocks;
  rep.empirical_distortion = parse_double(f[8]);
  rep.std_error = parse_double(f[9]);
  rep.conditional_distortion = parse_double(f[10]);
  rep.wrap_rate = parse_double(f[11]);
  if (!f[12].empty()) rep.rho_prime_hat = parse_double(f[12]);
  rep.analytic_distortion = parse_double(f[13]);
  rep.analytic_bound = parse_double(f[14]);
  return {cfg, rep};
}

std::vector<double> parse_axis(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty axis");
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("range axis must be start:stop:count");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const long count = std::stol(parts[2]);
    if (count < 1) throw std::invalid_argument("range count must be >= 1");
    if (count == 1) return {start};
    values.reserve(count);
    for (long i = 0; i < count; ++i)
      values.push_back(start + (stop - start) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
    return values;
  }
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw std::invalid_argument("empty axis element");
    values.push_back(parse_double(part));
  }
  return values;
}

std::vector<ExperimentConfig> expand_grid(const SweepAxes& axes) {
  if (axes.sigma2.empty() || axes.rho.empty() || axes.power.empty() ||
      axes.noise.empty() || axes.schemes.empty())
    throw std::invalid_argument("every sweep axis needs at least one value");
  std::vector<ExperimentConfig> grid;
  grid.reserve(axes.sigma2.size() * axes.rho.size() * axes.power.size() *
               axes.noise.size() * axes.schemes.size());
  for (double sigma2 : axes.sigma2)
    for (double rho : axes.rho)
      for (double power : axes.power)
        for (double noise : axes.noise)
          for (Scheme scheme : axes.schemes) {
            ExperimentConfig cfg{SourceModel(sigma2, rho), ChannelModel(power, noise)};
            cfg.scheme = scheme;
            if (scheme != Scheme::Uncoded) {
              cfg.lattice_kind = axes.lattice_kind;
              cfg.lattice_dim = axes.lattice_dim;
            }
            cfg.blocks = axes.blocks;
            cfg.seed = axes.seed;
            cfg.n_override = axes.n_override;
            cfg.no_noise = axes.no_noise;
            grid.push_back(std::move(cfg));
          }
  return grid;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open manifest: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  RunManifest manifest;
  manifest.command = doc.value("command", "simulate");
  manifest.output_path = doc.value("output", "results.csv");
  manifest.format = format_from_name(doc.value("format", "csv"));
  if (!doc.contains("configs") || !doc["configs"].is_array() || doc["configs"].empty())
    throw std::invalid_argument("manifest needs a nonempty configs array");
  for (const nlohmann::json& c : doc["configs"]) {
    ExperimentConfig cfg{SourceModel(c.at("sigma2").get<double>(),
                                     c.at("rho").get<double>()),
                         ChannelModel(c.at("power").get<double>(),
                                      c.at("noise").get<double>())};
    cfg.scheme = scheme_from_name(c.at("scheme").get<std::string>());
    if (c.contains("lattice") && !c["lattice"].is_null())
      cfg.lattice_kind = lattice_kind_from_name(c["lattice"].get<std::string>());
    cfg.lattice_dim = c.value("lattice_dim", 0);
    cfg.blocks = c.value("blocks", std::size_t{1});
    cfg.seed = c.value("seed", std::uint64_t{0});
    if (c.contains("n") && !c["n"].is_null())
      cfg.n_override = c["n"].get<std::size_t>();
    cfg.no_noise = c.value("no_noise", false);
    manifest.configs.push_back(std::move(cfg));
  }
  return manifest;
}

AnalyzeResult analyze(const SourceModel& src, const ChannelModel& ch,
                      const std::vector<double>& rho_primes) {
  AnalyzeResult r;
  r.bound = distortion_lower_bound(src, ch);
  r.uncoded = uncoded_distortion(src, ch);
  r.alpha = lattice_alpha(ch);
  try {
    r.gamma = lattice_gamma(src, ch);
    r.k_coeff = lattice_k(src, ch, *r.gamma);
    r.lattice = lattice_distortion(src, ch);
    r.gap = gap_bits(src, ch);
    r.crossover = scheme_crossover(src, ch);
  } catch (const SnrThresholdError&) {
    // below P/N = 1/2 the scaled-lattice scheme does not exist
  }
  for (double rp : rho_primes)
    r.common.push_back({rp, common_dither_distortion(src, ch, rp),
                        common_dither_feasible(src, ch, rp)});
  return r;
}

void print_analyze(std::ostream& os, const SourceModel& src, const ChannelModel& ch,
                   const AnalyzeResult& r) {
  os << "sigma2=" << format_double(src.sigma2) << " rho=" << format_double(src.rho)
     << " P=" << format_double(ch.power) << " N=" << format_double(ch.noise)
     << " SNR=" << format_double(ch.snr()) << "\n";
  os << "D_bound    " << format_double(r.bound) << "\n";
  os << "D_uncoded  " << format_double(r.uncoded) << "\n";
  if (r.lattice) {
    os << "D_lattice  " << format_double(*r.lattice) << "\n";
    os << "gap_bits   " << format_double(*r.gap) << "\n";
    os << "gamma      " << format_double(*r.gamma) << "\n";
    os << "alpha      " << format_double(r.alpha) << "\n";
    os << "K          " << format_double(*r.k_coeff) << "\n";
    os << "crossover  " << to_string(*r.crossover) << "\n";
  } else {
    os << "D_lattice  infeasible (requires SNR > 1/2)\n";
    os << "alpha      " << format_double(r.alpha) << "\n";
  }
  for (const AnalyzeEntry& e : r.common)
    os << "D_common(rho'=" << format_double(e.rho_prime) << ")  "
       << format_double(e.distortion) << (e.feasible ? "  feasible" : "  infeasible")
       << "\n";
}

int run_manifest(const RunManifest& manifest, unsigned threads, std::ostream& diag) {
  const std::vector<SweepEntry> entries = sweep(manifest.configs, threads);
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].report) {
      ++failures;
      diag << "config " << i << ": " << entries[i].error << "\n";
    } else if (!entries[i].report->feasible) {
      diag << "config " << i << ": common-dither correct-decoding condition fails "
           << "at measured rho'\n";
    }
  }
  const std::string path = resolve_output_path(manifest.output_path);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    diag << "cannot write output file: " << path << "\n";
    return 1;
  }
  out << (manifest.format == OutputFormat::Csv ? render_csv(entries)
                                               : render_json(entries));
  return failures == 0 ? 0 : 1;
}

}  // namespace diffmac
