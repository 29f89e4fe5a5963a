// Lattices with exact closest-vector quantization, mod-lattice reduction,
// dither sampling and second-moment calibration.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "diffmac/rng.hpp"

namespace diffmac {

enum class LatticeKind { ScalarZ, CubicZn, D4, E8 };

LatticeKind lattice_kind_from_name(const std::string& name);
const char* to_string(LatticeKind kind);

// Natural dimension of a kind; cubic-zn has none and returns 0.
int fixed_dim(LatticeKind kind);

// Lattice {zG : z integer vector}; rows of `generator` are basis vectors of
// the scaled lattice (scale times an integer-coordinate base lattice).
// `second_moment` is the per-dimension second moment of a uniform point in
// the Voronoi cell; `nsm` the normalized second moment of the base lattice.
struct Lattice {
  LatticeKind kind = LatticeKind::ScalarZ;
  std::string name;
  int dim = 0;
  double scale = 1.0;
  double second_moment = 0.0;
  double nsm = 0.0;
  std::vector<double> generator;      // row-major dim x dim
  std::vector<double> generator_inv;  // row-major inverse of generator
};

struct LatticePoint {
  std::vector<double> coords;
};

Lattice make_lattice(LatticeKind kind, int dim, double scale);
Lattice make_lattice(const std::string& kind, int dim, double scale);

// Exact closest lattice point to x (ties break toward the candidate found
// first in a fixed enumeration order).
LatticePoint cvp_quantize(const Lattice& lat, std::span<const double> x);

// x - Q(x): folds x into the fundamental Voronoi region.
std::vector<double> mod_lattice(const Lattice& lat, std::span<const double> x);

// Uniform sample over the fundamental Voronoi region: uniform over the
// fundamental parallelepiped, folded by mod_lattice (measure preserving).
std::vector<double> sample_dither(const Lattice& lat, Rng& rng);

struct SecondMomentEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of the per-dimension second moment from `samples`
// dither draws (mean of |d|^2/n and its standard error).
SecondMomentEstimate calibrate_second_moment(const Lattice& lat,
                                             std::size_t samples, Rng& rng);

// Copy of `lat` rescaled so that its second moment equals `power`.
Lattice scale_to_power(const Lattice& lat, double power);

// True if v = z * generator for an integer vector z, within tol per entry.
bool is_lattice_point(const Lattice& lat, std::span<const double> v,
                      double tol = 1e-6);

}  // namespace diffmac
