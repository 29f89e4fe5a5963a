#include "diffmac/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diffmac {

namespace {

// Per-dimension second moment of the base (scale 1) lattice.
// Z and Z^n are 1/12 exactly. D4 (integer coordinates, det 2) has Voronoi
// second moment 13/120 per dimension; E8 (unimodular) has 929/12960. The
// stored values are validated against the Monte Carlo oracle in the tests.
double base_second_moment(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::ScalarZ:
    case LatticeKind::CubicZn:
      return 1.0 / 12.0;
    case LatticeKind::D4:
      return 13.0 / 120.0;
    case LatticeKind::E8:
      return 929.0 / 12960.0;
  }
  throw std::logic_error("unreachable lattice kind");
}

// |det G_base|^(1/n): covolume of the base lattice per dimension.
double base_det(LatticeKind kind) {
  return kind == LatticeKind::D4 ? 2.0 : 1.0;
}

// Nearest integer, ties toward +infinity (fixed deterministic convention).
inline double round_half_up(double v) { return std::floor(v + 0.5); }

// Closest point of Z^n: componentwise rounding.
void decode_zn(std::span<const double> w, std::span<double> out) {
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = round_half_up(w[i]);
}

// Closest point of D_n = {z in Z^n : sum z even}: round componentwise; if
// the coordinate sum is odd, re-round the coordinate with the largest
// rounding error the other way (first such index on ties).
void decode_dn(std::span<const double> w, std::span<double> out) {
  long long sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = round_half_up(w[i]);
    sum += static_cast<long long>(out[i]);
  }
  if (sum % 2 != 0) {
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double err = std::abs(w[i] - out[i]);
      if (err > worst_err) {
        worst_err = err;
        worst = i;
      }
    }
    out[worst] += (w[worst] >= out[worst]) ? 1.0 : -1.0;
  }
}

// Closest point of E8 = D8 u (D8 + 1/2): decode both cosets, keep the
// closer (the D8 coset wins ties).
void decode_e8(std::span<const double> w, std::span<double> out) {
  double a[8], b[8], shifted[8];
  decode_dn(w, a);
  for (int i = 0; i < 8; ++i) shifted[i] = w[i] - 0.5;
  decode_dn(std::span<const double>(shifted, 8), b);
  for (int i = 0; i < 8; ++i) b[i] += 0.5;
  double da = 0.0, db = 0.0;
  for (int i = 0; i < 8; ++i) {
    da += (w[i] - a[i]) * (w[i] - a[i]);
    db += (w[i] - b[i]) * (w[i] - b[i]);
  }
  const double* best = (da <= db) ? a : b;
  std::copy(best, best + 8, out.begin());
}

std::vector<double> base_generator(LatticeKind kind, int dim) {
  std::vector<double> g(static_cast<std::size_t>(dim) * dim, 0.0);
  auto at = [&](int r, int c) -> double& { return g[static_cast<std::size_t>(r) * dim + c]; };
  switch (kind) {
    case LatticeKind::ScalarZ:
    case LatticeKind::CubicZn:
      for (int i = 0; i < dim; ++i) at(i, i) = 1.0;
      break;
    case LatticeKind::D4:
      // rows (1,-1,0,0), (0,1,-1,0), (0,0,1,-1), (0,0,1,1); det 2
      at(0, 0) = 1;  at(0, 1) = -1;
      at(1, 1) = 1;  at(1, 2) = -1;
      at(2, 2) = 1;  at(2, 3) = -1;
      at(3, 2) = 1;  at(3, 3) = 1;
      break;
    case LatticeKind::E8:
      // (2,0,...), (-1,1,0,...), ..., (0,...,-1,1,0), (1/2,...,1/2); det 1
      at(0, 0) = 2;
      for (int i = 1; i < 7; ++i) {
        at(i, i - 1) = -1;
        at(i, i) = 1;
      }
      for (int c = 0; c < 8; ++c) at(7, c) = 0.5;
      break;
  }
  return g;
}

// Gauss-Jordan inverse with partial pivoting; throws on rank deficiency.
std::vector<double> invert(std::vector<double> m, int n) {
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[static_cast<std::size_t>(r) * n + col]) >
          std::abs(m[static_cast<std::size_t>(pivot) * n + col]))
        pivot = r;
    if (std::abs(m[static_cast<std::size_t>(pivot) * n + col]) < 1e-14)
      throw std::invalid_argument("generator matrix is rank deficient");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(m[static_cast<std::size_t>(pivot) * n + c], m[static_cast<std::size_t>(col) * n + c]);
        std::swap(inv[static_cast<std::size_t>(pivot) * n + c], inv[static_cast<std::size_t>(col) * n + c]);
      }
    const double d = m[static_cast<std::size_t>(col) * n + col];
    for (int c = 0; c < n; ++c) {
      m[static_cast<std::size_t>(col) * n + c] /= d;
      inv[static_cast<std::size_t>(col) * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[static_cast<std::size_t>(r) * n + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        m[static_cast<std::size_t>(r) * n + c] -= f * m[static_cast<std::size_t>(col) * n + c];
        inv[static_cast<std::size_t>(r) * n + c] -= f * inv[static_cast<std::size_t>(col) * n + c];
      }
    }
  }
  return inv;
}

void check_input(const Lattice& lat, std::span<const double> x) {
  if (static_cast<int>(x.size()) != lat.dim)
    throw std::invalid_argument("input dimension does not match lattice dimension");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input component");
}

}  // namespace

LatticeKind lattice_kind_from_name(const std::string& name) {
  if (name == "scalar-z") return LatticeKind::ScalarZ;
  if (name == "cubic-zn") return LatticeKind::CubicZn;
  if (name == "d4") return LatticeKind::D4;
  if (name == "e8") return LatticeKind::E8;
  throw std::invalid_argument("unknown lattice kind: " + name);
}

const char* to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::ScalarZ: return "scalar-z";
    case LatticeKind::CubicZn: return "cubic-zn";
    case LatticeKind::D4: return "d4";
    case LatticeKind::E8: return "e8";
  }
  return "?";
}

int fixed_dim(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::ScalarZ: return 1;
    case LatticeKind::D4: return 4;
    case LatticeKind::E8: return 8;
    case LatticeKind::CubicZn: return 0;
  }
  return 0;
}

Lattice make_lattice(LatticeKind kind, int dim, double scale) {
  if (scale <= 0.0 || !std::isfinite(scale))
    throw std::invalid_argument("lattice scale must be positive");
  const int want = fixed_dim(kind);
  if (want != 0 && dim != want)
    throw std::invalid_argument(std::string(to_string(kind)) + " requires dimension " +
                                std::to_string(want));
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");

  Lattice lat;
  lat.kind = kind;
  lat.name = to_string(kind);
  lat.dim = dim;
  lat.scale = scale;
  lat.generator = base_generator(kind, dim);
  for (double& v : lat.generator) v *= scale;
  lat.generator_inv = invert(lat.generator, dim);
  const double sm_base = base_second_moment(kind);
  lat.second_moment = sm_base * scale * scale;
  // nsm = sigma^2 / |det|^{2/n} of the base lattice
  lat.nsm = sm_base / std::pow(base_det(kind), 2.0 / dim);
  return lat;
}

Lattice make_lattice(const std::string& kind, int dim, double scale) {
  return make_lattice(lattice_kind_from_name(kind), dim, scale);
}

LatticePoint cvp_quantize(const Lattice& lat, std::span<const double> x) {
  check_input(lat, x);
  const std::size_t n = x.size();
  // Decode in base coordinates (the base lattices have integer/half-integer
  // coordinates), then scale back.
  std::vector<double> w(n), p(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = x[i] / lat.scale;
  switch (lat.kind) {
    case LatticeKind::ScalarZ:
    case LatticeKind::CubicZn:
      decode_zn(w, p);
      break;
    case LatticeKind::D4:
      decode_dn(w, p);
      break;
    case LatticeKind::E8:
      decode_e8(w, p);
      break;
  }
  LatticePoint r;
  r.coords.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.coords[i] = p[i] * lat.scale;
  return r;
}

std::vector<double> mod_lattice(const Lattice& lat, std::span<const double> x) {
  LatticePoint q = cvp_quantize(lat, x);
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - q.coords[i];
  return r;
}

std::vector<double> sample_dither(const Lattice& lat, Rng& rng) {
  const int n = lat.dim;
  std::vector<double> x(n, 0.0);
  for (int r = 0; r < n; ++r) {
    const double t = rng.uniform01();
    for (int c = 0; c < n; ++c)
      x[c] += t * lat.generator[static_cast<std::size_t>(r) * n + c];
  }
  return mod_lattice(lat, x);
}

SecondMomentEstimate calibrate_second_moment(const Lattice& lat,
                                             std::size_t samples, Rng& rng) {
  if (samples < 10000)
    throw std::invalid_argument("calibration needs at least 10^4 samples");
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::vector<double> d = sample_dither(lat, rng);
    double nrm2 = 0.0;
    for (double v : d) nrm2 += v * v;
    const double per_dim = nrm2 / lat.dim;
    sum += per_dim;
    sumsq += per_dim * per_dim;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1));
  return {mean, std::sqrt(var / samples)};
}

Lattice scale_to_power(const Lattice& lat, double power) {
  if (power <= 0.0 || !std::isfinite(power))
    throw std::invalid_argument("target power must be positive");
  if (!(lat.second_moment > 0.0))
    throw std::invalid_argument("lattice second moment unknown");
  return make_lattice(lat.kind, lat.dim, lat.scale * std::sqrt(power / lat.second_moment));
}

bool is_lattice_point(const Lattice& lat, std::span<const double> v, double tol) {
  check_input(lat, v);
  const int n = lat.dim;
  for (int c = 0; c < n; ++c) {
    double z = 0.0;
    for (int r = 0; r < n; ++r)
      z += v[r] * lat.generator_inv[static_cast<std::size_t>(r) * n + c];
    if (std::abs(z - round_half_up(z)) > tol) return false;
  }
  return true;
}

}  // namespace diffmac
