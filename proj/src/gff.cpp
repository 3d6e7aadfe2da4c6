#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lathom/environment.hpp"
#include "lathom/rng.hpp"

namespace lathom {

namespace {

// Laplacian symbol on the torus: lambda(k) = sum_j 4 sin^2(pi k_j / L)
double symbol(const Coord& k, int d, int L) {
  double s = 0;
  for (int j = 0; j < d; ++j) {
    double t = std::sin(M_PI * k[j] / L);
    s += 4.0 * t * t;
  }
  return s;
}

}  // namespace

std::vector<double> sample_gff_field(int d, int L, uint64_t seed) {
  if (d < 3) throw std::invalid_argument("gff: the massless free field requires d >= 3");
  Torus t(d, L);
  const long n = t.num_vertices();

  std::vector<fftw_complex> spec(n);
  for (long i = 0; i < n; ++i) spec[i][0] = spec[i][1] = 0.0;

  // Fourier modes with covariance E|phi_hat(k)|^2 = 1/(n*lambda(k)), zero mode
  // removed, Hermitian symmetry phi_hat(-k) = conj(phi_hat(k)).  One stream
  // per canonical mode pair keeps the draw order-independent.
  for (long f = 0; f < n; ++f) {
    Coord k = t.coord(f);
    Coord kneg{};
    for (int j = 0; j < d; ++j) kneg[j] = (L - k[j]) % L;
    long fneg = t.index(kneg);
    if (f > fneg) continue;  // handled at the canonical partner
    double lam = symbol(k, d, L);
    if (lam == 0.0) continue;  // zero mode
    RngStream rs(seed, "gff-mode", static_cast<uint64_t>(f));
    if (f == fneg) {
      // self-conjugate mode: real coefficient
      spec[f][0] = rs.normal() / std::sqrt(static_cast<double>(n) * lam);
    } else {
      double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n) * lam);
      double a = rs.normal(), b = rs.normal();
      spec[f][0] = scale * a;
      spec[f][1] = scale * b;
      spec[fneg][0] = scale * a;
      spec[fneg][1] = -scale * b;
    }
  }

  std::vector<fftw_complex> out(n);
  std::vector<int> dims(d, L);
  fftw_plan plan = fftw_plan_dft(d, dims.data(), spec.data(), out.data(), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  std::vector<double> phi(n);
  for (long i = 0; i < n; ++i) phi[i] = out[i][0];
  return phi;
}

Environment sample_gff_exp(int d, int L, uint64_t seed) {
  std::vector<double> phi = sample_gff_field(d, L, seed);
  LawSpec law{"gff_exp", {}};
  Environment env(d, Topology::TorusT, L, law, seed);
  Torus t(d, L);
  for (long v = 0; v < t.num_vertices(); ++v)
    for (int i = 0; i < d; ++i)
      env.edge_t(v, i) = std::exp(phi[v] + phi[t.neighbor(v, i, +1)]);
  return env;
}

}  // namespace lathom
