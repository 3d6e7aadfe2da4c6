#pragma once

#include <vector>

#include "lathom/elliptic.hpp"
#include "lathom/environment.hpp"

namespace lathom {

// First-order corrector phi, flux q, homogenized diagonal matrix a_h, and the
// antisymmetric flux corrector sigma on a periodic representative volume.
//
//   phi_i solves  grad_star . a grad phi_i = -grad_star . (a e_i), mean zero
//   a_h e_i      = torus average of a (e_i + grad phi_i)   (diagonal kept)
//   q_i          = a (e_i + grad phi_i) minus its full average, so the torus
//                  mean of every component of q_i vanishes exactly
//   sigma_ijk solves  (grad_star . grad) sigma_ijk = grad_j q_ik - grad_k q_ij,
//                  mean zero, with sigma_ikj = -sigma_ijk by storage
struct CorrectorSet {
  int d = 0, L = 0;
  std::vector<VertexField> phi;     // d fields on the torus, mean zero
  std::vector<VectorField> q;       // d vector fields, componentwise mean zero
  std::vector<double> ah_diag;      // (a_h)_ii
  std::vector<double> flux_mean;    // full averaged flux matrix m[i*d+j]
  std::vector<VertexField> sigma;   // d*d*d fields, index (i*d+j)*d+k
  std::vector<SolveReport> phi_reports;
  std::vector<SolveReport> sigma_reports;

  const VertexField& sig(int i, int j, int k) const { return sigma[(static_cast<size_t>(i) * d + j) * d + k]; }
  double offdiag_max() const;
};

std::vector<VertexField> compute_phi(const Environment& env, const SolveOptions& opt = {},
                                     std::vector<SolveReport>* reports = nullptr);

// a_h, centered flux q, and the full averaged flux matrix
void compute_ahom(const Environment& env, const std::vector<VertexField>& phi,
                  std::vector<double>& ah_diag, std::vector<double>& flux_mean,
                  std::vector<VectorField>& q);

std::vector<VertexField> compute_sigma(const Environment& env, const std::vector<VectorField>& q,
                                       const SolveOptions& opt = {},
                                       std::vector<SolveReport>* reports = nullptr);

CorrectorSet compute_correctors(const Environment& env, const SolveOptions& opt = {},
                                bool with_sigma = true);

// residual diagnostics for the corrector system, all relative
struct CorrectorResiduals {
  double phi_equation = 0;    // max_i rel. residual of the phi_i equation
  double q_divergence = 0;    // max_i |grad_star . q_i| / scale
  double sigma_potential = 0; // max_i |grad_star . sigma_i + q_i| / scale
  double sigma_equation = 0;  // max over triples of the Poisson residual
};
CorrectorResiduals corrector_residuals(const Environment& env, const CorrectorSet& cs);

// x_i + phi_i and its gradient field e_i + grad phi_i; the a-harmonicity
// residual of the corrected coordinate is the phi-equation residual
VertexField corrected_coordinate(const Environment& env, const CorrectorSet& cs, int i);

// averaged norm of a torus field over the centered window D_R (|x|_inf < R)
double avnorm_window(const VertexField& u, int R, double p);

struct SublinearityRow {
  int L = 0;
  uint64_t seed = 0;
  double phi_ratio = 0;    // avnorm(phi, 2p/(p-1), D_{L/2}) / (L/2), worst direction
  double sigma_ratio = 0;  // avnorm(sigma, 2q/(q-1), D_{L/2}) / (L/2), worst triple
};

std::vector<SublinearityRow> sublinearity_scan(const LawSpec& law, int d, const std::vector<int>& Ls,
                                               double p, double q, int seeds, uint64_t master_seed,
                                               const SolveOptions& opt = {});

// Voigt-Reuss bracket: harmonic mean <= (a_h)_ii <= arithmetic mean of the
// edge conductances, checked per direction
struct VoigtReuss {
  double harmonic = 0, arithmetic = 0;
  bool ok(const std::vector<double>& ah) const {
    for (double a : ah)
      if (a < harmonic * (1 - 1e-9) || a > arithmetic * (1 + 1e-9)) return false;
    return true;
  }
};
VoigtReuss voigt_reuss_bounds(const Environment& env);

}  // namespace lathom
