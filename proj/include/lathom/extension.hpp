#pragma once

#include <vector>

#include "lathom/elliptic.hpp"
#include "lathom/environment.hpp"
#include "lathom/surface.hpp"

namespace lathom {

// exponent conventions: r/(r+1) = r/(r-1) = 1 when r = infinity
double expo_2r_over_rp1(double r);
double expo_2r_over_rm1(double r);

// theta(r,s) and alpha(r): the boundary-smoothing exponents
double theta_exponent(int d, double r, double s);
double alpha_exponent(int d, double r);

// box environment with axis-dependent constant conductances (the homogenized
// environment omega_h built from a diagonal a_h)
Environment axis_homogeneous(const std::vector<double>& ah_diag, int d, int R);

struct ExtensionProblem {
  const Environment* omega = nullptr;  // box environment on [-R,R]^d edges
  const BoxGeometry* geom = nullptr;
  std::vector<double> ah_diag;
  double p = 4, q = 4;
  double eps = 0.2;
  int m = -1;  // explicit smoothing steps; overrides eps when >= 0
  SolveOptions solve;

  SmoothingStack make_stack() const {
    return m >= 0 ? SmoothingStack(*geom, m) : SmoothingStack(*geom, eps);
  }
};

// Dirichlet extension: a_h-harmonic inside, trace S(u|boundary) on the
// boundary (exact by construction)
VertexField dirichlet_extend(const ExtensionProblem& pb, const VertexField& u, SolveReport* rep = nullptr);

// Neumann extension: a_h-harmonic inside, normal fluxes S*((omega grad u)_n)
// minus their mean, constant fixed by a zero inner-boundary mismatch sum
VertexField neumann_extend(const ExtensionProblem& pb, const VertexField& u, SolveReport* rep = nullptr);

// boundary term B(omega, R, u, v)
double boundary_term(const Environment& omega, const BoxGeometry& g, const std::vector<double>& ah_diag,
                     const VertexField& u, const VertexField& v);

// independent route to B(omega,R,u,Nu) through Z and S(Z .): an exact
// algebraic consequence of the Neumann conditions
double boundary_term_neumann_dual_route(const ExtensionProblem& pb, const VertexField& u,
                                        const VertexField& v);

// Lambda = avnorm(omega, p, E_R) + avnorm(omega^{-1}, q, E_R)
double lambda_moment(const Environment& omega, const BoxGeometry& g, double p, double q);

// Lambda_bar(u): max of the four boundary-edge averaged norms
double lambda_bar(const Environment& omega, const BoxGeometry& g, const VertexField& u, double p, double q);

// averaged weighted squared-gradient energy over E_R, with environment or
// diagonal homogenized weights; annulus variants restrict to E_R \ E_{R-rho}
double energy_env(const Environment& omega, const BoxGeometry& g, const VertexField& v, bool inverse = false);
double energy_diag(const std::vector<double>& ah_diag, const BoxGeometry& g, const VertexField& v);
double annulus_energy_env(const Environment& omega, const BoxGeometry& g, const VertexField& v, int rho,
                          bool inverse = false);

struct DiagnosticBundle {
  double p = 0, q = 0, eps = 0;
  int R = 0;
  char branch = 'D';  // 'D' (q >= p) or 'N' (p >= q)
  double lambda = 0;
  double lambda_bar = 0;
  double theta_pq = 0, theta_pp = 0, theta_qq = 0;
  double alpha_p = 0, alpha_q = 0;
  double boundary_B = 0;
  double boundary_ratio = 0;      // |B| / (R eps^theta(p,q) Lambda_bar)
  double energy = 0;              // avnorm(omega_h (grad v)^2, 1, E_R)
  // energy / Lambda_bar^2: the energy is quadratic in u while Lambda_bar is
  // a max of first-power norms, so the square is the scale-consistent
  // normalizer (the boundary estimates use Lambda_bar^(1/2) against
  // first-power norms)
  double energy_ratio = 0;
  double annulus = 0;             // weighted annulus energy (both signs)
  double annulus_ratio = 0;       // against the (rho/R, eps) rate
  int rho = 0;
  double reg_transfer_tan_over_nor = 0;  // measured (y01c)-type ratios
  double reg_transfer_nor_over_tan = 0;
  double dual_route_residual = -1;  // Neumann branch only
  double smooth_dual_gain = 0;    // measured |S* h| / |h| in the 2p/(p+1) norm
};

DiagnosticBundle diagnostics(const ExtensionProblem& pb, const VertexField& u, char which = 'A',
                             int rho = -1);

// the argmin rule replacing the paper's existential "suitable radius": among
// radii in [R, 2R] covered by u's box, the one minimizing Lambda_bar
int suitable_radius(const Environment& torus_env, const VertexField& u_big, int R, double p, double q);

}  // namespace lathom
