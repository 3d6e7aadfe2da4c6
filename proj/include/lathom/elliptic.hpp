#pragma once

#include <utility>

#include "lathom/environment.hpp"
#include "lathom/fields.hpp"
#include "lathom/geometry.hpp"

namespace lathom {

struct SolveOptions {
  double tol = 1e-10;      // relative residual target
  long max_iter = 100000;  // iteration cap
  bool verbose = false;
};

struct SolveReport {
  long iterations = 0;
  double rel_residual = 0;
  double seconds = 0;
  bool converged = false;
};

// The divergence-form operator in its positive form:
//   (A u)(x) = (grad_star . a grad u)(x) = sum_{y~x} mu_xy (u(x) - u(y)).
// A is symmetric positive semidefinite; a-harmonic means A u = 0.

// torus stencil application
VertexField apply_torus(const Environment& a, const VertexField& u);

// value of (A u)(x) at interior vertices of the closed box (u on BoxClosed)
VertexField apply_box_interior(const Environment& a, const BoxGeometry& g, const VertexField& u);

// Periodic problem: A u = rhs on the torus, rhs mean-zero (checked), solution
// returned mean-zero.  Singular constant mode is projected out each iteration.
std::pair<VertexField, SolveReport> solve_periodic(const Environment& a, const VertexField& rhs,
                                                   const SolveOptions& opt = {});

// Dirichlet problem on the box: A u = rhs at interior vertices, u = data on
// the full boundary.  rhs may be null (zero).
std::pair<VertexField, SolveReport> solve_dirichlet(const Environment& a, const BoxGeometry& g,
                                                    const VertexField& boundary_data,
                                                    const SolveOptions& opt = {},
                                                    const VertexField* rhs = nullptr);

// Neumann problem on the box: A u = 0 at interior vertices and the conductance
// flux through each normal edge n_R(y) equals flux[y] (one value per
// inner-boundary vertex, mean removed internally if slightly off).  The
// remaining constant is fixed by sum over the inner boundary of
// (anchor - u) = 0.  Trivial corner-region vertices are filled by copying the
// value of the lexicographically least inner-boundary neighbour.
std::pair<VertexField, SolveReport> solve_neumann(const Environment& a, const BoxGeometry& g,
                                                  const std::vector<double>& flux,
                                                  const std::vector<double>& anchor,
                                                  const SolveOptions& opt = {});

// relative residual diagnostics (recomputable from the returned solution)
double residual_periodic(const Environment& a, const VertexField& u, const VertexField& rhs);
double residual_dirichlet(const Environment& a, const BoxGeometry& g, const VertexField& u,
                          const VertexField& boundary_data, const VertexField* rhs = nullptr);

// lexicographically least inner-boundary vertex within max-norm distance 1,
// the corner fill rule shared by the Neumann solver and the modifier operator
long corner_source(const BoxGeometry& g, long corner_closed_idx);

}  // namespace lathom
