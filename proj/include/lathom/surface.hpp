#pragma once

#include <functional>
#include <vector>

#include "lathom/fields.hpp"
#include "lathom/geometry.hpp"

namespace lathom {

// Surface of the continuum box [-R,R]^d tiled by (d-1)-dimensional unit
// faces, with the face assignment used by the Scott-Zhang projection.
//
// Boundary-vertex data is always passed as a flat vector aligned with
// BoxGeometry::boundary(); inner-boundary data aligns with inner_boundary().
class SurfaceMesh {
 public:
  struct Face {
    int axis = 0;    // the frozen coordinate
    int side = +1;   // +-1: x_axis = side*R
    Coord base{};    // lowest corner (base[axis] = side*R)
  };

  SurfaceMesh(const BoxGeometry& g);

  const BoxGeometry& geometry() const { return *geom_; }
  int dim() const { return geom_->dim(); }
  int radius() const { return geom_->radius(); }
  long num_faces() const { return static_cast<long>(2 * dim()) * faces_per_side_; }

  Face face(long id) const;
  long face_id(const Face& f) const;
  // faces incident to a boundary lattice point
  std::vector<long> incident_faces(long boundary_closed_idx) const;
  // deterministic assignment Gamma_x: the smallest incident face id
  long assigned_face(long boundary_closed_idx) const { return gamma_[geom_->boundary_pos(boundary_closed_idx)]; }

  // the 2^{d-1} corners in reference bit order (bit t <-> t-th free axis)
  std::vector<long> face_corners(const Face& f) const;
  // position of a vertex among the corners of a face, -1 if absent
  int corner_position(const Face& f, long closed_idx) const;
  // reference chart: t in [0,1]^{d-1} -> point on the face
  void chart(const Face& f, const double* t, double* point) const;

 private:
  const BoxGeometry* geom_;
  long faces_per_side_;  // (2R)^{d-1}
  std::vector<long> gamma_;  // per boundary-list position
};

// multilinear interpolation T_R of boundary values at a surface point;
// throws if the point is off the surface beyond tol
double interpolate(const SurfaceMesh& mesh, const std::vector<double>& u_boundary,
                   const double* point, double tol = 1e-9);

using SurfaceFn = std::function<double(const double*)>;

struct QuadratureRule {
  enum Kind { Gauss2, Trapezoid } kind = Gauss2;
  int subdivisions = 16;  // per axis, trapezoid only
  static QuadratureRule gauss2() { return {Gauss2, 0}; }
  static QuadratureRule trapezoid(int n) { return {Trapezoid, n}; }
};

// Scott-Zhang projection (Pi f)(x) = integral over Gamma_x of psi_x f.
// The biorthogonal weights psi_x come from the inverse of the reference Gram
// matrix of the multilinear nodal basis; with the Gauss2 rule the quadrature
// is exact for piecewise-multilinear f, which makes Pi an exact left inverse
// of T_R.
std::vector<double> scott_zhang(const SurfaceMesh& mesh, const SurfaceFn& f,
                                const QuadratureRule& rule = QuadratureRule::gauss2());

// Pi applied to the interpolant of boundary data (the Pi T_R path)
std::vector<double> scott_zhang_of_interpolant(const SurfaceMesh& mesh,
                                               const std::vector<double>& u_boundary);

// psi-coefficient row in the nodal basis of the assigned face (4,-2 pattern
// in d=2; tensor products of it in higher dimension)
std::vector<double> psi_coefficients(const SurfaceMesh& mesh, long boundary_closed_idx);

// reference Gram matrix of the multilinear basis on [0,1]^(d-1), row-major
std::vector<double> reference_gram(int d_minus_1);

// continuum surface norms of an interpolant / its tangential gradient,
// approximated with a per-face tensor rule (exact for p = 2 via the Gram)
double surface_Lp_norm(const SurfaceMesh& mesh, const std::vector<double>& u_boundary, double p,
                       int quad_points = 8);
double surface_grad_Lp_norm(const SurfaceMesh& mesh, const std::vector<double>& u_boundary, double p,
                            int quad_points = 8);

// Discrete smoothing on the boundary graph (tangential adjacency, corners
// included): m = ceil((eps R)^2) steps of lazy nearest-neighbour averaging.
// S preserves constants and contracts the sup norm; S* is its dual through
// the corner modifier Z.
class SmoothingStack {
 public:
  SmoothingStack(const BoxGeometry& g, double eps);       // m from eps
  SmoothingStack(const BoxGeometry& g, int explicit_m);   // explicit step count

  const BoxGeometry& geometry() const { return *geom_; }
  int steps() const { return m_; }
  double eps() const { return eps_; }

  // S: boundary -> boundary
  std::vector<double> smooth(const std::vector<double>& u_boundary) const;
  // Z: inner boundary -> boundary (identity on the inner boundary, corners
  // copy their assigned source)
  std::vector<double> modify(const std::vector<double>& u_inner) const;
  // S*: inner boundary -> inner boundary, (S* h)(x) = sum_y h(y) (S Z 1_x)(y)
  std::vector<double> dual_smooth(const std::vector<double>& h_inner) const;

  // transposes, exposed for the duality tests
  std::vector<double> smooth_transpose(const std::vector<double>& u_boundary) const;
  std::vector<double> modify_transpose(const std::vector<double>& u_boundary) const;

  // one lazy averaging step and its transpose
  std::vector<double> step(const std::vector<double>& u) const;
  std::vector<double> step_transpose(const std::vector<double>& u) const;

  // sparse triplets (row, col, weight) of the one-step operator and of Z
  void export_step_triplets(std::vector<std::tuple<long, long, double>>& out) const;
  void export_modifier_triplets(std::vector<std::tuple<long, long, double>>& out) const;

  const std::vector<long>& corner_sources() const { return corner_src_; }

 private:
  void build(const BoxGeometry& g);
  const BoxGeometry* geom_;
  int m_ = 0;
  double eps_ = 0;
  std::vector<std::vector<long>> adj_;  // boundary-list positions
  std::vector<long> corner_src_;        // per boundary pos: inner pos of the source (or -1)
};

}  // namespace lathom
