#include "lathom/surface.hpp"

#include <algorithm>
#include <cmath>

#include "lathom/elliptic.hpp"

namespace lathom {

namespace {

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

SurfaceMesh::SurfaceMesh(const BoxGeometry& g) : geom_(&g) {
  faces_per_side_ = ipow(2L * g.radius(), g.dim() - 1);
  gamma_.resize(g.boundary().size());
  for (size_t k = 0; k < g.boundary().size(); ++k) {
    auto faces = incident_faces(g.boundary()[k]);
    gamma_[k] = *std::min_element(faces.begin(), faces.end());
  }
}

SurfaceMesh::Face SurfaceMesh::face(long id) const {
  const int d = dim(), R = radius();
  Face f;
  long plane = id / faces_per_side_;
  long off = id % faces_per_side_;
  f.axis = static_cast<int>(plane / 2);
  f.side = (plane % 2 == 0) ? -1 : +1;
  f.base[f.axis] = f.side * R;
  for (int k = 0; k < d; ++k) {
    if (k == f.axis) continue;
    f.base[k] = static_cast<int>(off % (2 * R)) - R;
    off /= 2 * R;
  }
  return f;
}

long SurfaceMesh::face_id(const Face& f) const {
  const int d = dim(), R = radius();
  long plane = 2L * f.axis + (f.side > 0 ? 1 : 0);
  long off = 0, stride = 1;
  for (int k = 0; k < d; ++k) {
    if (k == f.axis) continue;
    off += stride * (f.base[k] + R);
    stride *= 2 * R;
  }
  return plane * faces_per_side_ + off;
}

std::vector<long> SurfaceMesh::incident_faces(long v) const {
  const int d = dim(), R = radius();
  Coord x = geom_->coord(v);
  std::vector<long> out;
  for (int j = 0; j < d; ++j) {
    if (x[j] != R && x[j] != -R) continue;
    // bases range over {x_k - 1, x_k} per free axis, clamped to [-R, R-1]
    std::vector<int> free_axes;
    for (int k = 0; k < d; ++k)
      if (k != j) free_axes.push_back(k);
    int nf = d - 1;
    for (long bits = 0; bits < (1L << nf); ++bits) {
      Face f;
      f.axis = j;
      f.side = x[j] > 0 ? +1 : -1;
      f.base[j] = x[j];
      bool ok = true;
      for (int t = 0; t < nf; ++t) {
        int k = free_axes[t];
        int b = x[k] - ((bits >> t) & 1);
        if (b < -R || b > R - 1) {
          ok = false;
          break;
        }
        f.base[k] = b;
      }
      if (ok) out.push_back(face_id(f));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<long> SurfaceMesh::face_corners(const Face& f) const {
  const int d = dim();
  std::vector<int> free_axes;
  for (int k = 0; k < d; ++k)
    if (k != f.axis) free_axes.push_back(k);
  int nf = d - 1;
  std::vector<long> corners;
  corners.reserve(1L << nf);
  for (long bits = 0; bits < (1L << nf); ++bits) {
    Coord c = f.base;
    for (int t = 0; t < nf; ++t) c[free_axes[t]] += static_cast<int>((bits >> t) & 1);
    corners.push_back(geom_->index(c));
  }
  return corners;
}

int SurfaceMesh::corner_position(const Face& f, long closed_idx) const {
  auto corners = face_corners(f);
  for (size_t i = 0; i < corners.size(); ++i)
    if (corners[i] == closed_idx) return static_cast<int>(i);
  return -1;
}

void SurfaceMesh::chart(const Face& f, const double* t, double* point) const {
  const int d = dim();
  int slot = 0;
  for (int k = 0; k < d; ++k) {
    if (k == f.axis)
      point[k] = static_cast<double>(f.base[k]);
    else
      point[k] = static_cast<double>(f.base[k]) + t[slot++];
  }
}

double interpolate(const SurfaceMesh& mesh, const std::vector<double>& u_boundary,
                   const double* point, double tol) {
  const BoxGeometry& g = mesh.geometry();
  const int d = g.dim(), R = g.radius();
  if (u_boundary.size() != g.boundary().size())
    throw std::invalid_argument("interpolate: boundary data size mismatch");
  double m = 0;
  for (int k = 0; k < d; ++k) m = std::max(m, std::fabs(point[k]));
  if (std::fabs(m - R) > tol * std::max(1.0, static_cast<double>(R)))
    throw std::invalid_argument("interpolate: point is off the box surface");

  int axis = -1;
  for (int k = 0; k < d; ++k)
    if (std::fabs(std::fabs(point[k]) - R) <= tol * std::max(1.0, static_cast<double>(R))) {
      axis = k;
      break;
    }
  SurfaceMesh::Face f;
  f.axis = axis;
  f.side = point[axis] > 0 ? +1 : -1;
  f.base[axis] = f.side * R;
  double tloc[kMaxDim];
  int slot = 0;
  for (int k = 0; k < d; ++k) {
    if (k == axis) continue;
    double c = std::floor(point[k]);
    c = std::min(std::max(c, static_cast<double>(-R)), static_cast<double>(R - 1));
    f.base[k] = static_cast<int>(c);
    tloc[slot++] = point[k] - c;
  }
  auto corners = mesh.face_corners(f);
  int nf = d - 1;
  double val = 0;
  for (long bits = 0; bits < (1L << nf); ++bits) {
    double w = 1;
    for (int t = 0; t < nf; ++t) w *= ((bits >> t) & 1) ? tloc[t] : (1.0 - tloc[t]);
    val += w * u_boundary[g.boundary_pos(corners[bits])];
  }
  return val;
}

std::vector<double> reference_gram(int n) {
  // tensor product of [[1/3,1/6],[1/6,1/3]]
  long sz = 1L << n;
  std::vector<double> G(sz * sz);
  for (long a = 0; a < sz; ++a)
    for (long b = 0; b < sz; ++b) {
      double v = 1;
      for (int t = 0; t < n; ++t) v *= (((a >> t) & 1) == ((b >> t) & 1)) ? (1.0 / 3.0) : (1.0 / 6.0);
      G[a * sz + b] = v;
    }
  return G;
}

namespace {

// row of the inverse reference Gram (tensor product of [[4,-2],[-2,4]])
double gram_inv_entry(int n, long a, long b) {
  double v = 1;
  for (int t = 0; t < n; ++t) v *= (((a >> t) & 1) == ((b >> t) & 1)) ? 4.0 : -2.0;
  return v;
}

double nodal_value(int n, long bits, const double* t) {
  double w = 1;
  for (int s = 0; s < n; ++s) w *= ((bits >> s) & 1) ? t[s] : (1.0 - t[s]);
  return w;
}

struct TensorQuad {
  std::vector<double> nodes, weights;  // per axis
};

TensorQuad quad_1d(const QuadratureRule& rule) {
  TensorQuad q;
  if (rule.kind == QuadratureRule::Gauss2) {
    double h = 0.5 / std::sqrt(3.0);
    q.nodes = {0.5 - h, 0.5 + h};
    q.weights = {0.5, 0.5};
  } else {
    int n = std::max(1, rule.subdivisions);
    double h = 1.0 / n;
    for (int i = 0; i <= n; ++i) {
      q.nodes.push_back(i * h);
      q.weights.push_back((i == 0 || i == n) ? h / 2 : h);
    }
  }
  return q;
}

// integral over one face of psi_x * f
double face_integral_psi(const SurfaceMesh& mesh, const SurfaceMesh::Face& f, int corner_pos,
                         const SurfaceFn& fn, const TensorQuad& q) {
  const int nf = mesh.dim() - 1;
  long nq = 1;
  for (int t = 0; t < nf; ++t) nq *= static_cast<long>(q.nodes.size());
  long sz = 1L << nf;
  double acc = 0;
  std::vector<long> digits(nf, 0);
  double tloc[kMaxDim], point[kMaxDim];
  for (long it = 0; it < nq; ++it) {
    double w = 1;
    for (int t = 0; t < nf; ++t) {
      tloc[t] = q.nodes[digits[t]];
      w *= q.weights[digits[t]];
    }
    double psi = 0;
    for (long b = 0; b < sz; ++b)
      psi += gram_inv_entry(nf, corner_pos, b) * nodal_value(nf, b, tloc);
    mesh.chart(f, tloc, point);
    acc += w * psi * fn(point);
    for (int t = 0; t < nf; ++t) {
      if (++digits[t] < static_cast<long>(q.nodes.size())) break;
      digits[t] = 0;
    }
  }
  return acc;
}

}  // namespace

std::vector<double> psi_coefficients(const SurfaceMesh& mesh, long boundary_closed_idx) {
  const int nf = mesh.dim() - 1;
  SurfaceMesh::Face f = mesh.face(mesh.assigned_face(boundary_closed_idx));
  int pos = mesh.corner_position(f, boundary_closed_idx);
  if (pos < 0) throw std::logic_error("psi_coefficients: vertex not a corner of its face");
  std::vector<double> c(1L << nf);
  for (long b = 0; b < (1L << nf); ++b) c[b] = gram_inv_entry(nf, pos, b);
  return c;
}

std::vector<double> scott_zhang(const SurfaceMesh& mesh, const SurfaceFn& f,
                                const QuadratureRule& rule) {
  const BoxGeometry& g = mesh.geometry();
  TensorQuad q = quad_1d(rule);
  std::vector<double> out(g.boundary().size());
  for (size_t k = 0; k < g.boundary().size(); ++k) {
    long v = g.boundary()[k];
    SurfaceMesh::Face face = mesh.face(mesh.assigned_face(v));
    int pos = mesh.corner_position(face, v);
    out[k] = face_integral_psi(mesh, face, pos, f, q);
  }
  return out;
}

std::vector<double> scott_zhang_of_interpolant(const SurfaceMesh& mesh,
                                               const std::vector<double>& u_boundary) {
  SurfaceFn f = [&](const double* p) { return interpolate(mesh, u_boundary, p); };
  return scott_zhang(mesh, f, QuadratureRule::gauss2());
}

double surface_Lp_norm(const SurfaceMesh& mesh, const std::vector<double>& u_boundary, double p,
                       int quad_points) {
  const BoxGeometry& g = mesh.geometry();
  const int nf = mesh.dim() - 1;
  TensorQuad q = quad_1d(QuadratureRule::trapezoid(quad_points));
  bool sup = std::isinf(p);
  double acc = 0;
  std::vector<long> digits(nf, 0);
  double tloc[kMaxDim];
  for (long fid = 0; fid < mesh.num_faces(); ++fid) {
    SurfaceMesh::Face face = mesh.face(fid);
    auto corners = mesh.face_corners(face);
    long nq = 1;
    for (int t = 0; t < nf; ++t) nq *= static_cast<long>(q.nodes.size());
    std::fill(digits.begin(), digits.end(), 0);
    for (long it = 0; it < nq; ++it) {
      double w = 1;
      for (int t = 0; t < nf; ++t) {
        tloc[t] = q.nodes[digits[t]];
        w *= q.weights[digits[t]];
      }
      double val = 0;
      for (long b = 0; b < (1L << nf); ++b)
        val += nodal_value(nf, b, tloc) * u_boundary[g.boundary_pos(corners[b])];
      if (sup)
        acc = std::max(acc, std::fabs(val));
      else
        acc += w * std::pow(std::fabs(val), p);
      for (int t = 0; t < nf; ++t) {
        if (++digits[t] < static_cast<long>(q.nodes.size())) break;
        digits[t] = 0;
      }
    }
  }
  return sup ? acc : std::pow(acc, 1.0 / p);
}

double surface_grad_Lp_norm(const SurfaceMesh& mesh, const std::vector<double>& u_boundary, double p,
                            int quad_points) {
  const BoxGeometry& g = mesh.geometry();
  const int nf = mesh.dim() - 1;
  TensorQuad q = quad_1d(QuadratureRule::trapezoid(quad_points));
  bool sup = std::isinf(p);
  double acc = 0;
  std::vector<long> digits(nf, 0);
  double tloc[kMaxDim];
  for (long fid = 0; fid < mesh.num_faces(); ++fid) {
    SurfaceMesh::Face face = mesh.face(fid);
    auto corners = mesh.face_corners(face);
    long nq = 1;
    for (int t = 0; t < nf; ++t) nq *= static_cast<long>(q.nodes.size());
    std::fill(digits.begin(), digits.end(), 0);
    for (long it = 0; it < nq; ++it) {
      double w = 1;
      for (int t = 0; t < nf; ++t) {
        tloc[t] = q.nodes[digits[t]];
        w *= q.weights[digits[t]];
      }
      // tangential gradient of the multilinear blend
      double g2 = 0;
      for (int s = 0; s < nf; ++s) {
        double der = 0;
        for (long b = 0; b < (1L << nf); ++b) {
          double dw = 1;
          for (int t = 0; t < nf; ++t) {
            if (t == s)
              dw *= ((b >> t) & 1) ? 1.0 : -1.0;
            else
              dw *= ((b >> t) & 1) ? tloc[t] : (1.0 - tloc[t]);
          }
          der += dw * u_boundary[g.boundary_pos(corners[b])];
        }
        g2 += der * der;
      }
      double val = std::sqrt(g2);
      if (sup)
        acc = std::max(acc, val);
      else
        acc += w * std::pow(val, p);
      for (int t = 0; t < nf; ++t) {
        if (++digits[t] < static_cast<long>(q.nodes.size())) break;
        digits[t] = 0;
      }
    }
  }
  return sup ? acc : std::pow(acc, 1.0 / p);
}

// ---- smoothing -------------------------------------------------------------

SmoothingStack::SmoothingStack(const BoxGeometry& g, double eps) : geom_(&g), eps_(eps) {
  if (!(eps > 0) || !(eps < 1)) throw std::invalid_argument("SmoothingStack: eps must lie in (0,1)");
  double s = eps * g.radius();
  m_ = static_cast<int>(std::ceil(s * s));
  build(g);
}

SmoothingStack::SmoothingStack(const BoxGeometry& g, int explicit_m) : geom_(&g), m_(explicit_m) {
  if (explicit_m < 0) throw std::invalid_argument("SmoothingStack: step count must be >= 0");
  eps_ = g.radius() > 0 ? std::sqrt(static_cast<double>(explicit_m)) / g.radius() : 0.0;
  build(g);
}

void SmoothingStack::build(const BoxGeometry& g) {
  const auto& bnd = g.boundary();
  adj_.resize(bnd.size());
  for (size_t k = 0; k < bnd.size(); ++k) {
    long v = bnd[k];
    for (int i = 0; i < g.dim(); ++i) {
      for (int s : {-1, +1}) {
        long w = g.neighbor(v, i, s);
        if (w >= 0 && g.is_boundary(w)) adj_[k].push_back(g.boundary_pos(w));
      }
    }
  }
  corner_src_.assign(bnd.size(), -1);
  for (size_t k = 0; k < bnd.size(); ++k) {
    long v = bnd[k];
    if (g.region(v) == Region::CornerRegion)
      corner_src_[k] = g.inner_boundary_pos(corner_source(g, v));
  }
}

std::vector<double> SmoothingStack::step(const std::vector<double>& u) const {
  std::vector<double> out(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    double nb = 0;
    for (long j : adj_[k]) nb += u[j];
    out[k] = 0.5 * u[k] + 0.5 * nb / static_cast<double>(adj_[k].size());
  }
  return out;
}

std::vector<double> SmoothingStack::step_transpose(const std::vector<double>& u) const {
  std::vector<double> out(u.size());
  for (size_t k = 0; k < u.size(); ++k) out[k] = 0.5 * u[k];
  for (size_t k = 0; k < u.size(); ++k) {
    double w = 0.5 * u[k] / static_cast<double>(adj_[k].size());
    for (long j : adj_[k]) out[j] += w;
  }
  return out;
}

std::vector<double> SmoothingStack::smooth(const std::vector<double>& u_boundary) const {
  if (u_boundary.size() != geom_->boundary().size())
    throw std::invalid_argument("smooth: boundary data size mismatch");
  std::vector<double> v = u_boundary;
  for (int s = 0; s < m_; ++s) v = step(v);
  return v;
}

std::vector<double> SmoothingStack::smooth_transpose(const std::vector<double>& u_boundary) const {
  std::vector<double> v = u_boundary;
  for (int s = 0; s < m_; ++s) v = step_transpose(v);
  return v;
}

std::vector<double> SmoothingStack::modify(const std::vector<double>& u_inner) const {
  const BoxGeometry& g = *geom_;
  if (u_inner.size() != g.inner_boundary().size())
    throw std::invalid_argument("modify: inner-boundary data size mismatch");
  std::vector<double> out(g.boundary().size());
  for (size_t k = 0; k < out.size(); ++k) {
    long v = g.boundary()[k];
    if (g.region(v) == Region::InnerBoundary)
      out[k] = u_inner[g.inner_boundary_pos(v)];
    else
      out[k] = u_inner[corner_src_[k]];
  }
  return out;
}

std::vector<double> SmoothingStack::modify_transpose(const std::vector<double>& u_boundary) const {
  const BoxGeometry& g = *geom_;
  std::vector<double> out(g.inner_boundary().size(), 0.0);
  for (size_t k = 0; k < u_boundary.size(); ++k) {
    long v = g.boundary()[k];
    if (g.region(v) == Region::InnerBoundary)
      out[g.inner_boundary_pos(v)] += u_boundary[k];
    else
      out[corner_src_[k]] += u_boundary[k];
  }
  return out;
}

std::vector<double> SmoothingStack::dual_smooth(const std::vector<double>& h_inner) const {
  const BoxGeometry& g = *geom_;
  if (h_inner.size() != g.inner_boundary().size())
    throw std::invalid_argument("dual_smooth: inner-boundary data size mismatch");
  // S* = (S Z)^T on the inner boundary: extend by zero, run the transposed
  // walk, gather through Z^T
  std::vector<double> ext(g.boundary().size(), 0.0);
  for (size_t k = 0; k < g.inner_boundary().size(); ++k)
    ext[g.boundary_pos(g.inner_boundary()[k])] = h_inner[k];
  return modify_transpose(smooth_transpose(ext));
}

void SmoothingStack::export_step_triplets(std::vector<std::tuple<long, long, double>>& out) const {
  out.clear();
  for (size_t k = 0; k < adj_.size(); ++k) {
    out.emplace_back(k, k, 0.5);
    double w = 0.5 / static_cast<double>(adj_[k].size());
    for (long j : adj_[k]) out.emplace_back(static_cast<long>(k), j, w);
  }
}

void SmoothingStack::export_modifier_triplets(std::vector<std::tuple<long, long, double>>& out) const {
  const BoxGeometry& g = *geom_;
  out.clear();
  for (size_t k = 0; k < g.boundary().size(); ++k) {
    long v = g.boundary()[k];
    long src = (g.region(v) == Region::InnerBoundary) ? g.inner_boundary_pos(v) : corner_src_[k];
    out.emplace_back(static_cast<long>(k), src, 1.0);
  }
}

}  // namespace lathom
