#include "lathom/elliptic.hpp"

#include <chrono>
#include <cmath>
#include <functional>

namespace lathom {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void remove_mean(std::vector<double>& a) {
  double m = 0;
  for (double x : a) m += x;
  m /= static_cast<double>(a.size());
  for (double& x : a) x -= m;
}

// Preconditioned CG for an SPD (or SPSD with projected constant mode)
// operator given as a callback.  Deterministic: plain serial reductions.
SolveReport pcg(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_op,
                const std::vector<double>& diag, const std::vector<double>& b, std::vector<double>& x,
                bool project_constants, const SolveOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const size_t n = b.size();
  x.assign(n, 0.0);
  std::vector<double> r = b, z(n), p(n), q(n);
  if (project_constants) remove_mean(r);
  double bnorm = nrm2(r);
  SolveReport rep;
  if (bnorm == 0.0) {
    rep.converged = true;
    return rep;
  }
  for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  if (project_constants) remove_mean(z);
  p = z;
  double rz = dot(r, z);
  long it = 0;
  double rel = 1.0;
  for (; it < opt.max_iter; ++it) {
    apply_op(p, q);
    double pq = dot(p, q);
    if (pq <= 0) break;  // lost positivity: bail out with current iterate
    double alpha = rz / pq;
    for (size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
    if (project_constants) remove_mean(r);
    rel = nrm2(r) / bnorm;
    if (rel <= opt.tol) {
      ++it;
      break;
    }
    for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    if (project_constants) remove_mean(z);
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (project_constants) remove_mean(x);
  rep.iterations = it;
  rep.rel_residual = rel;
  rep.converged = rel <= opt.tol;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double mu_of_edge(const Environment& a, const OrientedEdge& e) {
  return e.dir > 0 ? a.edge_b(e.tail, e.axis) : a.edge_b(e.head, e.axis);
}

}  // namespace

VertexField apply_torus(const Environment& a, const VertexField& u) {
  if (u.tag() != torus_tag(a.dim(), a.size()))
    throw std::invalid_argument("apply_torus: field/environment domain mismatch");
  Torus t(a.dim(), a.size());
  VertexField out(u.tag(), t.num_vertices());
  for (long v = 0; v < t.num_vertices(); ++v) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) {
      long vp = t.neighbor(v, i, +1);
      long vm = t.neighbor(v, i, -1);
      s += a.edge_t(v, i) * (u[v] - u[vp]);
      s += a.edge_t(vm, i) * (u[v] - u[vm]);
    }
    out[v] = s;
  }
  return out;
}

VertexField apply_box_interior(const Environment& a, const BoxGeometry& g, const VertexField& u) {
  if (u.tag() != box_closed_tag(g.dim(), g.radius()))
    throw std::invalid_argument("apply_box_interior: expected a closed-box field");
  VertexField out(box_interior_tag(g.dim(), g.radius()), static_cast<long>(g.interior().size()));
  for (size_t k = 0; k < g.interior().size(); ++k) {
    long v = g.interior()[k];
    double s = 0;
    for (int i = 0; i < g.dim(); ++i) {
      long vp = g.neighbor(v, i, +1);
      long vm = g.neighbor(v, i, -1);
      s += a.edge_b(v, i) * (u[v] - u[vp]);
      s += a.edge_b(vm, i) * (u[v] - u[vm]);
    }
    out[static_cast<long>(k)] = s;
  }
  return out;
}

std::pair<VertexField, SolveReport> solve_periodic(const Environment& a, const VertexField& rhs,
                                                   const SolveOptions& opt) {
  Torus t(a.dim(), a.size());
  if (rhs.tag() != torus_tag(a.dim(), a.size()))
    throw std::invalid_argument("solve_periodic: rhs domain mismatch");
  // compatibility: the constant mode must be absent from the data
  double scale = norm_plain(rhs.data(), INFINITY);
  double mean_abs = std::fabs(rhs.mean()) * static_cast<double>(t.num_vertices());
  if (scale > 0 && mean_abs > 1e-8 * scale * static_cast<double>(t.num_vertices()))
    throw std::invalid_argument("solve_periodic: right-hand side is not mean-free");

  std::vector<double> diag(t.num_vertices());
  for (long v = 0; v < t.num_vertices(); ++v) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) s += a.edge_t(v, i) + a.edge_t(t.neighbor(v, i, -1), i);
    diag[v] = s;
  }
  auto apply_op = [&](const std::vector<double>& xv, std::vector<double>& yv) {
    for (long v = 0; v < t.num_vertices(); ++v) {
      double s = 0;
      for (int i = 0; i < a.dim(); ++i) {
        long vp = t.neighbor(v, i, +1);
        long vm = t.neighbor(v, i, -1);
        s += a.edge_t(v, i) * (xv[v] - xv[vp]);
        s += a.edge_t(vm, i) * (xv[v] - xv[vm]);
      }
      yv[v] = s;
    }
  };
  VertexField u(rhs.tag(), t.num_vertices());
  SolveReport rep = pcg(apply_op, diag, rhs.data(), u.data(), /*project_constants=*/true, opt);
  return {std::move(u), rep};
}

std::pair<VertexField, SolveReport> solve_dirichlet(const Environment& a, const BoxGeometry& g,
                                                    const VertexField& boundary_data,
                                                    const SolveOptions& opt, const VertexField* rhs) {
  if (boundary_data.tag() != box_boundary_tag(g.dim(), g.radius()))
    throw std::invalid_argument("solve_dirichlet: boundary data domain mismatch");
  const auto& interior = g.interior();
  const long ni = static_cast<long>(interior.size());

  std::vector<double> diag(ni);
  std::vector<double> b(ni, 0.0);
  for (long k = 0; k < ni; ++k) {
    long v = interior[k];
    double s = 0;
    for (int i = 0; i < g.dim(); ++i) {
      long vp = g.neighbor(v, i, +1);
      long vm = g.neighbor(v, i, -1);
      double mup = a.edge_b(v, i);
      double mum = a.edge_b(vm, i);
      s += mup + mum;
      if (!g.is_interior(vp)) b[k] += mup * boundary_data[g.boundary_pos(vp)];
      if (!g.is_interior(vm)) b[k] += mum * boundary_data[g.boundary_pos(vm)];
    }
    diag[k] = s;
  }
  if (rhs) {
    if (rhs->tag() != box_interior_tag(g.dim(), g.radius()))
      throw std::invalid_argument("solve_dirichlet: rhs domain mismatch");
    for (long k = 0; k < ni; ++k) b[k] += (*rhs)[k];
  }

  auto apply_op = [&](const std::vector<double>& xv, std::vector<double>& yv) {
    for (long k = 0; k < ni; ++k) {
      long v = interior[k];
      double s = 0;
      for (int i = 0; i < g.dim(); ++i) {
        long vp = g.neighbor(v, i, +1);
        long vm = g.neighbor(v, i, -1);
        double xp = g.is_interior(vp) ? xv[g.interior_pos(vp)] : 0.0;
        double xm = g.is_interior(vm) ? xv[g.interior_pos(vm)] : 0.0;
        s += a.edge_b(v, i) * (xv[k] - xp);
        s += a.edge_b(vm, i) * (xv[k] - xm);
      }
      yv[k] = s;
    }
  };

  std::vector<double> xi;
  SolveReport rep = pcg(apply_op, diag, b, xi, /*project_constants=*/false, opt);

  VertexField u(box_closed_tag(g.dim(), g.radius()), g.num_closed());
  for (long k = 0; k < ni; ++k) u[interior[k]] = xi[k];
  for (long bv : g.boundary()) u[bv] = boundary_data[g.boundary_pos(bv)];
  return {std::move(u), rep};
}

long corner_source(const BoxGeometry& g, long corner_closed_idx) {
  Coord x = g.coord(corner_closed_idx);
  const int d = g.dim();
  long best = -1;
  Coord best_c{};
  Coord y{};
  // scan the max-norm-1 ball in lexicographic coordinate order
  std::array<int, kMaxDim> off{};
  for (int i = 0; i < d; ++i) off[i] = -1;
  while (true) {
    for (int i = 0; i < d; ++i) y[i] = x[i] + off[i];
    if (g.contains(y)) {
      long idx = g.index(y);
      if (g.is_inner_boundary(idx)) {
        bool better = best < 0;
        if (!better) {
          for (int i = 0; i < d; ++i) {
            if (y[i] != best_c[i]) {
              better = y[i] < best_c[i];
              break;
            }
          }
        }
        if (better) {
          best = idx;
          best_c = y;
        }
      }
    }
    int i = d - 1;
    while (i >= 0 && off[i] == 1) {
      off[i] = -1;
      --i;
    }
    if (i < 0) break;
    ++off[i];
  }
  if (best < 0) throw std::logic_error("corner_source: no inner-boundary neighbour found");
  return best;
}

std::pair<VertexField, SolveReport> solve_neumann(const Environment& a, const BoxGeometry& g,
                                                  const std::vector<double>& flux,
                                                  const std::vector<double>& anchor,
                                                  const SolveOptions& opt) {
  const auto& inner = g.inner_boundary();
  if (flux.size() != inner.size() || anchor.size() != inner.size())
    throw std::invalid_argument("solve_neumann: flux/anchor must have one value per inner-boundary vertex");

  // compatibility: the prescribed fluxes must sum to zero
  double total = 0, scale = 0;
  for (double f : flux) {
    total += f;
    scale += std::fabs(f);
  }
  if (std::fabs(total) > 1e-8 * std::max(scale, 1.0))
    throw std::invalid_argument("solve_neumann: prescribed fluxes do not sum to zero");
  // remove the rounding-level remainder so the reduced system is exactly compatible
  std::vector<double> gflux = flux;
  remove_mean(gflux);

  const auto& interior = g.interior();
  const long ni = static_cast<long>(interior.size());

  // interior system: only interior-interior edges (the free Laplacian),
  // fluxes through normal edges enter the right-hand side
  std::vector<double> diag(ni, 0.0), b(ni, 0.0);
  for (long k = 0; k < ni; ++k) {
    long v = interior[k];
    double s = 0;
    for (int i = 0; i < g.dim(); ++i) {
      long vp = g.neighbor(v, i, +1);
      long vm = g.neighbor(v, i, -1);
      if (g.is_interior(vp)) s += a.edge_b(v, i);
      if (g.is_interior(vm)) s += a.edge_b(vm, i);
    }
    diag[k] = s;
  }
  for (size_t yk = 0; yk < inner.size(); ++yk) {
    const OrientedEdge& ne = g.normal_edge(static_cast<long>(yk));
    b[g.interior_pos(ne.tail)] += gflux[yk];
  }

  auto apply_op = [&](const std::vector<double>& xv, std::vector<double>& yv) {
    for (long k = 0; k < ni; ++k) {
      long v = interior[k];
      double s = 0;
      for (int i = 0; i < g.dim(); ++i) {
        long vp = g.neighbor(v, i, +1);
        long vm = g.neighbor(v, i, -1);
        if (g.is_interior(vp)) s += a.edge_b(v, i) * (xv[k] - xv[g.interior_pos(vp)]);
        if (g.is_interior(vm)) s += a.edge_b(vm, i) * (xv[k] - xv[g.interior_pos(vm)]);
      }
      yv[k] = s;
    }
  };

  std::vector<double> xi;
  SolveReport rep = pcg(apply_op, diag, b, xi, /*project_constants=*/true, opt);

  VertexField u(box_closed_tag(g.dim(), g.radius()), g.num_closed());
  for (long k = 0; k < ni; ++k) u[interior[k]] = xi[k];
  // boundary values from the prescribed fluxes (exact by construction)
  for (size_t yk = 0; yk < inner.size(); ++yk) {
    const OrientedEdge& ne = g.normal_edge(static_cast<long>(yk));
    double mu = mu_of_edge(a, ne);
    u[ne.head] = u[ne.tail] + gflux[yk] / mu;
  }
  // pin the constant: sum over the inner boundary of (anchor - u) = 0
  double c = 0;
  for (size_t yk = 0; yk < inner.size(); ++yk) c += anchor[yk] - u[inner[yk]];
  c /= static_cast<double>(inner.size());
  for (long v = 0; v < g.num_closed(); ++v) u[v] += c;
  // corner-region vertices copy their assigned inner-boundary neighbour
  for (long bv : g.boundary())
    if (g.region(bv) == Region::CornerRegion) u[bv] = u[corner_source(g, bv)];
  return {std::move(u), rep};
}

double residual_periodic(const Environment& a, const VertexField& u, const VertexField& rhs) {
  VertexField au = apply_torus(a, u);
  double num = 0, den = 0;
  for (long v = 0; v < u.size(); ++v) {
    double r = au[v] - rhs[v];
    num += r * r;
    den += rhs[v] * rhs[v];
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

double residual_dirichlet(const Environment& a, const BoxGeometry& g, const VertexField& u,
                          const VertexField& boundary_data, const VertexField* rhs) {
  VertexField au = apply_box_interior(a, g, u);
  double num = 0, den = 0;
  for (long k = 0; k < au.size(); ++k) {
    double want = rhs ? (*rhs)[k] : 0.0;
    double r = au[k] - want;
    num += r * r;
    den += want * want;
  }
  // trace mismatch counts as constraint violation
  double trace = 0;
  for (long bv : g.boundary()) {
    double r = u[bv] - boundary_data[g.boundary_pos(bv)];
    trace += r * r;
  }
  double unorm = norm_plain(u.data(), 2.0);
  double scale = std::max(den > 0 ? std::sqrt(den) : 0.0, unorm);
  if (scale == 0) scale = 1.0;
  return (std::sqrt(num) + std::sqrt(trace)) / scale;
}

}  // namespace lathom
