#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "lathom/elliptic.hpp"
#include "lathom/rng.hpp"

using namespace lathom;

namespace {

VertexField torus_coordinate_sq(const Torus& t, int axis) {
  VertexField u(torus_tag(t.dim(), t.side()), t.num_vertices());
  for (long v = 0; v < t.num_vertices(); ++v) {
    double x = t.coord(v)[axis];
    u[v] = x * x;
  }
  return u;
}

Environment random_env_torus(int d, int L, uint64_t seed) {
  return sample_iid(LawSpec::parse("uniform:0.5,3"), d, L, seed);
}

// dense operator matrix of grad_star . a grad on the torus
Eigen::MatrixXd dense_torus_matrix(const Environment& a) {
  Torus t(a.dim(), a.size());
  long n = t.num_vertices();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (long v = 0; v < n; ++v) {
    for (int i = 0; i < a.dim(); ++i) {
      long vp = t.neighbor(v, i, +1);
      long vm = t.neighbor(v, i, -1);
      A(v, v) += a.edge_t(v, i) + a.edge_t(vm, i);
      A(v, vp) -= a.edge_t(v, i);
      A(v, vm) -= a.edge_t(vm, i);
    }
  }
  return A;
}

}  // namespace

TEST_CASE("apply: homogeneous coefficients reduce to the (negated) laplacian") {
  // u = x_1^2 away from the wrap seam: grad_star.a grad u = -2
  Torus t(2, 9);
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 9);
  VertexField u = torus_coordinate_sq(t, 0);
  VertexField au = apply_torus(env, u);
  // away from the wrap seam the stencil sees the parabola exactly
  for (int x0 : {1, 2, 4, 7}) {
    Coord x = make_coord(2, {x0, 3});
    CHECK(au[t.index(x)] == doctest::Approx(-2.0));
  }
}

TEST_CASE("apply: constants map to zero for any coefficients") {
  Environment env = random_env_torus(2, 6, 4);
  VertexField c(torus_tag(2, 6), 36, 3.25);
  VertexField ac = apply_torus(env, c);
  for (long v = 0; v < ac.size(); ++v) CHECK(ac[v] == 0.0);
}

TEST_CASE("apply matches a dense matrix oracle on a small torus") {
  Environment env = random_env_torus(2, 4, 9);
  Torus t(2, 4);
  Eigen::MatrixXd A = dense_torus_matrix(env);
  VertexField u(torus_tag(2, 4), t.num_vertices());
  // indicator of the origin
  Coord origin{};
  u[t.index(origin)] = 1.0;
  VertexField au = apply_torus(env, u);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(t.num_vertices());
  x(t.index(origin)) = 1.0;
  Eigen::VectorXd ax = A * x;
  for (long v = 0; v < t.num_vertices(); ++v) CHECK(au[v] == doctest::Approx(ax(v)).epsilon(1e-14));
}

TEST_CASE("periodic solve: delta dipole right-hand side") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 8);
  Torus t(2, 8);
  VertexField rhs(torus_tag(2, 8), t.num_vertices());
  Coord origin{};
  Coord e1 = make_coord(2, {1, 0});
  rhs[t.index(origin)] = 1.0;
  rhs[t.index(e1)] = -1.0;
  auto [u, rep] = solve_periodic(env, rhs);
  CHECK(rep.converged);
  CHECK(residual_periodic(env, u, rhs) <= 1e-10);
  CHECK(std::fabs(u.mean()) <= 1e-12);
}

TEST_CASE("periodic solve rejects non-mean-free data") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 4);
  VertexField rhs(torus_tag(2, 4), 16, 1.0);
  CHECK_THROWS(solve_periodic(env, rhs));
}

TEST_CASE("periodic solve matches the dense pseudo-inverse oracle at L <= 6") {
  for (int L : {4, 6}) {
    Environment env = random_env_torus(2, L, 100 + L);
    Torus t(2, L);
    long n = t.num_vertices();
    VertexField rhs(torus_tag(2, L), n);
    RngStream rs(55, "rhs", L);
    for (long v = 0; v < n; ++v) rhs[v] = rs.normal();
    double m = rhs.mean();
    for (long v = 0; v < n; ++v) rhs[v] -= m;

    auto [u, rep] = solve_periodic(env, rhs, {1e-12, 100000, false});
    CHECK(rep.converged);

    // dense least-squares with the mean constraint appended
    Eigen::MatrixXd A = dense_torus_matrix(env);
    Eigen::MatrixXd Aext(n + 1, n);
    Aext.topRows(n) = A;
    for (long v = 0; v < n; ++v) Aext(n, v) = 1.0;
    Eigen::VectorXd bext(n + 1);
    for (long v = 0; v < n; ++v) bext(v) = rhs[v];
    bext(n) = 0.0;
    Eigen::VectorXd x = Aext.colPivHouseholderQr().solve(bext);
    double worst = 0;
    for (long v = 0; v < n; ++v) worst = std::max(worst, std::fabs(u[v] - x(v)));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("dirichlet solve: affine boundary data extends to the affine function") {
  BoxGeometry g(2, 5);
  Environment env = homogeneous(1.0, 2, Topology::BoxT, 5);
  VertexField bdata(box_boundary_tag(2, 5), static_cast<long>(g.boundary().size()));
  for (size_t k = 0; k < g.boundary().size(); ++k) bdata[static_cast<long>(k)] = g.coord(g.boundary()[k])[0];
  auto [u, rep] = solve_dirichlet(env, g, bdata);
  CHECK(rep.converged);
  for (long v = 0; v < g.num_closed(); ++v) CHECK(u[v] == doctest::Approx(g.coord(v)[0]).epsilon(1e-9));
}

TEST_CASE("dirichlet solve matches a dense oracle on random coefficients") {
  BoxGeometry g(2, 4);
  Environment torus_env = random_env_torus(2, 16, 77);
  Environment env = restrict_to_box(torus_env, 4);
  VertexField bdata(box_boundary_tag(2, 4), static_cast<long>(g.boundary().size()));
  RngStream rs(3, "bdata", 0);
  for (long k = 0; k < bdata.size(); ++k) bdata[k] = rs.normal();
  auto [u, rep] = solve_dirichlet(env, g, bdata, {1e-12, 100000, false});
  CHECK(rep.converged);

  const auto& interior = g.interior();
  long n = static_cast<long>(interior.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (long k = 0; k < n; ++k) {
    long v = interior[k];
    for (int i = 0; i < 2; ++i) {
      for (int s : {+1, -1}) {
        long w = g.neighbor(v, i, s);
        double mu = s > 0 ? env.edge_b(v, i) : env.edge_b(w, i);
        A(k, k) += mu;
        if (g.is_interior(w))
          A(k, g.interior_pos(w)) -= mu;
        else
          b(k) += mu * bdata[g.boundary_pos(w)];
      }
    }
  }
  Eigen::VectorXd x = A.ldlt().solve(b);
  double worst = 0;
  for (long k = 0; k < n; ++k) worst = std::max(worst, std::fabs(u[interior[k]] - x(k)));
  CHECK(worst <= 1e-8);
}

TEST_CASE("dirichlet maximum principle on random positive coefficients") {
  BoxGeometry g(2, 6);
  Environment env = restrict_to_box(random_env_torus(2, 16, 12), 6);
  VertexField bdata(box_boundary_tag(2, 6), static_cast<long>(g.boundary().size()));
  RngStream rs(8, "bdata", 0);
  double lo = INFINITY, hi = -INFINITY;
  for (long k = 0; k < bdata.size(); ++k) {
    bdata[k] = rs.uniform(-2, 5);
    lo = std::min(lo, bdata[k]);
    hi = std::max(hi, bdata[k]);
  }
  auto [u, rep] = solve_dirichlet(env, g, bdata);
  CHECK(rep.converged);
  for (long v = 0; v < g.num_closed(); ++v) {
    CHECK(u[v] >= lo - 1e-9);
    CHECK(u[v] <= hi + 1e-9);
  }
}

TEST_CASE("operator symmetry and energy dissipation") {
  Environment env = random_env_torus(2, 6, 21);
  Torus t(2, 6);
  RngStream rs(4, "uv", 0);
  VertexField u(torus_tag(2, 6), t.num_vertices()), v(torus_tag(2, 6), t.num_vertices());
  for (long k = 0; k < t.num_vertices(); ++k) {
    u[k] = rs.normal();
    v[k] = rs.normal();
  }
  VertexField au = apply_torus(env, u), av = apply_torus(env, v);
  double vau = 0, uav = 0, uau = 0;
  for (long k = 0; k < t.num_vertices(); ++k) {
    vau += v[k] * au[k];
    uav += u[k] * av[k];
    uau += u[k] * au[k];
  }
  CHECK(vau == doctest::Approx(uav).epsilon(1e-12));
  // energy: sum u A u = sum_edges mu (grad u)^2 >= 0
  double energy = 0;
  for (long k = 0; k < t.num_vertices(); ++k)
    for (int i = 0; i < 2; ++i) {
      double du = u[t.neighbor(k, i, +1)] - u[k];
      energy += env.edge_t(k, i) * du * du;
    }
  CHECK(uau == doctest::Approx(energy).epsilon(1e-12));
  CHECK(uau >= 0);
}

TEST_CASE("neumann solve: the affine function satisfies all three conditions") {
  BoxGeometry g(2, 5);
  Environment env = homogeneous(1.0, 2, Topology::BoxT, 5);
  // normal flux of u = x_1 and anchor values x_1 on the inner boundary
  std::vector<double> flux(g.inner_boundary().size()), anchor(flux.size());
  for (size_t k = 0; k < flux.size(); ++k) {
    const OrientedEdge& ne = g.normal_edge(static_cast<long>(k));
    Coord xh = g.coord(ne.head), xt = g.coord(ne.tail);
    flux[k] = 1.0 * (xh[0] - xt[0]);
    anchor[k] = xh[0];
  }
  auto [u, rep] = solve_neumann(env, g, flux, anchor);
  CHECK(rep.converged);
  for (long v = 0; v < g.num_closed(); ++v) {
    if (g.region(v) == Region::CornerRegion) continue;  // filled by the corner rule
    CHECK(u[v] == doctest::Approx(g.coord(v)[0]).epsilon(1e-9));
  }
  // prescribed fluxes are reproduced exactly
  for (size_t k = 0; k < flux.size(); ++k) {
    const OrientedEdge& ne = g.normal_edge(static_cast<long>(k));
    CHECK(u[ne.head] - u[ne.tail] == doctest::Approx(flux[k]).epsilon(1e-12));
  }
  // normalization: inner-boundary mismatch sums to zero
  double s = 0;
  for (size_t k = 0; k < flux.size(); ++k) s += anchor[k] - u[g.inner_boundary()[k]];
  CHECK(std::fabs(s) <= 1e-9);
}

TEST_CASE("corner fill rule copies an inner-boundary neighbour") {
  BoxGeometry g(2, 3);
  long corner = g.index(make_coord(2, {3, 3}));
  long src = corner_source(g, corner);
  CHECK(g.is_inner_boundary(src));
  Coord c = g.coord(src);
  // lexicographically least inner-boundary vertex within max-norm 1: (2,3)
  CHECK(c[0] == 2);
  CHECK(c[1] == 3);
}

TEST_CASE("solve report carries a recomputable residual") {
  Environment env = random_env_torus(2, 8, 31);
  Torus t(2, 8);
  VertexField rhs(torus_tag(2, 8), t.num_vertices());
  RngStream rs(6, "r", 0);
  for (long v = 0; v < t.num_vertices(); ++v) rhs[v] = rs.normal();
  for (long v = 0; v < t.num_vertices(); ++v) rhs[v] -= rhs.mean() / 1.0;
  double m = rhs.mean();
  for (long v = 0; v < t.num_vertices(); ++v) rhs[v] -= m;
  auto [u, rep] = solve_periodic(env, rhs);
  CHECK(rep.converged);
  double r = residual_periodic(env, u, rhs);
  CHECK(r <= 1e-10);
  // perturbing the solution raises the residual
  u[0] += 0.1;
  CHECK(residual_periodic(env, u, rhs) > 1e-4);
}

TEST_CASE("neumann solve rejects fluxes with a gross sum mismatch") {
  BoxGeometry g(2, 3);
  Environment env = homogeneous(1.0, 2, Topology::BoxT, 3);
  std::vector<double> flux(g.inner_boundary().size(), 1.0);  // sums to |inner|
  std::vector<double> anchor(g.inner_boundary().size(), 0.0);
  CHECK_THROWS(solve_neumann(env, g, flux, anchor));
}
