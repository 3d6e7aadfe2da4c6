#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lathom/excess.hpp"
#include "lathom/extension.hpp"
#include "lathom/rng.hpp"

using namespace lathom;

namespace {

VertexField coordinate_on_box(const BoxGeometry& g, int axis) {
  VertexField u(box_closed_tag(g.dim(), g.radius()), g.num_closed());
  for (long v = 0; v < g.num_closed(); ++v) u[v] = g.coord(v)[axis];
  return u;
}

}  // namespace

TEST_CASE("cutoff profile hits the stated plateau, support, and slope") {
  BoxGeometry g(2, 16);
  CutoffProfile c = cutoff(g, 4);
  for (long v = 0; v < g.num_closed(); ++v) {
    int m = g.linf(v);
    if (m <= 16 - 2 * 4) CHECK(c.eta[v] == 1.0);
    if (m >= 16 - 4) CHECK(c.eta[v] == 0.0);
    if (m == 16 - 6) CHECK(c.eta[v] == doctest::Approx(0.5));  // midpoint of the ramp
  }
  // |grad eta| <= 1/rho on every closed-box edge
  for (long v = 0; v < g.num_closed(); ++v)
    for (int i = 0; i < 2; ++i) {
      long w = g.neighbor(v, i, +1);
      if (w < 0) continue;
      CHECK(std::fabs(c.eta[w] - c.eta[v]) <= 1.0 / 4 + 1e-15);
    }
  CHECK_THROWS(cutoff(g, 0));
  CHECK_THROWS(cutoff(g, 5));  // rho > R/4
}

TEST_CASE("homogenization error: pointwise formula and trivial cases") {
  BoxGeometry g(2, 6);
  VertexField u = coordinate_on_box(g, 0), v = coordinate_on_box(g, 0);
  VertexField eta0(box_closed_tag(2, 6), g.num_closed(), 0.0);
  VertexField w = homogenization_error(g, u, v, {}, eta0);
  for (long k = 0; k < g.num_closed(); ++k) CHECK(w[k] == 0.0);

  // phi = 0 reduces to u - v regardless of eta
  CutoffProfile c = cutoff(g, 1);
  VertexField v2 = coordinate_on_box(g, 1);
  std::vector<VertexField> zero_phi(2, VertexField(box_closed_tag(2, 6), g.num_closed(), 0.0));
  VertexField w2 = homogenization_error(g, u, v2, zero_phi, c.eta);
  for (long k = 0; k < g.num_closed(); ++k) CHECK(w2[k] == u[k] - v2[k]);

  // random instance against an independent pointwise evaluation
  RngStream rs(5, "fields", 0);
  VertexField ru(box_closed_tag(2, 6), g.num_closed()), rv(box_closed_tag(2, 6), g.num_closed());
  std::vector<VertexField> phi(2, VertexField(box_closed_tag(2, 6), g.num_closed()));
  for (long k = 0; k < g.num_closed(); ++k) {
    ru[k] = rs.normal();
    rv[k] = rs.normal();
    phi[0][k] = rs.normal();
    phi[1][k] = rs.normal();
  }
  VertexField w3 = homogenization_error(g, ru, rv, phi, c.eta);
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    double corr = 0;
    if (c.eta[k] != 0) {
      for (int i = 0; i < 2; ++i) {
        Coord xp = x;
        xp[i] += 1;
        corr += phi[i][k] * (rv[g.index(xp)] - rv[k]);
      }
      corr *= c.eta[k];
    }
    CHECK(w3[k] == doctest::Approx(ru[k] - rv[k] - corr).epsilon(1e-14));
  }
}

TEST_CASE("energy identity: exact algebra for harmonic polynomials, R = 6") {
  // omega = omega_h = 1, phi = sigma = 0, u = x_1, v = x_1 x_2 (both discrete
  // harmonic for the unweighted laplacian); pure floating-point algebra
  BoxGeometry g(2, 6);
  Environment omega = homogeneous(1.0, 2, Topology::BoxT, 6);
  VertexField u = coordinate_on_box(g, 0);
  VertexField v(box_closed_tag(2, 6), g.num_closed());
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    v[k] = static_cast<double>(x[0]) * x[1];
  }
  VertexField eta0(box_closed_tag(2, 6), g.num_closed(), 0.0);
  std::vector<double> ah{1.0, 1.0};
  std::vector<double> flux_mean{1.0, 0.0, 0.0, 1.0};
  EnergyIdentityResult res = energy_identity_check(omega, g, ah, flux_mean, u, v, {}, {}, eta0);
  CHECK(res.residual <= 1e-12);
  CHECK(res.hyp_u <= 1e-14);
  CHECK(res.hyp_v <= 1e-14);
  CHECK(res.hyp_eta_support == 0.0);
  CHECK(res.lhs > 0);
}

TEST_CASE("energy identity: trivial all-zero case") {
  BoxGeometry g(2, 6);
  Environment omega = homogeneous(2.0, 2, Topology::BoxT, 6);
  VertexField u = coordinate_on_box(g, 0);
  VertexField eta0(box_closed_tag(2, 6), g.num_closed(), 0.0);
  std::vector<double> ah{2.0, 2.0};
  std::vector<double> flux_mean{2.0, 0.0, 0.0, 2.0};
  EnergyIdentityResult res = energy_identity_check(omega, g, ah, flux_mean, u, u, {}, {}, eta0);
  CHECK(res.lhs == 0.0);
  CHECK(res.rhs_total == 0.0);
  CHECK(res.residual == 0.0);
}

TEST_CASE("energy identity: layered environment with true correctors, R = 16") {
  const int R = 16, rho = 4, L = 2 * R + 8;
  Environment torus = sample_layered(1.0, 4.0, 2, L);
  SolveOptions tight{1e-11, 200000, false};
  CorrectorSet cs = compute_correctors(torus, tight);
  BoxGeometry g(2, R);
  Environment omega = restrict_to_box(torus, R);

  VertexField u = random_harmonic(omega, g, 7, tight);
  Environment omega_h = axis_homogeneous(cs.ah_diag, 2, R);
  VertexField v = random_harmonic(omega_h, g, 7, tight);  // same boundary data

  CutoffProfile c = cutoff(g, rho);
  EnergyIdentityResult res = energy_identity_check(omega, g, cs, u, v, c.eta);
  CAPTURE(res.hyp_u);
  CAPTURE(res.hyp_v);
  CAPTURE(res.hyp_phi);
  CAPTURE(res.hyp_sigma);
  CHECK(res.hyp_eta_support == 0.0);
  CHECK(res.hyp_sigma_antisym <= 1e-9);
  CHECK(res.residual <= 1e-8);
}

TEST_CASE("energy identity: random i.i.d. environment (all corrector terms active)") {
  const int R = 8, rho = 2, L = 2 * R + 8;
  Environment torus = sample_iid(LawSpec::parse("uniform:0.5,2"), 2, L, 31);
  SolveOptions tight{1e-12, 200000, false};
  CorrectorSet cs = compute_correctors(torus, tight);
  BoxGeometry g(2, R);
  Environment omega = restrict_to_box(torus, R);
  VertexField u = random_harmonic(omega, g, 3, tight);
  Environment omega_h = axis_homogeneous(cs.ah_diag, 2, R);
  VertexField v = random_harmonic(omega_h, g, 3, tight);
  CutoffProfile c = cutoff(g, rho);
  EnergyIdentityResult res = energy_identity_check(omega, g, cs, u, v, c.eta);
  // the off-diagonal averaged flux is carried explicitly, so the identity is
  // exact up to the solver residuals even off the reflection-symmetric case
  CAPTURE(cs.offdiag_max());
  CAPTURE(res.hyp_sigma);
  CHECK(res.residual <= 1e-9);
}

TEST_CASE("excess: exact representation gives zero and recovers the tilt") {
  BoxGeometry g(2, 5);
  Environment omega = homogeneous(1.0, 2, Topology::BoxT, 5);
  VertexField u(box_closed_tag(2, 5), g.num_closed());
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    u[k] = 3.0 * x[0] - 1.0 * x[1];
  }
  ExcessRecord rec = excess(omega, g, u, {});
  CHECK(rec.value <= 1e-13);
  CHECK(rec.xi[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rec.xi[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rec.cond < 10);
}

TEST_CASE("excess: grid-search oracle for u = x_1 x_2 on D_4") {
  BoxGeometry g(2, 4);
  Environment omega = homogeneous(1.0, 2, Topology::BoxT, 4);
  VertexField u(box_closed_tag(2, 4), g.num_closed());
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    u[k] = static_cast<double>(x[0]) * x[1];
  }
  ExcessRecord rec = excess(omega, g, u, {});

  // brute force over a fine tilt grid
  double best = INFINITY;
  for (double xi0 = -1.0; xi0 <= 1.0; xi0 += 0.01) {
    for (double xi1 = -1.0; xi1 <= 1.0; xi1 += 0.01) {
      double s = 0;
      for (long x : g.interior()) {
        for (int j = 0; j < 2; ++j) {
          long xp = g.neighbor(x, j, +1);
          double du = u[xp] - u[x] - (j == 0 ? xi0 : xi1);
          s += du * du;
        }
      }
      best = std::min(best, s / static_cast<double>(g.interior().size()));
    }
  }
  CHECK(rec.value <= best + 1e-12);
  CHECK(rec.value >= best - 0.01);  // grid resolution
}

TEST_CASE("excess: corrected coordinate of the layered environment is exactly representable") {
  const int R = 8, L = 2 * R + 8;
  Environment torus = sample_layered(1.0, 4.0, 2, L);
  CorrectorSet cs = compute_correctors(torus, {}, false);
  BoxGeometry g(2, R);
  Environment omega = restrict_to_box(torus, R);
  Torus t(2, L);
  VertexField u(box_closed_tag(2, R), g.num_closed());
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    u[k] = x[0] + cs.phi[0][t.index(x)];
  }
  std::vector<VertexField> phiW;
  for (int i = 0; i < 2; ++i) phiW.push_back(sample_on_box(cs.phi[i], g));
  ExcessRecord rec = excess(omega, g, u, phiW);
  CHECK(rec.value <= 1e-12);
  CHECK(rec.xi[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::fabs(rec.xi[1]) <= 1e-6);
}

TEST_CASE("excess minimizer optimality and tilt invariance") {
  const int R = 8, L = 2 * R + 8;
  Environment torus = sample_iid(LawSpec::parse("uniform:0.5,2"), 2, L, 77);
  CorrectorSet cs = compute_correctors(torus, {}, false);
  BoxGeometry g(2, R);
  Environment omega = restrict_to_box(torus, R);
  VertexField u = random_harmonic(omega, g, 13);
  std::vector<VertexField> phiW;
  for (int i = 0; i < 2; ++i) phiW.push_back(sample_on_box(cs.phi[i], g));
  ExcessRecord rec = excess(omega, g, u, phiW);

  // gradient of the quadratic at the reported minimizer vanishes
  for (int i = 0; i < 2; ++i) {
    double grad_i = 0;
    for (long x : g.interior()) {
      for (int j = 0; j < 2; ++j) {
        long xp = g.neighbor(x, j, +1);
        double gi = (i == j ? 1.0 : 0.0) + phiW[i][xp] - phiW[i][x];
        double resid = u[xp] - u[x];
        for (int k = 0; k < 2; ++k) {
          double gk = (k == j ? 1.0 : 0.0) + phiW[k][xp] - phiW[k][x];
          resid -= rec.xi[k] * gk;
        }
        grad_i += -2.0 * omega.edge_b(x, j) * gi * resid;
      }
    }
    grad_i /= static_cast<double>(g.interior().size());
    CHECK(std::fabs(grad_i) <= 1e-10 * std::max(1.0, rec.value));
  }

  // adding an exact corrected affine function shifts xi and keeps the value
  VertexField u2 = u;
  Torus t(2, L);
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    u2[k] += 0.7 * (x[0] + cs.phi[0][t.index(x)]);
  }
  ExcessRecord rec2 = excess(omega, g, u2, phiW);
  CHECK(rec2.value == doctest::Approx(rec.value).epsilon(1e-8));
  CHECK(rec2.xi[0] == doctest::Approx(rec.xi[0] + 0.7).epsilon(1e-8));
}

TEST_CASE("excess decay experiment: homogeneous environment decays and r = R gives ratio 1") {
  LawSpec law = LawSpec::parse("constant:1");
  DecayTable table = excess_decay_experiment(law, 2, 16, {4, 8, 16}, 4, 4, 100.0, 3, 5);
  REQUIRE(table.median_ratio.size() == 3);
  CHECK(table.median_ratio[2] == doctest::Approx(1.0));
  CHECK(table.median_ratio[0] < 0.6);  // classical excess decay at r = R/4
  CHECK(table.alpha_hat > 0);
  for (const auto& row : table.rows) CHECK(row.moment_ok);
}

TEST_CASE("liouville: homogeneous environment has rank d+1 and decaying distances") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 40);
  LiouvilleReport rep = liouville_dimension(env, 16, {4, 8}, 4, 3);
  REQUIRE(rep.gram_eigenvalues.size() == 3);
  CHECK(rep.gram_eigenvalues.front() > 0.1);  // comfortably nonsingular
  int better = 0;
  for (const auto& dist : rep.distances)
    if (dist[0] <= dist[1]) ++better;
  CHECK(better >= 3);  // smaller window sits closer to the corrected affine span
}

TEST_CASE("liouville: corrected affine inputs have zero distance") {
  const int L = 40, R = 16;
  Environment torus = sample_layered(1.0, 4.0, 2, L);
  std::vector<VertexField> phi = compute_phi(torus);
  BoxGeometry g(2, R);
  Environment omega = restrict_to_box(torus, R);
  Torus t(2, L);
  VertexField u(box_closed_tag(2, R), g.num_closed());
  for (long k = 0; k < g.num_closed(); ++k) {
    Coord x = g.coord(k);
    u[k] = 2.0 * (x[0] + phi[0][t.index(x)]) - 0.5 * (x[1] + phi[1][t.index(x)]) + 3.0;
  }
  for (int r : {4, 8}) {
    BoxGeometry gr(2, r);
    Environment env_r = restrict_to_box(torus, r);
    VertexField ur(box_closed_tag(2, r), gr.num_closed());
    for (long v = 0; v < gr.num_closed(); ++v) ur[v] = u[g.index(gr.coord(v))];
    std::vector<VertexField> phiWr;
    for (int i = 0; i < 2; ++i) phiWr.push_back(sample_on_box(phi[i], gr));
    double e = dirichlet_energy(env_r, gr, ur);
    double exc = excess(env_r, gr, ur, phiWr).value;
    CHECK(exc / e <= 1e-10);
  }
}

TEST_CASE("a-priori energy bound: three summands dominate the energy of w, seed-stably") {
  const int R = 16, rho = 4, L = 2 * R + 8;
  SolveOptions tol{1e-10, 200000, false};
  std::vector<double> ratios;
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    Environment torus = sample_iid(LawSpec::parse("lognormal:0,0.5"), 2, L, seed);
    CorrectorSet cs = compute_correctors(torus, tol);
    BoxGeometry g(2, R);
    Environment omega = restrict_to_box(torus, R);
    VertexField u = random_harmonic(omega, g, seed + 100, tol);
    ExtensionProblem pb;
    pb.omega = &omega;
    pb.geom = &g;
    pb.ah_diag = cs.ah_diag;
    pb.p = 4;
    pb.q = 4;
    pb.eps = 0.25;
    pb.solve = tol;
    VertexField v = dirichlet_extend(pb, u);
    CutoffProfile c = cutoff(g, rho);
    EnergyBoundReport rep = energy_bound_report(omega, g, cs, u, v, c.eta, rho, 4, 4, 0.25);
    CHECK(rep.energy_w > 0);
    CHECK(std::isfinite(rep.ratio()));
    ratios.push_back(rep.ratio());
  }
  // soft check: the unknown constant is seed-stable and not enormous
  double lo = ratios[0], hi = ratios[0];
  for (double r : ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi > 0);
  CHECK(hi / lo < 50.0);
  CHECK(hi < 100.0);
}
