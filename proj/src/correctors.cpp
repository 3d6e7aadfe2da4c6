#include "lathom/correctors.hpp"

#include <cmath>

#include "lathom/rng.hpp"

namespace lathom {

double CorrectorSet::offdiag_max() const {
  double m = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) m = std::max(m, std::fabs(flux_mean[i * d + j]));
  return m;
}

std::vector<VertexField> compute_phi(const Environment& env, const SolveOptions& opt,
                                     std::vector<SolveReport>* reports) {
  if (env.topology() != Topology::TorusT)
    throw std::invalid_argument("compute_phi: correctors live on a periodic environment");
  const int d = env.dim();
  Torus t(d, env.size());
  std::vector<VertexField> phi;
  phi.reserve(d);
  for (int i = 0; i < d; ++i) {
    // rhs = -grad_star.(a e_i):  mu({x,x+e_i}) - mu({x-e_i,x}), mean-free by
    // periodicity
    VertexField rhs(torus_tag(d, env.size()), t.num_vertices());
    for (long v = 0; v < t.num_vertices(); ++v)
      rhs[v] = env.edge_t(v, i) - env.edge_t(t.neighbor(v, i, -1), i);
    auto [u, rep] = solve_periodic(env, rhs, opt);
    if (!rep.converged) throw std::runtime_error("compute_phi: solver did not converge");
    if (reports) reports->push_back(rep);
    phi.push_back(std::move(u));
  }
  return phi;
}

void compute_ahom(const Environment& env, const std::vector<VertexField>& phi,
                  std::vector<double>& ah_diag, std::vector<double>& flux_mean,
                  std::vector<VectorField>& q) {
  const int d = env.dim();
  Torus t(d, env.size());
  const long n = t.num_vertices();
  ah_diag.assign(d, 0.0);
  flux_mean.assign(d * d, 0.0);
  q.clear();
  for (int i = 0; i < d; ++i) {
    VectorField qi(torus_tag(d, env.size()), n, d);
    for (long v = 0; v < n; ++v) {
      for (int j = 0; j < d; ++j) {
        double grad_j = phi[i][t.neighbor(v, j, +1)] - phi[i][v];
        double flux = env.edge_t(v, j) * (grad_j + (i == j ? 1.0 : 0.0));
        qi.at(v, j) = flux;
        flux_mean[i * d + j] += flux;
      }
    }
    for (int j = 0; j < d; ++j) flux_mean[i * d + j] /= static_cast<double>(n);
    ah_diag[i] = flux_mean[i * d + i];
    // center the full flux so every component of q_i is mean-free exactly;
    // the off-diagonal part of the subtracted mean is reported separately
    for (long v = 0; v < n; ++v)
      for (int j = 0; j < d; ++j) qi.at(v, j) -= flux_mean[i * d + j];
    q.push_back(std::move(qi));
  }
}

std::vector<VertexField> compute_sigma(const Environment& env, const std::vector<VectorField>& q,
                                       const SolveOptions& opt, std::vector<SolveReport>* reports) {
  const int d = env.dim();
  Torus t(d, env.size());
  const long n = t.num_vertices();
  Environment unit = homogeneous(1.0, d, Topology::TorusT, env.size());
  std::vector<VertexField> sigma(static_cast<size_t>(d) * d * d,
                                 VertexField(torus_tag(d, env.size()), n));
  auto idx = [d](int i, int j, int k) { return (static_cast<size_t>(i) * d + j) * d + k; };
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = j + 1; k < d; ++k) {
        VertexField rhs(torus_tag(d, env.size()), n);
        for (long v = 0; v < n; ++v) {
          double gj = q[i].at(t.neighbor(v, j, +1), k) - q[i].at(v, k);
          double gk = q[i].at(t.neighbor(v, k, +1), j) - q[i].at(v, j);
          rhs[v] = gj - gk;
        }
        auto [s, rep] = solve_periodic(unit, rhs, opt);
        if (!rep.converged) throw std::runtime_error("compute_sigma: solver did not converge");
        if (reports) reports->push_back(rep);
        // antisymmetry enforced in storage: only j < k is solved
        VertexField neg = s;
        neg *= -1.0;
        sigma[idx(i, j, k)] = std::move(s);
        sigma[idx(i, k, j)] = std::move(neg);
      }
    }
  }
  return sigma;
}

CorrectorSet compute_correctors(const Environment& env, const SolveOptions& opt, bool with_sigma) {
  CorrectorSet cs;
  cs.d = env.dim();
  cs.L = env.size();
  cs.phi = compute_phi(env, opt, &cs.phi_reports);
  compute_ahom(env, cs.phi, cs.ah_diag, cs.flux_mean, cs.q);
  if (with_sigma) cs.sigma = compute_sigma(env, cs.q, opt, &cs.sigma_reports);
  return cs;
}

CorrectorResiduals corrector_residuals(const Environment& env, const CorrectorSet& cs) {
  (void)env;
  const int d = cs.d;
  Torus t(d, cs.L);
  const long n = t.num_vertices();
  CorrectorResiduals res;
  for (int i = 0; i < d; ++i) {
    // uncentered flux RMS sets the scale; it is bounded below by a_h
    double flux_sq = 0;
    for (long v = 0; v < n; ++v)
      for (int j = 0; j < d; ++j) {
        double f = cs.q[i].at(v, j) + cs.flux_mean[i * d + j];
        flux_sq += f * f;
      }
    double scale = std::sqrt(flux_sq / static_cast<double>(n));
    // phi equation: grad_star.(a(e_i + grad phi_i)) = 0 equals grad_star.q_i = 0
    // (centering subtracts a constant vector, which is divergence-free)
    double num = 0;
    for (long v = 0; v < n; ++v) {
      double s = 0;
      for (int j = 0; j < d; ++j) s += cs.q[i].at(t.neighbor(v, j, -1), j) - cs.q[i].at(v, j);
      num += s * s;
    }
    double r = std::sqrt(num / static_cast<double>(n)) / scale;
    res.q_divergence = std::max(res.q_divergence, r);
    res.phi_equation = std::max(res.phi_equation, r);
  }
  if (!cs.sigma.empty()) {
    for (int i = 0; i < d; ++i) {
      double flux_sq = 0;
      for (long v = 0; v < n; ++v)
        for (int j = 0; j < d; ++j) {
          double f = cs.q[i].at(v, j) + cs.flux_mean[i * d + j];
          flux_sq += f * f;
        }
      double scale = std::sqrt(flux_sq / static_cast<double>(n));
      double num = 0;
      for (long v = 0; v < n; ++v) {
        for (int j = 0; j < d; ++j) {
          double div_j = 0;
          for (int k = 0; k < d; ++k)
            div_j += cs.sig(i, j, k)[t.neighbor(v, k, -1)] - cs.sig(i, j, k)[v];
          double r = -div_j - cs.q[i].at(v, j);
          num += r * r;
        }
      }
      res.sigma_potential = std::max(res.sigma_potential, std::sqrt(num / static_cast<double>(n)) / scale);
    }
    // Poisson equation residual on a sample triple per direction
    Environment unit = homogeneous(1.0, d, Topology::TorusT, cs.L);
    for (int i = 0; i < d; ++i) {
      int j = 0, k = 1;
      VertexField rhs(torus_tag(d, cs.L), n);
      for (long v = 0; v < n; ++v) {
        double gj = cs.q[i].at(t.neighbor(v, j, +1), k) - cs.q[i].at(v, k);
        double gk = cs.q[i].at(t.neighbor(v, k, +1), j) - cs.q[i].at(v, j);
        rhs[v] = gj - gk;
      }
      res.sigma_equation = std::max(res.sigma_equation, residual_periodic(unit, cs.sig(i, j, k), rhs));
    }
  }
  return res;
}

VertexField corrected_coordinate(const Environment& env, const CorrectorSet& cs, int i) {
  Torus t(env.dim(), env.size());
  VertexField u = cs.phi[i];
  for (long v = 0; v < t.num_vertices(); ++v) u[v] += t.coord(v)[i];
  return u;
}

double avnorm_window(const VertexField& u, int R, double p) {
  if (u.tag().kind != DomainTag::TorusVerts)
    throw std::invalid_argument("avnorm_window: expected a torus field");
  int d = u.tag().d, L = u.tag().size;
  if (2 * R > L) throw std::invalid_argument("avnorm_window: window exceeds the torus");
  Torus t(d, L);
  Window w = Window::centered_box(d, R - 1);  // D_R = {|x|_inf < R} = [-(R-1), R-1]^d
  std::vector<double> vals;
  vals.reserve(w.size());
  for (long k = 0; k < w.size(); ++k) vals.push_back(u[t.index(w.coord(k))]);
  return norm_avg(vals, p);
}

std::vector<SublinearityRow> sublinearity_scan(const LawSpec& law, int d, const std::vector<int>& Ls,
                                               double p, double q, int seeds, uint64_t master_seed,
                                               const SolveOptions& opt) {
  double ep = std::isinf(p) ? 2.0 : 2.0 * p / (p - 1.0);
  double eq = std::isinf(q) ? 2.0 : 2.0 * q / (q - 1.0);
  std::vector<SublinearityRow> rows;
  for (int L : Ls) {
    for (int s = 0; s < seeds; ++s) {
      uint64_t seed = RngStream(master_seed, "sublin-seed", static_cast<uint64_t>(s)).next_u64();
      Environment env = sample_environment(law, d, L, seed);
      CorrectorSet cs = compute_correctors(env, opt, /*with_sigma=*/true);
      int R = L / 2;
      SublinearityRow row;
      row.L = L;
      row.seed = seed;
      for (int i = 0; i < d; ++i)
        row.phi_ratio = std::max(row.phi_ratio, avnorm_window(cs.phi[i], R, ep) / R);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = j + 1; k < d; ++k)
            row.sigma_ratio = std::max(row.sigma_ratio, avnorm_window(cs.sig(i, j, k), R, eq) / R);
      rows.push_back(row);
    }
  }
  return rows;
}

VoigtReuss voigt_reuss_bounds(const Environment& env) {
  VoigtReuss vr;
  double s = 0, h = 0;
  long cnt = 0;
  for (double mu : env.values()) {
    if (std::isnan(mu)) continue;
    s += mu;
    h += 1.0 / mu;
    ++cnt;
  }
  vr.arithmetic = s / static_cast<double>(cnt);
  vr.harmonic = static_cast<double>(cnt) / h;
  return vr;
}

}  // namespace lathom
