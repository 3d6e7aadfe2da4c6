#include "lathom/extension.hpp"

#include <cmath>

namespace lathom {

double expo_2r_over_rp1(double r) { return std::isinf(r) ? 2.0 : 2.0 * r / (r + 1.0); }
double expo_2r_over_rm1(double r) { return std::isinf(r) ? 2.0 : 2.0 * r / (r - 1.0); }

double theta_exponent(int d, double r, double s) {
  if (d > 2) {
    double ir = std::isinf(r) ? 0.0 : 1.0 / (2.0 * r);
    double is = std::isinf(s) ? 0.0 : 1.0 / (2.0 * s);
    return 1.0 - (d - 1) * (ir + is);
  }
  // d = 2: (s-1) r / (s (r+1)) with the infinity conventions
  double a = std::isinf(s) ? 1.0 : (s - 1.0) / s;
  double b = std::isinf(r) ? 1.0 : r / (r + 1.0);
  return a * b;
}

double alpha_exponent(int d, double r) {
  if (d == 2) return 1.0;
  double t = (std::isinf(r) ? 0.5 : (r - 1.0) / (2.0 * r)) + 1.0 / (d - 1);
  return 1.0 / t;
}

Environment axis_homogeneous(const std::vector<double>& ah_diag, int d, int R) {
  if (static_cast<int>(ah_diag.size()) != d)
    throw std::invalid_argument("axis_homogeneous: need one diagonal entry per axis");
  for (double a : ah_diag)
    if (!(a > 0)) throw std::invalid_argument("axis_homogeneous: diagonal entries must be positive");
  LawSpec law{"constant", {ah_diag[0]}};
  Environment env(d, Topology::BoxT, R, law, 0);
  BoxGeometry g(d, R);
  for (long v = 0; v < g.num_closed(); ++v) {
    Coord x = g.coord(v);
    for (int i = 0; i < d; ++i)
      if (x[i] < R) env.edge_b(v, i) = ah_diag[i];
  }
  return env;
}

namespace {

double mu_of_edge(const Environment& a, const OrientedEdge& e) {
  return e.dir > 0 ? a.edge_b(e.tail, e.axis) : a.edge_b(e.head, e.axis);
}

std::vector<double> boundary_trace(const BoxGeometry& g, const VertexField& u) {
  std::vector<double> tr(g.boundary().size());
  for (size_t k = 0; k < tr.size(); ++k) tr[k] = u[g.boundary()[k]];
  return tr;
}

std::vector<double> inner_trace(const BoxGeometry& g, const VertexField& u) {
  std::vector<double> tr(g.inner_boundary().size());
  for (size_t k = 0; k < tr.size(); ++k) tr[k] = u[g.inner_boundary()[k]];
  return tr;
}

// conductance fluxes through the normal edges, one per inner-boundary vertex
std::vector<double> normal_flux(const Environment& omega, const BoxGeometry& g, const VertexField& u) {
  std::vector<double> f(g.inner_boundary().size());
  for (size_t k = 0; k < f.size(); ++k) {
    const OrientedEdge& ne = g.normal_edge(static_cast<long>(k));
    f[k] = mu_of_edge(omega, ne) * (u[ne.head] - u[ne.tail]);
  }
  return f;
}

}  // namespace

VertexField dirichlet_extend(const ExtensionProblem& pb, const VertexField& u, SolveReport* rep) {
  const BoxGeometry& g = *pb.geom;
  SmoothingStack stack = pb.make_stack();
  std::vector<double> su = stack.smooth(boundary_trace(g, u));
  VertexField bdata(box_boundary_tag(g.dim(), g.radius()), static_cast<long>(su.size()));
  for (size_t k = 0; k < su.size(); ++k) bdata[static_cast<long>(k)] = su[k];
  Environment ah_env = axis_homogeneous(pb.ah_diag, g.dim(), g.radius());
  auto [v, r] = solve_dirichlet(ah_env, g, bdata, pb.solve);
  if (rep) *rep = r;
  return std::move(v);
}

VertexField neumann_extend(const ExtensionProblem& pb, const VertexField& u, SolveReport* rep) {
  const BoxGeometry& g = *pb.geom;
  SmoothingStack stack = pb.make_stack();
  std::vector<double> h = normal_flux(*pb.omega, g, u);
  std::vector<double> sh = stack.dual_smooth(h);
  // the prescribed flux is the dual-smoothed data minus its mean
  double mean = 0;
  for (double f : sh) mean += f;
  mean /= static_cast<double>(sh.size());
  for (double& f : sh) f -= mean;
  Environment ah_env = axis_homogeneous(pb.ah_diag, g.dim(), g.radius());
  auto [v, r] = solve_neumann(ah_env, g, sh, inner_trace(g, u), pb.solve);
  if (rep) *rep = r;
  return std::move(v);
}

double boundary_term(const Environment& omega, const BoxGeometry& g, const std::vector<double>& ah_diag,
                     const VertexField& u, const VertexField& v) {
  double s = 0;
  for (size_t k = 0; k < g.inner_boundary().size(); ++k) {
    long y = g.inner_boundary()[k];
    const OrientedEdge& ne = g.normal_edge(static_cast<long>(k));
    double flux_u = mu_of_edge(omega, ne) * (u[ne.head] - u[ne.tail]);
    double flux_v = ah_diag[ne.axis] * (v[ne.head] - v[ne.tail]);
    s += (u[y] - v[y]) * (flux_u - flux_v);
  }
  return s / static_cast<double>(g.inner_boundary().size());
}

double boundary_term_neumann_dual_route(const ExtensionProblem& pb, const VertexField& u,
                                        const VertexField& v) {
  const BoxGeometry& g = *pb.geom;
  SmoothingStack stack = pb.make_stack();
  std::vector<double> diff = inner_trace(g, u);
  std::vector<double> vi = inner_trace(g, v);
  for (size_t k = 0; k < diff.size(); ++k) diff[k] -= vi[k];
  std::vector<double> szd = stack.smooth(stack.modify(diff));
  std::vector<double> h = normal_flux(*pb.omega, g, u);
  double s = 0;
  for (size_t k = 0; k < diff.size(); ++k) {
    long y = g.inner_boundary()[k];
    double sz_at_y = szd[g.boundary_pos(y)];
    s += (diff[k] - sz_at_y) * h[k];
  }
  return s / static_cast<double>(diff.size());
}

double lambda_moment(const Environment& omega, const BoxGeometry& g, double p, double q) {
  return avnorm_mu_box(omega, g, p, false) + avnorm_mu_box(omega, g, q, true);
}

double lambda_bar(const Environment& omega, const BoxGeometry& g, const VertexField& u, double p, double q) {
  double ep = expo_2r_over_rp1(p), eq = expo_2r_over_rp1(q);
  std::vector<double> wgrad_tan, wgrad_nor, grad_tan, grad_nor;
  for (const auto& e : g.edges_tan()) {
    double gval = u[e.head] - u[e.tail];
    wgrad_tan.push_back(mu_of_edge(omega, e) * gval);
    grad_tan.push_back(gval);
  }
  for (const auto& e : g.edges_nor()) {
    double gval = u[e.head] - u[e.tail];
    wgrad_nor.push_back(mu_of_edge(omega, e) * gval);
    grad_nor.push_back(gval);
  }
  double a = norm_avg(wgrad_tan, ep);
  double b = norm_avg(wgrad_nor, ep);
  double c = norm_avg(grad_tan, eq);
  double d = norm_avg(grad_nor, eq);
  return std::max(std::max(a, b), std::max(c, d));
}

namespace {

template <typename Weight>
double energy_impl(const BoxGeometry& g, const VertexField& v, Weight w, int rho) {
  const int R = g.radius();
  double s = 0;
  for (const auto& e : g.edges_mid()) {
    if (rho > 0) {
      // skip edges of E_{R-rho}: tail of the positive orientation must sit in
      // the inner window
      long tail = e.dir > 0 ? e.tail : e.head;
      Coord x = g.coord(tail);
      bool in_small = x[e.axis] >= -(R - rho) && x[e.axis] <= (R - rho) - 1;
      for (int j = 0; j < g.dim() && in_small; ++j)
        if (j != e.axis && (x[j] <= -(R - rho) || x[j] >= (R - rho))) in_small = false;
      if (in_small) continue;
    }
    double gval = v[e.head] - v[e.tail];
    s += w(e) * gval * gval;
  }
  return s / static_cast<double>(g.edges_mid().size());
}

}  // namespace

double energy_env(const Environment& omega, const BoxGeometry& g, const VertexField& v, bool inverse) {
  return energy_impl(g, v, [&](const OrientedEdge& e) {
    double mu = mu_of_edge(omega, e);
    return inverse ? 1.0 / mu : mu;
  }, 0);
}

double energy_diag(const std::vector<double>& ah_diag, const BoxGeometry& g, const VertexField& v) {
  return energy_impl(g, v, [&](const OrientedEdge& e) { return ah_diag[e.axis]; }, 0);
}

double annulus_energy_env(const Environment& omega, const BoxGeometry& g, const VertexField& v, int rho,
                          bool inverse) {
  if (rho < 1 || rho > g.radius() / 2)
    throw std::invalid_argument("annulus_energy: rho must lie in [1, R/2]");
  return energy_impl(g, v, [&](const OrientedEdge& e) {
    double mu = mu_of_edge(omega, e);
    return inverse ? 1.0 / mu : mu;
  }, rho);
}

DiagnosticBundle diagnostics(const ExtensionProblem& pb, const VertexField& u, char which, int rho) {
  const BoxGeometry& g = *pb.geom;
  const int d = g.dim(), R = g.radius();
  DiagnosticBundle b;
  b.p = pb.p;
  b.q = pb.q;
  b.R = R;
  b.rho = rho > 0 ? rho : std::max(1, R / 8);
  b.theta_pq = theta_exponent(d, pb.p, pb.q);
  b.theta_pp = theta_exponent(d, pb.p, pb.p);
  b.theta_qq = theta_exponent(d, pb.q, pb.q);
  b.alpha_p = alpha_exponent(d, pb.p);
  b.alpha_q = alpha_exponent(d, pb.q);
  b.lambda = lambda_moment(*pb.omega, g, pb.p, pb.q);
  b.lambda_bar = lambda_bar(*pb.omega, g, u, pb.p, pb.q);
  SmoothingStack stack = pb.make_stack();
  b.eps = stack.eps();

  if (which == 'A') b.branch = (pb.q >= pb.p) ? 'D' : 'N';
  else b.branch = which;

  VertexField v = (b.branch == 'D') ? dirichlet_extend(pb, u) : neumann_extend(pb, u);
  b.boundary_B = boundary_term(*pb.omega, g, pb.ah_diag, u, v);
  double rate = static_cast<double>(R) * std::pow(b.eps, b.theta_pq) * b.lambda_bar;
  b.boundary_ratio = rate > 0 ? std::fabs(b.boundary_B) / rate : 0.0;

  b.energy = energy_diag(pb.ah_diag, g, v);
  b.energy_ratio = b.lambda_bar > 0 ? b.energy / (b.lambda_bar * b.lambda_bar) : 0.0;

  double ann = annulus_energy_env(*pb.omega, g, v, b.rho, false) +
               annulus_energy_env(*pb.omega, g, v, b.rho, true);
  b.annulus = ann;
  double pm1 = std::isinf(pb.p) ? 0.5 : (pb.p - 1.0) / (2.0 * pb.p);
  double qm1 = std::isinf(pb.q) ? 0.5 : (pb.q - 1.0) / (2.0 * pb.q);
  double pp1 = std::isinf(pb.p) ? 1.0 : (pb.p + 1.0) / pb.p;
  double qp1 = std::isinf(pb.q) ? 1.0 : (pb.q + 1.0) / pb.q;
  double ann_rate = std::pow(static_cast<double>(b.rho) / R, std::min(pm1, qm1)) *
                    std::pow(b.eps, -(d - 1) * std::min(pp1, qp1)) * b.lambda * b.lambda_bar;
  b.annulus_ratio = ann_rate > 0 ? ann / ann_rate : 0.0;

  // measured tangential/normal gradient comparability of the extension
  double s_exp = expo_2r_over_rp1(b.branch == 'D' ? pb.q : pb.p);
  std::vector<double> gt, gn;
  for (const auto& e : g.edges_tan()) gt.push_back(v[e.head] - v[e.tail]);
  for (const auto& e : g.edges_nor()) gn.push_back(v[e.head] - v[e.tail]);
  double nt = norm_avg(gt, s_exp), nn = norm_avg(gn, s_exp);
  b.reg_transfer_tan_over_nor = nn > 0 ? nt / nn : 0.0;
  b.reg_transfer_nor_over_tan = nt > 0 ? nn / nt : 0.0;

  if (b.branch == 'N') {
    double b2 = boundary_term_neumann_dual_route(pb, u, v);
    double scale = std::fabs(b.boundary_B) + std::fabs(b2) + 1e-30;
    b.dual_route_residual = std::fabs(b.boundary_B - b2) / scale;
  }

  // measured dual-smoother stability (the c^3-type constant)
  {
    std::vector<double> h = normal_flux(*pb.omega, g, u);
    std::vector<double> sh = stack.dual_smooth(h);
    double ep = expo_2r_over_rp1(pb.p);
    double den = norm_avg(h, ep);
    b.smooth_dual_gain = den > 0 ? norm_avg(sh, ep) / den : 0.0;
  }
  return b;
}

int suitable_radius(const Environment& torus_env, const VertexField& u_big, int R, double p, double q) {
  if (u_big.tag().kind != DomainTag::BoxClosed)
    throw std::invalid_argument("suitable_radius: expected a closed-box field");
  int Rbig = u_big.tag().size;
  int Rmax = std::min(2 * R, Rbig);
  BoxGeometry gbig(u_big.tag().d, Rbig);
  int best = R;
  double best_val = INFINITY;
  for (int Rp = R; Rp <= Rmax; ++Rp) {
    BoxGeometry g(u_big.tag().d, Rp);
    Environment env = restrict_to_box(torus_env, Rp);
    VertexField u(box_closed_tag(g.dim(), Rp), g.num_closed());
    for (long v = 0; v < g.num_closed(); ++v) u[v] = u_big[gbig.index(g.coord(v))];
    double val = lambda_bar(env, g, u, p, q);
    if (val < best_val) {
      best_val = val;
      best = Rp;
    }
  }
  return best;
}

}  // namespace lathom
