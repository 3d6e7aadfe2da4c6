#include "lathom/environment.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lathom/rng.hpp"

namespace lathom {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

LawSpec LawSpec::parse(const std::string& text) {
  LawSpec spec;
  auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) spec.params.push_back(std::stod(tok));
    }
  }
  auto need = [&](size_t n) {
    if (spec.params.size() != n)
      throw std::invalid_argument("law " + spec.name + ": expected " + std::to_string(n) + " parameter(s)");
  };
  if (spec.name == "constant") {
    need(1);
    if (spec.params[0] <= 0) throw std::invalid_argument("constant law: value must be positive");
  } else if (spec.name == "two_point") {
    need(1);
    if (spec.params[0] <= 0) throw std::invalid_argument("two_point law: lambda must be positive");
  } else if (spec.name == "lognormal") {
    need(2);
    if (spec.params[1] < 0) throw std::invalid_argument("lognormal law: s must be >= 0");
  } else if (spec.name == "uniform") {
    need(2);
    if (spec.params[0] <= 0 || spec.params[1] < spec.params[0])
      throw std::invalid_argument("uniform law: need 0 < a <= b");
  } else if (spec.name == "pareto") {
    need(1);
    if (spec.params[0] <= 0) throw std::invalid_argument("pareto law: alpha must be positive");
  } else if (spec.name == "layered") {
    need(2);
    if (spec.params[0] <= 0 || spec.params[1] <= 0)
      throw std::invalid_argument("layered law: conductances must be positive");
  } else if (spec.name == "layered_noise") {
    need(3);
    if (spec.params[0] <= 0 || spec.params[1] <= 0 || spec.params[2] < 0)
      throw std::invalid_argument("layered_noise law: need positive levels and s >= 0");
  } else if (spec.name == "gff_exp") {
    need(0);
  } else {
    throw std::invalid_argument("unknown law '" + spec.name + "'");
  }
  return spec;
}

std::string LawSpec::str() const {
  std::string s = name;
  for (size_t i = 0; i < params.size(); ++i) {
    s += (i == 0 ? ":" : ",");
    std::ostringstream os;
    os << params[i];
    s += os.str();
  }
  return s;
}

Environment::Environment(int d, Topology topo, int size, LawSpec law, uint64_t seed)
    : d_(d), topo_(topo), size_(size), law_(std::move(law)), seed_(seed) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("Environment: dimension out of range");
  long n = 1;
  int verts_side = (topo == Topology::TorusT) ? size : (2 * size + 1);
  if (topo == Topology::TorusT && size < 2) throw std::invalid_argument("Environment: torus side must be >= 2");
  if (topo == Topology::BoxT && size < 1) throw std::invalid_argument("Environment: box radius must be >= 1");
  for (int i = 0; i < d; ++i) n *= verts_side;
  mu_.assign(n * d, topo == Topology::TorusT ? 0.0 : kNaN);
}

double Environment::min_conductance() const {
  double m = std::numeric_limits<double>::infinity();
  for (double x : mu_)
    if (!std::isnan(x)) m = std::min(m, x);
  return m;
}

Environment homogeneous(double c, int d, Topology topo, int size) {
  if (c <= 0) throw std::invalid_argument("homogeneous: conductance must be positive");
  LawSpec law{"constant", {c}};
  Environment env(d, topo, size, law, 0);
  if (topo == Topology::TorusT) {
    for (double& x : env.values()) x = c;
  } else {
    BoxGeometry g(d, size);
    for (long v = 0; v < g.num_closed(); ++v) {
      Coord x = g.coord(v);
      for (int i = 0; i < d; ++i)
        if (x[i] < size) env.edge_b(v, i) = c;
    }
  }
  return env;
}

namespace {

double draw_one(const LawSpec& law, RngStream& rs) {
  if (law.name == "two_point") {
    double lam = law.params[0];
    return (rs.uniform01() < 0.5) ? lam : 1.0 / lam;
  }
  if (law.name == "lognormal") return std::exp(law.params[0] + law.params[1] * rs.normal());
  if (law.name == "uniform") return rs.uniform(law.params[0], law.params[1]);
  if (law.name == "pareto") return std::pow(rs.uniform01(), -1.0 / law.params[0]);
  throw std::invalid_argument("draw_one: law '" + law.name + "' is not an i.i.d. law");
}

}  // namespace

Environment sample_iid(const LawSpec& law, int d, int L, uint64_t seed) {
  Environment env(d, Topology::TorusT, L, law, seed);
  Torus t(d, L);
  // one independent substream per edge: reproducible under any sampling order
  for (long v = 0; v < t.num_vertices(); ++v) {
    for (int i = 0; i < d; ++i) {
      RngStream rs(seed, "env-edge", static_cast<uint64_t>(t.edge_index(v, i)));
      env.edge_t(v, i) = draw_one(law, rs);
    }
  }
  return env;
}

Environment sample_layered(double lo, double hi, int d, int L) {
  if (L % 2 != 0) throw std::invalid_argument("layered: torus side must be even");
  LawSpec law{"layered", {lo, hi}};
  Environment env(d, Topology::TorusT, L, law, 0);
  Torus t(d, L);
  for (long v = 0; v < t.num_vertices(); ++v) {
    int col = t.coord(v)[0];
    double c = (col % 2 == 0) ? lo : hi;
    for (int i = 0; i < d; ++i) env.edge_t(v, i) = c;
  }
  return env;
}

Environment sample_layered_noise(double lo, double hi, double s, int d, int L, uint64_t seed) {
  if (L % 2 != 0) throw std::invalid_argument("layered_noise: torus side must be even");
  LawSpec law{"layered_noise", {lo, hi, s}};
  Environment env(d, Topology::TorusT, L, law, seed);
  Torus t(d, L);
  for (long v = 0; v < t.num_vertices(); ++v) {
    int col = t.coord(v)[0];
    double c = (col % 2 == 0) ? lo : hi;
    for (int i = 0; i < d; ++i) {
      RngStream rs(seed, "env-edge", static_cast<uint64_t>(t.edge_index(v, i)));
      env.edge_t(v, i) = c * std::exp(s * rs.normal());
    }
  }
  return env;
}

Environment sample_environment(const LawSpec& law, int d, int L, uint64_t seed) {
  if (law.name == "constant") return homogeneous(law.params[0], d, Topology::TorusT, L);
  if (law.name == "layered") return sample_layered(law.params[0], law.params[1], d, L);
  if (law.name == "layered_noise")
    return sample_layered_noise(law.params[0], law.params[1], law.params[2], d, L, seed);
  if (law.name == "gff_exp") return sample_gff_exp(d, L, seed);
  return sample_iid(law, d, L, seed);
}

Environment shift(const Environment& env, const Coord& a) {
  if (env.topology() != Topology::TorusT)
    throw std::invalid_argument("shift: only periodic environments can be shifted");
  Torus t(env.dim(), env.size());
  Environment out(env.dim(), env.topology(), env.size(), env.law(), env.seed());
  for (long v = 0; v < t.num_vertices(); ++v) {
    Coord x = t.coord(v);
    Coord xa = x;
    for (int i = 0; i < env.dim(); ++i) xa[i] = x[i] + a[i];
    long va = t.index(xa);
    for (int i = 0; i < env.dim(); ++i) out.edge_t(v, i) = env.edge_t(va, i);
  }
  return out;
}

Environment reflect(const Environment& env, int axis) {
  if (env.topology() != Topology::TorusT)
    throw std::invalid_argument("reflect: only periodic environments can be reflected");
  Torus t(env.dim(), env.size());
  Environment out(env.dim(), env.topology(), env.size(), env.law(), env.seed());
  // x -> -x in the given axis maps the edge {x, x+e_axis} to {-x-e_axis, -x}
  for (long v = 0; v < t.num_vertices(); ++v) {
    Coord x = t.coord(v);
    for (int i = 0; i < env.dim(); ++i) {
      Coord y = x;
      y[axis] = -x[axis];
      if (i == axis) y[axis] -= 1;
      out.edge_t(v, i) = env.edge_t(t.index(y), i);
    }
  }
  return out;
}

Environment restrict_to_box(const Environment& torus_env, int R) {
  if (torus_env.topology() != Topology::TorusT)
    throw std::invalid_argument("restrict_to_box: source must be a torus environment");
  int d = torus_env.dim();
  int L = torus_env.size();
  if (L < 2 * R + 2) throw std::invalid_argument("restrict_to_box: need L >= 2R+2 to avoid wrap-around");
  Torus t(d, L);
  BoxGeometry g(d, R);
  Environment out(d, Topology::BoxT, R, torus_env.law(), torus_env.seed());
  for (long v = 0; v < g.num_closed(); ++v) {
    Coord x = g.coord(v);
    long tv = t.index(x);
    for (int i = 0; i < d; ++i)
      if (x[i] < R) out.edge_b(v, i) = torus_env.edge_t(tv, i);
  }
  return out;
}

MomentReport moment_report(const Environment& env, double p, double q, double Lambda) {
  if (!(p > 1) || !(q > 1)) throw std::invalid_argument("moment_report: exponents must lie in (1,inf]");
  std::vector<double> mu, mu_inv;
  if (env.topology() == Topology::TorusT) {
    mu.reserve(env.num_slots());
    for (double x : env.values()) {
      mu.push_back(x);
      mu_inv.push_back(1.0 / x);
    }
  } else {
    BoxGeometry g(env.dim(), env.size());
    mu.reserve(g.edges_mid().size());
    for (const auto& e : g.edges_mid()) {
      long v = e.dir > 0 ? e.tail : e.head;
      double x = env.edge_b(v, e.axis);
      mu.push_back(x);
      mu_inv.push_back(1.0 / x);
    }
  }
  MomentReport rep;
  rep.p = p;
  rep.q = q;
  rep.threshold = Lambda;
  rep.edges = static_cast<long>(mu.size());
  rep.avnorm_mu = norm_avg(mu, p);
  rep.avnorm_mu_inv = norm_avg(mu_inv, q);
  rep.pass = (rep.avnorm_mu + rep.avnorm_mu_inv) < Lambda;
  return rep;
}

double avnorm_mu_box(const Environment& box_env, const BoxGeometry& g, double p, bool inverse) {
  std::vector<double> vals;
  vals.reserve(g.edges_mid().size());
  for (const auto& e : g.edges_mid()) {
    long v = e.dir > 0 ? e.tail : e.head;
    double x = box_env.edge_b(v, e.axis);
    vals.push_back(inverse ? 1.0 / x : x);
  }
  return norm_avg(vals, p);
}

}  // namespace lathom
