#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lathom/fields.hpp"
#include "lathom/geometry.hpp"

namespace lathom {

enum class Topology : uint8_t { TorusT, BoxT };

// Conductance law, parsed from "name:p1,p2,..." strings.
//   constant:c            every edge = c
//   two_point:lam         edge in {lam, 1/lam} with probability 1/2 each
//   lognormal:mu,s        exp(mu + s*N(0,1))
//   uniform:a,b           uniform on [a,b]
//   pareto:alpha          Pareto tail on [1,inf): E[mu^p] < inf iff p < alpha
//   layered:lo,hi         deterministic d=2+ columns: all edges at x_0 = n get
//                         conductance lo (n even) or hi (n odd)
//   layered_noise:lo,hi,s layered times exp(s*N(0,1)) per edge
//   gff_exp               exp(phi_x + phi_y), phi a massless free field (d>=3)
struct LawSpec {
  std::string name;
  std::vector<double> params;

  static LawSpec parse(const std::string& text);
  std::string str() const;
};

// Map from unoriented nearest-neighbour edges to positive conductances.
// Torus storage: mu[v*d + i] is the conductance of {x, x+e_i mod L}.
// Box storage over closed vertices: mu[v*d + i] is the conductance of
// {x, x+e_i} when x_i < R, and NaN otherwise (slot unused).
class Environment {
 public:
  Environment() = default;
  Environment(int d, Topology topo, int size, LawSpec law, uint64_t seed);

  int dim() const { return d_; }
  Topology topology() const { return topo_; }
  int size() const { return size_; }  // L (torus) or R (box)
  const LawSpec& law() const { return law_; }
  uint64_t seed() const { return seed_; }

  long num_slots() const { return static_cast<long>(mu_.size()); }
  std::vector<double>& values() { return mu_; }
  const std::vector<double>& values() const { return mu_; }

  // torus accessors
  double edge_t(long v, int axis) const { return mu_[v * d_ + axis]; }
  double& edge_t(long v, int axis) { return mu_[v * d_ + axis]; }

  // box accessors (closed-box vertex index; caller guarantees x_axis < R)
  double edge_b(long v, int axis) const { return mu_[v * d_ + axis]; }
  double& edge_b(long v, int axis) { return mu_[v * d_ + axis]; }

  double min_conductance() const;

  // diagonal coefficient field of the conductances: a_ii(x) = mu({x, x+e_i})
  double coeff(long v, int i) const { return mu_[v * d_ + i]; }

 private:
  int d_ = 0;
  Topology topo_ = Topology::TorusT;
  int size_ = 0;
  LawSpec law_;
  uint64_t seed_ = 0;
  std::vector<double> mu_;
};

// Diagonal matrix view of an environment; kept as a thin handle so the
// identification a_ii(x) = mu_{x,x+e_i} is explicit in call sites.
struct CoefficientField {
  const Environment* env = nullptr;
  double a(long v, int i, int j) const { return i == j ? env->coeff(v, i) : 0.0; }
  double diag(long v, int i) const { return env->coeff(v, i); }
};

Environment homogeneous(double c, int d, Topology topo, int size);
Environment sample_iid(const LawSpec& law, int d, int L, uint64_t seed);
Environment sample_layered(double lo, double hi, int d, int L);
Environment sample_layered_noise(double lo, double hi, double s, int d, int L, uint64_t seed);
// exp(phi_x + phi_y) with phi the zero-mode-free massless Gaussian field on
// the torus, synthesised spectrally; requires d >= 3
Environment sample_gff_exp(int d, int L, uint64_t seed);
// dispatch on LawSpec
Environment sample_environment(const LawSpec& law, int d, int L, uint64_t seed);

// zero-mode-free massless Gaussian field itself (exposed for validation)
std::vector<double> sample_gff_field(int d, int L, uint64_t seed);

Environment shift(const Environment& env, const Coord& a);
Environment reflect(const Environment& env, int axis);

// centered window restriction of a torus environment onto the closed box
// [-R, R]^d; wrap-free when L >= 2R+2
Environment restrict_to_box(const Environment& torus_env, int R);

struct MomentReport {
  double p = 0, q = 0;
  double avnorm_mu = 0;      // averaged p-norm of conductances
  double avnorm_mu_inv = 0;  // averaged q-norm of inverse conductances
  double threshold = 0;      // Lambda
  bool pass = false;
  long edges = 0;
};

// torus: over all edges; box: over the oriented midpoint edge set E_R
MomentReport moment_report(const Environment& env, double p, double q, double Lambda);

// averaged p-norm of conductances over E_R of a box environment (oriented)
double avnorm_mu_box(const Environment& box_env, const BoxGeometry& g, double p, bool inverse);

}  // namespace lathom
