#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lathom/geometry.hpp"

namespace lathom {

// Domain tags. Fields carry one and refuse arithmetic across different
// domains: the boundary index sets are too easy to mix up silently.
struct DomainTag {
  enum Kind : uint8_t {
    TorusVerts,
    BoxClosed,
    BoxInterior,
    BoxBoundary,
    BoxInnerBoundary,
  } kind = TorusVerts;
  int d = 0;
  int size = 0;  // L for torus, R for box

  bool operator==(const DomainTag& o) const {
    return kind == o.kind && d == o.d && size == o.size;
  }
  bool operator!=(const DomainTag& o) const { return !(*this == o); }

  std::string str() const {
    static const char* names[] = {"torus", "box-closed", "box-interior", "box-boundary", "box-inner-boundary"};
    return std::string(names[kind]) + "(d=" + std::to_string(d) + ",n=" + std::to_string(size) + ")";
  }
};

inline DomainTag torus_tag(int d, int L) { return {DomainTag::TorusVerts, d, L}; }
inline DomainTag box_closed_tag(int d, int R) { return {DomainTag::BoxClosed, d, R}; }
inline DomainTag box_interior_tag(int d, int R) { return {DomainTag::BoxInterior, d, R}; }
inline DomainTag box_boundary_tag(int d, int R) { return {DomainTag::BoxBoundary, d, R}; }
inline DomainTag box_inner_boundary_tag(int d, int R) { return {DomainTag::BoxInnerBoundary, d, R}; }

class VertexField {
 public:
  VertexField() = default;
  VertexField(DomainTag tag, long n, double init = 0.0) : tag_(tag), v_(n, init) {}

  const DomainTag& tag() const { return tag_; }
  long size() const { return static_cast<long>(v_.size()); }
  double operator[](long i) const { return v_[i]; }
  double& operator[](long i) { return v_[i]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  void check_same_domain(const VertexField& o, const char* op) const {
    if (tag_ != o.tag_)
      throw std::invalid_argument(std::string("field ") + op + ": domain mismatch " + tag_.str() + " vs " + o.tag_.str());
  }

  VertexField& operator+=(const VertexField& o) {
    check_same_domain(o, "+=");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  VertexField& operator-=(const VertexField& o) {
    check_same_domain(o, "-=");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  VertexField& operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
  }

  double mean() const {
    double s = 0;
    for (double x : v_) s += x;
    return v_.empty() ? 0.0 : s / static_cast<double>(v_.size());
  }
  void subtract_mean() {
    double m = mean();
    for (double& x : v_) x -= m;
  }

 private:
  DomainTag tag_;
  std::vector<double> v_;
};

inline VertexField operator+(VertexField a, const VertexField& b) { return a += b; }
inline VertexField operator-(VertexField a, const VertexField& b) { return a -= b; }

// d components per site, row-major [site*comps + j]
class VectorField {
 public:
  VectorField() = default;
  VectorField(DomainTag tag, long n, int comps) : tag_(tag), comps_(comps), v_(n * comps, 0.0) {}

  const DomainTag& tag() const { return tag_; }
  int comps() const { return comps_; }
  long sites() const { return static_cast<long>(v_.size()) / comps_; }
  double at(long site, int j) const { return v_[site * comps_ + j]; }
  double& at(long site, int j) { return v_[site * comps_ + j]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

 private:
  DomainTag tag_;
  int comps_ = 0;
  std::vector<double> v_;
};

// One value per oriented edge of a stated box edge set.  When flagged
// antisymmetric, the stored data must satisfy value(y,x) = -value(x,y) for
// every reversal pair; check_antisymmetric verifies it.
enum class EdgeSetKind : uint8_t { Mid, Tan, Nor };

class EdgeField {
 public:
  EdgeField() = default;
  EdgeField(const BoxGeometry& g, EdgeSetKind kind, bool antisymmetric = false);

  const BoxGeometry& geometry() const { return *geom_; }
  EdgeSetKind kind() const { return kind_; }
  bool antisymmetric_flag() const { return antisym_; }
  const std::vector<OrientedEdge>& edges() const;
  long size() const { return static_cast<long>(v_.size()); }
  double operator[](long pos) const { return v_[pos]; }
  double& operator[](long pos) { return v_[pos]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  // position of the reversed edge; -1 when the set stores one orientation only
  long reverse_position(long pos) const;
  // worst |value(x,y) + value(y,x)| over reversal pairs
  double antisymmetry_defect() const;
  void check_antisymmetric(double tol) const;

  // gradient of a closed-box vertex field along the edge set (antisymmetric
  // by construction on reversal-closed sets)
  static EdgeField gradient_of(const BoxGeometry& g, EdgeSetKind kind, const VertexField& u);

 private:
  const BoxGeometry* geom_ = nullptr;
  EdgeSetKind kind_ = EdgeSetKind::Mid;
  bool antisym_ = false;
  std::vector<double> v_;
  std::vector<long> reverse_pos_;
};

// ---- norms -----------------------------------------------------------------
// For a finite set A:  plain ||u||_{p,A}^p = sum |u|^p,  averaged version
// divides by |A| inside the p-th root.  p = infinity takes the supremum for
// both (dedicated code path, never a large finite p).

inline double norm_plain(std::span<const double> v, double p) {
  if (v.empty()) throw std::invalid_argument("norm over empty set");
  if (std::isinf(p)) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  if (p < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
  if (p == 1.0) {
    double s = 0;
    for (double x : v) s += std::fabs(x);
    return s;
  }
  if (p == 2.0) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  double s = 0;
  for (double x : v) s += std::pow(std::fabs(x), p);
  return std::pow(s, 1.0 / p);
}

inline double norm_avg(std::span<const double> v, double p) {
  if (v.empty()) throw std::invalid_argument("norm over empty set");
  if (std::isinf(p)) return norm_plain(v, p);
  return norm_plain(v, p) / std::pow(static_cast<double>(v.size()), 1.0 / p);
}

// ---- window fields ---------------------------------------------------------
// Axis-aligned lattice rectangles; the free discrete calculus lives here and
// follows the domain-shrinking semantics of the forward/backward differences.

struct Window {
  int d = 0;
  std::array<int, kMaxDim> lo{}, hi{};  // inclusive

  static Window centered_box(int d, int R) {
    Window w;
    w.d = d;
    for (int i = 0; i < d; ++i) {
      w.lo[i] = -R;
      w.hi[i] = R;
    }
    return w;
  }

  long size() const {
    long n = 1;
    for (int i = 0; i < d; ++i) {
      if (hi[i] < lo[i]) return 0;
      n *= hi[i] - lo[i] + 1;
    }
    return n;
  }
  int extent(int i) const { return hi[i] - lo[i] + 1; }
  long index(const Coord& x) const {
    long idx = 0, stride = 1;
    for (int i = 0; i < d; ++i) {
      idx += stride * (x[i] - lo[i]);
      stride *= extent(i);
    }
    return idx;
  }
  Coord coord(long idx) const {
    Coord c{};
    for (int i = 0; i < d; ++i) {
      c[i] = lo[i] + static_cast<int>(idx % extent(i));
      idx /= extent(i);
    }
    return c;
  }
  bool contains(const Coord& x) const {
    for (int i = 0; i < d; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  Window shrink_hi(int axis, int by = 1) const {
    Window w = *this;
    w.hi[axis] -= by;
    return w;
  }
  Window shrink_lo(int axis, int by = 1) const {
    Window w = *this;
    w.lo[axis] += by;
    return w;
  }
  bool operator==(const Window& o) const {
    if (d != o.d) return false;
    for (int i = 0; i < d; ++i)
      if (lo[i] != o.lo[i] || hi[i] != o.hi[i]) return false;
    return true;
  }
};

struct WindowField {
  Window w;
  std::vector<double> v;

  WindowField() = default;
  explicit WindowField(Window win, double init = 0.0) : w(win), v(win.size(), init) {}

  double operator()(const Coord& x) const { return v[w.index(x)]; }
  double& operator()(const Coord& x) { return v[w.index(x)]; }
  long size() const { return static_cast<long>(v.size()); }

  void check_same_domain(const WindowField& o, const char* op) const {
    if (!(w == o.w)) throw std::invalid_argument(std::string("window field ") + op + ": domain mismatch");
  }
};

struct WindowVecField {
  Window w;
  int comps = 0;
  std::vector<double> v;

  WindowVecField() = default;
  WindowVecField(Window win, int c) : w(win), comps(c), v(win.size() * c, 0.0) {}
  double at(const Coord& x, int j) const { return v[w.index(x) * comps + j]; }
  double& at(const Coord& x, int j) { return v[w.index(x) * comps + j]; }
};

}  // namespace lathom
