#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lathom {

inline constexpr int kMaxDim = 6;

// Lattice point; entries [0,d) are valid.
using Coord = std::array<int, kMaxDim>;

inline Coord make_coord(int d, std::initializer_list<int> xs) {
  Coord c{};
  int i = 0;
  for (int x : xs) {
    if (i >= d) break;
    c[i++] = x;
  }
  return c;
}

// Periodic lattice (Z/L)^d with axis-major flat indexing (axis 0 fastest).
class Torus {
 public:
  Torus(int d, int L) : d_(d), L_(L) {
    if (d < 2 || d > kMaxDim) throw std::invalid_argument("Torus: dimension must be in [2," + std::to_string(kMaxDim) + "]");
    if (L < 2) throw std::invalid_argument("Torus: side must be >= 2");
    n_ = 1;
    for (int i = 0; i < d; ++i) n_ *= L;
  }

  int dim() const { return d_; }
  int side() const { return L_; }
  long num_vertices() const { return n_; }
  long num_edges() const { return n_ * d_; }  // unoriented, one per (vertex, axis)

  long index(const Coord& x) const {
    long idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
      int xi = x[i] % L_;
      if (xi < 0) xi += L_;
      idx += stride * xi;
      stride *= L_;
    }
    return idx;
  }

  Coord coord(long idx) const {
    Coord c{};
    for (int i = 0; i < d_; ++i) {
      c[i] = static_cast<int>(idx % L_);
      idx /= L_;
    }
    return c;
  }

  long neighbor(long idx, int axis, int step) const {
    long stride = 1;
    for (int i = 0; i < axis; ++i) stride *= L_;
    int xi = static_cast<int>((idx / stride) % L_);
    int yi = xi + step;
    if (yi >= L_) yi -= L_;
    if (yi < 0) yi += L_;
    return idx + static_cast<long>(yi - xi) * stride;
  }

  long edge_index(long v, int axis) const { return v * d_ + axis; }

 private:
  int d_, L_;
  long n_;
};

enum class Region : uint8_t {
  Interior,       // D_R : |x|_inf < R
  InnerBoundary,  // tilde-boundary: |x|_inf = R with an interior neighbour
  CornerRegion,   // rest of the boundary (>= 2 extremal coordinates)
};

struct OrientedEdge {
  long tail = -1, head = -1;  // closed-box indices
  int axis = 0;
  int dir = +1;  // head = tail + dir * e_axis
};

// Box of radius R around the origin: closed vertex set [-R,R]^d with the
// index sets and oriented edge sets used by all boundary machinery.
//
// Edge sets (oriented):
//   edges_mid  : midpoint max-norm < R (closed under reversal)
//   edges_tan  : both endpoints on the boundary (closed under reversal)
//   edges_nor  : interior tail -> boundary head, one per inner-boundary vertex
class BoxGeometry {
 public:
  BoxGeometry(int d, int R);

  int dim() const { return d_; }
  int radius() const { return R_; }
  long num_closed() const { return n_; }  // (2R+1)^d

  long index(const Coord& x) const {
    long idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
      idx += stride * (x[i] + R_);
      stride *= side_;
    }
    return idx;
  }
  Coord coord(long idx) const {
    Coord c{};
    for (int i = 0; i < d_; ++i) {
      c[i] = static_cast<int>(idx % side_) - R_;
      idx /= side_;
    }
    return c;
  }
  bool contains(const Coord& x) const {
    for (int i = 0; i < d_; ++i)
      if (x[i] < -R_ || x[i] > R_) return false;
    return true;
  }

  int linf(long idx) const { return linf_[idx]; }
  Region region(long idx) const { return region_[idx]; }
  bool is_interior(long idx) const { return linf_[idx] < R_; }
  bool is_boundary(long idx) const { return linf_[idx] == R_; }
  bool is_inner_boundary(long idx) const { return region_[idx] == Region::InnerBoundary; }

  // neighbour inside the closed box, or -1
  long neighbor(long idx, int axis, int step) const {
    long stride = strides_[axis];
    int xi = static_cast<int>((idx / stride) % side_) - R_;
    int yi = xi + step;
    if (yi < -R_ || yi > R_) return -1;
    return idx + static_cast<long>(step) * stride;
  }

  const std::vector<long>& interior() const { return interior_; }
  const std::vector<long>& boundary() const { return boundary_; }
  const std::vector<long>& inner_boundary() const { return inner_boundary_; }

  // position of a closed index inside the respective list, or -1
  long interior_pos(long idx) const { return interior_pos_[idx]; }
  long boundary_pos(long idx) const { return boundary_pos_[idx]; }
  long inner_boundary_pos(long idx) const { return inner_boundary_pos_[idx]; }

  const std::vector<OrientedEdge>& edges_mid() const { return edges_mid_; }
  const std::vector<OrientedEdge>& edges_tan() const { return edges_tan_; }
  const std::vector<OrientedEdge>& edges_nor() const { return edges_nor_; }

  // n_R(y): the unique interior->boundary edge attached to y in tilde-boundary
  const OrientedEdge& normal_edge(long inner_boundary_pos) const { return edges_nor_[inner_boundary_pos]; }

  // number of unoriented edges of the closed box (both endpoints in [-R,R]^d)
  long num_closed_edges() const { return num_closed_edges_; }

 private:
  int d_, R_, side_;
  long n_;
  std::array<long, kMaxDim> strides_{};
  std::vector<int8_t> region_as_int_;
  std::vector<Region> region_;
  std::vector<int> linf_;
  std::vector<long> interior_, boundary_, inner_boundary_;
  std::vector<long> interior_pos_, boundary_pos_, inner_boundary_pos_;
  std::vector<OrientedEdge> edges_mid_, edges_tan_, edges_nor_;
  long num_closed_edges_ = 0;
};

}  // namespace lathom
