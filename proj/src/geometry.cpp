#include "lathom/geometry.hpp"

namespace lathom {

BoxGeometry::BoxGeometry(int d, int R) : d_(d), R_(R), side_(2 * R + 1) {
  if (d < 2 || d > kMaxDim) throw std::invalid_argument("BoxGeometry: dimension must be in [2," + std::to_string(kMaxDim) + "]");
  if (R < 1) throw std::invalid_argument("BoxGeometry: radius must be >= 1");

  n_ = 1;
  for (int i = 0; i < d_; ++i) {
    strides_[i] = n_;
    n_ *= side_;
  }

  linf_.resize(n_);
  region_.resize(n_);
  interior_pos_.assign(n_, -1);
  boundary_pos_.assign(n_, -1);
  inner_boundary_pos_.assign(n_, -1);

  for (long v = 0; v < n_; ++v) {
    Coord x = coord(v);
    int m = 0, extremal = 0;
    for (int i = 0; i < d_; ++i) {
      int a = x[i] < 0 ? -x[i] : x[i];
      if (a > m) m = a;
      if (a == R_) ++extremal;
    }
    linf_[v] = m;
    if (m < R_) {
      region_[v] = Region::Interior;
      interior_pos_[v] = static_cast<long>(interior_.size());
      interior_.push_back(v);
    } else {
      // a boundary vertex has an interior neighbour iff exactly one
      // coordinate sits at +-R
      region_[v] = (extremal == 1) ? Region::InnerBoundary : Region::CornerRegion;
      boundary_pos_[v] = static_cast<long>(boundary_.size());
      boundary_.push_back(v);
      if (extremal == 1) {
        inner_boundary_pos_[v] = static_cast<long>(inner_boundary_.size());
        inner_boundary_.push_back(v);
      }
    }
  }

  // E_R: unoriented edge {x, x+e_i} has midpoint max-norm < R iff
  // x_i in [-R, R-1] and |x_j| < R for all j != i.  Both orientations stored.
  for (long v = 0; v < n_; ++v) {
    Coord x = coord(v);
    for (int i = 0; i < d_; ++i) {
      if (x[i] >= R_) continue;
      long wv = v + strides_[i];
      ++num_closed_edges_;
      bool mid = true;
      for (int j = 0; j < d_; ++j) {
        if (j == i) continue;
        if (x[j] <= -R_ || x[j] >= R_) { mid = false; break; }
      }
      if (mid) {
        edges_mid_.push_back({v, wv, i, +1});
        edges_mid_.push_back({wv, v, i, -1});
      }
      if (linf_[v] == R_ && linf_[wv] == R_) {
        edges_tan_.push_back({v, wv, i, +1});
        edges_tan_.push_back({wv, v, i, -1});
      }
    }
  }

  // normal edges, aligned with the inner-boundary list
  edges_nor_.reserve(inner_boundary_.size());
  for (long y : inner_boundary_) {
    Coord x = coord(y);
    int axis = -1, sgn = 0;
    for (int i = 0; i < d_; ++i) {
      if (x[i] == R_) { axis = i; sgn = +1; break; }
      if (x[i] == -R_) { axis = i; sgn = -1; break; }
    }
    long z = y - static_cast<long>(sgn) * strides_[axis];
    edges_nor_.push_back({z, y, axis, sgn});
  }
}

}  // namespace lathom
