#include "lathom/fields.hpp"

#include <cmath>
#include <map>

namespace lathom {

namespace {

const std::vector<OrientedEdge>& edge_list(const BoxGeometry& g, EdgeSetKind kind) {
  switch (kind) {
    case EdgeSetKind::Mid: return g.edges_mid();
    case EdgeSetKind::Tan: return g.edges_tan();
    default: return g.edges_nor();
  }
}

}  // namespace

EdgeField::EdgeField(const BoxGeometry& g, EdgeSetKind kind, bool antisymmetric)
    : geom_(&g), kind_(kind), antisym_(antisymmetric) {
  const auto& es = edge_list(g, kind);
  v_.assign(es.size(), 0.0);
  std::map<std::pair<long, long>, long> index;
  for (size_t k = 0; k < es.size(); ++k) index[{es[k].tail, es[k].head}] = static_cast<long>(k);
  reverse_pos_.assign(es.size(), -1);
  for (size_t k = 0; k < es.size(); ++k) {
    auto it = index.find({es[k].head, es[k].tail});
    if (it != index.end()) reverse_pos_[k] = it->second;
  }
}

const std::vector<OrientedEdge>& EdgeField::edges() const { return edge_list(*geom_, kind_); }

long EdgeField::reverse_position(long pos) const { return reverse_pos_[pos]; }

double EdgeField::antisymmetry_defect() const {
  double worst = 0;
  for (size_t k = 0; k < v_.size(); ++k) {
    long r = reverse_pos_[k];
    if (r >= 0) worst = std::max(worst, std::fabs(v_[k] + v_[r]));
  }
  return worst;
}

void EdgeField::check_antisymmetric(double tol) const {
  if (!antisym_) return;
  double scale = 0;
  for (double x : v_) scale = std::max(scale, std::fabs(x));
  if (antisymmetry_defect() > tol * std::max(scale, 1.0))
    throw std::logic_error("EdgeField: antisymmetry invariant violated");
}

EdgeField EdgeField::gradient_of(const BoxGeometry& g, EdgeSetKind kind, const VertexField& u) {
  if (u.tag() != box_closed_tag(g.dim(), g.radius()))
    throw std::invalid_argument("EdgeField::gradient_of: expected a closed-box field");
  EdgeField f(g, kind, /*antisymmetric=*/kind != EdgeSetKind::Nor);
  const auto& es = edge_list(g, kind);
  for (size_t k = 0; k < es.size(); ++k) f.v_[k] = u[es[k].head] - u[es[k].tail];
  return f;
}

}  // namespace lathom
