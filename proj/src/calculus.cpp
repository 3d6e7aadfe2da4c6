#include "lathom/calculus.hpp"

namespace lathom {

namespace {

void require_nonempty(const Window& w, const char* op) {
  if (w.size() <= 0) throw std::invalid_argument(std::string(op) + ": domain too small for the stencil");
}

}  // namespace

WindowField grad_i(const WindowField& u, int axis) {
  Window w = u.w.shrink_hi(axis);
  require_nonempty(w, "grad_i");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    Coord xp = x;
    xp[axis] += 1;
    out.v[k] = u(xp) - u(x);
  }
  return out;
}

WindowField grad_star_i(const WindowField& u, int axis) {
  Window w = u.w.shrink_lo(axis);
  require_nonempty(w, "grad_star_i");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    Coord xm = x;
    xm[axis] -= 1;
    out.v[k] = u(xm) - u(x);
  }
  return out;
}

WindowVecField grad(const WindowField& u) {
  Window w = u.w;
  for (int i = 0; i < w.d; ++i) w = w.shrink_hi(i);
  require_nonempty(w, "grad");
  WindowVecField out(w, w.d);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    for (int i = 0; i < w.d; ++i) {
      Coord xp = x;
      xp[i] += 1;
      out.v[k * w.d + i] = u(xp) - u(x);
    }
  }
  return out;
}

WindowVecField grad_star(const WindowField& u) {
  Window w = u.w;
  for (int i = 0; i < w.d; ++i) w = w.shrink_lo(i);
  require_nonempty(w, "grad_star");
  WindowVecField out(w, w.d);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    for (int i = 0; i < w.d; ++i) {
      Coord xm = x;
      xm[i] -= 1;
      out.v[k * w.d + i] = u(xm) - u(x);
    }
  }
  return out;
}

WindowField div_star(const WindowVecField& F) {
  Window w = F.w;
  for (int i = 0; i < w.d; ++i) w = w.shrink_lo(i);
  require_nonempty(w, "div_star");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    double s = 0;
    for (int i = 0; i < w.d; ++i) {
      Coord xm = x;
      xm[i] -= 1;
      s += F.at(xm, i) - F.at(x, i);
    }
    out.v[k] = s;
  }
  return out;
}

WindowField laplacian(const WindowField& u) {
  Window w = u.w;
  for (int i = 0; i < w.d; ++i) {
    w = w.shrink_lo(i);
    w = w.shrink_hi(i);
  }
  require_nonempty(w, "laplacian");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    double s = -2.0 * w.d * u(x);
    for (int i = 0; i < w.d; ++i) {
      Coord xp = x, xm = x;
      xp[i] += 1;
      xm[i] -= 1;
      s += u(xp) + u(xm);
    }
    out.v[k] = s;
  }
  return out;
}

WindowField shifted_grad(const WindowField& f, const WindowField& g, int axis) {
  f.check_same_domain(g, "shifted_grad");
  Window w = f.w.shrink_hi(axis);
  require_nonempty(w, "shifted_grad");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    Coord xp = x;
    xp[axis] += 1;
    out.v[k] = f(xp) * (g(xp) - g(x));
  }
  return out;
}

WindowField shifted_grad_star(const WindowField& f, const WindowField& g, int axis) {
  f.check_same_domain(g, "shifted_grad_star");
  Window w = f.w.shrink_lo(axis);
  require_nonempty(w, "shifted_grad_star");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    Coord xm = x;
    xm[axis] -= 1;
    out.v[k] = f(xm) * (g(xm) - g(x));
  }
  return out;
}

WindowField contract_grad(const WindowVecField& F, const WindowField& g) {
  if (!(F.w == g.w)) throw std::invalid_argument("contract_grad: domain mismatch");
  Window w = F.w;
  for (int i = 0; i < w.d; ++i) w = w.shrink_hi(i);
  require_nonempty(w, "contract_grad");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    double s = 0;
    for (int i = 0; i < w.d; ++i) {
      Coord xp = x;
      xp[i] += 1;
      s += F.at(xp, i) * (g(xp) - g(x));
    }
    out.v[k] = s;
  }
  return out;
}

WindowField contract_grad_star(const WindowVecField& F, const WindowField& g) {
  if (!(F.w == g.w)) throw std::invalid_argument("contract_grad_star: domain mismatch");
  Window w = F.w;
  for (int i = 0; i < w.d; ++i) w = w.shrink_lo(i);
  require_nonempty(w, "contract_grad_star");
  WindowField out(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    double s = 0;
    for (int i = 0; i < w.d; ++i) {
      Coord xm = x;
      xm[i] -= 1;
      s += F.at(xm, i) * (g(xm) - g(x));
    }
    out.v[k] = s;
  }
  return out;
}

WindowField product(const WindowField& f, const WindowField& g) {
  f.check_same_domain(g, "product");
  WindowField out(f.w);
  for (long k = 0; k < f.size(); ++k) out.v[k] = f.v[k] * g.v[k];
  return out;
}

WindowField restrict_to(const WindowField& u, const Window& sub) {
  for (int i = 0; i < sub.d; ++i)
    if (sub.lo[i] < u.w.lo[i] || sub.hi[i] > u.w.hi[i])
      throw std::invalid_argument("restrict_to: subwindow not contained");
  WindowField out(sub);
  for (long k = 0; k < sub.size(); ++k) out.v[k] = u(sub.coord(k));
  return out;
}

}  // namespace lathom
