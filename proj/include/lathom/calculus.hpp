#pragma once

#include "lathom/fields.hpp"

namespace lathom {

// Discrete calculus on window fields.
//
//   (grad_i u)(x)      = u(x+e_i) - u(x)          domain loses the top slice in axis i
//   (grad_star_i u)(x) = u(x-e_i) - u(x)          domain loses the bottom slice
//   (div_star F)(x)    = sum_i (grad_star_i F_i)  (the formal adjoint divergence)
//   (laplacian u)(x)   = -(div_star grad u)(x) = sum_{y~x} u(y) - 2d u(x)
//
// Each operation returns a field on the exact domain where the stencil fits
// and throws if that domain is empty.

WindowField grad_i(const WindowField& u, int axis);
WindowField grad_star_i(const WindowField& u, int axis);

// full gradient on the common domain (hi shrunk by one in every axis)
WindowVecField grad(const WindowField& u);
// adjoint gradient on the common domain (lo shrunk by one in every axis)
WindowVecField grad_star(const WindowField& u);

WindowField div_star(const WindowVecField& F);
WindowField laplacian(const WindowField& u);

// Shifted products:
//   [(f grad_i) g](x)      = f(x+e_i) (grad_i g)(x)
//   [(f grad_star_i) g](x) = f(x-e_i) (grad_star_i g)(x)
// and the contractions (F . grad) g = sum_i (F_i grad_i) g  etc.
// These satisfy the exact product rule grad_i(fg) = (f grad_i) g + g grad_i f.
WindowField shifted_grad(const WindowField& f, const WindowField& g, int axis);
WindowField shifted_grad_star(const WindowField& f, const WindowField& g, int axis);
WindowField contract_grad(const WindowVecField& F, const WindowField& g);
WindowField contract_grad_star(const WindowVecField& F, const WindowField& g);

// pointwise product on a common domain
WindowField product(const WindowField& f, const WindowField& g);

// restrict to a subwindow (throws if not contained)
WindowField restrict_to(const WindowField& u, const Window& sub);

}  // namespace lathom
