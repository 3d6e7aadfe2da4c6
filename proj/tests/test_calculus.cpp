#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lathom/calculus.hpp"
#include "lathom/geometry.hpp"
#include "lathom/rng.hpp"

using namespace lathom;

namespace {

WindowField coordinate_field(const Window& w, int axis) {
  WindowField f(w);
  for (long k = 0; k < w.size(); ++k) f.v[k] = w.coord(k)[axis];
  return f;
}

WindowField random_field(const Window& w, uint64_t seed) {
  WindowField f(w);
  RngStream rs(seed, "wf", 0);
  for (long k = 0; k < w.size(); ++k) f.v[k] = rs.normal();
  return f;
}

}  // namespace

TEST_CASE("gradient of an affine function is constant") {
  Window w = Window::centered_box(2, 5);
  WindowField u(w);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    u.v[k] = x[0] + 2.0 * x[1];
  }
  WindowVecField gu = grad(u);
  for (long k = 0; k < gu.w.size(); ++k) {
    CHECK(gu.v[k * 2] == 1.0);
    CHECK(gu.v[k * 2 + 1] == 2.0);
  }
}

TEST_CASE("constants are harmonic; x_1^2 has laplacian 2") {
  Window w = Window::centered_box(2, 4);
  WindowField c(w, 7.0);
  WindowField lc = laplacian(c);
  for (double v : lc.v) CHECK(v == 0.0);

  WindowField sq(w);
  for (long k = 0; k < w.size(); ++k) {
    double x = w.coord(k)[0];
    sq.v[k] = x * x;
  }
  WindowField lsq = laplacian(sq);
  for (double v : lsq.v) CHECK(v == 2.0);
}

TEST_CASE("laplacian equals minus div_star of grad") {
  Window w = Window::centered_box(3, 3);
  WindowField u = random_field(w, 11);
  WindowField l1 = laplacian(u);
  WindowField l2 = div_star(grad(u));
  for (long k = 0; k < l1.w.size(); ++k) {
    Coord x = l1.w.coord(k);
    CHECK(l1(x) == doctest::Approx(-l2(x)).epsilon(1e-14));
  }
}

TEST_CASE("shifted product rule is exact") {
  // (f grad_i) g at the origin for f = g = x_1
  Window w = Window::centered_box(2, 2);
  WindowField f = coordinate_field(w, 0);
  WindowField fg = shifted_grad(f, f, 0);
  Coord origin{};
  CHECK(fg(origin) == 1.0);
  WindowField prod = product(f, f);
  WindowField dprod = grad_i(prod, 0);
  CHECK(dprod(origin) == 1.0);

  // constant factor pulls out
  WindowField c(w, 3.5);
  WindowField g2 = random_field(w, 5);
  WindowField cg = shifted_grad(c, g2, 1);
  WindowField dg = grad_i(g2, 1);
  for (long k = 0; k < cg.w.size(); ++k) CHECK(cg.v[k] == doctest::Approx(3.5 * dg.v[k]));
}

TEST_CASE("product rule grad_i(fg) = (f grad_i) g + g grad_i f exactly on random fields") {
  Window w = Window::centered_box(2, 8);
  WindowField f = random_field(w, 101), g = random_field(w, 202);
  for (int axis = 0; axis < 2; ++axis) {
    WindowField lhs = grad_i(product(f, g), axis);
    WindowField t1 = shifted_grad(f, g, axis);
    // the second summand g grad_i f is the plain product, not a shifted one
    WindowField gf = grad_i(f, axis);
    double worst = 0;
    for (long k = 0; k < lhs.w.size(); ++k) {
      Coord x = lhs.w.coord(k);
      double rhs = t1(x) + g(x) * gf(x);
      worst = std::max(worst, std::fabs(lhs(x) - rhs));
    }
    CHECK(worst <= 1e-13);  // exact identity, rounding only
  }
}

TEST_CASE("adjoint product rule with the backward shift") {
  Window w = Window::centered_box(2, 6);
  WindowField f = random_field(w, 7), g = random_field(w, 8);
  for (int axis = 0; axis < 2; ++axis) {
    WindowField lhs = grad_star_i(product(f, g), axis);
    WindowField t1 = shifted_grad_star(f, g, axis);
    WindowField gf = grad_star_i(f, axis);
    double worst = 0;
    for (long k = 0; k < lhs.w.size(); ++k) {
      Coord x = lhs.w.coord(k);
      worst = std::max(worst, std::fabs(lhs(x) - (t1(x) + g(x) * gf(x))));
    }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("summation by parts for compactly supported data") {
  // sum_x u (div_star F) = sum_x grad u . F when F vanishes near the rim
  Window w = Window::centered_box(2, 6);
  WindowField u = random_field(w, 31);
  WindowVecField F(w, 2);
  RngStream rs(32, "F", 0);
  for (long k = 0; k < w.size(); ++k) {
    Coord x = w.coord(k);
    int m = std::max(std::abs(x[0]), std::abs(x[1]));
    if (m <= 3)
      for (int i = 0; i < 2; ++i) F.v[k * 2 + i] = rs.normal();
  }
  WindowField dF = div_star(F);
  double lhs = 0;
  for (long k = 0; k < dF.w.size(); ++k) {
    Coord x = dF.w.coord(k);
    lhs += u(x) * dF(x);
  }
  WindowVecField gu = grad(u);
  double rhs = 0;
  for (long k = 0; k < gu.w.size(); ++k) {
    Coord x = gu.w.coord(k);
    for (int i = 0; i < 2; ++i) rhs += gu.at(x, i) * F.at(x, i);
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("domain shrinking and errors") {
  Window w = Window::centered_box(2, 1);
  WindowField u(w, 1.0);
  CHECK_THROWS(laplacian(laplacian(u)));  // second application has no room
  Window tiny;
  tiny.d = 2;
  tiny.lo = {0, 0};
  tiny.hi = {0, 5};
  WindowField v(tiny, 1.0);
  CHECK_THROWS(grad_i(v, 0));
  CHECK_NOTHROW(grad_i(v, 1));
}

TEST_CASE("mixed-domain arithmetic is a hard error") {
  Window a = Window::centered_box(2, 3), b = Window::centered_box(2, 2);
  WindowField fa(a, 1.0), fb(b, 1.0);
  CHECK_THROWS(product(fa, fb));
}

TEST_CASE("norms: plain vs averaged, p = infinity path") {
  std::vector<double> u{1, 1, 1, 1};
  CHECK(norm_plain(u, 2.0) == doctest::Approx(2.0));
  CHECK(norm_avg(u, 2.0) == doctest::Approx(1.0));
  std::vector<double> c{-3.5, -3.5, -3.5};
  for (double p : std::vector<double>{1.0, 2.0, 3.7, INFINITY}) CHECK(norm_avg(c, p) == doctest::Approx(3.5));
  CHECK(norm_plain(c, INFINITY) == doctest::Approx(3.5));
  std::vector<double> empty;
  CHECK_THROWS(norm_plain(empty, 2.0));
}

TEST_CASE("averaged norm is nondecreasing in p (Jensen)") {
  RngStream rs(77, "norm", 0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> u(50);
    for (double& x : u) x = rs.normal();
    double prev = 0;
    for (double p : std::vector<double>{1.0, 1.5, 2.0, 3.0, 6.0, 12.0, INFINITY}) {
      double cur = norm_avg(u, p);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}
