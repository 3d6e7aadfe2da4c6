#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lathom/walk.hpp"

using namespace lathom;

TEST_CASE("homogeneous walk: MSD/(2T) recovers the conductance") {
  // generator applied to x_1^2 gives exactly 2c, so MSD grows like 2cT
  double c = 1.7;
  Environment env = homogeneous(c, 2, Topology::TorusT, 16);
  Coord start{};
  WalkEstimate est = simulate_walk(env, start, 40.0, 4000, 2024);
  for (int i = 0; i < 2; ++i) {
    CAPTURE(i);
    CHECK(std::fabs(est.cov[i * 2 + i] - c) < 3 * est.se[i * 2 + i]);
  }
}

TEST_CASE("homogeneous walk: off-diagonal vanishes") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 16);
  Coord start{};
  WalkEstimate est = simulate_walk(env, start, 30.0, 4000, 7);
  CHECK(std::fabs(est.cov[1]) < 3 * est.se[1] + 1e-12);
}

TEST_CASE("standard error shrinks like n^{-1/2}") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 16);
  Coord start{};
  WalkEstimate a = simulate_walk(env, start, 20.0, 1000, 5);
  WalkEstimate b = simulate_walk(env, start, 20.0, 4000, 5);
  double ratio = a.se[0] / b.se[0];
  CHECK(ratio > 1.5);
  CHECK(ratio < 3.0);
}

TEST_CASE("walk input validation") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 8);
  Coord start{};
  CHECK_THROWS(simulate_walk(env, start, -1.0, 10, 1));
  CHECK_THROWS(simulate_walk(env, start, 1.0, 0, 1));
  Environment box = restrict_to_box(env, 3);
  CHECK_THROWS(simulate_walk(box, start, 1.0, 10, 1));
}

TEST_CASE("walk is reproducible from the seed") {
  Environment env = homogeneous(1.0, 2, Topology::TorusT, 8);
  Coord start{};
  WalkEstimate a = simulate_walk(env, start, 5.0, 100, 33);
  WalkEstimate b = simulate_walk(env, start, 5.0, 100, 33);
  CHECK(a.cov == b.cov);
}
