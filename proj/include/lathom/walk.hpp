#pragma once

#include <vector>

#include "lathom/environment.hpp"

namespace lathom {

// Variable-speed random walk among the conductances: at x the walk waits an
// exponential time with rate m_x = sum_{y~x} mu_xy and jumps to y with
// probability mu_xy / m_x.  Positions wrap on the torus while the real
// displacement is unfolded, and the report estimates
//   cov[i][j] ~ (1/(2T)) E[(X_T . e_i)(X_T . e_j)],
// which for the homogeneous environment mu = c equals c in every diagonal
// entry (the generator applied to x_i^2 gives exactly 2c).
struct WalkEstimate {
  int d = 0;
  double T = 0;
  long n_paths = 0;
  std::vector<double> cov;  // d*d, row-major
  std::vector<double> se;   // standard errors, d*d
  // The factor linking MSD/(2T) to a_h is a convention validated against the
  // homogeneous oracle, not fixed by theory alone; flagged for the reader.
  const char* normalization = "msd_over_2T";
};

WalkEstimate simulate_walk(const Environment& env, const Coord& start, double T, long n_paths,
                           uint64_t seed, bool uniform_start = false);

}  // namespace lathom
