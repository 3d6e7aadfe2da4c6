#include "lathom/walk.hpp"

#include <cmath>

#include "lathom/rng.hpp"

namespace lathom {

WalkEstimate simulate_walk(const Environment& env, const Coord& start, double T, long n_paths,
                           uint64_t seed, bool uniform_start) {
  if (env.topology() != Topology::TorusT)
    throw std::invalid_argument("simulate_walk: walk requires a periodic environment");
  if (T <= 0) throw std::invalid_argument("simulate_walk: horizon must be positive");
  if (n_paths <= 0) throw std::invalid_argument("simulate_walk: need at least one path");

  const int d = env.dim();
  Torus t(d, env.size());
  WalkEstimate est;
  est.d = d;
  est.T = T;
  est.n_paths = n_paths;
  est.cov.assign(d * d, 0.0);
  est.se.assign(d * d, 0.0);
  std::vector<double> sum(d * d, 0.0), sum_sq(d * d, 0.0);

  std::vector<double> rates(2 * d);
  for (long path = 0; path < n_paths; ++path) {
    RngStream rs(seed, "walk-path", static_cast<uint64_t>(path));
    long pos = uniform_start ? static_cast<long>(rs.below(static_cast<uint64_t>(t.num_vertices())))
                             : t.index(start);
    std::vector<long> disp(d, 0);  // unfolded displacement
    double time = 0;
    while (true) {
      double m = 0;
      for (int i = 0; i < d; ++i) {
        rates[2 * i] = env.edge_t(pos, i);                          // +e_i
        rates[2 * i + 1] = env.edge_t(t.neighbor(pos, i, -1), i);   // -e_i
        m += rates[2 * i] + rates[2 * i + 1];
      }
      time += rs.exponential(m);
      if (time > T) break;
      double u = rs.uniform01() * m;
      int move = 2 * d - 1;
      for (int k = 0; k < 2 * d; ++k) {
        u -= rates[k];
        if (u <= 0) {
          move = k;
          break;
        }
      }
      int axis = move / 2;
      int step = (move % 2 == 0) ? +1 : -1;
      pos = t.neighbor(pos, axis, step);
      disp[axis] += step;
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double val = static_cast<double>(disp[i]) * static_cast<double>(disp[j]) / (2.0 * T);
        sum[i * d + j] += val;
        sum_sq[i * d + j] += val * val;
      }
  }
  for (int k = 0; k < d * d; ++k) {
    double mean = sum[k] / static_cast<double>(n_paths);
    double var = sum_sq[k] / static_cast<double>(n_paths) - mean * mean;
    est.cov[k] = mean;
    est.se[k] = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_paths));
  }
  return est;
}

}  // namespace lathom
