#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lathom/environment.hpp"
#include "lathom/geometry.hpp"
#include "lathom/rng.hpp"

using namespace lathom;

TEST_CASE("homogeneous environment: constant edges, coefficient field diagonal") {
  Environment env = homogeneous(2.5, 2, Topology::TorusT, 4);
  CHECK(env.num_slots() == 32);  // 16 vertices * 2 axes
  for (double mu : env.values()) CHECK(mu == 2.5);
  CoefficientField a{&env};
  CHECK(a.a(3, 0, 0) == 2.5);
  CHECK(a.a(3, 1, 1) == 2.5);
  CHECK(a.a(3, 0, 1) == 0.0);
  CHECK_THROWS(homogeneous(-1.0, 2, Topology::TorusT, 4));
  // constants are invariant under reflection and shifts
  Environment r = reflect(env, 0);
  CHECK(r.values() == env.values());
  Environment s = shift(env, make_coord(2, {1, 3}));
  CHECK(s.values() == env.values());
}

TEST_CASE("two-point law takes exactly the two prescribed values") {
  LawSpec law = LawSpec::parse("two_point:4");
  Environment env = sample_iid(law, 2, 16, 99);
  std::set<double> seen(env.values().begin(), env.values().end());
  CHECK(seen.size() == 2);
  CHECK(seen.count(4.0) == 1);
  CHECK(seen.count(0.25) == 1);
}

TEST_CASE("lognormal sample mean matches the analytic value within 3 standard errors") {
  LawSpec law = LawSpec::parse("lognormal:0,1");
  // 2 * 724^2 > 10^6 edges; pooled mean against exp(1/2)
  Environment env = sample_iid(law, 2, 724, 7);
  double mean = 0, sq = 0;
  long n = env.num_slots();
  for (double x : env.values()) {
    mean += x;
    sq += x * x;
  }
  mean /= n;
  double sd = std::sqrt(sq / n - mean * mean);
  double se = sd / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(mean - std::exp(0.5)) < 3 * se);
}

TEST_CASE("uniform law: bounded, positive, finite moments") {
  LawSpec law = LawSpec::parse("uniform:1,2");
  Environment env = sample_iid(law, 2, 32, 5);
  CHECK(env.min_conductance() >= 1.0);
  MomentReport rep = moment_report(env, 4, 4, 10.0);
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.avnorm_mu));
  // essential sup of the law; the empirical max sits just below it
  MomentReport repinf = moment_report(env, INFINITY, INFINITY, 10.0);
  CHECK(repinf.avnorm_mu == doctest::Approx(2.0).epsilon(0.02));
  CHECK(repinf.avnorm_mu_inv == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("moment report values for simple laws") {
  Environment h2 = homogeneous(2.0, 2, Topology::TorusT, 8);
  MomentReport rep = moment_report(h2, 3, 5, 3.0);
  CHECK(rep.avnorm_mu == doctest::Approx(2.0));
  CHECK(rep.avnorm_mu_inv == doctest::Approx(0.5));
  CHECK(rep.pass);

  // two_point(4): averaged p-norm -> ((4^p + 4^{-p})/2)^{1/p}
  LawSpec law = LawSpec::parse("two_point:4");
  Environment env = sample_iid(law, 2, 128, 3);
  double p = 3;
  MomentReport r2 = moment_report(env, p, p, 1e9);
  double expect = std::pow((std::pow(4.0, p) + std::pow(4.0, -p)) / 2.0, 1.0 / p);
  CHECK(r2.avnorm_mu == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("pareto tail controls which moments explode") {
  LawSpec law = LawSpec::parse("pareto:3");
  Environment env = sample_iid(law, 2, 64, 11);
  CHECK(env.min_conductance() >= 1.0);
  MomentReport low = moment_report(env, 2, 2, 1e9);
  CHECK(std::isfinite(low.avnorm_mu));
  // p above the tail index: the empirical norm is dominated by the largest
  // sample and grows without bound; just confirm it is much larger
  MomentReport high = moment_report(env, 12, 2, 1e9);
  CHECK(high.avnorm_mu > 3 * low.avnorm_mu);
}

TEST_CASE("determinism: same seed gives bit-identical environments") {
  LawSpec law = LawSpec::parse("lognormal:0,1");
  Environment a = sample_iid(law, 2, 16, 42);
  Environment b = sample_iid(law, 2, 16, 42);
  CHECK(a.values() == b.values());
  Environment c = sample_iid(law, 2, 16, 43);
  CHECK(a.values() != c.values());
}

TEST_CASE("shift and reflect group laws") {
  LawSpec law = LawSpec::parse("uniform:1,3");
  Environment env = sample_iid(law, 2, 8, 17);
  Coord a = make_coord(2, {3, 5});
  Coord minus_a = make_coord(2, {-3, -5});
  Environment back = shift(shift(env, a), minus_a);
  CHECK(back.values() == env.values());
  Coord zero{};
  CHECK(shift(env, zero).values() == env.values());
  Environment twice = reflect(reflect(env, 1), 1);
  CHECK(twice.values() == env.values());
  Environment box = restrict_to_box(env, 3);
  CHECK_THROWS(shift(box, a));
}

TEST_CASE("layered environment columns") {
  Environment env = sample_layered(1.0, 4.0, 2, 8);
  Torus t(2, 8);
  for (long v = 0; v < t.num_vertices(); ++v) {
    double want = (t.coord(v)[0] % 2 == 0) ? 1.0 : 4.0;
    CHECK(env.edge_t(v, 0) == want);
    CHECK(env.edge_t(v, 1) == want);
  }
}

TEST_CASE("box restriction matches the torus window") {
  LawSpec law = LawSpec::parse("uniform:1,2");
  Environment env = sample_iid(law, 2, 16, 23);
  Environment box = restrict_to_box(env, 4);
  BoxGeometry g(2, 4);
  Torus t(2, 16);
  for (long v = 0; v < g.num_closed(); ++v) {
    Coord x = g.coord(v);
    for (int i = 0; i < 2; ++i)
      if (x[i] < 4) CHECK(box.edge_b(v, i) == env.edge_t(t.index(x), i));
  }
  CHECK_THROWS(restrict_to_box(env, 8));  // needs L >= 2R+2
}

TEST_CASE("gff: positivity, exact inverses, d >= 3 only") {
  CHECK_THROWS(sample_gff_exp(2, 8, 1));
  Environment env = sample_gff_exp(3, 8, 1);
  CHECK(env.min_conductance() > 0.0);
  for (double mu : env.values()) CHECK(std::fabs(mu * (1.0 / mu) - 1.0) <= 1e-15);
}

TEST_CASE("gff variance matches the spectral Green-function diagonal within 5%") {
  const int d = 3, L = 16;
  Torus t(d, L);
  // independent direct evaluation of Var(phi_0) = (1/N) sum_{k != 0} 1/lambda(k)
  double want = 0;
  for (long f = 1; f < t.num_vertices(); ++f) {
    Coord k = t.coord(f);
    double lam = 0;
    for (int j = 0; j < d; ++j) {
      double s = std::sin(M_PI * k[j] / L);
      lam += 4 * s * s;
    }
    want += 1.0 / lam;
  }
  want /= static_cast<double>(t.num_vertices());

  // pooled variance over sites (translation invariance) and samples
  const int samples = 48;
  double acc = 0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> phi = sample_gff_field(d, L, 1000 + s);
    double m = 0;
    for (double x : phi) m += x * x;
    acc += m / static_cast<double>(phi.size());
  }
  acc /= samples;
  CHECK(acc == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("law parsing rejects bad input") {
  CHECK_THROWS(LawSpec::parse("nonsense:1"));
  CHECK_THROWS(LawSpec::parse("uniform:2,1"));
  CHECK_THROWS(LawSpec::parse("two_point:-1"));
  CHECK_THROWS(LawSpec::parse("constant:0"));
  LawSpec ok = LawSpec::parse("lognormal:0,1");
  CHECK(ok.str() == "lognormal:0,1");
}
