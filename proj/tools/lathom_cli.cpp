// Command-line runner for the lattice homogenization toolkit: corrector
// computation, homogenized-matrix estimation, boundary-operator benchmarks,
// the excess-decay experiment, and the acceptance suite.
//
// Exit codes: 0 success, 1 compute failure, 2 invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "lathom/acceptance.hpp"
#include "lathom/correctors.hpp"
#include "lathom/excess.hpp"
#include "lathom/extension.hpp"
#include "lathom/io.hpp"
#include "lathom/rng.hpp"
#include "lathom/surface.hpp"
#include "lathom/walk.hpp"

using namespace lathom;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  int d = 2;
  int L = 32;
  int R = 16;
  int rho = 4;
  std::vector<int> radii;
  std::string law = "lognormal:0,1";
  double p = 4, q = 4;
  double eps = 0.2;
  int m = -1;
  uint64_t seed = 1;
  int seeds = 1;
  double tol = 1e-10;
  double horizon = 50.0;
  long paths = 4000;
  int threads = 1;
  std::string out = "out";
  std::string env_in, env_out;
  bool verbose = false;

  json to_json() const {
    json j;
    j["command"] = command;
    j["d"] = d;
    j["L"] = L;
    j["R"] = R;
    j["rho"] = rho;
    j["radii"] = radii;
    j["law"] = law;
    j["p"] = p;
    j["q"] = q;
    j["eps"] = eps;
    j["m"] = m;
    j["seed"] = seed;
    j["seeds"] = seeds;
    j["tol"] = tol;
    j["horizon"] = horizon;
    j["paths"] = paths;
    j["threads"] = threads;
    j["env_in"] = env_in;
    j["env_out"] = env_out;
    return j;
  }
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--d", cfg.d, "lattice dimension");
  cmd->add_option("--L", cfg.L, "torus side");
  cmd->add_option("--R", cfg.R, "box radius");
  cmd->add_option("--rho", cfg.rho, "cutoff/annulus width");
  cmd->add_option("--radii", cfg.radii, "window radii list");
  cmd->add_option("--law", cfg.law, "conductance law, e.g. lognormal:0,1");
  cmd->add_option("--p", cfg.p, "moment exponent p");
  cmd->add_option("--q", cfg.q, "moment exponent q");
  cmd->add_option("--eps", cfg.eps, "smoothing scale");
  cmd->add_option("--m", cfg.m, "explicit smoothing steps (overrides --eps)");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--seeds", cfg.seeds, "number of seeds");
  cmd->add_option("--tol", cfg.tol, "solver relative-residual tolerance");
  cmd->add_option("--T", cfg.horizon, "walk horizon");
  cmd->add_option("--paths", cfg.paths, "walk path count");
  cmd->add_option("--threads", cfg.threads, "worker thread cap");
  cmd->add_option("--out", cfg.out, "output directory");
  cmd->add_option("--env-in", cfg.env_in, "read the environment from a file");
  cmd->add_option("--env-out", cfg.env_out, "write the sampled environment to a file");
  cmd->add_flag("--verbose", cfg.verbose, "emit solver reports as JSON lines");
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_manifest(const RunConfig& cfg, const std::filesystem::path& dir, const json& extra) {
  json j;
  j["version"] = kVersion;
  j["config"] = cfg.to_json();
  j["config_hash"] = config_hash(cfg.to_json().dump());
  j["results"] = extra;
  std::ofstream os(dir / (cfg.command + "_manifest.json"));
  os << j.dump(2) << "\n";
}

void print_report(const RunConfig& cfg, const SolveReport& rep, const char* what) {
  if (!cfg.verbose) return;
  json j{{"solver", what},
         {"iterations", rep.iterations},
         {"rel_residual", rep.rel_residual},
         {"seconds", rep.seconds}};
  std::cout << j.dump() << "\n";
}

Environment obtain_environment(const RunConfig& cfg) {
  if (!cfg.env_in.empty()) return read_environment(cfg.env_in);
  Environment env = sample_environment(LawSpec::parse(cfg.law), cfg.d, cfg.L, cfg.seed);
  if (!cfg.env_out.empty()) write_environment(cfg.env_out, env);
  return env;
}

int cmd_homogenize(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  Environment env = obtain_environment(cfg);
  SolveOptions opt{cfg.tol, 400000, cfg.verbose};
  std::vector<SolveReport> reps;
  std::vector<VertexField> phi = compute_phi(env, opt, &reps);
  for (const auto& r : reps) print_report(cfg, r, "phi");
  std::vector<double> ah, fm;
  std::vector<VectorField> q;
  compute_ahom(env, phi, ah, fm, q);
  MomentReport mom = moment_report(env, cfg.p, cfg.q, 1e18);
  json out;
  out["ah_diag"] = ah;
  out["flux_mean"] = fm;
  out["avnorm_mu"] = mom.avnorm_mu;
  out["avnorm_mu_inv"] = mom.avnorm_mu_inv;
  write_manifest(cfg, dir, out);
  std::cout << "a_h diagonal:";
  for (double a : ah) std::cout << " " << a;
  std::cout << "\noff-diagonal flux means:";
  for (int i = 0; i < env.dim(); ++i)
    for (int j = 0; j < env.dim(); ++j)
      if (i != j) std::cout << " " << fm[i * env.dim() + j];
  std::cout << "\n";
  return 0;
}

int cmd_correctors(const RunConfig& cfg, bool sigma_focus) {
  auto dir = prepare_out(cfg);
  Environment env = obtain_environment(cfg);
  SolveOptions opt{cfg.tol, 400000, cfg.verbose};
  CorrectorSet cs = compute_correctors(env, opt, /*with_sigma=*/true);
  for (const auto& r : cs.phi_reports) print_report(cfg, r, "phi");
  for (const auto& r : cs.sigma_reports) print_report(cfg, r, "sigma");
  CorrectorResiduals res = corrector_residuals(env, cs);

  for (int i = 0; i < cs.d; ++i)
    write_field_binary((dir / ("phi" + std::to_string(i) + ".lhf")).string(), cs.phi[i]);
  for (int i = 0; i < cs.d; ++i)
    for (int j = 0; j < cs.d; ++j)
      for (int k = j + 1; k < cs.d; ++k)
        write_field_binary(
            (dir / ("sigma" + std::to_string(i) + std::to_string(j) + std::to_string(k) + ".lhf")).string(),
            cs.sig(i, j, k));

  json out;
  out["ah_diag"] = cs.ah_diag;
  out["flux_mean"] = cs.flux_mean;
  out["residual_q_divergence"] = res.q_divergence;
  out["residual_sigma_potential"] = res.sigma_potential;
  out["residual_sigma_equation"] = res.sigma_equation;
  write_manifest(cfg, dir, out);

  if (sigma_focus) {
    std::cout << "sigma residuals: |div* sigma + q| " << res.sigma_potential << ", poisson "
              << res.sigma_equation << "\n";
  } else {
    std::cout << "a_h diagonal:";
    for (double a : cs.ah_diag) std::cout << " " << a;
    std::cout << "\nresiduals: q-div " << res.q_divergence << ", sigma-potential "
              << res.sigma_potential << "\n";
  }
  double budget = 10 * cfg.tol;
  return (res.q_divergence <= budget && res.sigma_potential <= budget) ? 0 : 1;
}

int cmd_identity_check(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  const int L = 2 * cfg.R + 8;
  Environment torus = sample_environment(LawSpec::parse(cfg.law), cfg.d, L, cfg.seed);
  SolveOptions opt{cfg.tol, 400000, cfg.verbose};
  CorrectorSet cs = compute_correctors(torus, opt);
  BoxGeometry g(cfg.d, cfg.R);
  Environment omega = restrict_to_box(torus, cfg.R);
  uint64_t bnd_seed = RngStream(cfg.seed, "identity-bnd", 0).next_u64();
  VertexField u = random_harmonic(omega, g, bnd_seed, opt);
  Environment omega_h = axis_homogeneous(cs.ah_diag, cfg.d, cfg.R);
  VertexField v = random_harmonic(omega_h, g, bnd_seed, opt);
  CutoffProfile c = cutoff(g, cfg.rho);
  EnergyIdentityResult res = energy_identity_check(omega, g, cs, u, v, c.eta);

  json out;
  out["lhs"] = res.lhs;
  out["rhs_bulk"] = res.rhs_bulk;
  out["rhs_boundary"] = res.rhs_boundary;
  out["rhs_corrector"] = res.rhs_corrector;
  out["residual"] = res.residual;
  out["hyp_u"] = res.hyp_u;
  out["hyp_v"] = res.hyp_v;
  out["hyp_phi"] = res.hyp_phi;
  out["hyp_sigma"] = res.hyp_sigma;
  out["hyp_sigma_antisym"] = res.hyp_sigma_antisym;
  out["hyp_eta_support"] = res.hyp_eta_support;
  write_manifest(cfg, dir, out);

  std::cout << "energy identity: lhs " << res.lhs << ", rhs " << res.rhs_total << ", residual "
            << res.residual << "\n";
  double budget = 10 * cfg.tol;
  if (!res.hypotheses_ok(budget))
    std::cout << "warning: hypothesis residuals above " << budget << " (u " << res.hyp_u << ", v "
              << res.hyp_v << ", phi " << res.hyp_phi << ", sigma " << res.hyp_sigma << ")\n";
  return res.residual <= 1e-8 ? 0 : 1;
}

int cmd_excess_decay(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  std::vector<int> radii = cfg.radii;
  if (radii.empty()) radii = {cfg.R / 8, cfg.R / 4, cfg.R / 2};
  SolveOptions opt{cfg.tol, 400000, cfg.verbose};
  DecayTable table = excess_decay_experiment(LawSpec::parse(cfg.law), cfg.d, cfg.R, radii, cfg.p,
                                             cfg.q, 1e18, cfg.seeds, cfg.seed, opt);
  std::ofstream csv(dir / "excess_decay.csv");
  csv << "seed,R,r,exc,exc_nophi,ratio,ratio_nophi";
  for (int i = 0; i < cfg.d; ++i) csv << ",xi_" << (i + 1);
  csv << ",lambda,lambda_bar,alpha_hat,moment_ok\n";
  csv.precision(12);
  for (const auto& row : table.rows) {
    csv << row.seed << "," << cfg.R << "," << row.r << "," << row.exc << "," << row.exc_nophi << ","
        << row.ratio << "," << row.ratio_nophi;
    for (double x : row.xi) csv << "," << x;
    csv << "," << row.lambda << "," << row.lambda_bar << "," << table.alpha_hat << ","
        << (row.moment_ok ? 1 : 0) << "\n";
  }
  json out;
  out["radii"] = table.radii;
  out["median_ratio"] = table.median_ratio;
  out["median_ratio_nophi"] = table.median_ratio_nophi;
  out["alpha_hat"] = table.alpha_hat;
  write_manifest(cfg, dir, out);
  std::cout << "alpha_hat " << table.alpha_hat << "; median ratios:";
  for (size_t i = 0; i < table.radii.size(); ++i)
    std::cout << " r=" << table.radii[i] << ":" << table.median_ratio[i];
  std::cout << "\n";
  return 0;
}

int cmd_liouville(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  Environment env = obtain_environment(cfg);
  std::vector<int> radii = cfg.radii;
  if (radii.empty()) radii = {cfg.R / 4, cfg.R / 2};
  SolveOptions opt{cfg.tol, 400000, cfg.verbose};
  LiouvilleReport rep = liouville_dimension(env, cfg.R, radii, cfg.seeds, cfg.seed, opt);
  json out;
  out["gram_eigenvalues"] = rep.gram_eigenvalues;
  out["radii"] = rep.radii;
  out["distances"] = rep.distances;
  write_manifest(cfg, dir, out);
  std::cout << "gram eigenvalues (normalized corrected-affine family):";
  for (double e : rep.gram_eigenvalues) std::cout << " " << e;
  std::cout << "\n";
  return rep.gram_eigenvalues.front() > 0 ? 0 : 1;
}

int cmd_smooth_bench(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  std::ofstream csv(dir / "smooth_bench.csv");
  csv << "R,eps,m,quantity,value\n";
  csv.precision(12);
  std::vector<int> Rs = cfg.radii.empty() ? std::vector<int>{8, 16, 32, 64} : cfg.radii;
  for (int R : Rs) {
    BoxGeometry g(cfg.d, R);
    SmoothingStack s = cfg.m >= 0 ? SmoothingStack(g, cfg.m) : SmoothingStack(g, cfg.eps);
    const long nb = static_cast<long>(g.boundary().size());
    double w48 = 0, w49 = 0, w50 = 0;
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<double> u(nb, 0.0);
      if (rep == 0)
        u[0] = 1.0;
      else {
        RngStream rs(cfg.seed, "bench", static_cast<uint64_t>(R * 100 + rep));
        for (double& x : u) x = rs.normal();
      }
      auto su = s.smooth(u);
      double n1 = norm_avg(u, 1.0);
      w48 = std::max(w48, norm_avg(su, 2.0) / (std::pow(s.eps(), -0.5) * n1));
      std::vector<double> gu, gsu, diff(nb);
      for (const auto& e : g.edges_tan()) {
        gu.push_back(u[g.boundary_pos(e.head)] - u[g.boundary_pos(e.tail)]);
        gsu.push_back(su[g.boundary_pos(e.head)] - su[g.boundary_pos(e.tail)]);
      }
      double gn1 = norm_avg(gu, 1.0);
      if (gn1 > 0) {
        w49 = std::max(w49, norm_avg(gsu, 2.0) / (std::pow(s.eps(), -0.5) * gn1));
        for (long k = 0; k < nb; ++k) diff[k] = u[k] - su[k];
        w50 = std::max(w50, norm_avg(diff, 1.0) / (s.eps() * R * gn1));
      }
    }
    csv << R << "," << s.eps() << "," << s.steps() << ",gain_r2," << w48 << "\n";
    csv << R << "," << s.eps() << "," << s.steps() << ",grad_gain_r2," << w49 << "\n";
    csv << R << "," << s.eps() << "," << s.steps() << ",closeness," << w50 << "\n";
    // operator export for external inspection
    std::vector<std::tuple<long, long, double>> trip;
    s.export_step_triplets(trip);
    std::ofstream ts(dir / ("smoother_step_R" + std::to_string(R) + ".txt"));
    for (auto [r, c, w] : trip) ts << r << " " << c << " " << w << "\n";
    s.export_modifier_triplets(trip);
    std::ofstream tz(dir / ("modifier_R" + std::to_string(R) + ".txt"));
    for (auto [r, c, w] : trip) tz << r << " " << c << " " << w << "\n";
  }
  json out;
  out["note"] = "see smooth_bench.csv";
  write_manifest(cfg, dir, out);
  std::cout << "smoothing constants written to " << (dir / "smooth_bench.csv") << "\n";
  return 0;
}

int cmd_extend_bench(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  const int L = std::max(cfg.L, 2 * cfg.R + 8);
  SolveOptions opt{cfg.tol, 400000, cfg.verbose};
  std::ofstream csv(dir / "extend_bench.csv");
  csv << "R,eps,p,q,seed,quantity,value\n";
  csv.precision(12);
  json all = json::array();
  for (int s = 0; s < cfg.seeds; ++s) {
    uint64_t env_seed = RngStream(cfg.seed, "extb-env", static_cast<uint64_t>(s)).next_u64();
    uint64_t bnd_seed = RngStream(cfg.seed, "extb-bnd", static_cast<uint64_t>(s)).next_u64();
    Environment torus = sample_environment(LawSpec::parse(cfg.law), cfg.d, L, env_seed);
    std::vector<VertexField> phi = compute_phi(torus, opt);
    std::vector<double> ah, fm;
    std::vector<VectorField> q;
    compute_ahom(torus, phi, ah, fm, q);
    BoxGeometry g(cfg.d, cfg.R);
    Environment omega = restrict_to_box(torus, cfg.R);
    VertexField u = random_harmonic(omega, g, bnd_seed, opt);
    ExtensionProblem pb;
    pb.omega = &omega;
    pb.geom = &g;
    pb.ah_diag = ah;
    pb.p = cfg.p;
    pb.q = cfg.q;
    pb.eps = cfg.eps;
    pb.m = cfg.m;
    pb.solve = opt;
    for (char which : (cfg.p == cfg.q ? std::string("DN") : std::string("A"))) {
      DiagnosticBundle b = diagnostics(pb, u, which, cfg.rho);
      auto emit = [&](const char* name, double value) {
        csv << cfg.R << "," << b.eps << "," << cfg.p << "," << cfg.q << "," << env_seed << ","
            << b.branch << "_" << name << "," << value << "\n";
      };
      emit("boundary_B", b.boundary_B);
      emit("boundary_ratio", b.boundary_ratio);
      emit("energy", b.energy);
      emit("energy_ratio", b.energy_ratio);
      emit("annulus_ratio", b.annulus_ratio);
      emit("lambda", b.lambda);
      emit("lambda_bar", b.lambda_bar);
      emit("reg_tan_over_nor", b.reg_transfer_tan_over_nor);
      emit("reg_nor_over_tan", b.reg_transfer_nor_over_tan);
      emit("dual_route_residual", b.dual_route_residual);
      emit("dual_gain", b.smooth_dual_gain);
      json jb;
      jb["branch"] = std::string(1, b.branch);
      jb["seed"] = env_seed;
      jb["theta_pq"] = b.theta_pq;
      jb["boundary_B"] = b.boundary_B;
      jb["energy_ratio"] = b.energy_ratio;
      jb["annulus_ratio"] = b.annulus_ratio;
      jb["dual_route_residual"] = b.dual_route_residual;
      all.push_back(jb);
    }
  }
  write_manifest(cfg, dir, all);
  std::cout << "extension diagnostics written to " << (dir / "extend_bench.csv") << "\n";
  return 0;
}

int cmd_walk(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  Environment env = obtain_environment(cfg);
  Coord start{};
  WalkEstimate est = simulate_walk(env, start, cfg.horizon, cfg.paths, cfg.seed, /*uniform_start=*/true);
  json out;
  out["T"] = est.T;
  out["n_paths"] = est.n_paths;
  out["cov"] = est.cov;
  out["se"] = est.se;
  out["normalization"] = est.normalization;
  write_manifest(cfg, dir, out);
  std::cout << "walk covariance (" << est.normalization << ", T=" << est.T << ", paths=" << est.n_paths
            << "):";
  for (int i = 0; i < est.d; ++i) std::cout << " " << est.cov[i * est.d + i];
  std::cout << "  (se";
  for (int i = 0; i < est.d; ++i) std::cout << " " << est.se[i * est.d + i];
  std::cout << ")\n";
  return 0;
}

int cmd_acceptance(const RunConfig& cfg) {
  auto dir = prepare_out(cfg);
  AcceptanceOptions aopt;
  aopt.master_seed = cfg.seed;
  aopt.threads = cfg.threads;
  aopt.out_dir = cfg.out;
  aopt.verbose = cfg.verbose;
  auto results = run_acceptance(aopt);
  bool all_pass = true;
  json out = json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("[%s] %02d %-24s %s  (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str(), r.seconds);
    out.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
  }
  write_manifest(cfg, dir, out);
  std::printf("%s\n", all_pass ? "acceptance: ALL PASS" : "acceptance: FAILURES PRESENT");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice stochastic-homogenization toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* c_corr = app.add_subcommand("correctors", "corrector set phi, q, a_h, sigma on a torus");
  auto* c_hom = app.add_subcommand("homogenize", "first-order corrector and homogenized matrix");
  auto* c_sigma = app.add_subcommand("sigma", "flux corrector sigma and its residuals");
  auto* c_decay = app.add_subcommand("excess-decay", "excess decay experiment over window radii");
  auto* c_ident = app.add_subcommand("identity-check", "energy identity of the homogenization error");
  auto* c_liou = app.add_subcommand("liouville-dim", "corrected-affine Gram spectrum and span distances");
  auto* c_smooth = app.add_subcommand("smooth-bench", "boundary smoother contract constants");
  auto* c_ext = app.add_subcommand("extend-bench", "harmonic extension diagnostics");
  auto* c_walk = app.add_subcommand("walk", "variable-speed random walk covariance estimate");
  auto* c_acc = app.add_subcommand("acceptance", "full acceptance suite");
  for (auto* c : {c_corr, c_hom, c_sigma, c_decay, c_ident, c_liou, c_smooth, c_ext, c_walk, c_acc})
    add_common_flags(c, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_corr->parsed()) {
      cfg.command = "correctors";
      return cmd_correctors(cfg, false);
    }
    if (c_hom->parsed()) {
      cfg.command = "homogenize";
      return cmd_homogenize(cfg);
    }
    if (c_sigma->parsed()) {
      cfg.command = "sigma";
      return cmd_correctors(cfg, true);
    }
    if (c_decay->parsed()) {
      cfg.command = "excess-decay";
      return cmd_excess_decay(cfg);
    }
    if (c_ident->parsed()) {
      cfg.command = "identity-check";
      return cmd_identity_check(cfg);
    }
    if (c_liou->parsed()) {
      cfg.command = "liouville-dim";
      return cmd_liouville(cfg);
    }
    if (c_smooth->parsed()) {
      cfg.command = "smooth-bench";
      return cmd_smooth_bench(cfg);
    }
    if (c_ext->parsed()) {
      cfg.command = "extend-bench";
      return cmd_extend_bench(cfg);
    }
    if (c_walk->parsed()) {
      cfg.command = "walk";
      return cmd_walk(cfg);
    }
    if (c_acc->parsed()) {
      cfg.command = "acceptance";
      return cmd_acceptance(cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "compute failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
