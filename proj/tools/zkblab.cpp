// zkblab: solver runs, kernel and profile tables, and the verification suite.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zkb/config.hpp"
#include "zkb/error.hpp"
#include "zkb/experiments.hpp"
#include "zkb/kernels.hpp"
#include "zkb/profiles.hpp"
#include "zkb/report.hpp"
#include "zkb/solver.hpp"

namespace fs = std::filesystem;
using namespace zkb;

namespace {

struct Options {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 20261016;
  std::vector<std::string> overrides;
  int jobs = 1;
  // kernel-table
  std::optional<double> t, mu;
  std::optional<int> l;
};

struct Context {
  Config cfg = Config::defaults();
  std::string out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::ofstream log;

  void note(const std::string& msg) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::localtime(&now));
    log << stamp << " " << msg << "\n";
    log.flush();
  }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
}

// Builds the layered configuration and prepares the output directory.
void prepare(Context& ctx, const Options& o, const std::string& command) {
  if (!o.config_path.empty()) ctx.cfg.load_file(o.config_path);
  for (const auto& s : o.overrides) ctx.cfg.set(s);
  ctx.seed = o.seed;
  ctx.jobs = std::max(1, o.jobs);
  ctx.out_dir = ctx.cfg.str("output.dir");
  if (!o.out.empty()) ctx.out_dir = o.out;
  if (const char* env = std::getenv("ZKBLAB_OUT"); env && *env) ctx.out_dir = env;
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec || !fs::is_directory(ctx.out_dir)) throw ConfigError("output.dir", "cannot create '" + ctx.out_dir + "'");
  write_text(fs::path(ctx.out_dir) / "effective_config.toml", ctx.cfg.dump());
  ctx.log.open(fs::path(ctx.out_dir) / "zkblab.log", std::ios::app);
  ctx.note(command + " config_hash=" + ctx.cfg.hash() + " seed=" + std::to_string(ctx.seed));
}

std::vector<double> linspace_key(const Config& c, const std::string& key) {
  const auto& v = c.list(key);
  if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2]))
    throw ConfigError(key, "expected [start, stop, count] with an integer count >= 1");
  const int n = int(v[2]);
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * k / (n - 1));
  return out;
}

int report_and_exit(Context& ctx, const std::vector<ExperimentResult>& results) {
  bool ok = true;
  for (const auto& r : results) {
    write_report(ctx.out_dir, r, ctx.cfg.hash(), ctx.seed);
    std::cout << summary_lines(r);
    for (const auto& n : r.notes) std::cout << "  note " << r.experiment << ": " << n << "\n";
    ok = ok && r.pass();
    ctx.note(r.experiment + (r.pass() ? " pass" : " FAIL"));
  }
  std::cout << (ok ? "all verdicts pass" : "some verdicts FAIL") << "\n";
  return ok ? 0 : 1;
}

std::string g17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

DataSpec data_from(const Config& c) { return {c.str("data.kind"), c.num("data.amplitude"), c.num("data.width")}; }

// ---------------------------------------------------------------------------

int cmd_solve(Context& ctx) {
  const SimConfig sc = sim_config_from(ctx.cfg);
  const Field u0 = initial_data_from(ctx.cfg, sc.grid);
  const Trajectory tr = run(u0, sc);
  std::ostringstream os;
  os << "t,l2,linf_u,linf_dxu,l2_dxu,h21,h21_dx,dissipation_residual,boundary_mass\n";
  char buf[256];
  for (const auto& d : tr.diagnostics.series) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", d.t, d.l2, d.linf_u,
                  d.linf_dxu, d.l2_dxu, d.h21, d.h21_dx, d.dissipation_residual, d.boundary_mass);
    os << buf;
  }
  write_text(fs::path(ctx.out_dir) / "diagnostics.csv", os.str());
  if (ctx.cfg.flag("output.write_fields")) {
    std::ostringstream index;
    index << "t,file,l2,linf\n";
    for (std::size_t n = 0; n < tr.snapshots.size(); ++n) {
      const Snapshot& s = tr.snapshots[n];
      std::snprintf(buf, sizeof buf, "snapshot_%03zu.zkb", n);
      write_field((fs::path(ctx.out_dir) / buf).string(), s.u);
      const std::string name = buf;
      std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g\n", s.t, name.c_str(), l2(s.u), linf(s.u));
      index << buf;
    }
    write_text(fs::path(ctx.out_dir) / "snapshots.csv", index.str());
  }
  const auto& last = tr.diagnostics.series.back();
  std::printf("solve: t = %g, ||u|| = %.6e, ||u||_inf = %.6e, dissipation residual = %.3e, steps = %zu\n", last.t,
              last.l2, last.linf_u, last.dissipation_residual, tr.diagnostics.series.size() - 1);
  ctx.note("solve done");
  return 0;
}

int cmd_kernel_table(Context& ctx, const Options& o) {
  if (o.t) ctx.cfg.set("table.t", g17(*o.t));
  if (o.l) ctx.cfg.set("table.l", std::to_string(*o.l));
  if (o.mu) ctx.cfg.set("equation.mu", g17(*o.mu));
  const double t = o.t ? *o.t : ctx.cfg.num("table.t");
  const double mu = o.mu ? *o.mu : ctx.cfg.num("equation.mu");
  const long long l = o.l ? *o.l : ctx.cfg.integer("table.l");
  if (!(t > 0.0)) throw ConfigError("table.t", "must be positive");
  if (!(mu > 0.0)) throw ConfigError("equation.mu", "must be positive");
  if (l < 0 || l > 2) throw ConfigError("table.l", "must be 0, 1 or 2");
  std::ostringstream os;
  os << "x,y,t,mu,l,route,value,est_error\n";
  char buf[256];
  for (double x : linspace_key(ctx.cfg, "table.x"))
    for (double y : linspace_key(ctx.cfg, "table.y")) {
      const KernelValue k = eval_U(x, y, t, mu, int(l));
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%lld,%s,%.17g,%.3e\n", x, y, t, mu, l, route_name(k.route),
                    k.value, k.est_error);
      os << buf;
    }
  write_text(fs::path(ctx.out_dir) / "kernel_table.csv", os.str());
  write_text(fs::path(ctx.out_dir) / "effective_config.toml", ctx.cfg.dump());
  std::cout << "kernel-table: wrote " << (fs::path(ctx.out_dir) / "kernel_table.csv").string() << "\n";
  return 0;
}

int cmd_profile_table(Context& ctx) {
  const Grid g = grid_from(ctx.cfg);
  const Field u0 = initial_data_from(ctx.cfg, g);
  const double t = ctx.cfg.num("table.t");
  const double mu = ctx.cfg.num("equation.mu");
  const long long j = ctx.cfg.integer("table.j"), l = ctx.cfg.integer("table.l");
  if (!(t > 0.0)) throw ConfigError("table.t", "must be positive");
  if (j < 0 || j > 1) throw ConfigError("table.j", "must be 0 or 1");
  if (l < 0 || l > 1) throw ConfigError("table.l", "must be 0 or 1");
  const SliceFunctional M(u0, int(j));
  const Marginal Mj = marginal(u0, int(j));
  WROptions opt;
  opt.l = int(l);
  opt.enforce_hypothesis = false;
  std::ostringstream os;
  os << "x,y,t,j,l,psi,mathV,W,R,M_functional,quality\n";
  char buf[320];
  const auto xs = linspace_key(ctx.cfg, "table.x");
  for (double y : linspace_key(ctx.cfg, "table.y")) {
    const WRSplit s = wj_rj_split(u0, int(j), y, t, mu, opt);
    const SliceValue m = M(-y / t);
    for (double x : xs) {
      // W and R live on the grid line; take the nearest sample in x.
      const double fi = (x + g.Lx()) / g.dx();
      const long i = std::clamp(std::lround(fi), 0L, long(g.Nx()) - 1);
      const ProfileEval pe = eval_psi(M, x, y, t, mu, int(l));
      const double mv = eval_mathV(Mj, x, y, t, mu, int(l));
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.6e\n", x, y, t, j, l,
                    pe.value, mv, s.W[std::size_t(i)], s.R[std::size_t(i)], m.value, m.quality);
      os << buf;
    }
  }
  write_text(fs::path(ctx.out_dir) / "profile_table.csv", os.str());
  std::cout << "profile-table: wrote " << (fs::path(ctx.out_dir) / "profile_table.csv").string() << "\n";
  return 0;
}

struct Presets {
  LinearDecayParams decay;
  ApproximationParams approx;
  LowerBoundParams lower;
  ProfileParams profile;
  InequalityParams ineq;
};

Presets presets_from(const Context& ctx) {
  Presets p;
  const double mu = ctx.cfg.num("equation.mu");
  const DataSpec data = data_from(ctx.cfg);
  p.decay.mu = p.approx.mu = p.lower.mu = p.profile.mu = mu;
  p.decay.data = p.approx.data = p.lower.data = p.profile.data = data;
  if (ctx.cfg.flag("experiment.use_config_grid")) {
    const Grid g = grid_from(ctx.cfg);
    p.decay.grid = p.approx.grid = p.lower.grid = p.profile.grid = g;
  }
  p.ineq.seed = ctx.seed;
  return p;
}

int cmd_verify(Context& ctx) {
  const Presets p = presets_from(ctx);
  ctx.note("nonlinear run start");
  const NonlinearRun shared = nonlinear_run(p.approx.nonlinear);
  ctx.note("nonlinear run done");
  std::vector<std::function<ExperimentResult()>> jobs{
      [&] { return experiment_linear_decay(p.decay); },
      [&] { return experiment_approximation(p.approx, &shared); },
      [&] { return experiment_lower_bound(p.lower, &shared); },
      [&] { return experiment_profile(p.profile, &shared); },
      [&] { return inequality_suite(p.ineq); },
  };
  std::vector<ExperimentResult> results(jobs.size());
  if (ctx.jobs > 1) {
    // Jobs run in waves of ctx.jobs; results keep their fixed order.
    for (std::size_t b = 0; b < jobs.size(); b += std::size_t(ctx.jobs)) {
      std::vector<std::future<ExperimentResult>> wave;
      for (std::size_t k = b; k < std::min(jobs.size(), b + std::size_t(ctx.jobs)); ++k)
        wave.push_back(std::async(std::launch::async, jobs[k]));
      for (std::size_t k = 0; k < wave.size(); ++k) results[b + k] = wave[k].get();
    }
  } else {
    for (std::size_t k = 0; k < jobs.size(); ++k) results[k] = jobs[k]();
  }
  return report_and_exit(ctx, results);
}

int cmd_single(Context& ctx, const std::string& which) {
  const Presets p = presets_from(ctx);
  if (which == "decay") return report_and_exit(ctx, {experiment_linear_decay(p.decay)});
  if (which == "lower-bound") return report_and_exit(ctx, {experiment_lower_bound(p.lower)});
  return report_and_exit(ctx, {experiment_approximation(p.approx)});
}

int cmd_info(Context& ctx) {
  sim_config_from(ctx.cfg).validate();
  std::cout << "zkblab\n"
            << "  u_t + u_xxx + u_yyx - mu u_xx + beta u^p u_x = 0 on a periodic box\n"
            << "  config hash: " << ctx.cfg.hash() << "\n"
            << "  output dir:  " << ctx.out_dir << "\n"
            << "  decay_bound(0, mu, 1) = " << decay_bound(0, ctx.cfg.num("equation.mu"), 1.0) << "\n"
            << "  lower_bound_constant(0, mu) = " << lower_bound_constant(0, ctx.cfg.num("equation.mu")) << "\n"
            << "effective configuration:\n"
            << ctx.cfg.dump();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zkblab: dispersive-dissipative decay laboratory"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "TOML configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (ZKBLAB_OUT overrides)");
    sub->add_option("--seed", o.seed, "seed of the random corpora");
    sub->add_option("--set", o.overrides, "section.key=value override (repeatable)")->take_all()->allow_extra_args(false);
    sub->add_option("--jobs", o.jobs, "independent experiment jobs to run concurrently")->check(CLI::PositiveNumber);
  };
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"solve", "kernel-table", "profile-table", "verify", "decay", "lower-bound", "approx", "info"}) {
    subs[name] = app.add_subcommand(name);
    common(subs[name]);
  }
  subs["solve"]->description("run the ETDRK4 solver and write diagnostics");
  subs["kernel-table"]->description("tabulate d_x^l U on table.x x table.y");
  subs["profile-table"]->description("tabulate psi, V_j, W, R and the M-functional");
  subs["verify"]->description("run the verification experiments");
  subs["decay"]->description("linear decay experiment");
  subs["lower-bound"]->description("lower bound experiment");
  subs["approx"]->description("approximation experiment");
  subs["info"]->description("print constants and the effective configuration");
  subs["kernel-table"]->add_option("--t", o.t, "time");
  subs["kernel-table"]->add_option("--mu", o.mu, "dissipation coefficient");
  subs["kernel-table"]->add_option("--l", o.l, "x-derivative order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Context ctx;
  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;
  try {
    prepare(ctx, o, command);
    if (command == "solve") return cmd_solve(ctx);
    if (command == "kernel-table") return cmd_kernel_table(ctx, o);
    if (command == "profile-table") return cmd_profile_table(ctx);
    if (command == "verify") return cmd_verify(ctx);
    if (command == "info") return cmd_info(ctx);
    return cmd_single(ctx, command);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (ctx.log.is_open()) ctx.note(std::string("error: ") + e.what());
    return 1;
  }
}
