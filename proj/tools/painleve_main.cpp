// Command-line front end: solve, fit, predict, verify, verify-transforms,
// critical-scan and monodromy, all emitting CSV/JSON plus a run record.
//
// Exit codes: 0 success, 1 bad flags or failed verification, 2 numerical
// failure (integration, bracketing, path singularities).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "painleve/asymfit.hpp"
#include "painleve/connection.hpp"
#include "painleve/critical.hpp"
#include "painleve/monodromy.hpp"
#include "painleve/runrecord.hpp"
#include "painleve/series.hpp"
#include "painleve/solver.hpp"
#include "painleve/transforms.hpp"

using namespace painleve;
namespace fs = std::filesystem;

namespace {

double now_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format17(v); }

std::string fmt_c(painleve::cplx z) {
  std::string s = format17(z.real());
  s += (z.imag() < 0 ? " - " : " + ") + format17(std::fabs(z.imag())) + "i";
  return s;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::A: return "A (decreasing)";
    case Regime::B: return "B (increasing)";
    default: return "C (separatrix)";
  }
}

const char* label_name(Label l) {
  switch (l) {
    case Label::subcritical_B: return "subcritical_B";
    case Label::supercritical_A: return "supercritical_A";
    default: return "undecided";
  }
}

struct CommonOpts {
  std::string out_dir_flag;
  fs::path out_dir() const { return resolve_out_dir(out_dir_flag); }
};

int run_solve(double a, double x_max, double tol, const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "solve";
  rec.parameters = {{"a", fmt(a)}, {"x_max", fmt(x_max)}, {"tol", fmt(tol)}};
  const fs::path dir = c.out_dir();
  try {
    auto traj = solve_ivp(a, x_max, tol);
    fs::create_directories(dir);
    {
      std::ofstream os(dir / "trajectory.csv");
      write_trajectory_csv(traj, os);
    }
    {
      std::ofstream os(dir / "phi.dat");
      for (const auto& n : traj.nodes) os << fmt(n.x) << ' ' << fmt(n.phi) << '\n';
    }
    nlohmann::ordered_json j;
    j["a"] = a;
    j["x_max"] = x_max;
    j["tol"] = tol;
    j["seed_x0"] = traj.seed_x0;
    j["nodes"] = traj.nodes.size();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : traj.crossings)
      arr.push_back({{"x_star", v.x_star}, {"k", v.k}, {"eps", v.eps}});
    j["crossings"] = arr;
    std::ofstream(dir / "solve_summary.json") << j.dump(2) << '\n';
    rec.outputs = {(dir / "trajectory.csv").string(), (dir / "phi.dat").string(),
                   (dir / "solve_summary.json").string()};
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::printf("solve: a=%s  range [%s, %s]  nodes=%zu  crossings=%zu\n", fmt(a).c_str(),
                fmt(traj.seed_x0).c_str(), fmt(x_max).c_str(), traj.nodes.size(),
                traj.crossings.size());
    return 0;
  } catch (const std::invalid_argument& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "solve: bad parameters: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "solve failed: %s\n", e.what());
    return 2;
  }
}

int run_fit(double a, double x_max, double tol, double x_lo, int windows, bool refined,
            const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "fit";
  rec.parameters = {{"a", fmt(a)},       {"x_max", fmt(x_max)},     {"tol", fmt(tol)},
                    {"x_lo", fmt(x_lo)}, {"windows", std::to_string(windows)},
                    {"refined", refined ? "true" : "false"}};
  const fs::path dir = c.out_dir();
  try {
    auto traj = solve_ivp(a, x_max, tol);
    auto f = fit(traj, x_lo, windows, refined);
    fs::create_directories(dir);
    std::ofstream os(dir / "fit.json");
    write_fit_json(f, os);
    rec.outputs = {(dir / "fit.json").string()};
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::printf("fit: a=%s sigma=%+d beta=%s gamma=%s drift=%s\n", fmt(a).c_str(), f.sigma,
                fmt(f.beta_fit).c_str(), fmt(f.gamma_fit).c_str(), fmt(f.drift).c_str());
    return 0;
  } catch (const std::invalid_argument& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "fit: bad parameters: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "fit failed: %s\n", e.what());
    return 2;
  }
}

int run_predict(double a, double class_tol, const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "predict";
  rec.parameters = {{"a", fmt(a)}, {"class_tol", fmt(class_tol)}};
  const fs::path dir = c.out_dir();
  auto p = predict(a, class_tol);
  nlohmann::ordered_json j;
  j["a"] = a;
  if (p.regime == Regime::C) {
    std::printf("a = %s lies on the separatrix: phi -> pi/2 = %s\n", fmt(a).c_str(),
                fmt(p.limit_value).c_str());
    j["regime"] = "C";
    j["limit"] = p.limit_value;
  } else {
    std::printf("regime %s  beta = %s  gamma = %s%s\n", regime_name(p.regime),
                fmt(p.beta).c_str(), fmt(p.gamma).c_str(), p.gamma_mod_pi ? " (mod pi)" : "");
    j["regime"] = p.regime == Regime::A ? "A" : "B";
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["gamma_mod_pi"] = p.gamma_mod_pi;
  }
  fs::create_directories(dir);
  std::ofstream(dir / "predict.json") << j.dump(2) << '\n';
  rec.outputs = {(dir / "predict.json").string()};
  rec.seconds = now_seconds(t0);
  write_run_record(rec, dir);
  return 0;
}

struct VerifyRow {
  double a = 0.0;
  bool pass = false;
  std::string message;
};

int run_verify(std::vector<double> grid, double tol, double x_lo, int windows, bool refined,
               double beta_tol, double gamma_tol, const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "verify";
  {
    std::ostringstream gs;
    for (double a : grid) gs << a << ' ';
    rec.parameters = {{"grid", gs.str()},         {"tol", fmt(tol)},
                      {"x_lo", fmt(x_lo)},        {"windows", std::to_string(windows)},
                      {"beta_tol", fmt(beta_tol)}, {"gamma_tol", fmt(gamma_tol)},
                      {"refined", refined ? "true" : "false"}};
  }
  const fs::path dir = c.out_dir();
  const double x_max = x_lo * std::pow(2.0, windows) * 1.01;

  auto work = [&](double a) -> VerifyRow {
    VerifyRow row;
    row.a = a;
    try {
      auto traj = solve_ivp(a, x_max, tol);
      auto f = fit(traj, x_lo, windows, refined);
      auto p = predict(a);
      auto cr = compare(f, p, beta_tol, gamma_tol);
      row.pass = cr.beta_ok && cr.gamma_ok;
      std::ostringstream msg;
      msg << "beta_fit=" << fmt(f.beta_fit) << " beta=" << fmt(p.beta)
          << " dbeta=" << fmt(cr.beta_diff) << " dgamma=" << fmt(cr.gamma_diff)
          << (cr.gamma_mod_pi ? " (mod pi)" : "");
      row.message = msg.str();
    } catch (const std::exception& e) {
      row.pass = false;
      row.message = e.what();
    }
    return row;
  };

  // independent parameters run concurrently; rows merge in grid order
  std::vector<std::future<VerifyRow>> futures;
  futures.reserve(grid.size());
  for (double a : grid) futures.push_back(std::async(std::launch::async, work, a));

  bool all = true;
  fs::create_directories(dir);
  std::ofstream csv(dir / "verify.csv");
  csv << "a,pass,detail\n";
  for (auto& fu : futures) {
    VerifyRow row = fu.get();
    all = all && row.pass;
    std::printf("%-8s a=%-10s %s\n", row.pass ? "PASS" : "FAIL", fmt(row.a).c_str(),
                row.message.c_str());
    csv << fmt(row.a) << ',' << (row.pass ? "PASS" : "FAIL") << ",\"" << row.message << "\"\n";
  }
  rec.outputs = {(dir / "verify.csv").string()};
  rec.seconds = now_seconds(t0);
  write_run_record(rec, dir);
  return all ? 0 : 1;
}

int run_verify_transforms(double a, double tol, const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "verify-transforms";
  rec.parameters = {{"a", fmt(a)}, {"tol", fmt(tol)}};
  const fs::path dir = c.out_dir();
  try {
    auto traj = solve_ivp(a, 25.0, tol);
    std::vector<double> grid;
    for (int i = 0; i < 181; ++i) grid.push_back(2.0 + 18.0 * i / 180.0);
    struct Item {
      const char* name;
      ResidualReport rep;
      double bound;
    };
    Item items[] = {{"pv_y", residual_PV4(traj, grid), 1e-6},
                    {"piii_w", residual_PIII6(traj, grid), 1e-6},
                    {"pv_h", residual_PV8(traj, grid), 1e-6},
                    {"pair_roundtrip", pair_roundtrip(traj, grid), 1e-8}};
    fs::create_directories(dir);
    bool all = true;
    for (const auto& it : items) {
      std::ofstream os(dir / (std::string("residual_") + it.name + ".csv"));
      write_residual_csv(it.rep, os);
      rec.outputs.push_back((dir / (std::string("residual_") + it.name + ".csv")).string());
      std::ofstream dat(dir / (std::string("residual_") + it.name + ".dat"));
      for (std::size_t gi = 0; gi < it.rep.grid.size(); ++gi)
        if (!it.rep.excluded[gi])
          dat << fmt(it.rep.grid[gi]) << ' ' << fmt(it.rep.residuals[gi]) << '\n';
      rec.outputs.push_back((dir / (std::string("residual_") + it.name + ".dat")).string());
      const bool ok = it.rep.norm <= it.bound;
      all = all && ok;
      std::printf("%-8s %-16s max residual %-12s (bound %s, %zu excluded)\n",
                  ok ? "PASS" : "FAIL", it.name, fmt(it.rep.norm).c_str(),
                  fmt(it.bound).c_str(), it.rep.excluded_count());
    }
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    return all ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "verify-transforms: bad parameters: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "verify-transforms failed: %s\n", e.what());
    return 2;
  }
}

int run_critical(double lo, double hi, double X, double btol, const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "critical-scan";
  rec.parameters = {{"lo", fmt(lo)}, {"hi", fmt(hi)}, {"X", fmt(X)}, {"tol", fmt(btol)}};
  const fs::path dir = c.out_dir();
  try {
    std::vector<BisectionStep> trace;
    const double astar = locate_critical(lo, hi, X, btol, 1e-11, &trace);
    fs::create_directories(dir);
    std::ofstream os(dir / "critical_trace.csv");
    os << "iter,a_lo,a_hi,label\n";
    for (const auto& s : trace)
      os << s.iter << ',' << fmt(s.a_lo) << ',' << fmt(s.a_hi) << ',' << label_name(s.label)
         << '\n';
    std::ofstream dat(dir / "critical_width.dat");
    for (const auto& s : trace) dat << s.iter << ' ' << fmt(s.a_hi - s.a_lo) << '\n';
    rec.outputs = {(dir / "critical_trace.csv").string(),
                   (dir / "critical_width.dat").string()};
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::printf("critical parameter a* = %.8f (width %s)\n", astar, fmt(btol).c_str());
    return 0;
  } catch (const std::invalid_argument& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "critical-scan: bad parameters: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "critical-scan failed: %s\n", e.what());
    return 2;
  }
}

int run_monodromy(double a, std::vector<double> xs, double cpar, double lambda_max,
                  double lambda_min, const CommonOpts& c) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = "monodromy";
  {
    std::ostringstream xss;
    for (double x : xs) xss << x << ' ';
    rec.parameters = {{"a", fmt(a)},
                      {"x", xss.str()},
                      {"c", fmt(cpar)},
                      {"lambda_max", fmt(lambda_max)},
                      {"lambda_min", fmt(lambda_min)}};
  }
  const fs::path dir = c.out_dir();
  try {
    const double x_need = *std::max_element(xs.begin(), xs.end()) + 2.0;
    auto traj = solve_ivp(a, x_need, 1e-11);
    std::vector<MonodromyRecord> recs;
    for (double x : xs) {
      MonodromyRecord r =
          lambda_max > 0.0 ? extract_Q(traj, x, cpar, lambda_max, lambda_min, 1e-12)
                           : extract_Q(traj, x, cpar);
      recs.push_back(r);
      std::printf("x=%-8s Q = [%s, %s; %s, %s]\n", fmt(x).c_str(), fmt_c(r.Q[0]).c_str(),
                  fmt_c(r.Q[1]).c_str(), fmt_c(r.Q[2]).c_str(), fmt_c(r.Q[3]).c_str());
      std::printf("          |Q21|/(2^{-3/4} sqrt(a pi)) = %.6f   truncation ~ %s\n",
                  r.q21_ratio, fmt(r.truncation_estimate).c_str());
    }
    if (recs.size() >= 2) {
      double defect = 0.0;
      for (std::size_t j = 1; j < recs.size(); ++j)
        for (int k = 0; k < 4; ++k)
          defect = std::max(defect, std::abs(recs[j].Q[k] - recs[0].Q[k]) /
                                        std::max(1.0, std::abs(recs[0].Q[k])));
      std::printf("constancy defect across x values: %s\n", fmt(defect).c_str());
    }
    nlohmann::ordered_json j;
    j["a"] = a;
    j["c"] = cpar;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : recs) {
      arr.push_back({{"x", r.x},
                     {"Q", {{"q11", {r.Q[0].real(), r.Q[0].imag()}},
                            {"q12", {r.Q[1].real(), r.Q[1].imag()}},
                            {"q21", {r.Q[2].real(), r.Q[2].imag()}},
                            {"q22", {r.Q[3].real(), r.Q[3].imag()}}}},
                     {"q21_ratio", r.q21_ratio},
                     {"truncation_estimate", r.truncation_estimate},
                     {"wronskian_drift", r.wronskian_drift}});
    }
    j["records"] = arr;
    fs::create_directories(dir);
    std::ofstream(dir / "monodromy.json") << j.dump(2) << '\n';
    rec.outputs = {(dir / "monodromy.json").string()};
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    return 0;
  } catch (const std::invalid_argument& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "monodromy: bad parameters: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.seconds = now_seconds(t0);
    write_run_record(rec, dir);
    std::fprintf(stderr, "monodromy failed: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear-ODE connection-problem toolkit"};
  app.require_subcommand(1);
  CommonOpts common;

  double a = 0.2, x_max = 400.0, tol = 1e-10, x_lo = 100.0, class_tol = 1e-10;
  double lo = 0.1, hi = 1.0, X = 200.0, btol = 1e-6;
  double cpar = 1.0, lambda_max = -1.0, lambda_min = 2e-3;
  double beta_tol = 1e-3, gamma_tol = 1e-2;
  int windows = 3;
  bool refined = false;
  std::vector<double> grid{0.05, 0.15, 0.25, 0.35, 0.5, 1.0};
  std::vector<double> xs{6.0, 10.0};

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", common.out_dir_flag, "output directory");
  };

  auto* solve_cmd = app.add_subcommand("solve", "integrate one trajectory");
  solve_cmd->add_option("--a", a, "boundary parameter");
  solve_cmd->add_option("--x-max", x_max, "integration range")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol", tol, "local tolerance");
  add_out(solve_cmd);

  double fit_x_max = 810.0;
  auto* fit_cmd = app.add_subcommand("fit", "extract asymptotic parameters");
  fit_cmd->add_option("--a", a);
  fit_cmd->add_option("--x-max", fit_x_max)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tol", tol);
  fit_cmd->add_option("--x-lo", x_lo);
  fit_cmd->add_option("--windows", windows);
  fit_cmd->add_flag("--refined", refined, "include the 1/x regressor");
  add_out(fit_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "closed-form parameters");
  predict_cmd->add_option("--a", a);
  predict_cmd->add_option("--class-tol", class_tol, "separatrix classification tolerance");
  add_out(predict_cmd);

  double verify_tol = 1e-11;
  bool verify_refined = true;
  auto* verify_cmd = app.add_subcommand("verify", "solve -> fit -> compare per grid value");
  verify_cmd->add_option("--grid", grid, "parameter values");
  verify_cmd->add_option("--tol", verify_tol);
  verify_cmd->add_option("--x-lo", x_lo);
  verify_cmd->add_option("--windows", windows);
  verify_cmd->add_option("--beta-tol", beta_tol);
  verify_cmd->add_option("--gamma-tol", gamma_tol);
  verify_cmd->add_flag("--refined,!--no-refined", verify_refined,
                       "1/x regressor (default on)");
  add_out(verify_cmd);

  auto* vt_cmd = app.add_subcommand("verify-transforms", "residuals of the equation chain");
  vt_cmd->add_option("--a", a);
  vt_cmd->add_option("--tol", tol);
  add_out(vt_cmd);

  auto* crit_cmd = app.add_subcommand("critical-scan", "bisection for the separatrix");
  crit_cmd->alias("critical");
  crit_cmd->add_option("--lo", lo);
  crit_cmd->add_option("--hi", hi);
  crit_cmd->add_option("--x", X, "classification range");
  crit_cmd->add_option("--tol", btol, "bisection width");
  add_out(crit_cmd);

  auto* mono_cmd = app.add_subcommand("monodromy", "extract the connection matrix");
  mono_cmd->add_option("--a", a);
  mono_cmd->add_option("--x", xs, "evaluation points (repeatable)");
  mono_cmd->add_option("--c", cpar, "lower quadrature limit");
  mono_cmd->add_option("--lambda-max", lambda_max, "spectral range top (default 200/|tau|)");
  mono_cmd->add_option("--lambda-min", lambda_min, "spectral range bottom");
  add_out(mono_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad flags exit with 1; --help stays 0
  }

  if (solve_cmd->parsed()) return run_solve(a, x_max, tol, common);
  if (fit_cmd->parsed()) return run_fit(a, fit_x_max, tol, x_lo, windows, refined, common);
  if (predict_cmd->parsed()) return run_predict(a, class_tol, common);
  if (verify_cmd->parsed())
    return run_verify(grid, verify_tol, x_lo, windows, verify_refined, beta_tol, gamma_tol, common);
  if (vt_cmd->parsed()) return run_verify_transforms(a, tol, common);
  if (crit_cmd->parsed()) return run_critical(lo, hi, X, btol, common);
  if (mono_cmd->parsed()) return run_monodromy(a, xs, cpar, lambda_max, lambda_min, common);
  return 1;
}
