// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
// Pins are published reference values; tolerances are stated per criterion.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "cdlab/analysis.hpp"
#include "cdlab/linalg.hpp"
#include "cdlab/problems.hpp"
#include "cdlab/rng.hpp"
#include "cdlab/solvers.hpp"

using namespace cdlab;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double x, double pin) { return std::abs(x - pin) / std::abs(pin); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- subprocess helpers (criterion 1 exercises the installed CLI) -----------

std::string cli_binary() {
  const char* bin = std::getenv("CDLAB_BIN");
  if (!bin || !*bin) {
    std::fprintf(stderr, "acceptance: CDLAB_BIN is not set\n");
    std::exit(2);
  }
  return bin;
}

bool run_cli(const std::string& args, std::string& out) {
  const std::string cmd = cli_binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  char buf[4096];
  out.clear();
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// ---- criterion 1: Table-1 reproduction through the CLI -----------------------

struct Table1Pin {
  int n;
  double c;
  double omr[4];    // CCD, GD, RCD, RPCD
  double ratio[3];  // GD, RCD, RPCD over CCD
};

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string out;
  const bool ran = run_cli("table1 --n 20,100,1000 --c 0.5,0.8,0.99", out);
  const double elapsed = seconds_since(t0);
  if (!ran) {
    report(1, false, "table1 CLI run failed");
    return;
  }
  std::map<std::string, std::pair<double, double>> rows;  // n|c|method -> (omr, ratio)
  for (const std::string& line : split(out, '\n')) {
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 5 || f[0] == "n") continue;
    char key[64];
    std::snprintf(key, sizeof key, "%d|%.2f|%s", std::stoi(f[0]), std::stod(f[1]), f[2].c_str());
    rows[key] = {std::stod(f[3]), std::stod(f[4])};
  }

  // Reference rows reconciled at 2% on every printed value.
  const Table1Pin full[] = {
      {20, 0.99, {4.98e-4, 5.05e-4, 1e-2, 1.03e-2}, {1.01, 20.0, 20.7}},
      {100, 0.5, {3.8e-3, 9.9e-3, 0.39, 0.50}, {2.6, 103, 132}},
      {100, 0.8, {6.1e-4, 2.5e-3, 0.18, 0.20}, {4.08, 297, 328}},
      {100, 0.99, {2.0e-5, 1.01e-4, 0.01, 0.01}, {5.02, 494, 497}},
      {1000, 0.5, {3.9e-5, 9.99e-4, 0.39, 0.50}, {25.4, 9999, 12717}},
      {1000, 0.8, {6.2e-6, 2.5e-4, 0.18, 0.20}, {40.5, 29411, 32480}},
      {1000, 0.99, {2.01e-7, 1.01e-5, 0.01, 0.01}, {50.2, 49407, 49704}},
  };
  // n = 20, c in {0.5, 0.8}: ratio columns only, at 5%.
  const Table1Pin ratios_only[] = {
      {20, 0.5, {0, 0, 0, 0}, {0.63, 5.3, 6.8}},
      {20, 0.8, {0, 0, 0, 0}, {0.85, 12.6, 14.3}},
  };
  const char* methods[] = {"CCD", "GD", "RCD", "RPCD"};

  double worst2 = 0.0, worst5 = 0.0;
  bool missing = false;
  auto lookup = [&](int n, double c, const char* m) {
    char key[64];
    std::snprintf(key, sizeof key, "%d|%.2f|%s", n, c, m);
    auto it = rows.find(key);
    if (it == rows.end()) {
      missing = true;
      return std::pair<double, double>{0.0, 0.0};
    }
    return it->second;
  };
  for (const Table1Pin& pin : full) {
    for (int m = 0; m < 4; ++m)
      worst2 = std::max(worst2, rel(lookup(pin.n, pin.c, methods[m]).first, pin.omr[m]));
    for (int m = 0; m < 3; ++m)
      worst2 = std::max(worst2, rel(lookup(pin.n, pin.c, methods[m + 1]).second, pin.ratio[m]));
  }
  for (const Table1Pin& pin : ratios_only)
    for (int m = 0; m < 3; ++m)
      worst5 = std::max(worst5, rel(lookup(pin.n, pin.c, methods[m + 1]).second, pin.ratio[m]));

  const bool pass = !missing && worst2 <= 0.02 && worst5 <= 0.05 && elapsed < 60.0;
  report(1, pass,
         "spectral-gap table matches the reference (worst 2%-set err " + fmt(worst2) +
             ", worst 5%-set err " + fmt(worst5) + ", " + fmt(elapsed) + "s)");
}

// ---- criterion 2: theoretical large-n iteration ratios ------------------------

void criterion2() {
  const double pins[3][3] = {
      {1.01, 20.2, 21.2}, {5.07, 506, 512}, {50.7, 50600, 50760}};
  const std::size_t ns[3] = {20, 100, 1000};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    CountTable t = iteration_counts(ns[i], 0.5, 1e-6);
    worst = std::max(worst, rel(t.theory_gd, pins[i][0]));
    worst = std::max(worst, rel(t.theory_rcd_iter, pins[i][1]));
    worst = std::max(worst, rel(t.theory_rpcd, pins[i][2]));
  }
  report(2, worst <= 0.01,
         "asymptotic iteration-count ratios match at 1% (worst err " + fmt(worst) + ")");
}

// ---- criterion 3: C-CD trajectory dominates the lower-bound envelope ----------

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const double c = 0.999, delta = 0.2;
  std::size_t violations = 0, checks = 0;
  for (std::size_t n : {10ul, 20ul, 50ul}) {
    const double kappa = (1.0 - c + c * static_cast<double>(n)) / (1.0 - c);
    Trajectory t = run_ccd(make_ac(n, c), worst_init(n, c), 200);
    for (std::size_t k = 0; k < t.rel_obj_err.size(); ++k) {
      ++checks;
      if (t.rel_obj_err[k] < thm1_envelope(n, kappa, k, delta)) ++violations;
    }
  }
  const double elapsed = seconds_since(t0);
  report(3, violations == 0 && elapsed < 5.0,
         "worst-case C-CD stays above the envelope (" + std::to_string(violations) + "/" +
             std::to_string(checks) + " violations, " + fmt(elapsed) + "s)");
}

// ---- criterion 4: J_k spectral factors against their limits -------------------

void criterion4() {
  std::vector<JkEntry> table = jk_table(analyze_ac(8, 0.999));
  double worst = 0.0;
  int seen = 0;
  for (const JkEntry& e : table)
    if (e.k >= 1 && e.k <= 7) {
      worst = std::max(worst, rel(e.empirical, e.limit));
      ++seen;
    }
  report(4, seen == 7 && worst <= 0.02,
         "J_k factors within 2% of their limits for k=1..7 (worst err " + fmt(worst) + ")");
}

// ---- criterion 5: independent-oracle equivalences ------------------------------

void criterion5() {
  // (a) polynomial-root eigenvalues vs QR spectrum of I - M_ccd
  double worst_a = 0.0;
  for (std::size_t n : {2ul, 3ul, 5ul, 8ul, 13ul, 21ul, 34ul, 50ul})
    for (double c : {0.3, 0.5, 0.8, 0.99}) {
      AcAnalysis a = analyze_ac(n, c);
      DenseMatrix m = iteration_matrix(IterationMethod::CCD, make_ac(n, c));
      DenseMatrix z(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) z(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
      worst_a = std::max(worst_a, spectrum_distance(a.lambdas, general_spectrum(z).eigenvalues));
    }

  // (b) exhaustive permutation average vs closed-form expected inverse
  double worst_b = 0.0;
  for (std::size_t n : {2ul, 3ul, 4ul, 5ul, 6ul})
    for (double c : {0.3, 0.7, 0.99}) {
      DenseMatrix en = expected_inverse_lower_enumerate(make_ac(n, c).A).mean;
      DenseMatrix cf = expected_inverse_lower_ac(n, c);
      for (std::size_t i = 0; i < n * n; ++i)
        worst_b = std::max(worst_b, std::abs(en.a[i] - cf.a[i]));
    }

  // (c) coordinate simulation vs matrix recursion (C-CD and replayed RP-CD)
  double worst_c = 0.0;
  {
    Rng rng(split_seed(20260814, 0));
    const std::size_t n = 7;
    DenseMatrix u(n, n);
    for (double& x : u.a) x = rng.gaussian();
    QuadraticProblem p = make_problem(gram(u), std::vector<double>(n, 0.0));
    std::vector<double> x0(n);
    for (double& x : x0) x = rng.uniform(-1.0, 1.0);

    DenseMatrix mc = iteration_matrix(IterationMethod::CCD, p);
    Trajectory t = run_ccd(p, x0, 5, true);
    std::vector<double> xm = x0;
    for (std::size_t k = 1; k <= 5; ++k) {
      xm = matvec(mc, xm);
      for (std::size_t i = 0; i < n; ++i)
        worst_c = std::max(worst_c, std::abs(xm[i] - t.iterates[k][i]));
    }

    const std::uint64_t seed = 99;
    Trajectory tr = run_rpcd(p, x0, 5, seed, true);
    Rng replay(split_seed(seed, 0));
    std::vector<std::size_t> perm(n);
    std::vector<double> xr = x0;
    for (std::size_t k = 1; k <= 5; ++k) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      replay.shuffle(perm);
      std::vector<double> corr = matvec(permuted_lower_inverse(p.A, perm), matvec(p.A, xr));
      for (std::size_t i = 0; i < n; ++i) xr[i] -= corr[i];
      for (std::size_t i = 0; i < n; ++i)
        worst_c = std::max(worst_c, std::abs(xr[i] - tr.iterates[k][i]));
    }
  }

  // (d) closed-form cosine sum vs direct summation
  double worst_d = 0.0;
  {
    Rng rng(split_seed(7, 0));
    for (int t = 0; t < 1000; ++t) {
      const double z = rng.uniform(-3.0, 3.0);
      const double phi = rng.uniform(-3.0, 3.0);
      const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(40));
      double direct = 0.0;
      for (std::size_t j = 1; j <= n; ++j) direct += std::cos(z + static_cast<double>(j) * phi);
      worst_d = std::max(worst_d, std::abs(direct - cos_sum_closed(z, phi, n)));
    }
  }

  const bool pass = worst_a <= 1e-8 && worst_b <= 1e-12 && worst_c <= 1e-12 && worst_d <= 1e-10;
  report(5, pass,
         "oracle equivalences hold (spectra " + fmt(worst_a) + ", expected inverse " +
             fmt(worst_b) + ", recursion " + fmt(worst_c) + ", cosine " + fmt(worst_d) + ")");
}

// ---- criterion 6: convergence-factor bounds on random PSD instances ------------

void criterion6() {
  const std::uint64_t base = 20260814ULL;
  int singular_count = 0, pinv_routed = 0, ratio_checks = 0, viol = 0, norm_viol = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(split_seed(base, 1000 + static_cast<std::uint64_t>(i)));
    const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(59));
    const bool make_singular = (i % 10 == 4);
    std::size_t r = n;
    if (make_singular)
      r = std::max<std::size_t>(1, n - 1 - static_cast<std::size_t>(
                                           rng.integer(std::min<std::size_t>(n - 1, 3))));
    DenseMatrix u(r, n);
    // rank-deficient instances use gaussian factors so the nonzero spectrum is
    // well separated and the pseudo-inverse minimizer stays accurate
    const int mode = make_singular ? 0 : i % 3;
    for (double& v : u.a) {
      if (mode == 0)
        v = rng.gaussian();
      else if (mode == 1)
        v = rng.uniform(0.0, 1.0);
      else
        v = std::exp(0.3 * rng.gaussian());
    }
    DenseMatrix a = gram(u);
    if (!make_singular) {
      // small ridge keeps full-rank gram matrices away from the rank cutoff
      double md = 0.0;
      for (std::size_t d = 0; d < n; ++d) md += a(d, d);
      md /= static_cast<double>(n);
      for (std::size_t d = 0; d < n; ++d) a(d, d) += 1e-3 * md;
    }
    std::vector<double> b(n, 0.0);
    if (i % 2 == 0) {
      std::vector<double> z(n);
      for (double& v : z) v = rng.gaussian();
      b = matvec(a, z);
    }
    QuadraticProblem p = make_problem(a, b);
    if (p.singular) {
      ++singular_count;
      if (i % 2 == 0) ++pinv_routed;
    }

    BoundReport rep = bound_report(p);
    if (rep.gamma_norm > rep.gamma_bound_log * (1 + 1e-12)) ++norm_viol;
    if (rep.gamma_norm > rep.gamma_bound_frob * (1 + 1e-12)) ++norm_viol;

    std::vector<double> x0(n);
    for (double& v : x0) v = rng.uniform(-1.0, 1.0);
    Trajectory t = run_ccd(p, x0, 8);
    if (t.degenerate_start) continue;
    double cap = 1.0 - 1.0 / rep.certificate;
    for (double f : rep.prop1_kappa) cap = std::min(cap, f);
    for (double f : rep.prop1_kappa_cd) cap = std::min(cap, f);
    for (double f : rep.prop2) cap = std::min(cap, f);
    for (std::size_t k = 0; k + 1 < t.rel_obj_err.size(); ++k) {
      // per-cycle ratios are only meaningful above the f* rounding floor
      if (!(t.rel_obj_err[k] > 1e-6) || !(t.rel_obj_err[k + 1] > 1e-6)) break;
      const double ratio = t.rel_obj_err[k + 1] / t.rel_obj_err[k];
      ++ratio_checks;
      if (ratio - cap > 1e-9) ++viol;
    }
  }
  const bool pass = singular_count >= 10 && pinv_routed >= 10 && ratio_checks >= 500 &&
                    viol == 0 && norm_viol == 0;
  report(6, pass,
         "per-cycle factors and norm bounds dominate on 100 random instances (" +
             std::to_string(singular_count) + " singular, " + std::to_string(ratio_checks) +
             " ratio checks, " + std::to_string(viol + norm_viol) + " violations)");
}

// ---- criterion 7: four-method race on the worst-case instance ------------------

double fit_slope(const std::vector<double>& err) {
  // least squares of ln(err) on the epoch index, restricted to the clean
  // exponential regime
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t k = 21; k < err.size(); ++k) {
    if (!(err[k] > 1e-250) || !(err[k] < 1e-2)) continue;
    const double x = static_cast<double>(k), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 10) return 0.0;
  const double dm = static_cast<double>(m);
  return (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
}

void criterion7() {
  const std::uint64_t seed = 20260814ULL;
  QuadraticProblem p = make_ac(100, 0.8);
  Rng rng(split_seed(seed, 15));
  std::vector<double> x0(100);
  for (double& v : x0) v = rng.uniform(-1.0, 1.0);
  const std::size_t epochs = 10000;
  Trajectory ccd = run_ccd(p, x0, epochs);
  Trajectory gd = run_gd(p, x0, epochs);
  Trajectory rcd = run_rcd(p, x0, epochs, split_seed(seed, 16));
  Trajectory rpcd = run_rpcd(p, x0, epochs, split_seed(seed, 17));

  const bool ordering = ccd.rel_obj_err.back() > gd.rel_obj_err.back() &&
                        gd.rel_obj_err.back() >
                            std::max(rcd.rel_obj_err.back(), rpcd.rel_obj_err.back());
  const double s_ccd = fit_slope(ccd.rel_obj_err), s_gd = fit_slope(gd.rel_obj_err);
  const double s_rcd = fit_slope(rcd.rel_obj_err);
  const double r_gd = s_gd / s_ccd, r_rcd = s_rcd / s_gd;
  const bool bands = r_gd >= 3.0 && r_gd <= 5.5 && r_rcd >= 55.0 && r_rcd <= 95.0;
  report(7, ordering && bands,
         "method ordering and slope ratios on the worst-case instance (gd/ccd " + fmt(r_gd) +
             ", rcd/gd " + fmt(r_rcd) + ")");
}

// ---- criterion 8: ensemble comparison, C-CD vs R-CD ----------------------------

void criterion8() {
  const std::uint64_t base = 1ULL;
  StochasticRunner runner = [](const QuadraticProblem& q, const std::vector<double>& x,
                               std::size_t e, std::uint64_t s) {
    return run_rcd(q, x, e, s, true);
  };
  int gauss_wins = 0, unif_wins = 0;
  for (int i = 0; i < 10; ++i) {
    EnsembleSpec g;
    g.n = 100;
    g.dist = Distribution::gaussian;
    g.seed = base + static_cast<std::uint64_t>(i);
    QuadraticProblem pg = make_random(g);
    std::vector<double> x0(100, 1.0);
    const double ccd = run_ccd(pg, x0, 60).rel_obj_err.back();
    const double rcd =
        mc_mean_trajectory(runner, pg, x0, 60, 4, split_seed(g.seed, 7)).mean.rel_obj_err.back();
    if (ccd <= rcd) ++gauss_wins;
  }
  for (int i = 0; i < 10; ++i) {
    EnsembleSpec u;
    u.n = 400;
    u.dist = Distribution::uniform;
    u.p1 = 0.0;
    u.p2 = 1.0;
    u.seed = base + 100 + static_cast<std::uint64_t>(i);
    QuadraticProblem pu = make_random(u);
    std::vector<double> x0(400, 1.0);
    const double ccd = run_ccd(pu, x0, 400).rel_obj_err.back();
    const double rcd =
        mc_mean_trajectory(runner, pu, x0, 400, 4, split_seed(u.seed, 7)).mean.rel_obj_err.back();
    if (ccd >= 10.0 * rcd) ++unif_wins;
  }
  report(8, gauss_wins >= 8 && unif_wins >= 8,
         "ensemble ordering flips with the distribution (gaussian " +
             std::to_string(gauss_wins) + "/10, uniform " + std::to_string(unif_wins) + "/10)");
}

// ---- criterion 9: R-CD mean objective under the expected-decay bound ------------

void criterion9() {
  QuadraticProblem p = make_ac(5, 0.5);
  std::vector<double> x0(5, 1.0);
  StochasticRunner runner = [](const QuadraticProblem& q, const std::vector<double>& x,
                               std::size_t e, std::uint64_t s) {
    return run_rcd(q, x, e, s, true);
  };
  MeanTrajectory mt = mc_mean_trajectory(runner, p, x0, 20, 2000, 20260814ULL);
  int violations = 0;
  double worst_margin = 1e300;
  for (std::size_t k = 0; k <= 20; ++k) {
    // (1 - lambda_min / n)^{kn} with lambda_min = 1 - c = 0.5, n = 5
    const double bound = std::pow(0.9, 5.0 * static_cast<double>(k));
    const double slack = bound + 4.0 * mt.se_obj[k] + 1e-12 - mt.mean.rel_obj_err[k];
    if (slack < 0.0) ++violations;
    worst_margin = std::min(worst_margin, slack);
  }
  report(9, violations == 0,
         "Monte-Carlo R-CD mean stays under the expected-decay bound (" +
             std::to_string(violations) + " violations, min margin " + fmt(worst_margin) + ")");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures > 0) {
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("acceptance: all 9 criteria passed\n");
  return 0;
}
