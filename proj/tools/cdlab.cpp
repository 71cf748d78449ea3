#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdlab/analysis.hpp"
#include "cdlab/problems.hpp"
#include "cdlab/rng.hpp"
#include "cdlab/solvers.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;

using namespace cdlab;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  bool to_stdout = true;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    os = &file;
    to_stdout = false;
  }
  std::ostream& s() { return *os; }
};

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
  return ss.str();
}

void manifest(const std::string& line) { std::cerr << "# manifest " << line << "\n"; }

// Comma list -> values; empty tokens (and the empty string) drop out, so
// --n "" selects an empty grid.
template <typename T, typename Conv>
std::vector<T> parse_list(const std::string& text, const std::string& flag, Conv conv) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(conv(tok));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "bad value '" + tok + "'");
    }
  }
  return out;
}

struct MethodSpec {
  std::string name; // canonical CSV label
  enum Kind { GD, CCD, CCGD_SMALL, RCD, RPCD } kind;
};

MethodSpec parse_method(const std::string& raw) {
  std::string s = raw;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "gd") return {"GD", MethodSpec::GD};
  if (s == "ccd") return {"CCD", MethodSpec::CCD};
  if (s == "ccgd-small" || s == "ccgd_small") return {"CCGD-small", MethodSpec::CCGD_SMALL};
  if (s == "rcd") return {"RCD", MethodSpec::RCD};
  if (s == "rpcd") return {"RPCD", MethodSpec::RPCD};
  throw CLI::ValidationError("--methods", "unknown method '" + raw + "'");
}

Trajectory dispatch(const MethodSpec& m, const QuadraticProblem& p, const std::vector<double>& x0,
                    std::size_t epochs, std::uint64_t seed, bool record = false) {
  switch (m.kind) {
    case MethodSpec::GD: return run_gd(p, x0, epochs, record);
    case MethodSpec::CCD: return run_ccd(p, x0, epochs, record);
    case MethodSpec::CCGD_SMALL: return run_ccgd(p, x0, epochs, StepMode::global, 1.0, record);
    case MethodSpec::RCD: return run_rcd(p, x0, epochs, seed, record);
    case MethodSpec::RPCD: return run_rpcd(p, x0, epochs, seed, record);
  }
  throw std::logic_error("unreachable");
}

bool stochastic(const MethodSpec& m) {
  return m.kind == MethodSpec::RCD || m.kind == MethodSpec::RPCD;
}

// ---- table1 ----------------------------------------------------------------

int cmd_table1(const std::string& ns_text, const std::string& cs_text,
               const std::string& out_path) {
  std::vector<std::size_t> ns = parse_list<std::size_t>(
      ns_text, "--n", [](const std::string& s) { return std::stoull(s); });
  std::vector<double> cs =
      parse_list<double>(cs_text, "--c", [](const std::string& s) { return std::stod(s); });
  Output out;
  out.open(out_path);
  std::sort(ns.begin(), ns.end());
  std::sort(cs.begin(), cs.end());
  manifest("command=table1 n=" + join(ns) + " c=" + join(cs) + " version=" + kVersion);
  out.s() << "n,c,method,one_minus_rho,ratio_over_ccd\n";
  bool failed = false;
  for (std::size_t n : ns) {
    for (double c : cs) {
      try {
        for (const SpectrumRow& row : table1_row(n, c))
          out.s() << n << "," << c << "," << row.method << "," << fmt(row.one_minus_rho) << ","
                  << fmt(row.ratio_over_ccd) << "\n";
      } catch (const numeric_error& e) {
        out.s() << n << "," << c << ",FAILED,nan,nan\n";
        std::cerr << "table1: root solve failed at n=" << n << " c=" << c << ": " << e.what()
                  << "\n";
        failed = true;
      }
    }
  }
  return failed ? kExitCheckFailed : kExitOk;
}

// ---- trajectory -------------------------------------------------------------

std::vector<double> make_x0(const std::string& init, std::size_t n, double c,
                            std::uint64_t seed) {
  if (init == "worst") return worst_init(n, c);
  if (init == "ones") return std::vector<double>(n, 1.0);
  if (init == "random") {
    Rng rng(split_seed(seed, 15));
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    return x;
  }
  throw CLI::ValidationError("--init", "unknown init '" + init + "'");
}

int cmd_trajectory(std::size_t n, double c, const std::vector<std::string>& method_names,
                   std::size_t epochs, std::uint64_t seed, const std::string& init,
                   const std::string& out_path) {
  std::vector<MethodSpec> methods;
  for (const std::string& m : method_names) methods.push_back(parse_method(m));
  Output out;
  out.open(out_path);
  manifest("command=trajectory n=" + std::to_string(n) + " c=" + fmt(c) +
           " methods=" + join(method_names) + " epochs=" + std::to_string(epochs) +
           " seed=" + std::to_string(seed) + " init=" + init + " version=" + kVersion);
  QuadraticProblem p = make_ac(n, c);
  std::vector<double> x0 = make_x0(init, n, c, seed);
  out.s() << "epoch,method,rel_obj_err,rel_iter_err\n";
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    Trajectory t = dispatch(methods[mi], p, x0, epochs, split_seed(seed, 16 + mi));
    for (std::size_t k = 0; k < t.rel_obj_err.size(); ++k)
      out.s() << k << "," << methods[mi].name << "," << fmt(t.rel_obj_err[k]) << ","
              << fmt(t.rel_iter_err[k]) << "\n";
  }
  return kExitOk;
}

// ---- lowerbound -------------------------------------------------------------

int cmd_lowerbound(std::size_t n, double c, double delta, std::size_t epochs,
                   const std::string& out_path) {
  if (c < 0.9)
    std::cerr << "lowerbound: warning: the envelope is intended for c >= 0.9 (got c=" << c
              << ")\n";
  Output out;
  out.open(out_path);
  manifest("command=lowerbound n=" + std::to_string(n) + " c=" + fmt(c) + " delta=" + fmt(delta) +
           " epochs=" + std::to_string(epochs) + " version=" + kVersion);
  QuadraticProblem p = make_ac(n, c);
  const double nd = static_cast<double>(n);
  const double kappa = (1.0 - c + c * nd) / (1.0 - c);
  Trajectory t = run_ccd(p, worst_init(n, c), epochs);
  out.s() << "epoch,observed_rel_obj_err,envelope\n";
  std::size_t violations = 0;
  for (std::size_t k = 0; k < t.rel_obj_err.size(); ++k) {
    const double env = thm1_envelope(n, kappa, k, delta);
    if (t.rel_obj_err[k] < env) ++violations;
    out.s() << k << "," << fmt(t.rel_obj_err[k]) << "," << fmt(env) << "\n";
  }
  if (violations > 0) {
    std::cerr << "lowerbound: " << violations << " envelope violation(s)\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ---- randbench --------------------------------------------------------------

int cmd_randbench(std::size_t n, const std::string& dist, double mean,
                  const std::vector<std::string>& method_names, std::size_t epochs,
                  std::size_t repeats, std::uint64_t seed, bool normalize,
                  const std::string& out_path) {
  EnsembleSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.normalize_diagonal = normalize;
  if (dist == "gaussian") {
    spec.dist = Distribution::gaussian;
    spec.p1 = mean;
    spec.p2 = 1.0;
  } else if (dist == "uniform") {
    spec.dist = Distribution::uniform;
    spec.p1 = mean - 0.5;
    spec.p2 = mean + 0.5;
  } else if (dist == "lognormal") {
    spec.dist = Distribution::lognormal;
    spec.p1 = mean;
    spec.p2 = 1.0;
  } else {
    throw CLI::ValidationError("--dist", "unknown distribution '" + dist + "'");
  }
  std::vector<MethodSpec> methods;
  for (const std::string& m : method_names) methods.push_back(parse_method(m));

  Output out;
  out.open(out_path);
  manifest("command=randbench n=" + std::to_string(n) + " dist=" + dist + " mean=" + fmt(mean) +
           " methods=" + join(method_names) + " epochs=" + std::to_string(epochs) +
           " repeats=" + std::to_string(repeats) + " seed=" + std::to_string(seed) +
           " normalize=" + (normalize ? "1" : "0") + " version=" + kVersion);

  QuadraticProblem p = make_random(spec);
  std::vector<double> x0(n, 1.0);
  const bool bands = repeats > 1;

  out.s() << (bands ? "epoch,method,rel_obj_err,rel_iter_err,se_obj\n"
                    : "epoch,method,rel_obj_err,rel_iter_err\n");
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const MethodSpec& m = methods[mi];
    const std::uint64_t mseed = split_seed(seed, 16 + mi);
    if (bands && stochastic(m)) {
      StochasticRunner runner = [&m](const QuadraticProblem& pp, const std::vector<double>& x,
                                     std::size_t e, std::uint64_t s) {
        return dispatch(m, pp, x, e, s, true);
      };
      MeanTrajectory mt = mc_mean_trajectory(runner, p, x0, epochs, repeats, mseed);
      for (std::size_t k = 0; k <= epochs; ++k)
        out.s() << k << "," << m.name << "," << fmt(mt.mean.rel_obj_err[k]) << ","
                << fmt(mt.mean.rel_iter_err[k]) << "," << fmt(mt.se_obj[k]) << "\n";
    } else {
      Trajectory t = dispatch(m, p, x0, epochs, mseed);
      for (std::size_t k = 0; k <= epochs; ++k) {
        out.s() << k << "," << m.name << "," << fmt(t.rel_obj_err[k]) << ","
                << fmt(t.rel_iter_err[k]);
        if (bands) out.s() << "," << fmt(0.0);
        out.s() << "\n";
      }
    }
  }

  MetricsReport rep = metrics(p);
  std::ofstream side;
  std::ostream* ms = &std::cerr;
  if (!out.to_stdout) {
    side.open(out_path + ".metrics");
    ms = &side;
  }
  *ms << "metric,value\n"
      << "L," << fmt(rep.L) << "\n"
      << "lambda_min," << fmt(rep.lambda_min) << "\n"
      << "kappa," << fmt(rep.kappa) << "\n"
      << "kappa_cd," << fmt(rep.kappa_cd) << "\n"
      << "tau," << fmt(rep.tau) << "\n"
      << "chi_avg," << fmt(rep.chi_avg) << "\n"
      << "chi_max," << fmt(rep.chi_max) << "\n";
  return kExitOk;
}

// ---- bounds -----------------------------------------------------------------

int cmd_bounds(std::size_t n, double c, const std::string& matrix_path, double eps,
               const std::string& out_path) {
  Output out;
  out.open(out_path);
  QuadraticProblem p;
  bool is_ac = matrix_path.empty();
  if (is_ac) {
    manifest("command=bounds n=" + std::to_string(n) + " c=" + fmt(c) + " eps=" + fmt(eps) +
             " version=" + kVersion);
    p = make_ac(n, c);
  } else {
    manifest("command=bounds matrix=" + matrix_path + " eps=" + fmt(eps) +
             " version=" + kVersion);
    std::ifstream in(matrix_path);
    if (!in) throw CLI::ValidationError("--matrix", "cannot open " + matrix_path);
    p = read_problem(in);
  }

  BoundReport r = bound_report(p);
  out.s() << "quantity,value\n"
          << "prop1_kappa_factor_1," << fmt(r.prop1_kappa[0]) << "\n"
          << "prop1_kappa_factor_2," << fmt(r.prop1_kappa[1]) << "\n"
          << "prop1_kappa_cd_factor_1," << fmt(r.prop1_kappa_cd[0]) << "\n"
          << "prop1_kappa_cd_factor_2," << fmt(r.prop1_kappa_cd[1]) << "\n"
          << "prop2_factor_1," << fmt(r.prop2[0]) << "\n"
          << "prop2_factor_2," << fmt(r.prop2[1]) << "\n"
          << "prop2_factor_3," << fmt(r.prop2[2]) << "\n"
          << "prop2_factor_4," << fmt(r.prop2[3]) << "\n"
          << "contraction_certificate," << fmt(r.certificate) << "\n"
          << "gamma_norm," << fmt(r.gamma_norm) << "\n"
          << "gamma_bound_log," << fmt(r.gamma_bound_log) << "\n"
          << "gamma_bound_frob," << fmt(r.gamma_bound_frob) << "\n";
  if (is_ac) {
    CountTable t = iteration_counts(n, c, eps);
    out.s() << "k_gd," << fmt(t.k_gd) << "\n"
            << "k_rcd," << fmt(t.k_rcd) << "\n"
            << "k_rcd_iter," << fmt(t.k_rcd_iter) << "\n"
            << "k_rpcd," << fmt(t.k_rpcd) << "\n"
            << "k_ccd_lower," << fmt(t.k_ccd_lower) << "\n"
            << "ratio_gd," << fmt(t.ratio_gd) << "\n"
            << "ratio_rcd," << fmt(t.ratio_rcd) << "\n"
            << "ratio_rcd_iter," << fmt(t.ratio_rcd_iter) << "\n"
            << "ratio_rpcd," << fmt(t.ratio_rpcd) << "\n"
            << "theory_ratio_gd," << fmt(t.theory_gd) << "\n"
            << "theory_ratio_rcd_obj," << fmt(t.theory_rcd_obj) << "\n"
            << "theory_ratio_rcd_iter," << fmt(t.theory_rcd_iter) << "\n"
            << "theory_ratio_rpcd," << fmt(t.theory_rpcd) << "\n";
  }
  return kExitOk;
}

// ---- verify -----------------------------------------------------------------

struct Verifier {
  bool ok = true;
  void check(const std::string& name, double residual, double tol) {
    const bool pass = residual <= tol;
    std::cout << (pass ? "ok   " : "FAIL ") << name << " (residual=" << fmt(residual)
              << " tol=" << fmt(tol) << ")\n";
    if (!pass) ok = false;
  }
};

int cmd_verify(bool inject_gamma_bug) {
  manifest(std::string("command=verify inject_gamma_bug=") + (inject_gamma_bug ? "1" : "0") +
           " version=" + kVersion);
  Verifier v;

  // Polynomial-root eigenvalues vs QR spectrum of the C-CD iteration matrix.
  {
    double worst = 0.0;
    for (std::size_t n : {2ul, 3ul, 5ul, 8ul, 13ul, 21ul, 34ul, 50ul})
      for (double c : {0.3, 0.5, 0.8, 0.99}) {
        AcAnalysis a = analyze_ac(n, c);
        QuadraticProblem p = make_ac(n, c);
        DenseMatrix z(n, n); // Ginv * A = I - M_ccd
        DenseMatrix m = iteration_matrix(IterationMethod::CCD, p);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) z(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
        ComplexSpectrum s = general_spectrum(z);
        worst = std::max(worst, spectrum_distance(a.lambdas, s.eigenvalues));
      }
    v.check("roots_vs_qr_spectrum", worst, 1e-8);
  }

  // Eigen-polynomial residuals q^n (q - 1 + c) = c q at the stored roots.
  {
    double worst = 0.0;
    for (std::size_t n : {5ul, 20ul, 50ul})
      for (double c : {0.5, 0.99}) {
        AcAnalysis a = analyze_ac(n, c);
        for (const cplx& q : a.roots) {
          const cplx res = std::pow(q, static_cast<int>(n)) * (q - 1.0 + c) - c * q;
          worst = std::max(worst, std::abs(res));
        }
      }
    v.check("eigen_polynomial_residual", worst, 1e-10);
  }

  // Exhaustive permutation average vs the closed-form expected inverse.
  {
    double worst = 0.0;
    for (std::size_t n : {2ul, 3ul, 4ul, 5ul, 6ul})
      for (double c : {0.3, 0.7, 0.99}) {
        DenseMatrix en = expected_inverse_lower_enumerate(make_ac(n, c).A).mean;
        DenseMatrix cf = expected_inverse_lower_ac(n, c);
        if (inject_gamma_bug)
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
              if (i != j) cf(i, j) += 1e-6;
        for (std::size_t i = 0; i < n * n; ++i)
          worst = std::max(worst, std::abs(en.a[i] - cf.a[i]));
      }
    v.check("expected_inverse_enumerate_vs_closed_form", worst, 1e-12);
  }

  // Coordinate simulation vs matrix recursion (C-CD, and RP-CD with the
  // replayed permutation stream).
  {
    Rng rng(split_seed(20260814, 0));
    const std::size_t n = 7;
    DenseMatrix u(n, n);
    for (double& x : u.a) x = rng.gaussian();
    QuadraticProblem p = make_problem(gram(u), std::vector<double>(n, 0.0));
    std::vector<double> x0(n);
    for (double& x : x0) x = rng.uniform(-1.0, 1.0);

    double worst = 0.0;
    DenseMatrix mc = iteration_matrix(IterationMethod::CCD, p);
    Trajectory t = run_ccd(p, x0, 5, true);
    std::vector<double> xm = x0;
    for (std::size_t k = 1; k <= 5; ++k) {
      xm = matvec(mc, xm);
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(xm[i] - t.iterates[k][i]));
    }

    const std::uint64_t seed = 99;
    Trajectory tr = run_rpcd(p, x0, 5, seed, true);
    Rng replay(split_seed(seed, 0));
    std::vector<std::size_t> perm(n);
    std::vector<double> xr = x0;
    for (std::size_t k = 1; k <= 5; ++k) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      replay.shuffle(perm);
      DenseMatrix gi = permuted_lower_inverse(p.A, perm);
      std::vector<double> ax = matvec(p.A, xr);
      std::vector<double> corr = matvec(gi, ax);
      for (std::size_t i = 0; i < n; ++i) xr[i] -= corr[i];
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(xr[i] - tr.iterates[k][i]));
    }
    v.check("coordinate_vs_matrix_recursion", worst, 1e-12);
  }

  // Closed-form cosine sum vs direct summation.
  {
    Rng rng(split_seed(7, 0));
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const double z = rng.uniform(-3.0, 3.0);
      const double phi = rng.uniform(-3.0, 3.0);
      const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(40));
      double direct = 0.0;
      for (std::size_t j = 1; j <= n; ++j) direct += std::cos(z + static_cast<double>(j) * phi);
      worst = std::max(worst, std::abs(direct - cos_sum_closed(z, phi, n)));
    }
    v.check("cosine_sum_identity", worst, 1e-10);
  }

  // GD spectral radius on A_c: 1 - rho = (1-c)/(1-c+cn) analytically.
  {
    double worst = 0.0;
    for (std::size_t n : {2ul, 5ul, 20ul})
      for (double c : {0.3, 0.9}) {
        QuadraticProblem p = make_ac(n, c);
        SymEigen e = sym_eigen(iteration_matrix(IterationMethod::GD, p));
        const double rho = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
        const double expect = (1.0 - c) / (1.0 - c + c * static_cast<double>(n));
        worst = std::max(worst, std::abs((1.0 - rho) - expect));
      }
    v.check("gd_analytic_radius", worst, 1e-12);
  }

  // Monte-Carlo expected inverse vs closed form within 4 standard errors.
  {
    const std::size_t n = 20;
    const double c = 0.7;
    ExpectedInverse mc = expected_inverse_lower_mc(make_ac(n, c).A, 4000, 12345);
    DenseMatrix cf = expected_inverse_lower_ac(n, c);
    double worst = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
      const double se = std::max(mc.se.a[i], 1e-15);
      worst = std::max(worst, std::abs(mc.mean.a[i] - cf.a[i]) / se);
    }
    v.check("expected_inverse_monte_carlo_4se", worst, 4.0);
  }

  // R-CD mean iterate after one epoch vs (I - Dinv A / n)^n x0, 4 SE.
  {
    QuadraticProblem p = make_ac(5, 0.5);
    std::vector<double> x0 = {1.0, -0.5, 0.25, 0.7, -0.3};
    const std::size_t reps = 2000;
    StochasticRunner runner = [](const QuadraticProblem& pp, const std::vector<double>& x,
                                 std::size_t e, std::uint64_t s) {
      return run_rcd(pp, x, e, s, true);
    };
    MeanTrajectory mt = mc_mean_trajectory(runner, p, x0, 1, reps, 777);
    std::vector<double> expect = matvec(iteration_matrix(IterationMethod::RCD_expected, p), x0);
    // per-coordinate SE of the mean iterate
    std::vector<double> ss(5, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      Trajectory t = run_rcd(p, x0, 1, split_seed(777, r), true);
      for (std::size_t i = 0; i < 5; ++i) {
        const double d = t.iterates[1][i] - mt.mean.iterates[1][i];
        ss[i] += d * d;
      }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      const double se = std::sqrt(ss[i] / (static_cast<double>(reps - 1) * reps));
      worst = std::max(worst, std::abs(mt.mean.iterates[1][i] - expect[i]) / std::max(se, 1e-15));
    }
    v.check("rcd_expected_update_4se", worst, 4.0);
  }

  std::cout << (v.ok ? "verify: all checks passed\n" : "verify: FAILURES detected\n");
  return v.ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinate-descent worst-case lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string ns_text = "20,100,1000", cs_text = "0.5,0.8,0.99";
  std::size_t n = 20, epochs = 100, repeats = 1;
  double c = 0.99, delta = 0.2, eps = 1e-6, mean = 0.0;
  std::uint64_t seed = 1;
  std::string out_path, init = "random", dist = "gaussian", matrix_path;
  std::vector<std::string> methods{"ccd", "gd", "rcd", "rpcd"};
  bool normalize = true, inject_gamma_bug = false;

  CLI::App* t1 = app.add_subcommand("table1", "spectral-radius table for the worst-case family");
  t1->add_option("--n", ns_text, "comma-separated dimension list");
  t1->add_option("--c", cs_text, "comma-separated off-diagonal list");
  t1->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* tr = app.add_subcommand("trajectory", "per-epoch error trajectories on A_c");
  tr->add_option("--n", n, "dimension");
  tr->add_option("--c", c, "off-diagonal value");
  tr->add_option("--methods", methods, "gd,ccd,ccgd-small,rcd,rpcd")->delimiter(',');
  tr->add_option("--epochs", epochs, "epoch count");
  tr->add_option("--seed", seed, "base seed");
  tr->add_option("--init", init, "worst | random | ones");
  tr->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* lb = app.add_subcommand("lowerbound", "C-CD run vs the lower-bound envelope");
  lb->add_option("--n", n, "dimension");
  lb->add_option("--c", c, "off-diagonal value");
  lb->add_option("--delta", delta, "envelope slack in [0,1]");
  lb->add_option("--epochs", epochs, "epoch count");
  lb->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* rb = app.add_subcommand("randbench", "random-ensemble benchmark");
  rb->add_option("--n", n, "dimension");
  rb->add_option("--dist", dist, "gaussian | uniform | lognormal");
  rb->add_option("--mean", mean, "distribution mean (uniform: width-1 interval around it)");
  rb->add_option("--methods", methods, "method list")->delimiter(',');
  rb->add_option("--epochs", epochs, "epoch count");
  rb->add_option("--repeats", repeats, "Monte-Carlo repeats for stochastic methods");
  rb->add_option("--seed", seed, "base seed");
  rb->add_flag("--normalize,!--no-normalize", normalize, "unit-diagonal normalization");
  rb->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* bd = app.add_subcommand("bounds", "bound report and iteration-count table");
  bd->add_option("--n", n, "dimension (A_c problem)");
  bd->add_option("--c", c, "off-diagonal value (A_c problem)");
  bd->add_option("--matrix", matrix_path, "problem file (overrides --n/--c)");
  bd->add_option("--eps", eps, "target accuracy");
  bd->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI::App* vf = app.add_subcommand("verify", "oracle cross-check suite");
  vf->add_flag("--inject-gamma-bug", inject_gamma_bug,
               "negative control: perturb the closed-form expected inverse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage; // help/version exit 0, usage errors exit 2
  }

  try {
    if (t1->parsed()) return cmd_table1(ns_text, cs_text, out_path);
    if (tr->parsed()) return cmd_trajectory(n, c, methods, epochs, seed, init, out_path);
    if (lb->parsed()) return cmd_lowerbound(n, c, delta, epochs, out_path);
    if (rb->parsed())
      return cmd_randbench(n, dist, mean, methods, epochs, repeats, seed, normalize, out_path);
    if (bd->parsed()) return cmd_bounds(n, c, matrix_path, eps, out_path);
    if (vf->parsed()) return cmd_verify(inject_gamma_bug);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
