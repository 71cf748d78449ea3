#include "cdlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cdlab/rng.hpp"

namespace cdlab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_nc(std::size_t n, double c) {
  require(n >= 2, "analysis: n must be >= 2");
  require(c > 0.0 && c < 1.0, "analysis: c must lie in (0,1)");
}

// Circular distance between angles.
double angle_dist(double a, double b) {
  const double d = a - b;
  return std::abs(std::atan2(std::sin(d), std::cos(d)));
}

// I - Ginv * A with G the lower triangle, via one forward solve per column.
DenseMatrix ccd_matrix(const DenseMatrix& a) {
  const std::size_t n = a.rows;
  DenseMatrix g = lower_triangular_part(a);
  DenseMatrix m(n, n);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
    std::vector<double> y = forward_solve(g, col);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = (i == j ? 1.0 : 0.0) - y[i];
  }
  return m;
}

DenseMatrix matrix_power(DenseMatrix base, std::size_t e) {
  DenseMatrix acc = DenseMatrix::identity(base.rows);
  while (e > 0) {
    if (e & 1) acc = matmul(acc, base);
    e >>= 1;
    if (e > 0) base = matmul(base, base);
  }
  return acc;
}

double log_factor(std::size_t n) {
  const double lf = 2.0 + std::log(static_cast<double>(n)) / kPi;
  return lf * lf;
}

} // namespace

AcAnalysis analyze_ac(std::size_t n, double c) {
  check_nc(n, c);
  AcAnalysis a;
  a.n = n;
  a.c = c;

  // q^n + (c-1)q^(n-1) - c factors as (q - 1)(q^(n-1) + c q^(n-2) + ... + c),
  // so the n-1 nontrivial roots come from the second factor.
  std::vector<cplx> coeffs(n, cplx(c, 0.0));
  coeffs[n - 1] = cplx(1.0, 0.0);
  std::vector<cplx> q = aberth_roots(coeffs);
  std::sort(q.begin(), q.end(),
            [](const cplx& x, const cplx& y) { return std::arg(x) < std::arg(y); });

  a.roots = q;
  a.roots.push_back(cplx(1.0, 0.0));
  const int ni = static_cast<int>(n);
  for (const cplx& qq : q) a.lambdas.push_back(cplx(1.0, 0.0) - std::pow(qq, ni));
  a.lambdas.push_back(cplx(1.0, 0.0));

  double max_abs = 0.0;
  for (const cplx& qq : q) max_abs = std::max(max_abs, std::abs(qq));
  a.one_minus_rho = -std::expm1(static_cast<double>(n) * std::log(max_abs));
  a.rho_ccd = 1.0 - a.one_minus_rho;

  // Dominant root: argument closest to 2*pi/n among |q| <= 1 + 1e-9,
  // ties to the larger modulus.
  const double target = 2.0 * kPi / static_cast<double>(n);
  bool found = false;
  double best_d = 0.0, best_abs = 0.0;
  for (const cplx& qq : q) {
    const double m = std::abs(qq);
    if (m > 1.0 + 1e-9) continue;
    const double d = angle_dist(std::arg(qq), target);
    if (!found || d < best_d - 1e-15 || (std::abs(d - best_d) <= 1e-15 && m > best_abs)) {
      found = true;
      best_d = d;
      best_abs = m;
      a.q1 = qq;
    }
  }
  require(found, "analyze_ac: no admissible dominant root");
  a.r = std::abs(a.q1);
  a.theta = std::arg(a.q1);

  a.worst_init.resize(n);
  cplx acc(1.0, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    acc *= a.q1;
    a.worst_init[j] = acc.real();
  }

  const double nd = static_cast<double>(n);
  const double chat = 1.0 - c;
  double s_abs = std::abs(std::sin(nd * a.theta) / std::sin(a.theta));
  s_abs = std::min(s_abs, nd); // Dirichlet-kernel bound, guards rounding
  a.omega_c = (nd - s_abs) / (nd + s_abs);
  a.alpha_c = c * chat * std::norm(a.q1 / (cplx(chat, 0.0) - a.q1)) + 0.5 * (nd + s_abs);
  a.beta_c = (nd - s_abs) / (2.0 * a.alpha_c);
  return a;
}

std::vector<double> worst_init(std::size_t n, double c) { return analyze_ac(n, c).worst_init; }

std::vector<JkEntry> jk_table(const AcAnalysis& a) {
  const double nd = static_cast<double>(a.n);
  const double kappa = (1.0 - a.c + a.c * nd) / (1.0 - a.c);
  std::vector<JkEntry> out;
  for (std::size_t k = 1; k < a.n; ++k) {
    JkEntry e;
    e.k = k;
    const double sk = std::sin(static_cast<double>(k) * kPi / nd);
    e.limit = 1.0 / (2.0 * nd * sk * sk);
    // Root assigned to index k by argument, per the c -> 1 limit e^{i 2k pi/n}.
    double want = 2.0 * kPi * static_cast<double>(k) / nd;
    if (want > kPi) want -= 2.0 * kPi;
    std::size_t best = 0;
    double best_d = angle_dist(std::arg(a.roots[0]), want);
    for (std::size_t i = 1; i + 1 < a.roots.size(); ++i) {
      const double d = angle_dist(std::arg(a.roots[i]), want);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    const double one_minus_mod =
        -std::expm1(nd * std::log(std::abs(a.roots[best]))); // 1 - |1 - lambda_k|
    e.empirical = (1.0 / kappa) / one_minus_mod;
    out.push_back(e);
  }
  return out;
}

DenseMatrix permuted_lower_inverse(const DenseMatrix& a, const std::vector<std::size_t>& perm) {
  require(a.rows == a.cols && perm.size() == a.rows,
          "permuted_lower_inverse: dimension mismatch");
  const std::size_t n = a.rows;
  DenseMatrix bar(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) bar(i, j) = a(perm[i], perm[j]);
  DenseMatrix out(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    std::vector<double> y = forward_solve(bar, e);
    e[j] = 0.0;
    for (std::size_t i = j; i < n; ++i) out(perm[i], perm[j]) = y[i];
  }
  return out;
}

DenseMatrix iteration_matrix(IterationMethod method, const QuadraticProblem& p) {
  const std::size_t n = p.dim();
  switch (method) {
    case IterationMethod::GD: {
      SymEigen e = sym_eigen(p.A);
      const double L = e.values.back();
      require(L > 0.0, "iteration_matrix: lambda_max must be positive");
      DenseMatrix m = DenseMatrix::identity(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) -= p.A(i, j) / L;
      return m;
    }
    case IterationMethod::CCD:
      return ccd_matrix(p.A);
    case IterationMethod::RCD_expected: {
      DenseMatrix b = DenseMatrix::identity(n);
      const double nd = static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) -= p.A(i, j) / (p.A(i, i) * nd);
      return matrix_power(std::move(b), n);
    }
    case IterationMethod::RPCD_expected: {
      ExpectedInverse e = expected_inverse_lower_enumerate(p.A);
      DenseMatrix ea = matmul(e.mean, p.A);
      DenseMatrix m = DenseMatrix::identity(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) -= ea(i, j);
      return m;
    }
  }
  throw std::invalid_argument("iteration_matrix: unknown method");
}

ExpectedInverse expected_inverse_lower_enumerate(const DenseMatrix& a) {
  require(a.rows == a.cols && a.rows >= 1, "expected_inverse_lower: square matrix required");
  require(a.rows <= 8, "expected_inverse_lower: enumerate limited to n <= 8");
  const std::size_t n = a.rows;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  DenseMatrix sum(n, n);
  std::size_t count = 0;
  do {
    DenseMatrix inv = permuted_lower_inverse(a, perm);
    for (std::size_t i = 0; i < n * n; ++i) sum.a[i] += inv.a[i];
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : sum.a) v /= static_cast<double>(count);
  return {std::move(sum), DenseMatrix(n, n)};
}

ExpectedInverse expected_inverse_lower_mc(const DenseMatrix& a, std::size_t samples,
                                          std::uint64_t seed) {
  require(a.rows == a.cols && a.rows >= 1, "expected_inverse_lower: square matrix required");
  require(samples >= 2, "expected_inverse_lower: need samples >= 2");
  const std::size_t n = a.rows;
  Rng rng(split_seed(seed, 0));
  std::vector<std::size_t> perm(n);
  DenseMatrix sum(n, n), sumsq(n, n);
  for (std::size_t s = 0; s < samples; ++s) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    DenseMatrix inv = permuted_lower_inverse(a, perm);
    for (std::size_t i = 0; i < n * n; ++i) {
      sum.a[i] += inv.a[i];
      sumsq.a[i] += inv.a[i] * inv.a[i];
    }
  }
  const double sd = static_cast<double>(samples);
  ExpectedInverse out{DenseMatrix(n, n), DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n * n; ++i) {
    const double mean = sum.a[i] / sd;
    out.mean.a[i] = mean;
    const double var = std::max(0.0, (sumsq.a[i] - sd * mean * mean) / (sd - 1.0));
    out.se.a[i] = std::sqrt(var / sd);
  }
  return out;
}

double gamma_ac(std::size_t n, double c) {
  check_nc(n, c);
  const double nd = static_cast<double>(n);
  const double chat = 1.0 - c;
  return (-nd + (1.0 - std::pow(chat, nd)) / c) / (nd * (nd - 1.0));
}

DenseMatrix expected_inverse_lower_ac(std::size_t n, double c) {
  const double g = gamma_ac(n, c);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j) ? 1.0 : g;
  return m;
}

double thm1_envelope(std::size_t n, double kappa, std::size_t k, double delta) {
  require(delta >= 0.0 && delta <= 1.0, "thm1_envelope: delta must lie in [0,1]");
  const double nk = static_cast<double>(n) * kappa;
  if (!(nk > 2.0 * kPi * kPi))
    throw std::domain_error("thm1_envelope: requires n*kappa > 2*pi^2");
  const double base = 1.0 - 2.0 * kPi * kPi / nk;
  return (1.0 - delta) * std::pow(base, 2.0 * static_cast<double>(k) + 2.0);
}

double thm1_envelope_cd(std::size_t n, double kappa_cd, std::size_t k, double delta) {
  const double nd = static_cast<double>(n);
  return thm1_envelope(n, nd * kappa_cd, k, delta); // n * (n kappa_cd) = n^2 kappa_cd
}

std::array<double, 2> prop1_kappa_factors(const QuadraticProblem& p) {
  MetricsReport m = metrics(p);
  const double nd = static_cast<double>(p.dim());
  return {1.0 - (1.0 / (nd * m.kappa)) * (m.L_min / m.L_avg),
          1.0 - (m.L_min / (m.L * log_factor(p.dim()))) * (1.0 / m.kappa)};
}

std::array<double, 2> prop1_kappa_cd_factors(const QuadraticProblem& p) {
  MetricsReport m = metrics(p);
  const double nd = static_cast<double>(p.dim());
  return {1.0 - (1.0 / (nd * nd * m.kappa_cd)) * (m.L_min / m.L_avg),
          1.0 - (m.L_min * m.L_avg / (m.L * m.L * log_factor(p.dim()))) * (1.0 / m.kappa_cd)};
}

std::array<double, 4> prop2_factors(const QuadraticProblem& p) {
  MetricsReport m = metrics(p);
  const double nd = static_cast<double>(p.dim());
  const double lf = log_factor(p.dim());
  return {1.0 - 1.0 / (nd * m.hat_kappa),
          1.0 - (1.0 / (m.hat_L * lf)) * (1.0 / m.hat_kappa),
          1.0 - 1.0 / (nd * nd * m.hat_kappa_cd),
          1.0 - (1.0 / (m.hat_L * m.hat_L * lf)) * (1.0 / m.hat_kappa_cd)};
}

double contraction_certificate(const QuadraticProblem& p) {
  const std::size_t n = p.dim();
  DenseMatrix g = lower_triangular_part(p.A);
  DenseMatrix pinv = pseudo_inverse_psd(p.A, tols().rank_tol);
  DenseMatrix m = matmul(transpose(g), matmul(pinv, g));
  for (std::size_t i = 0; i < n; ++i) {
    require(p.A(i, i) > 0.0, "contraction_certificate: diagonal must be positive");
    const double di = 1.0 / std::sqrt(p.A(i, i));
    for (std::size_t j = 0; j < n; ++j) m(i, j) *= di;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double dj = 1.0 / std::sqrt(p.A(j, j));
    for (std::size_t i = 0; i < n; ++i) m(i, j) *= dj;
  }
  return spectral_norm(m);
}

std::array<double, 3> gamma_norm_bounds(const DenseMatrix& a) {
  require(a.rows == a.cols, "gamma_norm_bounds: square matrix required");
  const double gn = spectral_norm(lower_triangular_part(a));
  const double an = spectral_norm(a);
  double diag_sum = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) diag_sum += a(i, i);
  const double lf = 2.0 + std::log(static_cast<double>(a.rows)) / kPi;
  return {gn, lf * an, std::sqrt(an * diag_sum)};
}

BoundReport bound_report(const QuadraticProblem& p) {
  BoundReport r;
  r.prop1_kappa = prop1_kappa_factors(p);
  r.prop1_kappa_cd = prop1_kappa_cd_factors(p);
  r.prop2 = prop2_factors(p);
  r.certificate = contraction_certificate(p);
  std::array<double, 3> gb = gamma_norm_bounds(p.A);
  r.gamma_norm = gb[0];
  r.gamma_bound_log = gb[1];
  r.gamma_bound_frob = gb[2];
  return r;
}

CountTable iteration_counts(std::size_t n, double c, double eps) {
  check_nc(n, c);
  require(eps > 0.0 && eps <= 1.0, "iteration_counts: eps must lie in (0,1]");
  CountTable t;
  const double nd = static_cast<double>(n);
  const double pi2 = 2.0 * kPi * kPi;
  t.theory_gd = nd / pi2;
  t.theory_rcd_obj = nd * nd / (2.0 * pi2);
  t.theory_rcd_iter = nd * nd / pi2;
  t.theory_rpcd = nd * (nd + 1.0) / pi2;

  const double kappa = (1.0 - c + c * nd) / (1.0 - c);
  if (eps >= 1.0 || kappa <= 1.0) return t; // zero iterations needed

  const double kappa_cd = 1.0 / (1.0 - c);
  const double le = std::log(eps);
  t.k_gd = 0.5 * le / std::log1p(-1.0 / kappa) + 1.0;
  t.k_rcd = le / (nd * std::log1p(-1.0 / kappa_cd)) + 1.0;
  t.k_rcd_iter = le / (2.0 * nd * std::log1p(-1.0 / kappa_cd)) + 1.0;
  t.k_rpcd = 0.5 * le / std::log1p(-(1.0 - c) * (1.0 - gamma_ac(n, c))) + 1.0;

  AcAnalysis a = analyze_ac(n, c);
  t.k_ccd_lower = 0.5 * (-le + std::log(a.beta_c)) / (-std::log1p(-a.one_minus_rho)) - 1.0;
  t.ratio_gd = t.k_ccd_lower / t.k_gd;
  t.ratio_rcd = t.k_ccd_lower / t.k_rcd;
  t.ratio_rcd_iter = t.k_ccd_lower / t.k_rcd_iter;
  t.ratio_rpcd = t.k_ccd_lower / t.k_rpcd;
  return t;
}

std::vector<SpectrumRow> table1_row(std::size_t n, double c) {
  AcAnalysis a = analyze_ac(n, c);
  const double nd = static_cast<double>(n);
  const double ccd = a.one_minus_rho;
  const double gd = (1.0 - c) / (1.0 - c + c * nd);
  const double rcd = -std::expm1(nd * std::log1p(-(1.0 - c) / nd));
  const double rpcd = (1.0 - c) * (1.0 - gamma_ac(n, c));
  return {{"CCD", ccd, 1.0},
          {"GD", gd, gd / ccd},
          {"RCD", rcd, rcd / ccd},
          {"RPCD", rpcd, rpcd / ccd}};
}

} // namespace cdlab
