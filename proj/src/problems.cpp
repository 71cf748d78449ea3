#include "cdlab/problems.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cdlab/rng.hpp"

namespace cdlab {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Pivoted Cholesky probe: cheap rank-deficiency detector for PSD matrices.
bool psd_numerically_singular(const DenseMatrix& a, double rank_tol) {
  const std::size_t n = a.rows;
  DenseMatrix w = a;
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, w(i, i));
  const double cut = rank_tol * std::max(dmax, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (w(k, k) <= cut) return true;
    const double piv = std::sqrt(w(k, k));
    for (std::size_t i = k + 1; i < n; ++i) w(i, k) /= piv;
    for (std::size_t j = k + 1; j < n; ++j)
      for (std::size_t i = j; i < n; ++i) w(i, j) -= w(i, k) * w(j, k);
  }
  return false;
}

} // namespace

double objective(const QuadraticProblem& p, const std::vector<double>& x) {
  std::vector<double> ax = matvec(p.A, x);
  return dot(x, ax) - 2.0 * dot(p.b, x);
}

QuadraticProblem make_problem(DenseMatrix A, std::vector<double> b) {
  require(A.rows == A.cols, "make_problem: A must be square");
  require(A.rows == b.size(), "make_problem: dimension mismatch");
  const std::size_t n = A.rows;
  double scale = 0.0;
  for (double v : A.a) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    require(A(i, i) > 0.0, "make_problem: diagonal entries must be positive");
    for (std::size_t j = i + 1; j < n; ++j)
      require(std::abs(A(i, j) - A(j, i)) <= 1e-12 * std::max(scale, 1.0),
              "make_problem: A must be symmetric");
  }

  QuadraticProblem p;
  p.A = std::move(A);
  p.b = std::move(b);

  bool b_zero = true;
  for (double v : p.b)
    if (v != 0.0) b_zero = false;

  SymEigen e = sym_eigen(p.A);
  const double lmax = e.values.back();
  if (e.values.front() < -tols().rank_tol * std::max(lmax, 1.0))
    throw std::invalid_argument("make_problem: A is not PSD");
  p.singular = e.values.front() <= tols().rank_tol * lmax;

  if (b_zero) {
    p.x_star.assign(n, 0.0);
    p.f_star = 0.0;
  } else {
    DenseMatrix pinv = pseudo_inverse_psd(p.A, tols().rank_tol);
    p.x_star = matvec(pinv, p.b);
    std::vector<double> ax = matvec(p.A, p.x_star);
    double resid = 0.0, bnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      resid += (ax[i] - p.b[i]) * (ax[i] - p.b[i]);
      bnorm += p.b[i] * p.b[i];
    }
    if (std::sqrt(resid) > 1e-9 * (1.0 + std::sqrt(bnorm)))
      throw std::invalid_argument("make_problem: b is not in range(A)");
    p.f_star = -dot(p.b, p.x_star);
  }
  return p;
}

QuadraticProblem make_ac(std::size_t n, double c) {
  require(n >= 2, "make_ac: n must be >= 2");
  require(c > 0.0 && c < 1.0, "make_ac: c must lie in (0,1)");
  QuadraticProblem p;
  p.A = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.A(i, j) = (i == j) ? 1.0 : c;
  p.b.assign(n, 0.0);
  p.x_star.assign(n, 0.0);
  p.f_star = 0.0;
  p.singular = false;
  return p;
}

QuadraticProblem make_random(const EnsembleSpec& spec) {
  require(spec.n >= 2, "make_random: n must be >= 2");
  if (spec.dist == Distribution::gaussian || spec.dist == Distribution::lognormal)
    require(spec.p2 > 0.0, "make_random: variance/sigma must be positive");
  else
    require(spec.p2 > spec.p1, "make_random: uniform needs lo < hi");

  Rng rng(split_seed(spec.seed, 0));
  const std::size_t n = spec.n;
  DenseMatrix u(n, n);
  const double sd = (spec.dist == Distribution::gaussian) ? std::sqrt(spec.p2) : 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      switch (spec.dist) {
        case Distribution::gaussian: u(i, j) = spec.p1 + sd * rng.gaussian(); break;
        case Distribution::uniform: u(i, j) = rng.uniform(spec.p1, spec.p2); break;
        case Distribution::lognormal: u(i, j) = std::exp(spec.p1 + spec.p2 * rng.gaussian()); break;
      }
    }

  DenseMatrix a = gram(u);
  if (spec.normalize_diagonal) a = jacobi_precondition(a);

  QuadraticProblem p;
  p.A = std::move(a);
  p.b.assign(n, 0.0);
  p.x_star.assign(n, 0.0);
  p.f_star = 0.0;
  p.singular = psd_numerically_singular(p.A, tols().rank_tol);
  return p;
}

MetricsReport metrics(const QuadraticProblem& p) {
  const std::size_t n = p.dim();
  MetricsReport r;
  SymEigen e = sym_eigen(p.A);
  r.L = e.values.back();

  const double zero_cut = tols().rank_tol * std::max(r.L, 0.0);
  r.lambda_min = r.L;
  for (double v : e.values)
    if (v > zero_cut && v < r.lambda_min) r.lambda_min = v;

  r.L_i.resize(n);
  r.chi_i.resize(n);
  double diag_sum = 0.0;
  r.L_min = p.A(0, 0);
  r.L_max = p.A(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    r.L_i[i] = p.A(i, i);
    diag_sum += r.L_i[i];
    r.L_min = std::min(r.L_min, r.L_i[i]);
    r.L_max = std::max(r.L_max, r.L_i[i]);
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) off += std::abs(p.A(i, j));
    r.chi_i[i] = off / p.A(i, i);
  }
  r.L_avg = diag_sum / static_cast<double>(n);
  r.kappa = r.L / r.lambda_min;
  r.kappa_cd = r.L_avg / r.lambda_min;
  r.tau = r.L / r.L_min;
  r.chi_max = 0.0;
  double chi_sum = 0.0;
  for (double v : r.chi_i) {
    chi_sum += v;
    r.chi_max = std::max(r.chi_max, v);
  }
  r.chi_avg = chi_sum / static_cast<double>(n);

  DenseMatrix ahat = jacobi_precondition(p.A);
  SymEigen ehat = sym_eigen(ahat);
  r.hat_L = ehat.values.back();
  double hat_min = r.hat_L;
  const double hat_cut = tols().rank_tol * std::max(r.hat_L, 0.0);
  for (double v : ehat.values)
    if (v > hat_cut && v < hat_min) hat_min = v;
  r.hat_kappa = r.hat_L / hat_min;
  r.hat_kappa_cd = 1.0 / hat_min;
  return r;
}

DenseMatrix jacobi_precondition(const DenseMatrix& a) {
  require(a.rows == a.cols, "jacobi_precondition: matrix must be square");
  const std::size_t n = a.rows;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(a(i, i) > 0.0, "jacobi_precondition: diagonal entries must be positive");
    d[i] = 1.0 / std::sqrt(a(i, i));
  }
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, j) * d[i] * d[j];
  return out;
}

DenseMatrix lower_triangular_part(const DenseMatrix& a) {
  require(a.rows == a.cols, "lower_triangular_part: matrix must be square");
  DenseMatrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j <= i; ++j) out(i, j) = a(i, j);
  return out;
}

QuadraticProblem translate_problem(const QuadraticProblem& p, const std::vector<double>& x0,
                                   const std::vector<double>& v) {
  const std::size_t n = p.dim();
  require(x0.size() == n && v.size() == n, "translate_problem: dimension mismatch");
  std::vector<double> shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = x0[i] - v[i];
  std::vector<double> bt = matvec(p.A, shift);
  for (std::size_t i = 0; i < n; ++i) bt[i] += p.b[i]; // minimizer moves to x* + (x0 - v)
  return make_problem(p.A, bt);
}

void write_problem(std::ostream& os, const QuadraticProblem& p) {
  const std::size_t n = p.dim();
  char buf[40];
  os << n << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.16e", p.A(i, j));
      os << buf << (j + 1 < n ? " " : "\n");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::snprintf(buf, sizeof(buf), "%.16e", p.b[j]);
    os << buf << (j + 1 < n ? " " : "\n");
  }
}

QuadraticProblem read_problem(std::istream& is) {
  std::size_t n = 0;
  if (!(is >> n) || n == 0) throw std::invalid_argument("read_problem: bad dimension line");
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(is >> a(i, j))) throw std::invalid_argument("read_problem: truncated matrix data");
  std::vector<double> b(n);
  for (std::size_t j = 0; j < n; ++j)
    if (!(is >> b[j])) throw std::invalid_argument("read_problem: truncated b line");
  return make_problem(std::move(a), std::move(b));
}

} // namespace cdlab
