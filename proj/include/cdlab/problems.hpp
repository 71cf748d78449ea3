#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cdlab/linalg.hpp"

namespace cdlab {

// Quadratic minimization target f(x) = x'Ax - 2b'x with A symmetric PSD and
// b in range(A); x* = pinv(A) b, f* = -b'x*.
struct QuadraticProblem {
  DenseMatrix A;
  std::vector<double> b;
  std::vector<double> x_star;
  double f_star = 0.0;
  bool singular = false; // A numerically rank-deficient (flagged, not rejected)

  std::size_t dim() const { return A.rows; }
};

struct MetricsReport {
  double L = 0.0;          // lambda_max(A)
  double lambda_min = 0.0; // minimum nonzero eigenvalue
  double kappa = 0.0;      // L / lambda_min
  double kappa_cd = 0.0;   // L_avg / lambda_min
  std::vector<double> L_i; // diagonal entries
  double L_min = 0.0, L_max = 0.0, L_avg = 0.0;
  double tau = 0.0; // L / L_min
  std::vector<double> chi_i;
  double chi_avg = 0.0, chi_max = 0.0;
  double hat_L = 0.0, hat_kappa = 0.0, hat_kappa_cd = 0.0; // Jacobi-preconditioned
};

enum class Distribution { gaussian, uniform, lognormal };

struct EnsembleSpec {
  std::size_t n = 2;
  Distribution dist = Distribution::gaussian;
  double p1 = 0.0; // gaussian mean | uniform lo | lognormal mu
  double p2 = 1.0; // gaussian variance | uniform hi | lognormal sigma
  std::uint64_t seed = 0;
  bool normalize_diagonal = true;
};

double objective(const QuadraticProblem& p, const std::vector<double>& x);

// Builds the problem from (A, b): validates symmetry/PSD/b-in-range and
// computes x*, f* through the pseudo-inverse.
QuadraticProblem make_problem(DenseMatrix A, std::vector<double> b);

// Worst-case family: unit diagonal, all off-diagonal entries c in (0,1); b = 0.
QuadraticProblem make_ac(std::size_t n, double c);

QuadraticProblem make_random(const EnsembleSpec& spec);

MetricsReport metrics(const QuadraticProblem& p);

DenseMatrix jacobi_precondition(const DenseMatrix& a);

DenseMatrix lower_triangular_part(const DenseMatrix& a);

// Problem whose C-CD run from x0 replicates the run on p from v (shift
// invariance); minimizer is x0 - v for nonsingular A.
QuadraticProblem translate_problem(const QuadraticProblem& p, const std::vector<double>& x0,
                                   const std::vector<double>& v);

// Plain-text format: first line n, then n rows of A, then one line for b;
// 17 significant digits.
void write_problem(std::ostream& os, const QuadraticProblem& p);
QuadraticProblem read_problem(std::istream& is);

} // namespace cdlab
