#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cdlab/linalg.hpp"
#include "cdlab/problems.hpp"

namespace cdlab {

// Everything the eigen-polynomial q^n + (c-1)q^(n-1) - c = 0 yields for the
// worst-case family: its roots (the trivial root 1 stored last), the cyclic-CD
// iteration-matrix eigenvalues lambda_k = 1 - q_k^n plus the trivial
// eigenvalue 1, the dominant root q1 (argument closest to 2*pi/n), the
// adversarial initial point Re(q1^j), and the asymptotic constants.
struct AcAnalysis {
  std::size_t n = 0;
  double c = 0.0;
  std::vector<cplx> roots;   // q_1..q_{n-1} sorted by argument, then q_n = 1
  std::vector<cplx> lambdas; // 1 - q_k^n for k = 1..n-1, then the trivial 1
  cplx q1;
  double r = 0.0, theta = 0.0; // q1 = r e^{i theta}
  double rho_ccd = 0.0;        // max_k |1 - lambda_k|, k = 1..n-1
  double one_minus_rho = 0.0;  // 1 - rho_ccd, cancellation-free
  std::vector<double> worst_init;
  double omega_c = 0.0, alpha_c = 0.0, beta_c = 0.0;
};

struct JkEntry {
  std::size_t k = 0;
  double limit = 0.0;     // 1/(2 n sin^2(k pi / n))
  double empirical = 0.0; // (1/kappa) / (1 - |1 - lambda_k|)
};

struct BoundReport {
  std::array<double, 2> prop1_kappa{};    // kappa-form factors
  std::array<double, 2> prop1_kappa_cd{}; // kappa_cd-form factors
  std::array<double, 4> prop2{};          // Jacobi-preconditioned factors
  double certificate = 0.0;               // |D^-1/2 G' pinv(A) G D^-1/2|
  double gamma_norm = 0.0;                // |G|, G = lower triangle of A
  double gamma_bound_log = 0.0;           // (2 + log(n)/pi) |A|
  double gamma_bound_frob = 0.0;          // sqrt(|A| * sum_i A_ii)
};

struct CountTable {
  double k_gd = 0.0;       // upper bound, objective
  double k_rcd = 0.0;      // upper bound, objective
  double k_rcd_iter = 0.0; // upper bound, mean iterate
  double k_rpcd = 0.0;     // upper bound, mean iterate
  double k_ccd_lower = 0.0;
  double ratio_gd = 0.0;   // k_ccd_lower / k_gd, etc.
  double ratio_rcd = 0.0;
  double ratio_rcd_iter = 0.0;
  double ratio_rpcd = 0.0;
  double theory_gd = 0.0;       // n / (2 pi^2)
  double theory_rcd_obj = 0.0;  // n^2 / (4 pi^2)
  double theory_rcd_iter = 0.0; // n^2 / (2 pi^2)
  double theory_rpcd = 0.0;     // n(n+1) / (2 pi^2)
};

struct SpectrumRow {
  std::string method;
  double one_minus_rho = 0.0;
  double ratio_over_ccd = 0.0;
};

struct ExpectedInverse {
  DenseMatrix mean;
  DenseMatrix se; // entrywise standard error (zero for exact modes)
};

enum class IterationMethod { GD, CCD, RCD_expected, RPCD_expected };

// Full root/eigenvalue/initial-point analysis; the one entry point behind
// ac_roots, worst_init and asymptotic_quantities.
AcAnalysis analyze_ac(std::size_t n, double c);

std::vector<double> worst_init(std::size_t n, double c);

std::vector<JkEntry> jk_table(const AcAnalysis& a);

// Epoch iteration matrix. RPCD_expected enumerates permutations and is
// limited to n <= 8; use expected_inverse_lower_ac for the closed form.
DenseMatrix iteration_matrix(IterationMethod method, const QuadraticProblem& p);

// Inverse of the lower triangle taken in coordinate order `perm`, expressed
// in the original coordinates.
DenseMatrix permuted_lower_inverse(const DenseMatrix& a, const std::vector<std::size_t>& perm);

ExpectedInverse expected_inverse_lower_enumerate(const DenseMatrix& a); // n <= 8
ExpectedInverse expected_inverse_lower_mc(const DenseMatrix& a, std::size_t samples,
                                          std::uint64_t seed);
double gamma_ac(std::size_t n, double c); // (-n + (1 - (1-c)^n)/c) / (n(n-1))
DenseMatrix expected_inverse_lower_ac(std::size_t n, double c);

// (1 - delta)(1 - 2 pi^2/(n kappa))^(2k+2); domain requires n kappa > 2 pi^2.
double thm1_envelope(std::size_t n, double kappa, std::size_t k, double delta);
double thm1_envelope_cd(std::size_t n, double kappa_cd, std::size_t k, double delta);

std::array<double, 2> prop1_kappa_factors(const QuadraticProblem& p);
std::array<double, 2> prop1_kappa_cd_factors(const QuadraticProblem& p);
std::array<double, 4> prop2_factors(const QuadraticProblem& p);
double contraction_certificate(const QuadraticProblem& p);
std::array<double, 3> gamma_norm_bounds(const DenseMatrix& a);
BoundReport bound_report(const QuadraticProblem& p);

CountTable iteration_counts(std::size_t n, double c, double eps);

// Table rows in CCD/GD/RCD/RPCD order with 1 - rho and the ratio over CCD.
std::vector<SpectrumRow> table1_row(std::size_t n, double c);

} // namespace cdlab
