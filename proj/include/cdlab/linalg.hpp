#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdlab {

using cplx = std::complex<double>;

// Central tolerance record; acceptance tests pin these defaults.
struct Tolerances {
  double symmetry = 1e-12;       // relative symmetry check for sym_eigen input
  double eigen_residual = 1e-9;  // sym_eigen residual / orthonormality
  double trace_check = 1e-8;     // general_spectrum trace consistency
  double root_residual = 1e-11;  // aberth_roots residual scale
  double solve_residual = 1e-12; // forward_solve back-substitution check
  double rank_tol = 1e-10;       // default pseudo-inverse rank cutoff
  double cos_singular = 1e-12;   // cos_sum_closed singular-branch switch
};

Tolerances& tols();

struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a; // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

struct SymEigen {
  std::vector<double> values; // ascending
  DenseMatrix vectors;        // orthonormal columns, vectors(:,i) pairs with values[i]
};

struct ComplexSpectrum {
  std::vector<cplx> eigenvalues; // conjugate-closed, with multiplicity
  double radius = 0.0;           // max modulus
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Basic kernels. The OpenMP versions are the default entry points; the _serial
// twins are the reference implementations kept for testing and benchmarking.
// Both produce bitwise-identical results (per-row reductions run in a fixed
// serial order either way).
std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& v);
std::vector<double> matvec_serial(const DenseMatrix& m, const std::vector<double>& v);
DenseMatrix matmul(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix matmul_serial(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix gram(const DenseMatrix& u); // u^T u
DenseMatrix gram_serial(const DenseMatrix& u);
DenseMatrix transpose(const DenseMatrix& m);
double dot(const std::vector<double>& x, const std::vector<double>& y);
double norm2(const std::vector<double>& x); // squared euclidean norm

SymEigen sym_eigen(const DenseMatrix& s);
ComplexSpectrum general_spectrum(const DenseMatrix& m);
double spectral_norm(const DenseMatrix& m);
std::vector<double> forward_solve(const DenseMatrix& lower, const std::vector<double>& v);

// Roots of c[0] + c[1] q + ... + c[deg] q^deg (ascending coefficients).
std::vector<cplx> aberth_roots(const std::vector<cplx>& coeffs);
std::vector<cplx> aberth_roots_serial(const std::vector<cplx>& coeffs);

DenseMatrix pseudo_inverse_psd(const DenseMatrix& s, double rank_tol);

// Max distance under a greedy closest-pair matching of two equal-size
// eigenvalue multisets (robust to conjugate-pair ordering flips).
double spectrum_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

// sum_{j=1..n} cos(z + j*phi) in closed form, with the removable singularity
// at sin(phi/2) = 0 handled by direct summation.
double cos_sum_closed(double z, double phi, std::size_t n);

} // namespace cdlab
