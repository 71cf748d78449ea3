#include "cdlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cdlab {

Tolerances& tols() {
  static Tolerances t;
  return t;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double max_abs(const DenseMatrix& m) {
  double v = 0.0;
  for (double x : m.a) v = std::max(v, std::abs(x));
  return v;
}

} // namespace

std::vector<double> matvec_serial(const DenseMatrix& m, const std::vector<double>& v) {
  require(m.cols == v.size(), "matvec: dimension mismatch");
  std::vector<double> out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = &m.a[i * m.cols];
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& v) {
  require(m.cols == v.size(), "matvec: dimension mismatch");
  std::vector<double> out(m.rows, 0.0);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(m.rows);
#pragma omp parallel for schedule(static) if (rows >= 128)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* row = &m.a[static_cast<std::size_t>(i) * m.cols];
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * v[j];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

DenseMatrix matmul_serial(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.cols == y.rows, "matmul: dimension mismatch");
  DenseMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double xv = x(i, k);
      if (xv == 0.0) continue;
      const double* yrow = &y.a[k * y.cols];
      double* orow = &out.a[i * out.cols];
      for (std::size_t j = 0; j < y.cols; ++j) orow[j] += xv * yrow[j];
    }
  return out;
}

DenseMatrix matmul(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.cols == y.rows, "matmul: dimension mismatch");
  DenseMatrix out(x.rows, y.cols);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static) if (rows >= 64)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double xv = x(ii, k);
      if (xv == 0.0) continue;
      const double* yrow = &y.a[k * y.cols];
      double* orow = &out.a[ii * out.cols];
      for (std::size_t j = 0; j < y.cols; ++j) orow[j] += xv * yrow[j];
    }
  }
  return out;
}

DenseMatrix gram_serial(const DenseMatrix& u) {
  DenseMatrix out(u.cols, u.cols);
  for (std::size_t i = 0; i < u.cols; ++i)
    for (std::size_t j = i; j < u.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < u.rows; ++k) s += u(k, i) * u(k, j);
      out(i, j) = s;
      out(j, i) = s;
    }
  return out;
}

DenseMatrix gram(const DenseMatrix& u) {
  DenseMatrix out(u.cols, u.cols);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.cols);
#pragma omp parallel for schedule(dynamic, 8) if (n >= 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    for (std::size_t j = ii; j < u.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < u.rows; ++k) s += u(k, ii) * u(k, j);
      out(ii, j) = s;
      out(j, ii) = s;
    }
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix out(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const std::vector<double>& x) { return dot(x, x); }

// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
SymEigen sym_eigen(const DenseMatrix& s) {
  require(s.rows == s.cols && s.rows >= 1, "sym_eigen: matrix must be square");
  const std::size_t n = s.rows;
  const double scale = max_abs(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(s(i, j) - s(j, i)) > tols().symmetry * std::max(scale, 1.0))
        throw std::invalid_argument("sym_eigen: matrix not symmetric");

  DenseMatrix a = s;
  DenseMatrix v = DenseMatrix::identity(n);
  const double nd = static_cast<double>(n);
  const double off_floor = std::max(nd * nd * 9e-32 * scale * scale, 1e-300);
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off <= off_floor) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * std::max(scale, 1e-300)) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        // smaller-magnitude root of t^2 + 2 tau t - 1 = 0
        double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double cth = 1.0 / std::sqrt(1.0 + t * t);
        const double sth = t * cth;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = cth * akp - sth * akq;
          a(k, q) = sth * akp + cth * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = cth * apk - sth * aqk;
          a(q, k) = sth * apk + cth * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = cth * vkp - sth * vkq;
          v(k, q) = sth * vkp + cth * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

// Reduction to upper Hessenberg form by stabilized elementary similarity
// transforms, followed by Francis double-shift QR (eigenvalues only).
void hessenberg(DenseMatrix& a) {
  const std::size_t n = a.rows;
  if (n < 3) return;
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double x = 0.0;
    std::size_t piv = m;
    for (std::size_t j = m; j < n; ++j)
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        piv = j;
      }
    if (piv != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (x != 0.0) {
      for (std::size_t i = m + 1; i < n; ++i) {
        double y = a(i, m - 1);
        if (y == 0.0) continue;
        y /= x;
        a(i, m - 1) = y;
        for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
        for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
      }
    }
  }
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = 0.0;
}

std::vector<cplx> hqr(DenseMatrix& a) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows);
  auto h = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> double& {
    return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  std::vector<cplx> eig;
  eig.reserve(static_cast<std::size_t>(n));

  double anorm = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(i - 1, 0); j < n; ++j)
      anorm += std::abs(h(i, j));
  if (anorm == 0.0) {
    for (std::ptrdiff_t i = 0; i < n; ++i) eig.emplace_back(0.0, 0.0);
    return eig;
  }

  std::ptrdiff_t nn = n - 1;
  double t = 0.0;
  const double eps = 2.22e-16;
  while (nn >= 0) {
    int its = 0;
    std::ptrdiff_t l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h(l, l - 1)) <= eps * s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      double x = h(nn, nn);
      if (l == nn) {
        eig.emplace_back(x + t, 0.0);
        --nn;
      } else {
        double y = h(nn - 1, nn - 1);
        double w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? std::abs(z) : -std::abs(z));
            eig.emplace_back(x + z, 0.0);
            eig.emplace_back(z != 0.0 ? x - w / z : x + z, 0.0);
          } else {
            eig.emplace_back(x + p, z);
            eig.emplace_back(x + p, -z);
          }
          nn -= 2;
        } else {
          if (its == 60) throw numeric_error("general_spectrum: QR iteration did not converge");
          double p = 0.0, q = 0.0, z = 0.0, r = 0.0, s = 0.0;
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            t += x;
            for (std::ptrdiff_t i = 0; i <= nn; ++i) h(i, i) -= x;
            s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          std::ptrdiff_t m;
          for (m = nn - 2; m >= l; --m) {
            z = h(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - r - s;
            r = h(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (std::ptrdiff_t i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i != m + 2) h(i, i - 3) = 0.0;
          }
          for (std::ptrdiff_t k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double sg = std::sqrt(p * p + q * q + r * r);
            s = (p >= 0.0 ? sg : -sg);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) h(k, k - 1) = -h(k, k - 1);
            } else {
              h(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (std::ptrdiff_t j = k; j <= nn; ++j) {
              p = h(k, j) + q * h(k + 1, j);
              if (k != nn - 1) {
                p += r * h(k + 2, j);
                h(k + 2, j) -= p * z;
              }
              h(k + 1, j) -= p * y;
              h(k, j) -= p * x;
            }
            std::ptrdiff_t mmin = (nn < k + 3) ? nn : k + 3;
            for (std::ptrdiff_t i = l; i <= mmin; ++i) {
              p = x * h(i, k) + y * h(i, k + 1);
              if (k != nn - 1) {
                p += z * h(i, k + 2);
                h(i, k + 2) -= p * r;
              }
              h(i, k + 1) -= p * q;
              h(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return eig;
}

} // namespace

ComplexSpectrum general_spectrum(const DenseMatrix& m) {
  require(m.rows == m.cols && m.rows >= 1, "general_spectrum: matrix must be square");
  double trace = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) trace += m(i, i);

  DenseMatrix a = m;
  hessenberg(a);
  ComplexSpectrum out;
  out.eigenvalues = hqr(a);

  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  cplx sum = 0.0;
  out.radius = 0.0;
  for (const cplx& e : out.eigenvalues) {
    sum += e;
    out.radius = std::max(out.radius, std::abs(e));
  }
  if (std::abs(sum - trace) > tols().trace_check * (1.0 + std::abs(trace)) * m.rows)
    throw numeric_error("general_spectrum: eigenvalue sum deviates from trace, residual " +
                        std::to_string(std::abs(sum - trace)));
  return out;
}

double spectral_norm(const DenseMatrix& m) {
  for (double x : m.a)
    if (!std::isfinite(x)) throw std::invalid_argument("spectral_norm: non-finite entry");
  DenseMatrix mtm = matmul(transpose(m), m);
  // symmetrize roundoff before the eigen solve
  for (std::size_t i = 0; i < mtm.rows; ++i)
    for (std::size_t j = i + 1; j < mtm.cols; ++j) {
      double v = 0.5 * (mtm(i, j) + mtm(j, i));
      mtm(i, j) = v;
      mtm(j, i) = v;
    }
  SymEigen e = sym_eigen(mtm);
  double lmax = e.values.empty() ? 0.0 : e.values.back();
  return std::sqrt(std::max(lmax, 0.0));
}

std::vector<double> forward_solve(const DenseMatrix& lower, const std::vector<double>& v) {
  require(lower.rows == lower.cols, "forward_solve: matrix must be square");
  require(lower.rows == v.size(), "forward_solve: dimension mismatch");
  const std::size_t n = lower.rows;
  for (std::size_t i = 0; i < n; ++i)
    if (lower(i, i) == 0.0) throw numeric_error("forward_solve: zero diagonal, singular triangular system");
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = v[i];
    const double* row = &lower.a[i * n];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
    x[i] = s / row[i];
  }
  return x;
}

namespace {

cplx poly_eval(const std::vector<cplx>& c, const cplx& z, cplx* deriv) {
  // Horner on ascending coefficients, highest power first.
  cplx p = c.back();
  cplx d = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    d = d * z + p;
    p = p * z + c[k];
  }
  if (deriv) *deriv = d;
  return p;
}

bool aberth_residual_ok(const std::vector<cplx>& c, const cplx& z) {
  const std::size_t deg = c.size() - 1;
  double maxc = 0.0;
  for (const cplx& v : c) maxc = std::max(maxc, std::abs(v));
  double logbound = std::log(1e-11 * maxc) + static_cast<double>(deg) * std::log1p(std::abs(z));
  double res = std::abs(poly_eval(c, z, nullptr));
  if (res == 0.0) return true;
  return std::log(res) <= logbound;
}

std::vector<cplx> aberth_impl(const std::vector<cplx>& coeffs, bool parallel) {
  if (coeffs.size() < 2) throw std::invalid_argument("aberth_roots: degree must be >= 1");
  if (std::abs(coeffs.back()) == 0.0)
    throw std::invalid_argument("aberth_roots: leading coefficient must be nonzero");
  const std::size_t deg = coeffs.size() - 1;

  double maxc = 0.0;
  for (const cplx& v : coeffs) maxc = std::max(maxc, std::abs(v));
  const double radius = std::pow(maxc / std::abs(coeffs.back()), 1.0 / static_cast<double>(deg));

  std::vector<cplx> z(deg), znew(deg);
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t k = 0; k < deg; ++k) {
    double ang = two_pi * static_cast<double>(k) / static_cast<double>(deg) + 0.3;
    z[k] = cplx(radius * std::cos(ang), radius * std::sin(ang));
  }

  const int max_sweeps = 400;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double maxstep = 0.0;
    const std::ptrdiff_t dn = static_cast<std::ptrdiff_t>(deg);
#pragma omp parallel for schedule(static) reduction(max : maxstep) if (parallel && dn >= 64)
    for (std::ptrdiff_t i = 0; i < dn; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      cplx d;
      cplx p = poly_eval(coeffs, z[ii], &d);
      cplx delta;
      if (p == cplx(0.0, 0.0)) {
        delta = 0.0;
      } else if (d == cplx(0.0, 0.0)) {
        delta = cplx(1e-8 * (1.0 + std::abs(z[ii])), 0.0);
      } else {
        cplx newton = p / d;
        cplx rep = 0.0;
        for (std::size_t j = 0; j < deg; ++j)
          if (j != ii) rep += 1.0 / (z[ii] - z[j]);
        delta = newton / (1.0 - newton * rep);
      }
      znew[ii] = z[ii] - delta;
      maxstep = std::max(maxstep, std::abs(delta) / (1.0 + std::abs(z[ii])));
    }
    z.swap(znew);
    converged = maxstep <= 1e-15;
  }

  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < deg; ++i)
    if (!aberth_residual_ok(coeffs, z[i])) bad.push_back(i);
  if (!bad.empty()) {
    std::string msg = "aberth_roots: unconverged roots at indices";
    for (std::size_t i : bad) msg += " " + std::to_string(i);
    throw numeric_error(msg);
  }

  std::sort(z.begin(), z.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return z;
}

} // namespace

std::vector<cplx> aberth_roots(const std::vector<cplx>& coeffs) { return aberth_impl(coeffs, true); }
std::vector<cplx> aberth_roots_serial(const std::vector<cplx>& coeffs) { return aberth_impl(coeffs, false); }

DenseMatrix pseudo_inverse_psd(const DenseMatrix& s, double rank_tol) {
  SymEigen e = sym_eigen(s);
  const std::size_t n = s.rows;
  const double lmax = e.values.empty() ? 0.0 : e.values.back();
  const double cutoff = rank_tol * std::max(lmax, 0.0);
  for (double v : e.values)
    if (v < -std::max(cutoff, rank_tol))
      throw std::invalid_argument("pseudo_inverse_psd: matrix has a negative eigenvalue beyond tolerance");
  DenseMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] <= cutoff) continue;
    const double inv = 1.0 / e.values[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = e.vectors(i, k) * inv;
      if (vik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * e.vectors(j, k);
    }
  }
  return out;
}

double spectrum_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  require(a.size() == b.size(), "spectrum_distance: size mismatch");
  const std::size_t n = a.size();
  std::vector<char> ua(n, 0), ub(n, 0);
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) { // extract globally closest unused pair
    double best = 0.0;
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (ua[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (ub[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (bi == n || d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    ua[bi] = 1;
    ub[bj] = 1;
    worst = std::max(worst, best);
  }
  return worst;
}

double cos_sum_closed(double z, double phi, std::size_t n) {
  require(n >= 1, "cos_sum_closed: n must be >= 1");
  const double half = 0.5 * phi;
  if (std::abs(std::sin(half)) < tols().cos_singular) {
    double s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) s += std::cos(z + static_cast<double>(j) * phi);
    return s;
  }
  const double dn = static_cast<double>(n);
  return std::sin(dn * half) * std::cos(z + (dn + 1.0) * half) / std::sin(half);
}

} // namespace cdlab
