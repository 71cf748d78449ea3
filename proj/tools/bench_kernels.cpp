#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "cdlab/linalg.hpp"
#include "cdlab/rng.hpp"

// Times each OpenMP kernel against its serial reference twin and checks that
// the two produce bitwise-identical output.

namespace {

using namespace cdlab;

double time_ms(const std::function<void()>& fn, int reps) {
  fn(); // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-12s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n", name.c_str(),
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "bitwise-identical" : "MISMATCH");
}

bool same_bits(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i] && !(x[i] != x[i] && y[i] != y[i])) return false;
  return true;
}

} // namespace

int main() {
  Rng rng(split_seed(42, 0));
  bool all_identical = true;

  {
    const std::size_t n = 1500;
    DenseMatrix m(n, n);
    for (double& v : m.a) v = rng.gaussian();
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    std::vector<double> rs = matvec_serial(m, x), rp = matvec(m, x);
    const bool eq = same_bits(rs, rp);
    all_identical &= eq;
    report("matvec", time_ms([&] { matvec_serial(m, x); }, 20),
           time_ms([&] { matvec(m, x); }, 20), eq);
  }

  {
    const std::size_t n = 420;
    DenseMatrix x(n, n), y(n, n);
    for (double& v : x.a) v = rng.gaussian();
    for (double& v : y.a) v = rng.gaussian();
    DenseMatrix rs = matmul_serial(x, y), rp = matmul(x, y);
    const bool eq = same_bits(rs.a, rp.a);
    all_identical &= eq;
    report("matmul", time_ms([&] { matmul_serial(x, y); }, 5),
           time_ms([&] { matmul(x, y); }, 5), eq);
  }

  {
    const std::size_t n = 420;
    DenseMatrix u(n, n);
    for (double& v : u.a) v = rng.gaussian();
    DenseMatrix rs = gram_serial(u), rp = gram(u);
    const bool eq = same_bits(rs.a, rp.a);
    all_identical &= eq;
    report("gram", time_ms([&] { gram_serial(u); }, 5), time_ms([&] { gram(u); }, 5), eq);
  }

  {
    const std::size_t deg = 300;
    std::vector<cplx> coeffs(deg + 1);
    for (cplx& v : coeffs) v = cplx(rng.gaussian(), rng.gaussian());
    std::vector<cplx> rs = aberth_roots_serial(coeffs), rp = aberth_roots(coeffs);
    bool eq = rs.size() == rp.size();
    if (eq)
      for (std::size_t i = 0; i < rs.size(); ++i)
        if (rs[i] != rp[i]) eq = false;
    all_identical &= eq;
    report("aberth", time_ms([&] { aberth_roots_serial(coeffs); }, 3),
           time_ms([&] { aberth_roots(coeffs); }, 3), eq);
  }

  if (!all_identical) {
    std::printf("bench_kernels: parallel/serial mismatch detected\n");
    return 1;
  }
  return 0;
}
