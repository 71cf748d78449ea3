#include "cdlab/solvers.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cdlab/rng.hpp"

namespace cdlab {

namespace {

// Error recorder around the quadratic form (x - x*)'A(x - x*).
struct ErrorTracker {
  const QuadraticProblem& p;
  double denom_obj = 0.0;
  double denom_iter = 0.0;
  bool degenerate = false;

  explicit ErrorTracker(const QuadraticProblem& prob, const std::vector<double>& x0) : p(prob) {
    std::vector<double> e = diff(x0);
    denom_obj = quad_form(e);
    denom_iter = norm2(e);
    degenerate = denom_obj <= 0.0;
  }

  std::vector<double> diff(const std::vector<double>& x) const {
    std::vector<double> e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) e[i] = x[i] - p.x_star[i];
    return e;
  }

  double quad_form(const std::vector<double>& e) const {
    std::vector<double> ae = matvec(p.A, e);
    return std::max(dot(e, ae), 0.0); // PSD form; clamp away -0-level rounding
  }

  void record(Trajectory& t, const std::vector<double>& x) const {
    if (degenerate) {
      t.rel_obj_err.push_back(0.0);
      t.rel_iter_err.push_back(0.0);
      return;
    }
    std::vector<double> e = diff(x);
    t.rel_obj_err.push_back(quad_form(e) / denom_obj);
    t.rel_iter_err.push_back(denom_iter > 0.0 ? norm2(e) / denom_iter : 0.0);
  }
};

void check_start(const QuadraticProblem& p, const std::vector<double>& x0) {
  if (x0.size() != p.dim()) throw std::invalid_argument("solver: x0 dimension mismatch");
  if (p.dim() == 0) throw std::invalid_argument("solver: empty problem");
}

double lambda_max(const QuadraticProblem& p) {
  SymEigen e = sym_eigen(p.A);
  double l = e.values.back();
  if (l <= 0.0) throw std::invalid_argument("solver: lambda_max must be positive");
  return l;
}

// Shared epoch loop: `sweep` advances x by one epoch in place.
template <typename Sweep>
Trajectory drive(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                 bool record_iterates, Sweep sweep) {
  check_start(p, x0);
  ErrorTracker tr(p, x0);
  Trajectory t;
  t.degenerate_start = tr.degenerate;
  t.rel_obj_err.reserve(epochs + 1);
  t.rel_iter_err.reserve(epochs + 1);
  std::vector<double> x = x0;
  tr.record(t, x);
  if (record_iterates) t.iterates.push_back(x);
  for (std::size_t k = 0; k < epochs; ++k) {
    sweep(x);
    tr.record(t, x);
    if (record_iterates) t.iterates.push_back(x);
  }
  return t;
}

// Exact minimization over coordinate j at the current point.
inline void exact_coordinate_step(const QuadraticProblem& p, std::vector<double>& x,
                                  std::size_t j) {
  const std::size_t n = p.dim();
  const double* row = &p.A.a[j * n];
  double g = -p.b[j];
  for (std::size_t i = 0; i < n; ++i) g += row[i] * x[i];
  x[j] -= g / row[j];
}

} // namespace

Trajectory run_gd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                  bool record_iterates) {
  check_start(p, x0);
  const double L = lambda_max(p);
  return drive(p, x0, epochs, record_iterates, [&](std::vector<double>& x) {
    std::vector<double> ax = matvec(p.A, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= (ax[i] - p.b[i]) / L;
  });
}

Trajectory run_ccd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                   bool record_iterates) {
  for (std::size_t j = 0; j < p.dim(); ++j)
    if (p.A(j, j) <= 0.0) throw std::invalid_argument("run_ccd: diagonal must be positive");
  return drive(p, x0, epochs, record_iterates, [&](std::vector<double>& x) {
    for (std::size_t j = 0; j < p.dim(); ++j) exact_coordinate_step(p, x, j);
  });
}

Trajectory run_ccgd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                    StepMode mode, double alpha, bool record_iterates) {
  check_start(p, x0);
  const std::size_t n = p.dim();
  for (std::size_t j = 0; j < n; ++j)
    if (p.A(j, j) <= 0.0) throw std::invalid_argument("run_ccgd: diagonal must be positive");
  if (mode == StepMode::scaled && alpha <= 0.0)
    throw std::invalid_argument("run_ccgd: scaled mode needs alpha > 0");
  const double L = (mode == StepMode::global) ? lambda_max(p) : 0.0;

  return drive(p, x0, epochs, record_iterates, [&, L](std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = &p.A.a[j * n];
      double g = -p.b[j];
      for (std::size_t i = 0; i < n; ++i) g += row[i] * x[i];
      // g = grad_j f / 2; steps below fold the gradient factor 2 into 1/(2*.)
      switch (mode) {
        case StepMode::per_coordinate: x[j] -= g / row[j]; break;
        case StepMode::global: x[j] -= g / L; break;
        case StepMode::scaled: x[j] -= alpha * g / row[j]; break;
      }
    }
  });
}

Trajectory run_rcd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                   std::uint64_t seed, bool record_iterates) {
  for (std::size_t j = 0; j < p.dim(); ++j)
    if (p.A(j, j) <= 0.0) throw std::invalid_argument("run_rcd: diagonal must be positive");
  Rng rng(split_seed(seed, 0));
  const std::size_t n = p.dim();
  return drive(p, x0, epochs, record_iterates, [&](std::vector<double>& x) {
    for (std::size_t s = 0; s < n; ++s)
      exact_coordinate_step(p, x, static_cast<std::size_t>(rng.integer(n)));
  });
}

Trajectory run_rpcd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                    std::uint64_t seed, bool record_iterates) {
  for (std::size_t j = 0; j < p.dim(); ++j)
    if (p.A(j, j) <= 0.0) throw std::invalid_argument("run_rpcd: diagonal must be positive");
  Rng rng(split_seed(seed, 0));
  const std::size_t n = p.dim();
  std::vector<std::size_t> perm(n);
  return drive(p, x0, epochs, record_iterates, [&](std::vector<double>& x) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    for (std::size_t s = 0; s < n; ++s) exact_coordinate_step(p, x, perm[s]);
  });
}

MeanTrajectory mc_mean_trajectory(const StochasticRunner& runner, const QuadraticProblem& p,
                                  const std::vector<double>& x0, std::size_t epochs,
                                  std::size_t repeats, std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("mc_mean_trajectory: repeats must be >= 1");
  check_start(p, x0);
  const std::size_t n = p.dim();
  std::vector<Trajectory> slot(repeats);

#pragma omp parallel for schedule(dynamic)
  for (long long r = 0; r < static_cast<long long>(repeats); ++r)
    slot[static_cast<std::size_t>(r)] =
        runner(p, x0, epochs, split_seed(seed, static_cast<std::uint64_t>(r)));

  MeanTrajectory out;
  out.mean.rel_obj_err.assign(epochs + 1, 0.0);
  out.se_obj.assign(epochs + 1, 0.0);
  std::vector<std::vector<double>> xbar(epochs + 1, std::vector<double>(n, 0.0));

  for (std::size_t r = 0; r < repeats; ++r) { // fixed order: thread-count independent
    const Trajectory& t = slot[r];
    if (t.rel_obj_err.size() != epochs + 1 || t.iterates.size() != epochs + 1)
      throw std::invalid_argument("mc_mean_trajectory: runner must record iterates per epoch");
    for (std::size_t k = 0; k <= epochs; ++k) {
      out.mean.rel_obj_err[k] += t.rel_obj_err[k];
      for (std::size_t i = 0; i < n; ++i) xbar[k][i] += t.iterates[k][i];
    }
  }
  const double inv = 1.0 / static_cast<double>(repeats);
  for (std::size_t k = 0; k <= epochs; ++k) {
    out.mean.rel_obj_err[k] *= inv;
    for (std::size_t i = 0; i < n; ++i) xbar[k][i] *= inv;
  }

  if (repeats > 1) {
    for (std::size_t k = 0; k <= epochs; ++k) {
      double ss = 0.0;
      for (std::size_t r = 0; r < repeats; ++r) {
        const double d = slot[r].rel_obj_err[k] - out.mean.rel_obj_err[k];
        ss += d * d;
      }
      out.se_obj[k] = std::sqrt(ss / (static_cast<double>(repeats - 1) * repeats));
    }
  }

  ErrorTracker tr(p, x0);
  out.mean.degenerate_start = tr.degenerate;
  out.mean.rel_iter_err.reserve(epochs + 1);
  for (std::size_t k = 0; k <= epochs; ++k) {
    if (tr.degenerate) {
      out.mean.rel_iter_err.push_back(0.0);
    } else {
      std::vector<double> e = tr.diff(xbar[k]);
      out.mean.rel_iter_err.push_back(tr.denom_iter > 0.0 ? norm2(e) / tr.denom_iter : 0.0);
    }
  }
  out.mean.iterates = std::move(xbar);
  return out;
}

} // namespace cdlab
