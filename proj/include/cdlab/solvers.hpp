#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cdlab/problems.hpp"

namespace cdlab {

// CGD stepsize selection: per_coordinate = 1/(2 A_jj) (exact minimization),
// global = 1/(2 lambda_max), scaled = alpha/(2 A_jj).
enum class StepMode { per_coordinate, global, scaled };

// Per-epoch record, entries k = 0..epochs:
//   rel_obj_err[k]  = (f(x^k) - f*) / (f(x^0) - f*)
//   rel_iter_err[k] = |x^k - x*|^2 / |x^0 - x*|^2
// Both computed through the quadratic form (x - x*)'A(x - x*), which equals
// f(x) - f* for b in range(A) and stays accurate deep into the decay.
// A start with f(x^0) = f* yields all-zero trajectories and sets
// degenerate_start instead of dividing by zero.
struct Trajectory {
  std::vector<double> rel_obj_err;
  std::vector<double> rel_iter_err;
  std::vector<std::vector<double>> iterates; // filled when record_iterates
  bool degenerate_start = false;
};

struct MeanTrajectory {
  Trajectory mean;             // mean rel_obj_err; rel_iter_err of the mean iterate
  std::vector<double> se_obj;  // standard error of rel_obj_err (ddof = 1)
};

using StochasticRunner =
    std::function<Trajectory(const QuadraticProblem&, const std::vector<double>&, std::size_t,
                             std::uint64_t)>;

// Full-gradient descent, stepsize 1/lambda_max on the 2(Ax - b) gradient.
Trajectory run_gd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                  bool record_iterates = false);

// Cyclic coordinate descent with exact per-coordinate minimization; one epoch
// is one full cycle j = 1..n.
Trajectory run_ccd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                   bool record_iterates = false);

// Cyclic coordinate gradient descent: coordinate j moves by -step_j * grad_j f
// evaluated at the current intermediate point.
Trajectory run_ccgd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                    StepMode mode, double alpha = 1.0, bool record_iterates = false);

// Randomized CD: n independent uniform coordinate picks per epoch, drawn from
// Rng(split_seed(seed, 0)).
Trajectory run_rcd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                   std::uint64_t seed, bool record_iterates = false);

// Random-permutation CD: one fresh Fisher-Yates permutation per epoch from
// Rng(split_seed(seed, 0)), then a full cycle in that order.
Trajectory run_rpcd(const QuadraticProblem& p, const std::vector<double>& x0, std::size_t epochs,
                    std::uint64_t seed, bool record_iterates = false);

// Monte-Carlo mean over `repeats` runs with derived seeds split_seed(seed, r).
// Mean rel_obj_err is the elementwise mean; rel_iter_err is recomputed from
// the elementwise mean iterate. Thread-count independent.
MeanTrajectory mc_mean_trajectory(const StochasticRunner& runner, const QuadraticProblem& p,
                                  const std::vector<double>& x0, std::size_t epochs,
                                  std::size_t repeats, std::uint64_t seed);

} // namespace cdlab
