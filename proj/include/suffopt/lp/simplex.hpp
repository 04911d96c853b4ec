#pragma once

#include <stdexcept>
#include <string>

#include "suffopt/lp/instance.hpp"

namespace suffopt::lp {

struct SimplexOptions {
  double feasibility_tol = 1e-7;  // on scaled rows
  double optimality_tol = 1e-9;   // on scaled reduced costs
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  // Consecutive non-improving pivots after which Bland's rule takes over until
  // the objective moves again.
  int bland_threshold = 1000;
  long max_iterations = 2'000'000;
  bool scale = true;
};

class IterationLimitError : public std::runtime_error {
 public:
  IterationLimitError(long iterations, bool phase_one, double best_bound);

  long iterations() const { return iterations_; }
  bool phase_one() const { return phase_one_; }
  // Phase one: remaining sum of infeasibilities. Phase two: objective of the
  // current feasible basis (an upper bound on the optimum).
  double best_bound() const { return best_bound_; }

 private:
  long iterations_;
  bool phase_one_;
  double best_bound_;
};

// Bounded-variable primal simplex (two phases, artificial variables for rows
// the all-at-bound start violates). The basis is kept as a sparse LU
// factorization with product-form updates between refactorizations.
// Entering variable: largest reduced cost in the improving direction, lowest
// index on ties. Results are deterministic for a given instance and options.
LpSolution solve(const LpInstance& instance, const SimplexOptions& options = {});

}  // namespace suffopt::lp
