#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "suffopt/lp/simplex.hpp"

using namespace suffopt::lp;

namespace {

LpInstance make(std::vector<Variable> vars, std::vector<Row> rows) {
  LpInstance lp;
  for (auto& v : vars) lp.add_variable(std::move(v));
  for (auto& r : rows) lp.add_row(std::move(r));
  return lp;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("upper bound alone decides a minimisation of -x") {
  const auto lp = make({{"x", 0.0, 5.0, -1.0}}, {});
  const auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(5.0));
  CHECK(sol.objective == doctest::Approx(-5.0));
}

TEST_CASE("symmetric two-variable instance") {
  const auto lp = make({{"x", 0, kInf, 1}, {"y", 0, kInf, 1}},
                       {{"sum", {0, 1}, {1, 1}, Sense::GreaterEqual, 2},
                        {"diff", {0, 1}, {1, -1}, Sense::Equal, 0}});
  const auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(2.0));
  // The >= row is binding with shadow price 1 (one more unit of rhs costs 1).
  CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("agrees with basis enumeration on random boxed instances") {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto lp = oracle::random_boxed_instance(seed);
    const auto ref = oracle::enumerate_bases(lp);
    const auto sol = solve(lp);
    CAPTURE(seed);
    if (!ref.feasible) {
      CHECK(sol.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(rel_diff(sol.objective, ref.objective) <= 1e-8);
    CHECK(max_row_violation(lp, sol.x) <= 1e-6);
    CHECK(max_bound_violation(lp, sol.x) <= 1e-9);
    const auto d = check_duality(lp, sol);
    CHECK(d.relative_gap <= 1e-6);
    CHECK(d.max_dual_infeasibility <= 1e-6);
    CHECK(d.max_complementarity <= 1e-6);
  }
  // Both outcomes must be exercised.
  CHECK(feasible > 30);
  CHECK(feasible < 150);
}

TEST_CASE("unbounded and infeasible are statuses") {
  const auto unbounded = make({{"x", 0, kInf, -1}, {"y", 0, kInf, 0}},
                              {{"r", {0, 1}, {1, -1}, Sense::LessEqual, 1}});
  CHECK(solve(unbounded).status == SolveStatus::Unbounded);

  const auto infeasible = make({{"x", 0, 1, 1}}, {{"r", {0}, {1}, Sense::GreaterEqual, 2}});
  CHECK(solve(infeasible).status == SolveStatus::Infeasible);

  const auto free_unbounded = make({{"x", -kInf, kInf, 1}}, {});
  CHECK(solve(free_unbounded).status == SolveStatus::Unbounded);
}

TEST_CASE("free and negative-bounded variables") {
  // min x - y, x free, y <= -1, x + y >= -3 -> y = -1, x = -2, objective -1.
  const auto lp = make({{"x", -kInf, kInf, 1}, {"y", -kInf, -1, -1}},
                       {{"r", {0, 1}, {1, 1}, Sense::GreaterEqual, -3}});
  const auto sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(-2.0));
  CHECK(sol.x[1] == doctest::Approx(-1.0));
  CHECK(sol.objective == doctest::Approx(-1.0));
}

TEST_CASE("iteration limit is an error carrying a bound") {
  const auto lp = oracle::random_boxed_instance(11);
  SimplexOptions opt;
  opt.max_iterations = 0;
  const auto ref = oracle::enumerate_bases(lp);
  if (ref.feasible) {
    CHECK_THROWS_AS(solve(lp, opt), IterationLimitError);
  }
  LpInstance big = make({{"x", 0, kInf, -1}, {"y", 0, kInf, -1}},
                        {{"a", {0, 1}, {1, 2}, Sense::LessEqual, 4}, {"b", {0, 1}, {3, 1}, Sense::LessEqual, 6}});
  opt.max_iterations = 1;
  try {
    solve(big, opt);
    FAIL("expected IterationLimitError");
  } catch (const IterationLimitError& e) {
    CHECK(e.iterations() == 1);
    CHECK_FALSE(e.phase_one());
    // Any feasible basis bounds the optimum (-2.8) from above.
    CHECK(e.best_bound() >= -2.8 - 1e-9);
  }
}

TEST_CASE("degenerate instance terminates under the Bland fallback") {
  // Classic cycling example for Dantzig's rule with lowest-index ties.
  const auto lp = make({{"x1", 0, kInf, -0.75}, {"x2", 0, kInf, 150}, {"x3", 0, kInf, -0.02}, {"x4", 0, kInf, 6}},
                       {{"r1", {0, 1, 2, 3}, {0.25, -60, -0.04, 9}, Sense::LessEqual, 0},
                        {"r2", {0, 1, 2, 3}, {0.5, -90, -0.02, 3}, Sense::LessEqual, 0},
                        {"r3", {2}, {1}, Sense::LessEqual, 1}});
  for (int threshold : {0, 1, 1000}) {
    SimplexOptions opt;
    opt.bland_threshold = threshold;
    opt.scale = false;
    const auto sol = solve(lp, opt);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-0.05));
  }
}

TEST_CASE("scaling the costs scales the objective and keeps the argmin") {
  const auto lp = oracle::random_boxed_instance(5);
  const auto base = solve(lp);
  if (base.status != SolveStatus::Optimal) return;
  LpInstance scaled = lp;
  for (int j = 0; j < scaled.num_variables(); ++j) scaled.variable(j).cost *= 7.5;
  const auto sol = solve(scaled);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(7.5 * base.objective));
}

TEST_CASE("deterministic across repeated solves") {
  const auto lp = oracle::random_boxed_instance(42);
  const auto a = solve(lp);
  const auto b = solve(lp);
  CHECK(a.x == b.x);
  CHECK(a.duals == b.duals);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("malformed instances are rejected") {
  LpInstance lp = make({{"x", 1, 0, 0}}, {});
  CHECK_THROWS_AS(solve(lp), std::invalid_argument);
  LpInstance dup = make({{"x", 0, 1, 0}}, {{"r", {0, 0}, {1, 1}, Sense::Equal, 0}});
  CHECK_THROWS_AS(solve(dup), std::invalid_argument);
  LpInstance nan_cost = make({{"x", 0, 1, std::nan("")}}, {});
  CHECK_THROWS_AS(solve(nan_cost), std::invalid_argument);
}
