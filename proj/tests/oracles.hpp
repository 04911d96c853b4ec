#pragma once

// Independent reference computations used by the tests and the acceptance
// binary. Nothing here calls into the simplex.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "suffopt/lp/instance.hpp"

namespace oracle {

using suffopt::lp::kInf;
using suffopt::lp::LpInstance;
using suffopt::lp::Row;
using suffopt::lp::Sense;
using suffopt::lp::Variable;

// Annuity factor computed as a geometric series: the payment P with
// sum_{k=1..L} P / (1+r)^k = cost.
inline double annuity_by_series(double cost, int lifetime, double rate) {
  double pv = 0.0;
  double discount = 1.0;
  for (int k = 1; k <= lifetime; ++k) {
    discount /= 1.0 + rate;
    pv += discount;
  }
  return cost / pv;
}

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> a,
                                                      std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-10) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

struct EnumerationResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  long bases_tried = 0;
};

// Brute-force optimum over all basic solutions. Rows become a x + s = b with
// s >= 0 (<=), s <= 0 (>=) or s = 0 (=). Every structural variable must have
// finite bounds so the optimum is attained at a basic solution.
inline EnumerationResult enumerate_bases(const LpInstance& lp) {
  const int m = lp.num_rows();
  const int n = lp.num_variables();
  const int total = n + m;
  std::vector<std::vector<double>> a(m, std::vector<double>(total, 0.0));
  std::vector<double> lo(total), hi(total), cost(total, 0.0);
  for (int j = 0; j < n; ++j) {
    lo[j] = lp.variables()[j].lower;
    hi[j] = lp.variables()[j].upper;
    cost[j] = lp.variables()[j].cost;
  }
  std::vector<double> b(m);
  for (int i = 0; i < m; ++i) {
    const Row& r = lp.rows()[i];
    for (std::size_t k = 0; k < r.columns.size(); ++k) a[i][r.columns[k]] = r.values[k];
    a[i][n + i] = 1.0;
    b[i] = r.rhs;
    lo[n + i] = r.sense == Sense::GreaterEqual ? -kInf : 0.0;
    hi[n + i] = r.sense == Sense::LessEqual ? kInf : 0.0;
  }

  EnumerationResult best;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = i;
  std::vector<char> in_basis(total);
  std::vector<int> free_pick;
  while (true) {
    std::fill(in_basis.begin(), in_basis.end(), 0);
    for (int j : basis) in_basis[j] = 1;
    std::vector<int> nonbasic;
    for (int j = 0; j < total; ++j) {
      if (!in_basis[j]) nonbasic.push_back(j);
    }
    // Each nonbasic variable sits at one of its finite bounds.
    std::vector<std::vector<double>> options(nonbasic.size());
    bool possible = true;
    for (std::size_t k = 0; k < nonbasic.size(); ++k) {
      const int j = nonbasic[k];
      if (std::isfinite(lo[j])) options[k].push_back(lo[j]);
      if (std::isfinite(hi[j]) && hi[j] != lo[j]) options[k].push_back(hi[j]);
      if (options[k].empty()) possible = false;
    }
    if (possible) {
      std::vector<std::vector<double>> bm(m, std::vector<double>(m));
      for (int i = 0; i < m; ++i) {
        for (int c = 0; c < m; ++c) bm[i][c] = a[i][basis[c]];
      }
      std::vector<std::size_t> pick(nonbasic.size(), 0);
      while (true) {
        ++best.bases_tried;
        std::vector<double> rhs = b;
        double obj = 0.0;
        for (std::size_t k = 0; k < nonbasic.size(); ++k) {
          const int j = nonbasic[k];
          const double v = options[k][pick[k]];
          obj += cost[j] * v;
          for (int i = 0; i < m; ++i) rhs[i] -= a[i][j] * v;
        }
        bool ok = true;
        if (m > 0) {
          const auto xb = solve_dense(bm, rhs);
          if (!xb) {
            ok = false;
          } else {
            for (int c = 0; c < m && ok; ++c) {
              const int j = basis[c];
              const double v = (*xb)[c];
              const double tol = 1e-9 * (1.0 + std::abs(v));
              if (v < lo[j] - tol || v > hi[j] + tol) ok = false;
              obj += cost[j] * v;
            }
          }
        }
        if (ok) {
          best.feasible = true;
          best.objective = std::min(best.objective, obj);
        }
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
    // Next m-combination of total columns.
    int i = m - 1;
    while (i >= 0 && basis[i] == total - m + i) --i;
    if (i < 0) break;
    ++basis[i];
    for (int k = i + 1; k < m; ++k) basis[k] = basis[k - 1] + 1;
  }
  return best;
}

// Random instance with every variable boxed so it is bounded; a fraction of
// instances is infeasible by construction of a random rhs.
inline LpInstance random_boxed_instance(std::uint64_t seed, int max_vars = 8, int max_rows = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nv(1, max_vars), nr(1, max_rows), sense(0, 2);
  std::uniform_int_distribution<int> small(-5, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LpInstance lp;
  const int n = nv(rng);
  const int m = nr(rng);
  for (int j = 0; j < n; ++j) {
    Variable v;
    v.name = "x" + std::to_string(j);
    v.cost = small(rng) + 0.25 * small(rng);
    v.lower = unit(rng) < 0.3 ? -static_cast<double>(1 + rng() % 4) : 0.0;
    v.upper = v.lower + 1.0 + static_cast<double>(rng() % 8);
    lp.add_variable(v);
  }
  for (int i = 0; i < m; ++i) {
    Row r;
    r.name = "r" + std::to_string(i);
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < 0.7) {
        r.columns.push_back(j);
        r.values.push_back(small(rng) + 0.5 * small(rng));
      }
    }
    r.sense = static_cast<Sense>(sense(rng));
    r.rhs = small(rng) * 1.5;
    lp.add_row(std::move(r));
  }
  return lp;
}

}  // namespace oracle
