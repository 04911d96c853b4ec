#include "suffopt/lp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "suffopt/text.hpp"

namespace suffopt::lp {

int LpInstance::add_variable(Variable v, VarTag tag) {
  variables_.push_back(std::move(v));
  var_tags_.push_back(tag);
  return num_variables() - 1;
}

int LpInstance::add_row(Row r, RowTag tag) {
  if (r.columns.size() != r.values.size()) {
    throw std::invalid_argument("row '" + r.name + "': columns and values differ in length");
  }
  rows_.push_back(std::move(r));
  row_tags_.push_back(tag);
  return num_rows() - 1;
}

std::size_t LpInstance::num_nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.columns.size();
  return n;
}

void LpInstance::validate() const {
  for (const auto& v : variables_) {
    if (!std::isfinite(v.cost)) throw std::invalid_argument("variable '" + v.name + "': non-finite cost");
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInf ||
        v.upper == -kInf) {
      throw std::invalid_argument("variable '" + v.name + "': invalid bounds");
    }
  }
  std::unordered_set<int> seen;
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("row '" + r.name + "': non-finite rhs");
    seen.clear();
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      const int j = r.columns[k];
      if (j < 0 || j >= num_variables()) {
        throw std::invalid_argument("row '" + r.name + "': column index out of range");
      }
      if (!seen.insert(j).second) {
        throw std::invalid_argument("row '" + r.name + "': duplicate column '" +
                                    variables_[j].name + "'");
      }
      if (!std::isfinite(r.values[k])) {
        throw std::invalid_argument("row '" + r.name + "': non-finite coefficient");
      }
    }
  }
}

double LpInstance::objective(std::span<const double> x) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) obj += variables_[j].cost * x[j];
  return obj;
}

std::vector<double> LpInstance::row_activity(std::span<const double> x) const {
  std::vector<double> out(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    for (std::size_t k = 0; k < r.columns.size(); ++k) out[i] += r.values[k] * x[r.columns[k]];
  }
  return out;
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "?";
}

double max_row_violation(const LpInstance& lp, std::span<const double> x) {
  const auto act = lp.row_activity(x);
  double worst = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows()[i];
    double v = 0.0;
    switch (r.sense) {
      case Sense::Equal: v = std::abs(act[i] - r.rhs); break;
      case Sense::LessEqual: v = std::max(0.0, act[i] - r.rhs); break;
      case Sense::GreaterEqual: v = std::max(0.0, r.rhs - act[i]); break;
    }
    worst = std::max(worst, v / (1.0 + std::abs(r.rhs)));
  }
  return worst;
}

double max_bound_violation(const LpInstance& lp, std::span<const double> x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variables()[j];
    worst = std::max({worst, v.lower - x[j], x[j] - v.upper});
  }
  return worst;
}

DualityReport check_duality(const LpInstance& lp, const LpSolution& sol) {
  constexpr double kZero = 1e-9;
  DualityReport rep;
  rep.primal_objective = lp.objective(sol.x);
  const auto act = lp.row_activity(sol.x);

  std::vector<double> d(lp.num_variables());
  for (int j = 0; j < lp.num_variables(); ++j) d[j] = lp.variables()[j].cost;
  double dual = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows()[i];
    const double y = sol.duals[i];
    for (std::size_t k = 0; k < r.columns.size(); ++k) d[r.columns[k]] -= y * r.values[k];
    dual += y * r.rhs;
    double wrong_sign = 0.0;
    if (r.sense == Sense::GreaterEqual) wrong_sign = std::max(0.0, -y);
    if (r.sense == Sense::LessEqual) wrong_sign = std::max(0.0, y);
    rep.max_dual_infeasibility = std::max(rep.max_dual_infeasibility, wrong_sign);
    const double slack = std::abs(act[i] - r.rhs);
    rep.max_complementarity =
        std::max(rep.max_complementarity, std::abs(y) * slack / (1.0 + std::abs(r.rhs)));
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variables()[j];
    if (d[j] > kZero) {
      if (v.lower == -kInf) {
        rep.max_dual_infeasibility = std::max(rep.max_dual_infeasibility, d[j]);
      } else {
        dual += d[j] * v.lower;
        rep.max_complementarity = std::max(rep.max_complementarity,
                                           d[j] * (sol.x[j] - v.lower) / (1.0 + std::abs(v.lower)));
      }
    } else if (d[j] < -kZero) {
      if (v.upper == kInf) {
        rep.max_dual_infeasibility = std::max(rep.max_dual_infeasibility, -d[j]);
      } else {
        dual += d[j] * v.upper;
        rep.max_complementarity = std::max(rep.max_complementarity,
                                           -d[j] * (v.upper - sol.x[j]) / (1.0 + std::abs(v.upper)));
      }
    } else if (std::isfinite(v.lower) || std::isfinite(v.upper)) {
      // Treat the residual as exact complementarity with the nearest bound.
      const double bound = std::isfinite(v.lower) && (!std::isfinite(v.upper) ||
                                                      std::abs(sol.x[j] - v.lower) <=
                                                          std::abs(sol.x[j] - v.upper))
                               ? v.lower
                               : v.upper;
      dual += d[j] * bound;
    }
  }
  rep.dual_objective = dual;
  rep.relative_gap = std::abs(rep.primal_objective - rep.dual_objective) /
                     std::max(1.0, std::abs(rep.primal_objective));
  return rep;
}

void write_solution_csv(std::ostream& out, const LpInstance& lp, const LpSolution& sol) {
  out << "variable,value,reduced_cost\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    out << lp.variables()[j].name << ',' << format_double(sol.x.at(j)) << ','
        << format_double(sol.reduced_costs.empty() ? 0.0 : sol.reduced_costs[j]) << '\n';
  }
}

}  // namespace suffopt::lp
