#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace suffopt::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Equal, LessEqual, GreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

// Sparse row: sum_k values[k] * x[columns[k]]  (sense)  rhs
struct Row {
  std::string name;
  std::vector<int> columns;
  std::vector<double> values;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

// What a variable or row stands for in the energy model. `entity` indexes the
// technology, storage or carrier list of the model that built the instance.
enum class VarKind {
  Other,
  Capacity,
  Generation,
  StorageEnergyCapacity,
  StoragePowerCapacity,
  StorageLevel,
  StorageCharge,
  StorageDischarge,
};

enum class RowKind {
  Other,
  Balance,
  Dispatch,
  StorageDynamics,
  StorageCyclic,
  StorageLevelLimit,
  StorageChargeLimit,
  StorageDischargeLimit,
  EnergyToPower,
};

struct VarTag {
  VarKind kind = VarKind::Other;
  int entity = -1;
  int step = -1;
};

struct RowTag {
  RowKind kind = RowKind::Other;
  int entity = -1;
  int step = -1;
};

class LpInstance {
 public:
  std::string name = "suffopt";

  int add_variable(Variable v, VarTag tag = {});
  int add_row(Row r, RowTag tag = {});

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  std::size_t num_nonzeros() const;

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  Variable& variable(int j) { return variables_.at(j); }
  Row& row(int i) { return rows_.at(i); }
  const VarTag& var_tag(int j) const { return var_tags_.at(j); }
  const RowTag& row_tag(int i) const { return row_tags_.at(i); }

  // Throws std::invalid_argument on non-finite costs or coefficients, crossed
  // bounds, out-of-range or duplicate column indices.
  void validate() const;

  double objective(std::span<const double> x) const;
  std::vector<double> row_activity(std::span<const double> x) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::vector<VarTag> var_tags_;
  std::vector<RowTag> row_tags_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };
std::string_view to_string(SolveStatus s);

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;          // d objective / d rhs, per row
  std::vector<double> reduced_costs;  // c - A^T y, per variable
  long iterations = 0;
  long phase1_iterations = 0;
};

// max_i |violation_i| / (1 + |rhs_i|) over rows.
double max_row_violation(const LpInstance& lp, std::span<const double> x);
double max_bound_violation(const LpInstance& lp, std::span<const double> x);

struct DualityReport {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double max_dual_infeasibility = 0.0;
  double max_complementarity = 0.0;  // max |dual| * slack, scaled by (1 + |rhs|)
};

// Recomputes reduced costs from the reported row duals and evaluates the dual
// objective, dual sign feasibility and complementary slackness.
DualityReport check_duality(const LpInstance& lp, const LpSolution& solution);

// `variable,value,reduced_cost`
void write_solution_csv(std::ostream& out, const LpInstance& lp, const LpSolution& solution);

}  // namespace suffopt::lp
