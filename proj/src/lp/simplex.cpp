#include "suffopt/lp/simplex.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace suffopt::lp {

IterationLimitError::IterationLimitError(long iterations, bool phase_one, double best_bound)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "simplex iteration limit reached after " << iterations << " iterations in phase "
            << (phase_one ? 1 : 2) << "; best bound " << best_bound;
        return msg.str();
      }()),
      iterations_(iterations),
      phase_one_(phase_one),
      best_bound_(best_bound) {}

namespace {

double power_of_two(double v) { return std::exp2(std::round(std::log2(v))); }

class Simplex {
 public:
  Simplex(const LpInstance& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) { load(); }

  LpSolution run();

 private:
  enum class Outcome { Optimal, Unbounded };

  void load();
  void scale_matrix();
  void initial_basis();

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
    } else if (j < n_ + m_) {
      f(j - n_, -1.0);
    } else {
      const int a = j - n_ - m_;
      f(art_row_[a], art_sign_[a]);
    }
  }

  double phase_cost(int j) const {
    if (phase_one_) return j >= n_ + m_ ? 1.0 : 0.0;
    return j < n_ ? cost_[j] : 0.0;
  }

  void refactor();
  void recompute_basic_values();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  Outcome iterate();
  double current_objective() const;

  const LpInstance& lp_;
  SimplexOptions opt_;

  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> row_scale_, col_scale_;
  double obj_scale_ = 1.0;

  std::vector<double> lower_, upper_, cost_, x_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;

  std::vector<int> head_;
  std::vector<int> pos_;

  using SparseMat = Eigen::SparseMatrix<double>;
  mutable Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    int r = 0;
    double pivot = 1.0;
    std::vector<int> idx;  // excludes r
    std::vector<double> val;
  };
  std::vector<Eta> etas_;

  // Snapshot of the last basis that factorized cleanly.
  std::vector<int> good_head_;
  std::vector<double> good_x_;

  bool phase_one_ = true;
  long iterations_ = 0;
  long phase1_iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;

  Eigen::VectorXd work_y_, work_col_;
};

void Simplex::load() {
  lp_.validate();
  m_ = lp_.num_rows();
  n_ = lp_.num_variables();

  std::vector<int> count(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& r : lp_.rows()) {
    for (int j : r.columns) ++count[j + 1];
  }
  col_start_.assign(count.begin(), count.end());
  for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
  col_row_.resize(col_start_[n_]);
  col_val_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    const auto& r = lp_.rows()[i];
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      if (r.values[k] == 0.0) continue;
      const int p = fill[r.columns[k]]++;
      col_row_[p] = i;
      col_val_[p] = r.values[k];
    }
  }
  // Compact explicit zeros away.
  {
    std::vector<int> start(static_cast<std::size_t>(n_) + 1, 0);
    int out = 0;
    for (int j = 0; j < n_; ++j) {
      start[j] = out;
      for (int p = col_start_[j]; p < fill[j]; ++p) {
        col_row_[out] = col_row_[p];
        col_val_[out] = col_val_[p];
        ++out;
      }
    }
    start[n_] = out;
    col_start_ = std::move(start);
    col_row_.resize(out);
    col_val_.resize(out);
  }

  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  if (opt_.scale) scale_matrix();
  for (int j = 0; j < n_; ++j) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      col_val_[k] *= row_scale_[col_row_[k]] * col_scale_[j];
    }
  }

  double max_cost = 0.0;
  for (int j = 0; j < n_; ++j) {
    max_cost = std::max(max_cost, std::abs(lp_.variables()[j].cost * col_scale_[j]));
  }
  obj_scale_ = (opt_.scale && max_cost > 0.0) ? power_of_two(1.0 / max_cost) : 1.0;

  lower_.resize(n_ + m_);
  upper_.resize(n_ + m_);
  cost_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const auto& v = lp_.variables()[j];
    lower_[j] = v.lower / col_scale_[j];
    upper_[j] = v.upper / col_scale_[j];
    cost_[j] = v.cost * col_scale_[j] * obj_scale_;
  }
  for (int i = 0; i < m_; ++i) {
    const auto& r = lp_.rows()[i];
    const double b = r.rhs * row_scale_[i];
    lower_[n_ + i] = r.sense == Sense::LessEqual ? -kInf : b;
    upper_[n_ + i] = r.sense == Sense::GreaterEqual ? kInf : b;
  }
}

void Simplex::scale_matrix() {
  auto row_pass = [&](bool geometric) {
    std::vector<double> hi(m_, 0.0), lo(m_, kInf);
    for (int j = 0; j < n_; ++j) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const double a = std::abs(col_val_[k]) * row_scale_[col_row_[k]] * col_scale_[j];
        hi[col_row_[k]] = std::max(hi[col_row_[k]], a);
        lo[col_row_[k]] = std::min(lo[col_row_[k]], a);
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (hi[i] > 0.0) row_scale_[i] /= geometric ? std::sqrt(hi[i] * lo[i]) : hi[i];
    }
  };
  auto col_pass = [&](bool geometric) {
    for (int j = 0; j < n_; ++j) {
      double hi = 0.0, lo = kInf;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const double a = std::abs(col_val_[k]) * row_scale_[col_row_[k]] * col_scale_[j];
        hi = std::max(hi, a);
        lo = std::min(lo, a);
      }
      if (hi > 0.0) col_scale_[j] /= geometric ? std::sqrt(hi * lo) : hi;
    }
  };
  for (int pass = 0; pass < 4; ++pass) {
    row_pass(true);
    col_pass(true);
  }
  row_pass(false);
  col_pass(false);
  for (auto& r : row_scale_) r = power_of_two(r);
  for (auto& c : col_scale_) c = power_of_two(c);
}

void Simplex::initial_basis() {
  x_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower_[j])) {
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      x_[j] = upper_[j];
    }
  }
  std::vector<double> activity(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) activity[col_row_[k]] += col_val_[k] * x_[j];
  }
  head_.assign(m_, -1);
  for (int i = 0; i < m_; ++i) {
    const int s = n_ + i;
    const double a = activity[i];
    if (a >= lower_[s] - opt_.feasibility_tol && a <= upper_[s] + opt_.feasibility_tol) {
      head_[i] = s;
      x_[s] = a;
      continue;
    }
    const double bound = a < lower_[s] ? lower_[s] : upper_[s];
    x_[s] = bound;
    const double gap = bound - a;
    art_row_.push_back(i);
    art_sign_.push_back(gap > 0 ? 1.0 : -1.0);
    const int t = n_ + m_ + static_cast<int>(art_row_.size()) - 1;
    head_[i] = t;
    x_.push_back(std::abs(gap));
    lower_.push_back(0.0);
    upper_.push_back(kInf);
  }
  total_ = static_cast<int>(x_.size());
  pos_.assign(total_, -1);
  for (int i = 0; i < m_; ++i) pos_[head_[i]] = i;
  phase_one_ = !art_row_.empty();
}

void Simplex::refactor() {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m_) * 3);
  for (int i = 0; i < m_; ++i) {
    for_column(head_[i], [&](int row, double v) { trip.emplace_back(row, i, v); });
  }
  SparseMat basis(m_, m_);
  basis.setFromTriplets(trip.begin(), trip.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  if (lu_.info() != Eigen::Success) {
    if (good_head_.empty() || good_head_ == head_) {
      throw std::runtime_error("simplex: basis matrix is singular: " + lu_.lastErrorMessage());
    }
    // Fall back to the last basis that factorized and tighten pivoting.
    for (int j : head_) pos_[j] = -1;
    head_ = good_head_;
    x_ = good_x_;
    for (int i = 0; i < m_; ++i) pos_[head_[i]] = i;
    opt_.pivot_tol = std::min(1e-5, opt_.pivot_tol * 100.0);
    bland_ = true;
    refactor();
    return;
  }
  etas_.clear();
  good_head_ = head_;
  good_x_ = x_;
}

void Simplex::recompute_basic_values() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < total_; ++j) {
    if (pos_[j] >= 0 || x_[j] == 0.0) continue;
    const double xj = x_[j];
    for_column(j, [&](int row, double v) { rhs[row] -= v * xj; });
  }
  ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[head_[i]] = rhs[i];
}

void Simplex::ftran(Eigen::VectorXd& v) const {
  v = lu_.solve(v).eval();
  for (const auto& e : etas_) {
    const double vr = v[e.r] / e.pivot;
    v[e.r] = vr;
    if (vr == 0.0) continue;
    for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * vr;
  }
}

void Simplex::btran(Eigen::VectorXd& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->r];
    for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * v[it->idx[k]];
    v[it->r] = s / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

double Simplex::current_objective() const {
  double obj = 0.0;
  for (int j = 0; j < total_; ++j) obj += phase_cost(j) * x_[j];
  return obj;
}

Simplex::Outcome Simplex::iterate() {
  const double ftol = opt_.feasibility_tol;
  const double dtol = opt_.optimality_tol;
  while (true) {
    if (iterations_ >= opt_.max_iterations) {
      double bound = current_objective();
      if (!phase_one_) bound /= obj_scale_;
      throw IterationLimitError(iterations_, phase_one_, bound);
    }
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      refactor();
      recompute_basic_values();
    }

    // Pricing.
    for (int i = 0; i < m_; ++i) work_y_[i] = phase_cost(head_[i]);
    btran(work_y_);
    int q = -1;
    double best = 0.0;
    double d_q = 0.0;
    int dir = 0;
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || lower_[j] == upper_[j]) continue;
      double d = phase_cost(j);
      for_column(j, [&](int row, double v) { d -= work_y_[row] * v; });
      int cand = 0;
      if (d < -dtol && x_[j] < upper_[j]) cand = 1;
      if (d > dtol && x_[j] > lower_[j]) cand = -1;
      if (cand == 0) continue;
      if (bland_) {
        q = j;
        d_q = d;
        dir = cand;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        d_q = d;
        dir = cand;
      }
    }
    if (q < 0) return Outcome::Optimal;

    // Entering column in terms of the current basis.
    work_col_.setZero();
    for_column(q, [&](int row, double v) { work_col_[row] = v; });
    ftran(work_col_);

    double max_alpha = 0.0;
    for (int i = 0; i < m_; ++i) max_alpha = std::max(max_alpha, std::abs(work_col_[i]));
    const double piv_tol = opt_.pivot_tol * std::max(1.0, max_alpha);

    // Ratio test: Harris two-pass, or the textbook minimum under Bland.
    const double flip = upper_[q] - lower_[q];
    const double relax = bland_ ? 0.0 : ftol;
    double theta_max = kInf;
    for (int i = 0; i < m_; ++i) {
      const double delta = dir * work_col_[i];
      if (std::abs(delta) <= piv_tol) continue;
      const int j = head_[i];
      double ratio = kInf;
      if (delta > 0 && std::isfinite(lower_[j])) ratio = (x_[j] - lower_[j] + relax) / delta;
      if (delta < 0 && std::isfinite(upper_[j])) ratio = (upper_[j] - x_[j] + relax) / -delta;
      theta_max = std::min(theta_max, ratio);
    }

    int r = -1;
    double theta = 0.0;
    if (theta_max == kInf && flip == kInf) return Outcome::Unbounded;
    if (flip <= theta_max) {
      theta = flip;
    } else {
      double best_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double delta = dir * work_col_[i];
        if (std::abs(delta) <= piv_tol) continue;
        const int j = head_[i];
        double ratio = kInf;
        if (delta > 0 && std::isfinite(lower_[j])) ratio = (x_[j] - lower_[j]) / delta;
        if (delta < 0 && std::isfinite(upper_[j])) ratio = (upper_[j] - x_[j]) / -delta;
        if (ratio > theta_max) continue;
        if (bland_) {
          if (r < 0 || ratio < theta || (ratio == theta && head_[i] < head_[r])) {
            r = i;
            theta = ratio;
          }
        } else if (std::abs(delta) > best_alpha) {
          best_alpha = std::abs(delta);
          r = i;
          theta = ratio;
        }
      }
      theta = std::max(theta, 0.0);
    }

    // Update primal values.
    if (theta != 0.0) {
      for (int i = 0; i < m_; ++i) {
        if (work_col_[i] != 0.0) x_[head_[i]] -= theta * dir * work_col_[i];
      }
    }
    ++iterations_;
    if (phase_one_) ++phase1_iterations_;

    const double improvement = theta * std::abs(d_q);
    if (improvement <= 1e-12) {
      if (++degenerate_run_ > opt_.bland_threshold) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }

    if (r < 0) {
      x_[q] = dir > 0 ? upper_[q] : lower_[q];
      continue;
    }
    const int leaving = head_[r];
    const double delta_r = dir * work_col_[r];
    x_[q] += theta * dir;
    x_[leaving] = delta_r > 0 ? lower_[leaving] : upper_[leaving];
    pos_[leaving] = -1;
    head_[r] = q;
    pos_[q] = r;

    Eta eta;
    eta.r = r;
    eta.pivot = work_col_[r];
    for (int i = 0; i < m_; ++i) {
      if (i != r && std::abs(work_col_[i]) > 1e-14) {
        eta.idx.push_back(i);
        eta.val.push_back(work_col_[i]);
      }
    }
    etas_.push_back(std::move(eta));
  }
}

LpSolution Simplex::run() {
  LpSolution sol;
  initial_basis();

  if (m_ == 0) {
    // Only bounds: each variable sits at its cheaper bound.
    sol.x.assign(n_, 0.0);
    sol.reduced_costs.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      const auto& v = lp_.variables()[j];
      sol.reduced_costs[j] = v.cost;
      if (v.cost > 0) {
        if (v.lower == -kInf) { sol.status = SolveStatus::Unbounded; return sol; }
        sol.x[j] = v.lower;
      } else if (v.cost < 0) {
        if (v.upper == kInf) { sol.status = SolveStatus::Unbounded; return sol; }
        sol.x[j] = v.upper;
      } else {
        sol.x[j] = std::isfinite(v.lower) ? v.lower : (std::isfinite(v.upper) ? v.upper : 0.0);
      }
    }
    sol.status = SolveStatus::Optimal;
    sol.objective = lp_.objective(sol.x);
    return sol;
  }

  work_y_.resize(m_);
  work_col_.resize(m_);
  refactor();

  if (phase_one_) {
    iterate();
    refactor();
    recompute_basic_values();
    double infeasibility = 0.0;
    for (int j = n_ + m_; j < total_; ++j) infeasibility = std::max(infeasibility, x_[j]);
    sol.phase1_iterations = phase1_iterations_;
    if (infeasibility > opt_.feasibility_tol) {
      sol.status = SolveStatus::Infeasible;
      sol.iterations = iterations_;
      sol.x.assign(n_, 0.0);
      for (int j = 0; j < n_; ++j) sol.x[j] = x_[j] * col_scale_[j];
      return sol;
    }
    for (int j = n_ + m_; j < total_; ++j) {
      upper_[j] = 0.0;
      if (pos_[j] < 0) x_[j] = 0.0;
    }
    phase_one_ = false;
    degenerate_run_ = 0;
    bland_ = false;
  }

  const Outcome outcome = iterate();
  sol.iterations = iterations_;
  sol.phase1_iterations = phase1_iterations_;
  if (outcome == Outcome::Unbounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }

  refactor();
  recompute_basic_values();
  for (int i = 0; i < m_; ++i) work_y_[i] = phase_cost(head_[i]);
  btran(work_y_);

  sol.status = SolveStatus::Optimal;
  sol.x.resize(n_);
  sol.reduced_costs.resize(n_);
  sol.duals.resize(m_);
  for (int j = 0; j < n_; ++j) {
    double x = x_[j];
    // Snap tiny bound drift from the Harris tolerance back onto the bound.
    if (x < lower_[j]) x = lower_[j];
    if (x > upper_[j]) x = upper_[j];
    sol.x[j] = x * col_scale_[j];
    double d = cost_[j];
    for_column(j, [&](int row, double v) { d -= work_y_[row] * v; });
    sol.reduced_costs[j] = pos_[j] >= 0 ? 0.0 : d / (obj_scale_ * col_scale_[j]);
  }
  for (int i = 0; i < m_; ++i) sol.duals[i] = work_y_[i] * row_scale_[i] / obj_scale_;
  sol.objective = lp_.objective(sol.x);
  return sol;
}

}  // namespace

LpSolution solve(const LpInstance& instance, const SimplexOptions& options) {
  Simplex simplex(instance, options);
  return simplex.run();
}

}  // namespace suffopt::lp
