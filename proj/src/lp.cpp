#include "orgopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orgopt::lp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int Model::add_var(double lower, double upper, double cost) {
  const int id = num_vars();
  auto grow = [](Vec& v, double value) {
    v.conservativeResize(v.size() + 1);
    v[v.size() - 1] = value;
  };
  grow(obj, cost);
  grow(lo, lower);
  grow(up, upper);
  return id;
}

void Model::add_row(std::vector<std::pair<int, double>> terms, char sense, double rhs) {
  rows.push_back(Row{std::move(terms), sense, rhs});
}

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Simplex {
 public:
  Simplex(const Model& model, const Params& params) : params_(params) {
    const int m = static_cast<int>(model.rows.size());
    const int n_struct = model.num_vars();
    int n_slack = 0;
    for (const auto& row : model.rows)
      if (row.sense != '=') ++n_slack;
    n_ = n_struct + n_slack + m;  // structurals, slacks, one artificial per row
    art0_ = n_struct + n_slack;

    tab_ = RowMat::Zero(m, n_);
    rhs_ = Vec::Zero(m);
    lo_ = Vec::Zero(n_);
    up_ = Vec::Constant(n_, kInf);
    obj_ = Vec::Zero(n_);
    lo_.head(n_struct) = model.lo;
    up_.head(n_struct) = model.up;
    obj_.head(n_struct) = model.obj;
    for (int j = 0; j < n_struct; ++j) {
      if (!std::isfinite(model.lo[j])) throw Error("lp: lower bounds must be finite");
      if (model.lo[j] > model.up[j] + 1e-15) infeasible_bounds_ = true;
    }

    int slack = n_struct;
    for (int i = 0; i < m; ++i) {
      const auto& row = model.rows[i];
      for (const auto& [j, a] : row.terms) tab_(i, j) += a;
      rhs_[i] = row.rhs;
      if (row.sense == '<')
        tab_(i, slack++) = 1.0;
      else if (row.sense == '>')
        tab_(i, slack++) = -1.0;
      else if (row.sense != '=')
        throw Error("lp: unknown row sense");
    }

    at_upper_.assign(n_, false);
    basis_.resize(m);
    basic_row_.assign(n_, -1);

    // Nonbasic structurals and slacks start at their (finite-side) bound; one
    // artificial per row absorbs the residual so the start is always basic
    // feasible.
    for (int j = 0; j < art0_; ++j)
      if (!std::isfinite(lo_[j]) || (std::isfinite(up_[j]) && up_[j] - lo_[j] < 0)) {
        infeasible_bounds_ = true;
      }
    Vec residual = rhs_;
    for (int j = 0; j < art0_; ++j) {
      const double xj = nonbasic_value(j);
      if (xj != 0.0) residual -= tab_.col(j) * xj;
    }
    for (int i = 0; i < m; ++i) {
      const int a = art0_ + i;
      tab_(i, a) = residual[i] >= 0.0 ? 1.0 : -1.0;
      basis_[i] = a;
      basic_row_[a] = i;
      beta_ = Vec();  // set below
    }
    beta_ = residual.cwiseAbs();
  }

  Solution run(const Model& model) {
    Solution out;
    if (infeasible_bounds_) {
      out.status = Status::kInfeasible;
      return out;
    }
    const long max_iter = params_.max_iterations > 0
                              ? params_.max_iterations
                              : 20000 + 200L * static_cast<long>(tab_.rows());

    // Phase 1: minimize the artificial mass.
    Vec phase1 = Vec::Zero(n_);
    phase1.segment(art0_, tab_.rows()).setOnes();
    set_costs(phase1);
    Status st = iterate(max_iter);
    if (st == Status::kIterLimit) {
      out.status = st;
      return out;
    }
    if (objective_value(phase1) > 1e-7) {
      out.status = Status::kInfeasible;
      return out;
    }
    fix_artificials();

    // Phase 2 on the true objective.
    set_costs(obj_);
    st = iterate(max_iter);
    out.status = st == Status::kIterLimit ? Status::kIterLimit : st;
    out.iterations = iterations_;
    if (st == Status::kOptimal || st == Status::kUnbounded) {
      out.x = Vec::Zero(model.num_vars());
      Vec full = full_solution();
      out.x = full.head(model.num_vars());
      out.objective = model.obj.dot(out.x);
    }
    return out;
  }

 private:
  double nonbasic_value(int j) const {
    if (at_upper_[j]) return up_[j];
    return lo_[j];
  }

  Vec full_solution() const {
    Vec x(n_);
    for (int j = 0; j < n_; ++j) x[j] = basic_row_[j] >= 0 ? beta_[basic_row_[j]] : nonbasic_value(j);
    return x;
  }

  double objective_value(const Vec& costs) const {
    double v = 0.0;
    const Vec x = full_solution();
    for (int j = 0; j < n_; ++j) v += costs[j] * x[j];
    return v;
  }

  void set_costs(const Vec& costs) {
    costs_ = costs;
    refresh_reduced_costs();
  }

  void refresh_reduced_costs() {
    // z_j = c_j - c_B' B^-1 A_j; the tableau already holds B^-1 A.
    Vec cb(tab_.rows());
    for (int i = 0; i < tab_.rows(); ++i) cb[i] = costs_[basis_[i]];
    zrow_ = costs_.transpose() - cb.transpose() * tab_;
    for (int i = 0; i < tab_.rows(); ++i) zrow_[basis_[i]] = 0.0;
  }

  // After phase 1, artificials still basic sit at zero in redundant rows; pin
  // every artificial to zero so phase 2 cannot move them.
  void fix_artificials() {
    for (int i = 0; i < tab_.rows(); ++i) {
      const int a = art0_ + i;
      up_[a] = 0.0;
      int r = basic_row_[a];
      if (r < 0) continue;
      // Try to pivot the artificial out on any usable column.
      int pivot_col = -1;
      for (int j = 0; j < art0_; ++j)
        if (basic_row_[j] < 0 && std::abs(tab_(r, j)) > 1e-7 && up_[j] > lo_[j]) {
          pivot_col = j;
          break;
        }
      if (pivot_col >= 0 && std::abs(beta_[r]) <= 1e-7) pivot(r, pivot_col, nonbasic_value(pivot_col));
    }
  }

  Status iterate(long max_iter) {
    int stall = 0;
    bool bland = false;
    while (true) {
      if (++iterations_ > max_iter) return Status::kIterLimit;
      if (iterations_ % 256 == 0) refresh_reduced_costs();

      // Entering variable.
      int enter = -1;
      double best = params_.tol;
      int dir = +1;
      for (int j = 0; j < n_; ++j) {
        if (basic_row_[j] >= 0) continue;
        if (up_[j] - lo_[j] <= 0.0) continue;  // fixed
        const double z = zrow_[j];
        if (!at_upper_[j] && z < -best) {
          if (bland) {
            enter = j;
            dir = +1;
            break;
          }
          best = -z;
          enter = j;
          dir = +1;
        } else if (at_upper_[j] && z > best) {
          if (bland) {
            enter = j;
            dir = -1;
            break;
          }
          best = z;
          enter = j;
          dir = -1;
        }
      }
      if (enter < 0) return Status::kOptimal;

      // Ratio test: how far the entering variable can move.
      double t_max = up_[enter] - lo_[enter];  // own bound flip
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < tab_.rows(); ++i) {
        const double a = dir * tab_(i, enter);
        const int bj = basis_[i];
        if (a > params_.tol) {  // basic decreases toward its lower bound
          const double t = (beta_[i] - lo_[bj]) / a;
          if (t < t_max - 1e-12 || (t < t_max + 1e-12 && leave_row >= 0 && bj < basis_[leave_row])) {
            t_max = t;
            leave_row = i;
            leave_to_upper = false;
          }
        } else if (a < -params_.tol) {  // basic increases toward its upper bound
          if (!std::isfinite(up_[bj])) continue;
          const double t = (up_[bj] - beta_[i]) / (-a);
          if (t < t_max - 1e-12 || (t < t_max + 1e-12 && leave_row >= 0 && bj < basis_[leave_row])) {
            t_max = t;
            leave_row = i;
            leave_to_upper = true;
          }
        }
      }
      if (!std::isfinite(t_max)) return Status::kUnbounded;
      t_max = std::max(t_max, 0.0);

      if (t_max < 1e-11) {
        if (++stall > 64) bland = true;
      } else {
        stall = 0;
        bland = false;
      }

      if (leave_row < 0) {
        // Bound flip: entering runs to its other bound.
        beta_ -= dir * t_max * tab_.col(enter);
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }

      const double enter_value = nonbasic_value(enter) + dir * t_max;
      const int leave_var = basis_[leave_row];
      beta_ -= dir * t_max * tab_.col(enter);
      at_upper_[leave_var] = leave_to_upper;
      pivot(leave_row, enter, enter_value);
    }
  }

  void pivot(int row, int col, double entering_value) {
    const int old_basic = basis_[row];
    const double piv = tab_(row, col);
    tab_.row(row) /= piv;
    beta_[row] = entering_value;
    for (int i = 0; i < tab_.rows(); ++i) {
      if (i == row) continue;
      const double f = tab_(i, col);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(row);
    }
    const double zf = zrow_[col];
    if (zf != 0.0) zrow_ -= zf * tab_.row(row).transpose();
    basic_row_[old_basic] = -1;
    basis_[row] = col;
    basic_row_[col] = row;
    zrow_[col] = 0.0;
  }

  Params params_;
  RowMat tab_;
  Vec rhs_;
  Vec beta_;   // current values of the basic variables
  Vec lo_, up_, obj_, costs_;
  Vec zrow_;
  std::vector<int> basis_;      // row -> column
  std::vector<int> basic_row_;  // column -> row or -1
  std::vector<bool> at_upper_;
  int n_ = 0;
  int art0_ = 0;
  long iterations_ = 0;
  bool infeasible_bounds_ = false;
};

}  // namespace

Solution solve(const Model& model, const Params& params) {
  if (model.rows.empty()) {
    // Pure bound problem: each variable sits at the cheaper bound.
    Solution out;
    out.x = Vec(model.num_vars());
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.lo[j] > model.up[j] + 1e-15) {
        out.status = Status::kInfeasible;
        return out;
      }
      if (model.obj[j] >= 0.0)
        out.x[j] = model.lo[j];
      else if (std::isfinite(model.up[j]))
        out.x[j] = model.up[j];
      else {
        out.status = Status::kUnbounded;
        return out;
      }
    }
    out.objective = model.obj.dot(out.x);
    out.status = Status::kOptimal;
    return out;
  }
  Simplex simplex(model, params);
  return simplex.run(model);
}

}  // namespace orgopt::lp
