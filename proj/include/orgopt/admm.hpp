#ifndef ORGOPT_ADMM_HPP_
#define ORGOPT_ADMM_HPP_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "orgopt/types.hpp"

namespace orgopt::admm {

// One incentivized organization inside a solver instance.
struct OrgBlock {
  std::string id;
  double alpha = 0.0;                  // $/min
  double gamma = 0.0;                  // minutes, baseline minimum time
  Vec q;                               // K*|T| demand counts
  Vec cap;                             // per-driver fairness bound, minutes
  std::vector<int> driver_od_period;   // per driver
  std::vector<std::vector<int>> admissible_cols;  // per driver: route-period columns

  int num_drivers() const { return static_cast<int>(driver_od_period.size()); }
};

// The relaxed incentive problem: volumes couple organizations through R,
// demand through D, money through the budget row. Background traffic enters
// as the fixed volume offset v0.
struct ProblemInstance {
  Dims dims;
  SpMat R;              // (E*T) x (P*T)
  SpMat D;              // (K*T) x (P*T)
  Vec delta;            // P*T minutes
  Vec eta;              // K*T minutes
  Vec v0;               // E*T background volume
  Vec theta0_lt;        // E*T hours, BPR free-flow per link-period
  Vec cap_lt;           // E*T practical capacity per link-period
  double Omega = 0.0;   // $
  std::vector<OrgBlock> orgs;

  int num_orgs() const { return static_cast<int>(orgs.size()); }
  double travel_time(const Vec& volumes) const;           // vehicle-hours
  Vec travel_time_gradient(const Vec& volumes) const;
  Vec stacked_u_volumes(const std::vector<Vec>& u) const;  // v0 + R * sum_i u_i
};

struct SolverState {
  double rho = 1.0;
  double lambda_tilde = 0.0;
  int iteration = 0;
  // Primal blocks.
  std::vector<Mat> S, W, H, Z;   // per org, (P*T) x m_i
  std::vector<Vec> u;            // per org, P*T
  std::vector<Vec> beta;         // per org, m_i
  Vec omega;                     // E*T
  Vec c, mu;                     // n each; c_tilde = [c; mu]
  double beta_tilde = 0.0;
  // Dual blocks.
  std::vector<Vec> lambda1;      // per org, P*T
  Vec lambda2;                   // E*T
  std::vector<Vec> lambda3;      // per org, K*T
  std::vector<Vec> lambda4;      // per org, m_i
  std::vector<Mat> Lambda5;      // per org
  std::vector<Vec> lambda6;      // per org, m_i
  Vec lambda7;                   // n
  std::vector<Mat> Lambda8;      // per org
  double lambda9 = 0.0;
  std::vector<Mat> Lambda10;     // per org
};

// Residuals of the ten constraint blocks, evaluated at the current iterate.
struct Residuals {
  std::vector<Vec> r1;   // S_i 1 - u_i
  Vec r2;                // omega - v0 - R sum u
  std::vector<Vec> r3;   // D u_i - q_i
  std::vector<Vec> r4;   // W_i' 1 - 1
  std::vector<Mat> r5;   // S_i - W_i
  std::vector<Vec> r6;   // H_i' delta + beta_i - cap_i
  Vec r7;                // alpha (delta' u_i - gamma_i) - (c_i - mu_i)
  std::vector<Mat> r8;   // S_i - H_i
  double r9 = 0.0;       // sum c + beta_tilde - Omega
  std::vector<Mat> r10;  // S_i - Z_i

  double max_norm() const;
  Vec block_norms() const;  // length 10
};

// Constant-matrix inverses reused across iterations. The u-step factors
// I + R~'R~ + D~'D~ + (Delta a~)(Delta a~)' through its block structure:
// rank-one demand groups per organization plus a link-period Woodbury
// complement. The c~ system is singular for n >= 2 but always consistent;
// it is solved in the minimum-norm sense.
class FactorCache {
 public:
  FactorCache(const ProblemInstance& problem, double rho);

  // x <- x (3I + 11')^-1 acting on the driver dimension.
  Mat apply_s_inverse(const Mat& x) const;
  // (I + 11')^-1 y over the route-period dimension.
  Mat apply_w_inverse(const Mat& y) const;
  // (I + delta delta')^-1 y.
  Mat apply_h_inverse(const Mat& y) const;
  Vec solve_c_tilde(const Vec& rhs) const;   // min-norm solve, 2n
  std::vector<Vec> solve_u(const std::vector<Vec>& rhs) const;

  // For verification: apply the original (unfactored) u-step matrix.
  std::vector<Vec> apply_u_matrix(const std::vector<Vec>& x) const;
  Mat c_tilde_matrix() const { return c_matrix_; }

 private:
  Vec m_solve(const Vec& x) const;          // (I + D'D)^-1
  Vec a_inverse(int org, const Vec& x) const;

  const ProblemInstance* pb_;
  double rho_ = 1.0;
  std::vector<std::vector<int>> group_cols_;  // od-period -> route-period columns
  std::vector<Vec> w_sm_;                    // per org Sherman-Morrison vector
  std::vector<double> s_sm_;
  Mat c_matrix_;                             // 2n x 2n
  Mat c_pinv_;
  Eigen::LDLT<Mat> coupling_;                // m x m Woodbury complement
  double delta_sq_ = 0.0;                    // 1 + delta'delta
};

// Single (link, period) volume subproblem:
//   min_{w >= 0}  w theta(w) + lambda2 (w - a) + rho/2 (w - a)^2
// Safeguarded Newton on the strictly convex objective, bisection fallback.
double omega_subproblem(double a, double lambda2, double rho, double theta0,
                        double capacity);

Mat s_update(const Vec& lambda1, const Mat& Lambda5, const Mat& Lambda8,
             const Mat& Lambda10, const Vec& u, const Mat& W, const Mat& H, const Mat& Z,
             double rho);

Mat z_update(const Mat& S, const Mat& Lambda10, double rho, double lambda_tilde);

void dual_ascent(SolverState& state, const Residuals& residuals, double rho);

Residuals compute_residuals(const ProblemInstance& problem, const SolverState& state);

// -(lambda/2) sum x(x-1) >= 0 on [0,1] entries, zero iff binary.
double regularizer_value(const Mat& x, double lambda_tilde);

struct AdmmParams {
  double rho = 1.0;
  double lambda_tilde = 0.0;
  int max_iters = 2000;
  double tol = 1e-4;
  double divergence_threshold = 1e6;
};

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  Vec block_norms;  // 10
  double wall_seconds = 0.0;
};

struct RelaxedSolution {
  std::vector<Vec> u;       // per org, best iterate
  std::vector<Mat> S;       // per org, fractional
  Vec c;                    // per org $
  Vec omega;
  double objective = 0.0;       // F(omega) + regularizer at best iterate
  double objective_at_u = 0.0;  // F(v0 + R sum u)
  double best_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> history;
  SolverState state;        // final state, reusable as a warm start
};

SolverState initial_state(const ProblemInstance& problem, const AdmmParams& params);

// Runs the splitting scheme for up to max_iters or until every constraint
// block's inf-norm residual drops below tol; returns the best iterate seen.
// `warm` continues from a previous state; `log` receives one CSV line per
// iteration.
RelaxedSolution solve_relaxed(const ProblemInstance& problem, const AdmmParams& params,
                              const SolverState* warm = nullptr,
                              std::ostream* log = nullptr);

// Versioned JSON checkpoint with exact double round-trip.
std::string save_state(const SolverState& state);
SolverState load_state(const std::string& blob);

// Throws InfeasibleError if some driver's fairness bound excludes all of its
// routes (the relaxed constraints 2/3/5 are infeasible exactly in that case).
void check_feasibility(const ProblemInstance& problem);

}  // namespace orgopt::admm

#endif  // ORGOPT_ADMM_HPP_
