#ifndef ORGOPT_TYPES_HPP_
#define ORGOPT_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace orgopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Instance cannot be solved (unreachable OD, fairness excludes all routes, ...).
struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

// Solver residuals blew up.
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Time discretization. Entry of incentivized drivers is restricted to the
// first `analysis_periods` periods; the remaining periods absorb spillover
// of trips that finish after the analysis window.
struct Horizon {
  int num_periods = 1;
  double period_minutes = 5.0;
  int analysis_periods = 1;

  double period_hours() const { return period_minutes / 60.0; }
  void validate() const {
    if (num_periods < 1 || analysis_periods < 1 || analysis_periods > num_periods)
      throw Error("horizon: need num_periods >= analysis_periods >= 1");
    if (!(period_minutes > 0)) throw Error("horizon: period length must be positive");
  }
};

// Index layout shared by all vector/matrix blocks. Periods are the outer
// index: position (t, i) of an N-wide block lives at t*N + i.
struct Dims {
  int num_links = 0;     // |E|
  int num_periods = 0;   // |T|
  int num_routes = 0;    // |P|, all enumerated routes over all OD pairs
  int num_ods = 0;       // K

  int link_periods() const { return num_links * num_periods; }
  int route_periods() const { return num_routes * num_periods; }
  int od_periods() const { return num_ods * num_periods; }

  int link_period(int link, int t) const { return t * num_links + link; }
  int route_period(int route, int t) const { return t * num_routes + route; }
  int od_period(int od, int t) const { return t * num_ods + od; }
};

}  // namespace orgopt

#endif  // ORGOPT_TYPES_HPP_
