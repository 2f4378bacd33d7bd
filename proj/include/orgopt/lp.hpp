#ifndef ORGOPT_LP_HPP_
#define ORGOPT_LP_HPP_

#include <utility>
#include <vector>

#include "orgopt/types.hpp"

namespace orgopt::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterLimit };

// min obj'x subject to row senses '<', '>', '=' and variable bounds.
// Lower bounds must be finite; upper bounds may be +inf.
struct Model {
  Vec obj;
  Vec lo;
  Vec up;
  struct Row {
    std::vector<std::pair<int, double>> terms;
    char sense = '<';
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(obj.size()); }
  int add_var(double lower, double upper, double cost);
  void add_row(std::vector<std::pair<int, double>> terms, char sense, double rhs);
};

struct Solution {
  Status status = Status::kIterLimit;
  Vec x;
  double objective = 0.0;
  long iterations = 0;
};

struct Params {
  double tol = 1e-9;
  long max_iterations = 0;  // 0 = automatic from problem size
};

// Two-phase primal simplex with bounded variables on a dense tableau.
// Deterministic pivot rules: Dantzig pricing with lowest-index ties, Bland's
// rule after a degeneracy stall.
Solution solve(const Model& model, const Params& params = {});

}  // namespace orgopt::lp

#endif  // ORGOPT_LP_HPP_
