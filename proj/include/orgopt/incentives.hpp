#ifndef ORGOPT_INCENTIVES_HPP_
#define ORGOPT_INCENTIVES_HPP_

#include <string>
#include <vector>

#include "orgopt/assignment.hpp"
#include "orgopt/types.hpp"

namespace orgopt {

struct Driver {
  int origin = -1;
  int destination = -1;
  int entry_period = 0;
  double b_factor = 1.0;  // allowed travel-time multiplier over the OD minimum
};

struct Organization {
  std::string id;
  double vot_per_min = 0.0;  // alpha_i, dollars per minute
  bool background = false;   // frozen on the fastest route, never compensated
  std::vector<Driver> drivers;

  void validate() const;
};

// c_i = alpha_i * max{0, sum_j delta' s_j - gamma_i}. Losses and gains inside
// the organization cancel before compensation.
double incentive_value(double alpha, double assigned_total_minutes, double gamma_minutes);

// Organization-level cost of a fixed assignment under a driver partition.
// net_minutes[j] is driver j's assigned time minus their baseline minimum;
// group_of_driver assigns each driver to a group of the partition.
double partition_cost(const std::vector<double>& net_minutes,
                      const std::vector<int>& group_of_driver, double alpha);

// Cost of the same assignment under a finer partition A and a coarser
// partition B. Coarsening never increases the cost.
std::pair<double, double> merged_cost_dominance(const std::vector<double>& net_minutes,
                                                const std::vector<int>& groups_fine,
                                                const std::vector<int>& groups_coarse,
                                                double alpha);

struct IncentiveOutcome {
  std::vector<std::string> org_ids;
  Vec per_org_cost;   // dollars
  double total_cost = 0.0;
  double budget = 0.0;  // Omega
};

// Checks an outcome against the published assignment: every organization is
// compensated at least its Eq-style floor, costs are nonnegative, and the
// total stays within budget (1e-6 relative slack for float accumulation).
// Reports all violations instead of throwing.
std::vector<std::string> validate_outcome(const IncentiveOutcome& outcome,
                                          const std::vector<double>& alphas,
                                          const std::vector<double>& assigned_total_minutes,
                                          const std::vector<double>& gammas);

}  // namespace orgopt

#endif  // ORGOPT_INCENTIVES_HPP_
