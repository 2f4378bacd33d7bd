#include "orgopt/incentives.hpp"

#include <algorithm>
#include <map>

namespace orgopt {

void Organization::validate() const {
  if (vot_per_min < 0.0)
    throw Error("organization '" + id + "': negative value of time");
  if (drivers.empty())
    throw Error("organization '" + id + "': no drivers");
  for (size_t j = 0; j < drivers.size(); ++j) {
    if (drivers[j].b_factor < 1.0)
      throw Error("organization '" + id + "': driver " + std::to_string(j) +
                  " has b_factor < 1, which makes the fairness bound infeasible");
    if (drivers[j].entry_period < 0)
      throw Error("organization '" + id + "': driver " + std::to_string(j) +
                  " has a negative entry period");
  }
}

double incentive_value(double alpha, double assigned_total_minutes, double gamma_minutes) {
  return alpha * std::max(0.0, assigned_total_minutes - gamma_minutes);
}

double partition_cost(const std::vector<double>& net_minutes,
                      const std::vector<int>& group_of_driver, double alpha) {
  if (net_minutes.size() != group_of_driver.size())
    throw Error("partition_cost: driver count mismatch");
  std::map<int, double> net_by_group;
  for (size_t j = 0; j < net_minutes.size(); ++j)
    net_by_group[group_of_driver[j]] += net_minutes[j];
  double cost = 0.0;
  for (const auto& [g, net] : net_by_group) cost += alpha * std::max(0.0, net);
  return cost;
}

std::pair<double, double> merged_cost_dominance(const std::vector<double>& net_minutes,
                                                const std::vector<int>& groups_fine,
                                                const std::vector<int>& groups_coarse,
                                                double alpha) {
  if (net_minutes.size() != groups_fine.size() || net_minutes.size() != groups_coarse.size())
    throw Error("merged_cost_dominance: partitions cover different driver sets");
  // The coarse partition must not split any fine group.
  std::map<int, int> coarse_of_fine;
  for (size_t j = 0; j < net_minutes.size(); ++j) {
    auto [it, inserted] = coarse_of_fine.emplace(groups_fine[j], groups_coarse[j]);
    if (!inserted && it->second != groups_coarse[j])
      throw Error("merged_cost_dominance: second partition is not a coarsening of the first");
  }
  return {partition_cost(net_minutes, groups_fine, alpha),
          partition_cost(net_minutes, groups_coarse, alpha)};
}

std::vector<std::string> validate_outcome(const IncentiveOutcome& outcome,
                                          const std::vector<double>& alphas,
                                          const std::vector<double>& assigned_total_minutes,
                                          const std::vector<double>& gammas) {
  std::vector<std::string> violations;
  const size_t n = outcome.org_ids.size();
  if (outcome.per_org_cost.size() != static_cast<Eigen::Index>(n) || alphas.size() != n ||
      assigned_total_minutes.size() != n || gammas.size() != n) {
    violations.push_back("outcome has inconsistent organization counts");
    return violations;
  }
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double c = outcome.per_org_cost[static_cast<Eigen::Index>(i)];
    total += c;
    if (c < 0.0)
      violations.push_back("organization '" + outcome.org_ids[i] + "': negative incentive");
    const double floor = alphas[i] * (assigned_total_minutes[i] - gammas[i]);
    if (c < floor - 1e-9 * std::max(1.0, std::abs(floor)))
      violations.push_back("organization '" + outcome.org_ids[i] +
                           "': incentive below the compensation floor");
  }
  if (total > outcome.budget + 1e-6 * std::max(1.0, outcome.budget))
    violations.push_back("total incentive exceeds the budget");
  return violations;
}

}  // namespace orgopt
