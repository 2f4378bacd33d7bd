#ifndef ORGOPT_PROJECTION_HPP_
#define ORGOPT_PROJECTION_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orgopt/admm.hpp"
#include "orgopt/lp.hpp"
#include "orgopt/types.hpp"

namespace orgopt::milp {

// Integer quantity expressed through a pos/neg split around `offset`:
// x = offset + lp_x[pos] - lp_x[neg]. Branch bounds become variable bounds
// on the split, so the LP row set never grows down the tree.
struct Entity {
  int pos = -1;
  int neg = -1;
  double offset = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct MilpInstance {
  lp::Model lp;
  std::vector<Entity> entities;
};

enum class BnbStatus { kOptimal, kFeasible, kInfeasible, kNoIncumbent };

struct BnbParams {
  double gap_tol = 1e-9;
  double time_limit_s = std::numeric_limits<double>::infinity();
  long max_nodes = 100000000;
};

struct BnbSolution {
  BnbStatus status = BnbStatus::kNoIncumbent;
  Vec entity_values;
  Vec lp_x;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  long nodes = 0;
};

// Prefer `a` over incumbent `b` among equal-objective candidates.
using TieBreak = std::function<bool(const Vec& a, const Vec& b)>;

struct Incumbent {
  Vec entity_values;
  double objective = std::numeric_limits<double>::infinity();
};

// Best-first search, LP relaxation bounds, branching on the most fractional
// entity (ties to the lowest index).
BnbSolution branch_and_bound(const MilpInstance& instance, const BnbParams& params = {},
                             const TieBreak& tie_break = {},
                             const std::optional<Incumbent>& seed = std::nullopt);

// Everything the l1 projection needs about one organization.
struct ProjectionOrg {
  std::string id;
  double alpha = 0.0;
  double gamma = 0.0;                 // minutes
  std::vector<int> driver_od_period;  // per driver
  Vec cap;                            // per driver, minutes
};

struct ProjectionInput {
  Dims dims;
  Vec delta;  // minutes
  double Omega = 0.0;
  std::vector<ProjectionOrg> orgs;
  // route-period columns per od-period, lowest route index first
  std::vector<std::vector<int>> cols_of_od_period;
};

struct ProjectionResult {
  std::vector<std::vector<int>> assigned_col;  // per org, per driver
  std::vector<Vec> counts;                     // per org, S_i 1
  Vec c;                                       // per org, minimal Eq-style cost
  double distance = 0.0;                       // l1 value
  double gap = 0.0;
  BnbStatus status = BnbStatus::kNoIncumbent;
  long nodes = 0;
};

// Exact l1 projection of the relaxed aggregates onto binary feasible
// assignments. Drivers of one organization sharing an OD-period are
// interchangeable up to their fairness caps, so the search runs over
// per-(organization, OD-period, route) counts with Hall-type cap rows; the
// returned counts expand to drivers deterministically (slowest route to the
// largest cap).
ProjectionResult project_to_binary(const std::vector<Vec>& u_star,
                                   const ProjectionInput& input,
                                   const BnbParams& params = {});

MilpInstance build_projection_milp(const std::vector<Vec>& u_star,
                                   const ProjectionInput& input);

// Fixed-format MPS export of a built instance, for external cross-checks.
std::string to_mps(const MilpInstance& instance, const std::string& name);

}  // namespace orgopt::milp

#endif  // ORGOPT_PROJECTION_HPP_
