#ifndef ORGOPT_HARNESS_HPP_
#define ORGOPT_HARNESS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "orgopt/admm.hpp"
#include "orgopt/assignment.hpp"
#include "orgopt/incentives.hpp"
#include "orgopt/io.hpp"
#include "orgopt/network.hpp"
#include "orgopt/projection.hpp"
#include "orgopt/types.hpp"

namespace orgopt::harness {

struct SolverConfig {
  double rho = 1.0;
  double lambda_tilde = 0.5;   // annealing weight; 0 disables the second phase
  int iters = 2000;
  int anneal_iters = 200;
  double tol = 1e-4;
  double milp_time_limit_s = 600.0;
  long milp_max_nodes = 200000;
};

struct ScenarioConfig {
  std::string network_path;
  std::string demand_path;
  std::string orgs_path;
  double budget = 0.0;
  double vot_scale = 1.0;
  std::optional<double> vot_override;  // absolute $/min applied to every organization
  Horizon horizon{3, 30.0, 2};
  int k_routes = 3;
  SolverConfig solver;
  unsigned long seed = 1;
  std::string outdir;
};

// Parsed inputs, so sweeps can rewrite organizations in memory.
struct ScenarioInputs {
  Network network;
  std::vector<io::DemandEntry> demand;
  io::OrgsFile orgs;
};

ScenarioInputs load_inputs(const ScenarioConfig& config);

struct OrgCostRow {
  std::string id;
  double cost = 0.0;
  double assigned_minutes = 0.0;
  double gamma_minutes = 0.0;
};

struct DriverRow {
  std::string org;
  int driver = 0;
  std::string origin, destination;
  int entry_period = 0;
  int assigned_route = -1;  // global route index
  int fastest_route = -1;
  bool deviated = false;
  double assigned_minutes = 0.0;
  double eta_minutes = 0.0;
  double cap_minutes = 0.0;
};

struct RouteTimeRow {
  int od = 0;
  int route = 0;
  int period = 0;
  double delta_minutes = 0.0;
  double eta_minutes = 0.0;
};

struct ScenarioReport {
  std::string label;
  std::string axis;
  double axis_value = 0.0;
  double budget = 0.0;
  double vot_per_min = 0.0;
  int n_orgs = 0;
  double participation = -1.0;  // -1 when not a participation cell
  unsigned long seed = 0;

  double baseline_vehh = 0.0;
  double incentivized_vehh = 0.0;
  double decrease_pct = 0.0;
  double total_cost = 0.0;
  long deviated_count = 0;
  std::optional<double> cost_per_deviated;

  int admm_iterations = 0;
  double admm_residual = 0.0;
  bool admm_converged = false;
  double milp_gap = 0.0;
  long milp_nodes = 0;
  bool fallback_to_baseline = false;
  bool carried_forward = false;  // budget sweeps reuse the previous plan
  bool failed = false;
  std::string error;

  std::vector<OrgCostRow> org_costs;
  std::vector<DriverRow> assignments;
  std::vector<RouteTimeRow> route_times;
};

ScenarioReport run_scenario(const ScenarioConfig& config);
ScenarioReport run_scenario(const ScenarioConfig& config, const ScenarioInputs& inputs);

enum class SweepAxis { kBudgets, kNumOrgs, kVot, kParticipation };
SweepAxis parse_axis(const std::string& name);

// One run per value on a shared instance and seed. Budget sweeps carry the
// best plan forward so reported metrics are weakly monotone; participation
// sweeps nest the selected driver sets. Failed cells are marked and the
// sweep continues.
std::vector<ScenarioReport> sweep(const ScenarioConfig& config, SweepAxis axis,
                                  const std::vector<double>& values);

// report.csv + per-scenario org_costs.csv / assignments.csv / route_times.csv
// + plotdata/*.csv under outdir. Returns the list of files written.
std::vector<std::string> emit_report(const std::vector<ScenarioReport>& reports,
                                     const std::string& outdir);

std::string report_csv(const std::vector<ScenarioReport>& reports);
std::vector<ScenarioReport> parse_report_csv(const std::string& text);

struct SynthSpec {
  int n_nodes = 12;
  int n_links = 32;
  int n_ods = 144;
  int n_orgs = 10;
  long drivers = 12000;
  double participation = 0.1;
  double congestion = 0.5;  // target mean volume/capacity at the baseline
  double vot_per_min = 2.63;
  double b_factor = 1.5;
  Horizon horizon{3, 30.0, 2};
  int k_routes = 3;
  unsigned long seed = 1;
};

struct SynthResult {
  Network network;
  std::vector<io::DemandEntry> demand;
  io::OrgsFile orgs;
};

// Deterministic synthetic instance: strongly connected network with route
// alternatives for most OD pairs, demand calibrated to the requested
// congestion level, drivers assigned to organizations uniformly at random.
SynthResult synthesize_instance(const SynthSpec& spec);

// Writes network.json, demand.csv, orgs.json into `dir`.
std::vector<std::string> write_instance(const SynthResult& result, const std::string& dir);

}  // namespace orgopt::harness

#endif  // ORGOPT_HARNESS_HPP_
