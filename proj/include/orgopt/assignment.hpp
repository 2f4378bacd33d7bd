#ifndef ORGOPT_ASSIGNMENT_HPP_
#define ORGOPT_ASSIGNMENT_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orgopt/network.hpp"
#include "orgopt/types.hpp"

namespace orgopt {

// All enumerated routes, grouped by OD pair. Route columns are numbered
// globally in OD order, then by rank within the OD.
struct RouteSet {
  std::vector<std::pair<int, int>> od_pairs;       // K ordered (origin, destination)
  std::vector<Route> routes;                       // |P| routes, OD-major order
  std::vector<std::vector<int>> routes_of_od;      // od -> global route indices
  std::vector<int> od_of_route;                    // route -> od index

  int num_ods() const { return static_cast<int>(od_pairs.size()); }
  int num_routes() const { return static_cast<int>(routes.size()); }
  int od_index(int origin, int destination) const;  // -1 if absent
};

RouteSet enumerate_route_set(const Network& network,
                             const std::vector<std::pair<int, int>>& od_pairs,
                             int k_routes);

// Link-time occupancy matrix R: entry ((t2,l),(t1,r)) is the fraction of a
// driver's stay on link l that falls in period t2, given the driver entered
// route r at the start of period t1. The stay on a link begins at the sum of
// the true upstream link times and lasts max(link time, one period); mass
// past the end of the horizon is dropped.
struct RMatrix {
  Dims dims;
  SpMat entries;  // (|E|*|T|) x (|P|*|T|)
};

// link_times: |E|*|T| vector of hours, layout per Dims::link_period.
RMatrix build_r_matrix(const Network& network, const RouteSet& routes,
                       const Vec& link_times, const Horizon& horizon);

// v_hat = R * S * 1. The overload taking a route-period count vector is the
// common path (columns of S already summed).
Vec expected_volumes(const RMatrix& r, const Mat& assignment);
Vec expected_volumes(const RMatrix& r, const Vec& route_period_counts);

// F = sum_{l,t} v * theta_{l,t}(v), vehicle-hours.
double total_travel_time(const Vec& volumes, const Network& network, const Dims& dims);

// Gradient of F with respect to the volume vector: theta(v) + v theta'(v).
Vec total_travel_time_gradient(const Vec& volumes, const Network& network, const Dims& dims);

// Per-organization demand: counts per OD-period. The aggregation matrix D
// maps route-period columns to their OD-period row.
struct DemandModel {
  Dims dims;
  SpMat D;                      // (K*|T|) x (|P|*|T|), one 1 per column
  Vec total_demand;             // K*|T|, all drivers
  std::map<std::string, Vec> org_demand;  // per organization id

  void validate() const;  // org demands must sum to the total
};

SpMat build_od_aggregation(const RouteSet& routes, const Dims& dims);

// Route travel times in minutes, entry-period indexed: delta[(r,t)] is the
// time of route r for a driver entering at period t, summing that period's
// link times. eta[(od,t)] is the fastest route's delta for the OD-period.
struct TravelTimeTables {
  Dims dims;
  Vec delta;       // |P|*|T| minutes
  Vec eta;         // K*|T| minutes
  Vec link_times;  // |E|*|T| hours
  Vec volumes;     // |E|*|T| vehicles
};

Vec route_times_minutes(const RouteSet& routes, const Vec& link_times, const Dims& dims);
Vec min_route_times(const RouteSet& routes, const Vec& delta, const Dims& dims);

struct UeBaseline {
  RMatrix r_ue;
  Vec delta_ue;       // minutes
  Vec route_flows;    // |P|*|T| converged MSA flows
  Vec link_times;     // hours
  int iterations = 0;
  double gap = 0.0;   // final max relative route-time gap among used routes
  bool converged = false;
};

struct UeParams {
  double gap_tol = 1e-4;
  int max_iterations = 500;
};

// Method of successive averages: all-or-nothing load to the current fastest
// route, 1/k step, link times and R rebuilt each pass.
UeBaseline compute_ue_baseline(const Network& network, const DemandModel& demand,
                               const RouteSet& routes, const Horizon& horizon,
                               const UeParams& params = {});

// Everyone re-chooses the delta_ue-fastest route of their OD-period (ties to
// the lowest route index); tables are rebuilt from the resulting volumes.
TravelTimeTables route_times_after_choice(const UeBaseline& baseline,
                                          const DemandModel& demand,
                                          const RouteSet& routes, const Network& network);

// Fastest-route choice per OD-period given delta; returns route-period counts.
Vec fastest_route_loading(const Vec& delta, const Vec& od_demand, const RouteSet& routes,
                          const Dims& dims);

// B_i rows select each driver's OD-period; gamma_i sums their eta entries.
struct MinTimeAssignment {
  std::vector<int> od_period_of_driver;
  Vec eta_of_driver;   // minutes
  double gamma = 0.0;  // minutes

  Mat dense(int od_periods) const;
};

MinTimeAssignment min_time_assignment(const std::vector<int>& driver_od_periods,
                                      const Vec& eta);

}  // namespace orgopt

#endif  // ORGOPT_ASSIGNMENT_HPP_
