#include "orgopt/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orgopt {

int RouteSet::od_index(int origin, int destination) const {
  for (int k = 0; k < num_ods(); ++k)
    if (od_pairs[k].first == origin && od_pairs[k].second == destination) return k;
  return -1;
}

RouteSet enumerate_route_set(const Network& network,
                             const std::vector<std::pair<int, int>>& od_pairs,
                             int k_routes) {
  RouteSet rs;
  rs.od_pairs = od_pairs;
  rs.routes_of_od.resize(od_pairs.size());
  for (int k = 0; k < static_cast<int>(od_pairs.size()); ++k) {
    auto routes = enumerate_routes(network, od_pairs[k].first, od_pairs[k].second, k_routes);
    for (auto& r : routes) {
      rs.routes_of_od[k].push_back(rs.num_routes());
      rs.od_of_route.push_back(k);
      rs.routes.push_back(std::move(r));
    }
  }
  return rs;
}

RMatrix build_r_matrix(const Network& network, const RouteSet& routes,
                       const Vec& link_times, const Horizon& horizon) {
  horizon.validate();
  Dims dims;
  dims.num_links = network.num_links();
  dims.num_periods = horizon.num_periods;
  dims.num_routes = routes.num_routes();
  dims.num_ods = routes.num_ods();
  if (link_times.size() != dims.link_periods())
    throw Error("build_r_matrix: link time table has wrong length");
  if ((link_times.array() <= 0.0).any() || !link_times.allFinite())
    throw Error("build_r_matrix: link times must be positive and finite");

  // All interval arithmetic is done in period units so period boundaries are
  // exact integers and the Appendix-B style fractions come out exact.
  const double period_h = horizon.period_hours();
  const double horizon_end = static_cast<double>(horizon.num_periods);
  std::vector<Eigen::Triplet<double>> trips;
  for (int t1 = 0; t1 < horizon.num_periods; ++t1) {
    for (int r = 0; r < routes.num_routes(); ++r) {
      const int col = dims.route_period(r, t1);
      double offset = static_cast<double>(t1);  // arrival time at the next link
      for (int lid : routes.routes[r].link_ids) {
        if (lid < 0 || lid >= dims.num_links)
          throw Error("build_r_matrix: route references unknown link " + std::to_string(lid));
        const double theta = link_times[dims.link_period(lid, t1)] / period_h;
        // A driver occupies a link for at least one full period: the stay
        // window is what gets spread over periods, while the true link time
        // advances the downstream offset.
        const double window = std::max(theta, 1.0);
        const double begin = offset;
        const double end = std::min(begin + window, horizon_end);
        for (int t2 = std::max(t1, static_cast<int>(std::floor(begin)));
             t2 < horizon.num_periods; ++t2) {
          if (static_cast<double>(t2) >= end) break;
          const double overlap =
              std::min(end, static_cast<double>(t2 + 1)) - std::max(begin, static_cast<double>(t2));
          if (overlap <= 0.0) continue;
          const double frac = std::min(1.0, std::max(0.0, overlap / window));
          trips.emplace_back(dims.link_period(lid, t2), col, frac);
        }
        offset += theta;
      }
    }
  }
  RMatrix rm;
  rm.dims = dims;
  rm.entries.resize(dims.link_periods(), dims.route_periods());
  rm.entries.setFromTriplets(trips.begin(), trips.end());
  return rm;
}

Vec expected_volumes(const RMatrix& r, const Vec& route_period_counts) {
  if (route_period_counts.size() != r.entries.cols())
    throw Error("expected_volumes: dimension mismatch");
  return r.entries * route_period_counts;
}

Vec expected_volumes(const RMatrix& r, const Mat& assignment) {
  if (assignment.rows() != r.entries.cols())
    throw Error("expected_volumes: dimension mismatch");
  return expected_volumes(r, Vec(assignment.rowwise().sum()));
}

double total_travel_time(const Vec& volumes, const Network& network, const Dims& dims) {
  if (volumes.size() != dims.link_periods())
    throw Error("total_travel_time: volume vector has wrong length");
  double total = 0.0;
  for (int t = 0; t < dims.num_periods; ++t)
    for (int l = 0; l < dims.num_links; ++l) {
      const double v = volumes[dims.link_period(l, t)];
      total += v * bpr_travel_time(network.theta0(l, t), network.capacity(l, t), v);
    }
  return total;
}

Vec total_travel_time_gradient(const Vec& volumes, const Network& network,
                               const Dims& dims) {
  Vec g(dims.link_periods());
  for (int t = 0; t < dims.num_periods; ++t)
    for (int l = 0; l < dims.num_links; ++l) {
      const int i = dims.link_period(l, t);
      const double v = volumes[i];
      const double th0 = network.theta0(l, t);
      const double w = network.capacity(l, t);
      g[i] = bpr_travel_time(th0, w, v) + v * bpr_derivative(th0, w, v);
    }
  return g;
}

void DemandModel::validate() const {
  Vec sum = Vec::Zero(total_demand.size());
  for (const auto& [id, q] : org_demand) {
    if (q.size() != total_demand.size())
      throw Error("demand: organization '" + id + "' has a wrong-sized demand vector");
    if ((q.array() < 0).any())
      throw Error("demand: organization '" + id + "' has negative demand");
    sum += q;
  }
  if ((sum - total_demand).lpNorm<Eigen::Infinity>() > 1e-9)
    throw Error("demand: organization demands do not sum to the total");
}

SpMat build_od_aggregation(const RouteSet& routes, const Dims& dims) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int t = 0; t < dims.num_periods; ++t)
    for (int r = 0; r < dims.num_routes; ++r)
      trips.emplace_back(dims.od_period(routes.od_of_route[r], t), dims.route_period(r, t),
                         1.0);
  SpMat d(dims.od_periods(), dims.route_periods());
  d.setFromTriplets(trips.begin(), trips.end());
  return d;
}

Vec route_times_minutes(const RouteSet& routes, const Vec& link_times, const Dims& dims) {
  Vec delta = Vec::Zero(dims.route_periods());
  for (int t = 0; t < dims.num_periods; ++t)
    for (int r = 0; r < dims.num_routes; ++r) {
      double hours = 0.0;
      for (int lid : routes.routes[r].link_ids) hours += link_times[dims.link_period(lid, t)];
      delta[dims.route_period(r, t)] = 60.0 * hours;
    }
  return delta;
}

Vec min_route_times(const RouteSet& routes, const Vec& delta, const Dims& dims) {
  Vec eta = Vec::Constant(dims.od_periods(), std::numeric_limits<double>::infinity());
  for (int t = 0; t < dims.num_periods; ++t)
    for (int k = 0; k < dims.num_ods; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (int r : routes.routes_of_od[k]) best = std::min(best, delta[dims.route_period(r, t)]);
      eta[dims.od_period(k, t)] = best;
    }
  return eta;
}

Vec fastest_route_loading(const Vec& delta, const Vec& od_demand, const RouteSet& routes,
                          const Dims& dims) {
  Vec counts = Vec::Zero(dims.route_periods());
  for (int t = 0; t < dims.num_periods; ++t)
    for (int k = 0; k < dims.num_ods; ++k) {
      const double q = od_demand[dims.od_period(k, t)];
      if (q <= 0.0) continue;
      if (routes.routes_of_od[k].empty())
        throw InfeasibleError("OD " + std::to_string(k) + " has demand but no routes");
      int best = -1;
      double best_time = std::numeric_limits<double>::infinity();
      for (int r : routes.routes_of_od[k]) {
        const double dt = delta[dims.route_period(r, t)];
        if (dt < best_time) {
          best_time = dt;
          best = r;
        }
      }
      counts[dims.route_period(best, t)] += q;
    }
  return counts;
}

namespace {

Vec link_times_from_volumes(const Network& network, const Vec& volumes, const Dims& dims) {
  Vec lt(dims.link_periods());
  for (int t = 0; t < dims.num_periods; ++t)
    for (int l = 0; l < dims.num_links; ++l)
      lt[dims.link_period(l, t)] = bpr_travel_time(
          network.theta0(l, t), network.capacity(l, t), volumes[dims.link_period(l, t)]);
  return lt;
}

Vec free_flow_link_times(const Network& network, const Dims& dims) {
  Vec lt(dims.link_periods());
  for (int t = 0; t < dims.num_periods; ++t)
    for (int l = 0; l < dims.num_links; ++l)
      lt[dims.link_period(l, t)] = network.theta0(l, t);
  return lt;
}

double relative_gap(const Vec& delta, const Vec& flows, const Vec& od_demand,
                    const RouteSet& routes, const Dims& dims) {
  double gap = 0.0;
  for (int t = 0; t < dims.num_periods; ++t)
    for (int k = 0; k < dims.num_ods; ++k) {
      if (od_demand[dims.od_period(k, t)] <= 0.0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int r : routes.routes_of_od[k]) best = std::min(best, delta[dims.route_period(r, t)]);
      for (int r : routes.routes_of_od[k]) {
        const int rp = dims.route_period(r, t);
        if (flows[rp] > 1e-9)
          gap = std::max(gap, (delta[rp] - best) / std::max(best, 1e-12));
      }
    }
  return gap;
}

}  // namespace

UeBaseline compute_ue_baseline(const Network& network, const DemandModel& demand,
                               const RouteSet& routes, const Horizon& horizon,
                               const UeParams& params) {
  const Dims& dims = demand.dims;
  for (int t = 0; t < dims.num_periods; ++t)
    for (int k = 0; k < dims.num_ods; ++k)
      if (demand.total_demand[dims.od_period(k, t)] > 0 && routes.routes_of_od[k].empty())
        throw InfeasibleError("UE baseline: OD pair " + std::to_string(k) +
                              " has demand but is unreachable");

  Vec link_times = free_flow_link_times(network, dims);
  RMatrix r = build_r_matrix(network, routes, link_times, horizon);
  Vec delta = route_times_minutes(routes, link_times, dims);
  Vec flows = Vec::Zero(dims.route_periods());

  UeBaseline out;
  for (int it = 1; it <= params.max_iterations; ++it) {
    const Vec target = fastest_route_loading(delta, demand.total_demand, routes, dims);
    flows += (target - flows) / static_cast<double>(it);
    const Vec volumes = expected_volumes(r, flows);
    link_times = link_times_from_volumes(network, volumes, dims);
    r = build_r_matrix(network, routes, link_times, horizon);
    delta = route_times_minutes(routes, link_times, dims);
    out.iterations = it;
    out.gap = relative_gap(delta, flows, demand.total_demand, routes, dims);
    if (out.gap < params.gap_tol) {
      out.converged = true;
      break;
    }
  }
  out.r_ue = std::move(r);
  out.delta_ue = std::move(delta);
  out.route_flows = std::move(flows);
  out.link_times = std::move(link_times);
  return out;
}

TravelTimeTables route_times_after_choice(const UeBaseline& baseline,
                                          const DemandModel& demand,
                                          const RouteSet& routes, const Network& network) {
  const Dims& dims = demand.dims;
  const Vec counts =
      fastest_route_loading(baseline.delta_ue, demand.total_demand, routes, dims);
  TravelTimeTables tables;
  tables.dims = dims;
  tables.volumes = expected_volumes(baseline.r_ue, counts);
  tables.link_times = link_times_from_volumes(network, tables.volumes, dims);
  tables.delta = route_times_minutes(routes, tables.link_times, dims);
  tables.eta = min_route_times(routes, tables.delta, dims);
  return tables;
}

Mat MinTimeAssignment::dense(int od_periods) const {
  Mat b = Mat::Zero(static_cast<int>(od_period_of_driver.size()), od_periods);
  for (int j = 0; j < static_cast<int>(od_period_of_driver.size()); ++j)
    b(j, od_period_of_driver[j]) = 1.0;
  return b;
}

MinTimeAssignment min_time_assignment(const std::vector<int>& driver_od_periods,
                                      const Vec& eta) {
  MinTimeAssignment out;
  out.od_period_of_driver = driver_od_periods;
  out.eta_of_driver.resize(static_cast<int>(driver_od_periods.size()));
  for (int j = 0; j < static_cast<int>(driver_od_periods.size()); ++j) {
    const int kp = driver_od_periods[j];
    if (kp < 0 || kp >= eta.size())
      throw Error("min_time_assignment: driver " + std::to_string(j) +
                  " has an unknown OD-period");
    if (!std::isfinite(eta[kp]))
      throw InfeasibleError("min_time_assignment: driver " + std::to_string(j) +
                            " has no route for its OD-period");
    out.eta_of_driver[j] = eta[kp];
  }
  out.gamma = out.eta_of_driver.sum();
  return out;
}

}  // namespace orgopt
