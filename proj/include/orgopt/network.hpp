#ifndef ORGOPT_NETWORK_HPP_
#define ORGOPT_NETWORK_HPP_

#include <string>
#include <utility>
#include <vector>

#include "orgopt/types.hpp"

namespace orgopt {

struct Link {
  int id = -1;
  int from = -1;
  int to = -1;
  double free_flow_time_h = 0.0;  // theta_0
  double capacity = 0.0;          // w, vehicles per period
  double length_mi = 0.0;
};

// BPR volume-delay curve: theta_0 * (1 + 0.15 (v/w)^4). Hours.
double bpr_travel_time(const Link& link, double volume);
double bpr_travel_time(double theta0, double capacity, double volume);
// d/dv of the curve, used by the solver's stationarity conditions.
double bpr_derivative(double theta0, double capacity, double volume);

struct Route {
  int origin = -1;
  int destination = -1;
  std::vector<int> link_ids;  // ordered, connected, no repeats
  double free_flow_time_h = 0.0;
};

// One-hot edge encoding of a route: entry k is 1 iff link k is on the route.
Vec route_vector(const Route& route, int num_links);

class Network {
 public:
  Network(std::vector<std::string> node_names, std::vector<Link> links);

  int num_nodes() const { return static_cast<int>(node_names_.size()); }
  int num_links() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(int id) const { return links_.at(id); }
  const std::vector<std::string>& node_names() const { return node_names_; }
  const std::string& node_name(int id) const { return node_names_.at(id); }
  int node_id(const std::string& name) const;  // throws on unknown name
  const std::vector<int>& out_links(int node) const { return out_links_.at(node); }

  // Per-period BPR calibration. Defaults to each link's constant pair;
  // callers may install one column per period.
  void set_per_period_bpr(const Mat& theta0, const Mat& capacity);
  double theta0(int link, int period) const;
  double capacity(int link, int period) const;
  bool has_per_period_bpr() const { return theta0_per_period_.size() > 0; }

 private:
  std::vector<std::string> node_names_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> out_links_;
  Mat theta0_per_period_;    // num_links x num_periods, empty = constant
  Mat capacity_per_period_;
};

// Free-flow shortest path enumeration with link deletion: route m+1 is the
// shortest path after removing all links of routes 1..m. Ties between
// equal-time paths go to the lexicographically smallest link-id sequence.
// Returns fewer than k routes once deletion disconnects the pair; throws
// InfeasibleError if there is no path at all.
std::vector<Route> enumerate_routes(const Network& network, int origin,
                                    int destination, int k = 3);

}  // namespace orgopt

#endif  // ORGOPT_NETWORK_HPP_
