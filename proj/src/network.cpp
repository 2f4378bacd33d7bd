#include "orgopt/network.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

namespace orgopt {

double bpr_travel_time(double theta0, double capacity, double volume) {
  if (volume < 0.0) throw std::domain_error("bpr_travel_time: negative volume");
  const double r = volume / capacity;
  const double r2 = r * r;
  return theta0 * (1.0 + 0.15 * r2 * r2);
}

double bpr_travel_time(const Link& link, double volume) {
  return bpr_travel_time(link.free_flow_time_h, link.capacity, volume);
}

double bpr_derivative(double theta0, double capacity, double volume) {
  const double r = volume / capacity;
  return theta0 * 0.6 * r * r * r / capacity;
}

Vec route_vector(const Route& route, int num_links) {
  Vec v = Vec::Zero(num_links);
  for (int id : route.link_ids) v[id] = 1.0;
  return v;
}

Network::Network(std::vector<std::string> node_names, std::vector<Link> links)
    : node_names_(std::move(node_names)), links_(std::move(links)) {
  std::set<std::string> seen;
  for (const auto& name : node_names_)
    if (!seen.insert(name).second) throw Error("network: duplicate node '" + name + "'");
  if (links_.empty()) throw Error("network has no links");
  out_links_.resize(node_names_.size());
  const int n = num_nodes();
  for (int i = 0; i < static_cast<int>(links_.size()); ++i) {
    const Link& l = links_[i];
    if (l.id != i) throw Error("network: link ids must be dense 0..n-1 in order, got id " +
                               std::to_string(l.id) + " at position " + std::to_string(i));
    if (l.from < 0 || l.from >= n || l.to < 0 || l.to >= n)
      throw Error("network: link " + std::to_string(i) + " references an unknown node");
    if (l.from == l.to)
      throw Error("network: link " + std::to_string(i) + " is a self-loop");
    if (!(l.free_flow_time_h > 0.0))
      throw Error("network: link " + std::to_string(i) + " has nonpositive free-flow time");
    if (!(l.capacity > 0.0))
      throw Error("network: link " + std::to_string(i) + " has nonpositive capacity");
    out_links_[l.from].push_back(i);
  }
}

int Network::node_id(const std::string& name) const {
  for (int i = 0; i < num_nodes(); ++i)
    if (node_names_[i] == name) return i;
  throw Error("network: unknown node '" + name + "'");
}

void Network::set_per_period_bpr(const Mat& theta0, const Mat& capacity) {
  if (theta0.rows() != num_links() || capacity.rows() != num_links() ||
      theta0.cols() != capacity.cols())
    throw Error("network: per-period BPR tables must be num_links x num_periods");
  if ((theta0.array() <= 0.0).any() || (capacity.array() <= 0.0).any())
    throw Error("network: per-period BPR parameters must be positive");
  theta0_per_period_ = theta0;
  capacity_per_period_ = capacity;
}

double Network::theta0(int link, int period) const {
  if (theta0_per_period_.size() > 0) {
    int t = std::min<int>(period, static_cast<int>(theta0_per_period_.cols()) - 1);
    return theta0_per_period_(link, t);
  }
  return links_.at(link).free_flow_time_h;
}

double Network::capacity(int link, int period) const {
  if (capacity_per_period_.size() > 0) {
    int t = std::min<int>(period, static_cast<int>(capacity_per_period_.cols()) - 1);
    return capacity_per_period_(link, t);
  }
  return links_.at(link).capacity;
}

namespace {

struct PathLabel {
  double time = std::numeric_limits<double>::infinity();
  std::vector<int> links;
  bool reached = false;
};

// Dijkstra on free-flow times, breaking time ties by the lexicographically
// smallest link-id sequence so route sets are stable across runs.
bool shortest_path(const Network& net, const std::vector<bool>& removed, int origin,
                   int destination, std::vector<int>* out_links, double* out_time) {
  const int n = net.num_nodes();
  std::vector<PathLabel> label(n);
  label[origin].time = 0.0;
  label[origin].reached = true;

  auto better = [](double t, const std::vector<int>& p, const PathLabel& l) {
    if (!l.reached) return true;
    if (t < l.time - 1e-15) return true;
    if (t > l.time + 1e-15) return false;
    return p < l.links;
  };

  using QItem = std::pair<double, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;
  queue.push({0.0, origin});
  while (!queue.empty()) {
    auto [t, node] = queue.top();
    queue.pop();
    if (t > label[node].time + 1e-15) continue;
    for (int lid : net.out_links(node)) {
      if (removed[lid]) continue;
      const Link& l = net.link(lid);
      double nt = label[node].time + l.free_flow_time_h;
      std::vector<int> np = label[node].links;
      np.push_back(lid);
      if (better(nt, np, label[l.to])) {
        label[l.to].time = nt;
        label[l.to].links = std::move(np);
        label[l.to].reached = true;
        queue.push({nt, l.to});
      }
    }
  }
  if (!label[destination].reached) return false;
  *out_links = label[destination].links;
  *out_time = label[destination].time;
  return true;
}

}  // namespace

std::vector<Route> enumerate_routes(const Network& network, int origin, int destination,
                                    int k) {
  if (origin == destination) throw Error("enumerate_routes: origin equals destination");
  if (k < 1) throw Error("enumerate_routes: k must be >= 1");
  std::vector<Route> routes;
  std::vector<bool> removed(network.num_links(), false);
  for (int m = 0; m < k; ++m) {
    std::vector<int> links;
    double time = 0.0;
    if (!shortest_path(network, removed, origin, destination, &links, &time)) {
      if (m == 0)
        throw InfeasibleError("OD pair unreachable: " + network.node_name(origin) + " -> " +
                              network.node_name(destination));
      break;
    }
    Route r;
    r.origin = origin;
    r.destination = destination;
    r.link_ids = links;
    r.free_flow_time_h = time;
    routes.push_back(std::move(r));
    for (int lid : links) removed[lid] = true;
  }
  return routes;
}

}  // namespace orgopt
