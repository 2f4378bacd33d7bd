#ifndef ORGOPT_IO_HPP_
#define ORGOPT_IO_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orgopt/incentives.hpp"
#include "orgopt/network.hpp"
#include "orgopt/types.hpp"

namespace orgopt::io {

// Network file: {"nodes":[...], "links":[{"id",from,to,free_flow_time_h,
// capacity,length_mi}...]} with link ids 0..n-1 in order.
Network load_network(const std::string& path);
Network parse_network(const std::string& text, const std::string& origin_label);
std::string network_to_json(const Network& network);

// Demand CSV: origin,destination,entry_period,count. Total driver counts per
// OD and entry period.
struct DemandEntry {
  std::string origin;
  std::string destination;
  int entry_period = 0;
  long count = 0;
};
std::vector<DemandEntry> load_demand_csv(const std::string& path);
std::vector<DemandEntry> parse_demand_csv(const std::string& text,
                                          const std::string& origin_label);
std::string demand_to_csv(const std::vector<DemandEntry>& entries);

// Organizations file: JSON array with id, vot_per_min, drivers, and an
// optional "background": true block.
struct OrgsFile {
  std::vector<Organization> organizations;  // background flag set from file
};
OrgsFile load_orgs(const std::string& path, const Network& network);
OrgsFile parse_orgs(const std::string& text, const Network& network,
                    const std::string& origin_label);
std::string orgs_to_json(const OrgsFile& orgs, const Network& network);

// Round-trip-exact float formatting shared by every CSV writer.
std::string format_double(double value);
double parse_double(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace orgopt::io

#endif  // ORGOPT_IO_HPP_
