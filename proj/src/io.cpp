#include "orgopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace orgopt::io {

using json = nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw ParseError("not a number: '" + text + "'");
  return v;
}

Network parse_network(const std::string& text, const std::string& origin_label) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin_label + ": " + e.what());
  }
  try {
    if (!j.contains("nodes") || !j.contains("links"))
      throw ParseError(origin_label + ": expected 'nodes' and 'links'");
    std::vector<std::string> nodes = j.at("nodes").get<std::vector<std::string>>();
    std::map<std::string, int> node_id;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) node_id[nodes[i]] = i;
    if (j.at("links").empty()) throw ParseError(origin_label + ": network has no links");
    std::vector<Link> links;
    int index = 0;
    for (const auto& lj : j.at("links")) {
      const std::string where = origin_label + ": link " + std::to_string(index);
      Link l;
      l.id = lj.at("id").get<int>();
      const std::string from = lj.at("from").get<std::string>();
      const std::string to = lj.at("to").get<std::string>();
      auto fit = node_id.find(from);
      if (fit == node_id.end()) throw ParseError(where + ": unknown node '" + from + "'");
      auto tit = node_id.find(to);
      if (tit == node_id.end()) throw ParseError(where + ": unknown node '" + to + "'");
      l.from = fit->second;
      l.to = tit->second;
      l.free_flow_time_h = lj.at("free_flow_time_h").get<double>();
      l.capacity = lj.at("capacity").get<double>();
      l.length_mi = lj.value("length_mi", 0.0);
      if (!(l.free_flow_time_h > 0.0))
        throw ParseError(where + ": free_flow_time_h must be positive");
      if (!(l.capacity > 0.0)) throw ParseError(where + ": capacity must be positive");
      if (l.length_mi < 0.0) throw ParseError(where + ": length_mi must be nonnegative");
      links.push_back(l);
      ++index;
    }
    return Network(std::move(nodes), std::move(links));
  } catch (const json::exception& e) {
    throw ParseError(origin_label + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(origin_label + ": " + e.what());
  }
}

Network load_network(const std::string& path) {
  return parse_network(read_file(path), path);
}

std::string network_to_json(const Network& network) {
  json j;
  j["nodes"] = network.node_names();
  json links = json::array();
  for (const auto& l : network.links()) {
    json lj;
    lj["id"] = l.id;
    lj["from"] = network.node_name(l.from);
    lj["to"] = network.node_name(l.to);
    lj["free_flow_time_h"] = l.free_flow_time_h;
    lj["capacity"] = l.capacity;
    lj["length_mi"] = l.length_mi;
    links.push_back(lj);
  }
  j["links"] = links;
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<DemandEntry> parse_demand_csv(const std::string& text,
                                          const std::string& origin_label) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(origin_label + ": empty demand file");
  auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"origin", "destination", "entry_period", "count"};
  if (std::vector<std::string>(header.begin(), header.end()) != expected)
    throw ParseError(origin_label + ": expected header origin,destination,entry_period,count");
  std::vector<DemandEntry> entries;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    const std::string where = origin_label + ": line " + std::to_string(line_no);
    if (cells.size() != 4) throw ParseError(where + ": expected 4 fields");
    DemandEntry e;
    e.origin = cells[0];
    e.destination = cells[1];
    try {
      e.entry_period = std::stoi(cells[2]);
      e.count = std::stol(cells[3]);
    } catch (const std::exception&) {
      throw ParseError(where + ": bad integer field");
    }
    if (e.entry_period < 0) throw ParseError(where + ": entry_period must be nonnegative");
    if (e.count <= 0) throw ParseError(where + ": count must be positive");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<DemandEntry> load_demand_csv(const std::string& path) {
  return parse_demand_csv(read_file(path), path);
}

std::string demand_to_csv(const std::vector<DemandEntry>& entries) {
  std::ostringstream os;
  os << "origin,destination,entry_period,count\n";
  for (const auto& e : entries)
    os << e.origin << ',' << e.destination << ',' << e.entry_period << ',' << e.count << '\n';
  return os.str();
}

OrgsFile parse_orgs(const std::string& text, const Network& network,
                    const std::string& origin_label) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin_label + ": " + e.what());
  }
  OrgsFile out;
  try {
    if (!j.is_array()) throw ParseError(origin_label + ": expected a JSON array");
    for (const auto& oj : j) {
      Organization org;
      org.id = oj.at("id").get<std::string>();
      org.vot_per_min = oj.value("vot_per_min", 0.0);
      org.background = oj.value("background", false);
      for (const auto& dj : oj.at("drivers")) {
        Driver d;
        d.origin = network.node_id(dj.at("origin").get<std::string>());
        d.destination = network.node_id(dj.at("destination").get<std::string>());
        d.entry_period = dj.at("entry_period").get<int>();
        d.b_factor = dj.value("b_factor", 1.0);
        org.drivers.push_back(d);
      }
      org.validate();
      out.organizations.push_back(std::move(org));
    }
  } catch (const json::exception& e) {
    throw ParseError(origin_label + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(origin_label + ": " + std::string(e.what()));
  }
  return out;
}

OrgsFile load_orgs(const std::string& path, const Network& network) {
  return parse_orgs(read_file(path), network, path);
}

std::string orgs_to_json(const OrgsFile& orgs, const Network& network) {
  json arr = json::array();
  for (const auto& org : orgs.organizations) {
    json oj;
    oj["id"] = org.id;
    oj["vot_per_min"] = org.vot_per_min;
    if (org.background) oj["background"] = true;
    json drivers = json::array();
    for (const auto& d : org.drivers) {
      json dj;
      dj["origin"] = network.node_name(d.origin);
      dj["destination"] = network.node_name(d.destination);
      dj["entry_period"] = d.entry_period;
      dj["b_factor"] = d.b_factor;
      drivers.push_back(dj);
    }
    oj["drivers"] = drivers;
    arr.push_back(oj);
  }
  return arr.dump(2) + "\n";
}

}  // namespace orgopt::io
