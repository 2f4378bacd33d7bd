#include "orgopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace orgopt::harness {

namespace fs = std::filesystem;

namespace {

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const InfeasibleError& e) {
    throw InfeasibleError("stage " + std::string(name) + ": " + e.what());
  } catch (const DivergenceError& e) {
    throw DivergenceError("stage " + std::string(name) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("stage " + std::string(name) + ": " + e.what());
  }
}

struct ActiveOrg {
  Organization org;
  std::vector<int> driver_od_period;
  Vec cap;              // minutes
  double gamma = 0.0;   // minutes
  Vec q;                // K*T
};

struct Pipeline {
  const Network* net = nullptr;
  Dims dims;
  RouteSet routes;
  DemandModel demand;
  TravelTimeTables tables;
  double f0 = 0.0;
  Vec background_counts;  // route-period counts of frozen drivers
  Vec v0;
  std::vector<ActiveOrg> active;
  admm::ProblemInstance problem;
  milp::ProjectionInput projection;
  std::vector<std::vector<int>> cols_of_od_period;
  RMatrix r_ue;
};

int od_period_of(const Dims& dims, int od, int t) { return dims.od_period(od, t); }

Pipeline build_pipeline(const ScenarioConfig& config, const ScenarioInputs& inputs) {
  Pipeline p;
  config.horizon.validate();
  const Network& net = inputs.network;
  p.net = &net;

  // OD pairs in order of first appearance: demand file, then rosters.
  std::vector<std::pair<int, int>> od_pairs;
  auto od_key = [&](int o, int d) {
    for (int k = 0; k < static_cast<int>(od_pairs.size()); ++k)
      if (od_pairs[k] == std::make_pair(o, d)) return k;
    od_pairs.emplace_back(o, d);
    return static_cast<int>(od_pairs.size()) - 1;
  };
  for (const auto& e : inputs.demand) od_key(net.node_id(e.origin), net.node_id(e.destination));
  for (const auto& org : inputs.orgs.organizations)
    for (const auto& d : org.drivers) od_key(d.origin, d.destination);

  p.routes = stage("routes", [&] { return enumerate_route_set(net, od_pairs, config.k_routes); });

  p.dims.num_links = net.num_links();
  p.dims.num_periods = config.horizon.num_periods;
  p.dims.num_routes = p.routes.num_routes();
  p.dims.num_ods = p.routes.num_ods();

  stage("demand", [&] {
    p.demand.dims = p.dims;
    p.demand.D = build_od_aggregation(p.routes, p.dims);
    p.demand.total_demand = Vec::Zero(p.dims.od_periods());
    for (const auto& e : inputs.demand) {
      if (e.entry_period >= config.horizon.analysis_periods)
        throw Error("demand entry period " + std::to_string(e.entry_period) +
                    " is outside the analysis window");
      const int od = p.routes.od_index(net.node_id(e.origin), net.node_id(e.destination));
      p.demand.total_demand[od_period_of(p.dims, od, e.entry_period)] += e.count;
    }
    return 0;
  });

  // Organization rosters against the demand totals; the remainder is frozen
  // background traffic.
  stage("organizations", [&] {
    Vec organized = Vec::Zero(p.dims.od_periods());
    Vec explicit_bg = Vec::Zero(p.dims.od_periods());
    for (const auto& org_in : inputs.orgs.organizations) {
      ActiveOrg a;
      a.org = org_in;
      if (config.vot_override) a.org.vot_per_min = *config.vot_override;
      a.org.vot_per_min *= config.vot_scale;
      a.q = Vec::Zero(p.dims.od_periods());
      for (const auto& d : a.org.drivers) {
        if (d.entry_period >= config.horizon.analysis_periods)
          throw Error("organization '" + a.org.id + "': driver entry period " +
                      std::to_string(d.entry_period) + " is outside the analysis window");
        const int od = p.routes.od_index(d.origin, d.destination);
        const int kp = od_period_of(p.dims, od, d.entry_period);
        a.driver_od_period.push_back(kp);
        a.q[kp] += 1.0;
      }
      if (org_in.background)
        explicit_bg += a.q;
      else {
        organized += a.q;
        p.active.push_back(std::move(a));
      }
    }
    const Vec remainder = p.demand.total_demand - organized - explicit_bg;
    if ((remainder.array() < -1e-9).any())
      throw Error("organization rosters exceed the demand totals for some OD-period");
    if (explicit_bg.sum() > 0 && remainder.lpNorm<Eigen::Infinity>() > 1e-9)
      throw Error("explicit background block does not match the demand remainder");
    for (const auto& a : p.active) p.demand.org_demand[a.org.id] = a.q;
    p.demand.org_demand["__background__"] = explicit_bg.sum() > 0 ? explicit_bg : remainder;
    p.demand.validate();
    return 0;
  });

  UeBaseline ue = stage("ue_baseline", [&] {
    return compute_ue_baseline(net, p.demand, p.routes, config.horizon);
  });

  stage("travel_time_tables", [&] {
    p.tables = route_times_after_choice(ue, p.demand, p.routes, net);
    p.f0 = total_travel_time(p.tables.volumes, net, p.dims);
    return 0;
  });

  stage("problem", [&] {
    p.cols_of_od_period.assign(p.dims.od_periods(), {});
    for (int t = 0; t < p.dims.num_periods; ++t)
      for (int k = 0; k < p.dims.num_ods; ++k)
        for (int r : p.routes.routes_of_od[k])
          p.cols_of_od_period[p.dims.od_period(k, t)].push_back(p.dims.route_period(r, t));

    p.background_counts = fastest_route_loading(
        p.tables.delta, p.demand.org_demand.at("__background__"), p.routes, p.dims);
    p.v0 = expected_volumes(ue.r_ue, p.background_counts);

    admm::ProblemInstance& pb = p.problem;
    pb.dims = p.dims;
    pb.R = ue.r_ue.entries;
    pb.D = p.demand.D;
    pb.delta = p.tables.delta;
    pb.eta = p.tables.eta;
    pb.v0 = p.v0;
    pb.Omega = config.budget;
    pb.theta0_lt = Vec(p.dims.link_periods());
    pb.cap_lt = Vec(p.dims.link_periods());
    for (int t = 0; t < p.dims.num_periods; ++t)
      for (int l = 0; l < p.dims.num_links; ++l) {
        pb.theta0_lt[p.dims.link_period(l, t)] = net.theta0(l, t);
        pb.cap_lt[p.dims.link_period(l, t)] = net.capacity(l, t);
      }
    for (auto& a : p.active) {
      auto mta = min_time_assignment(a.driver_od_period, p.tables.eta);
      a.gamma = mta.gamma;
      a.cap = Vec(a.org.drivers.size());
      for (size_t j = 0; j < a.org.drivers.size(); ++j)
        a.cap[static_cast<Eigen::Index>(j)] =
            a.org.drivers[j].b_factor * mta.eta_of_driver[static_cast<Eigen::Index>(j)];
      admm::OrgBlock block;
      block.id = a.org.id;
      block.alpha = a.org.vot_per_min;
      block.gamma = a.gamma;
      block.q = a.q;
      block.cap = a.cap;
      block.driver_od_period = a.driver_od_period;
      block.admissible_cols.resize(a.driver_od_period.size());
      for (size_t j = 0; j < a.driver_od_period.size(); ++j)
        block.admissible_cols[j] = p.cols_of_od_period[a.driver_od_period[j]];
      pb.orgs.push_back(std::move(block));

      milp::ProjectionOrg porg;
      porg.id = a.org.id;
      porg.alpha = a.org.vot_per_min;
      porg.gamma = a.gamma;
      porg.driver_od_period = a.driver_od_period;
      porg.cap = a.cap;
      p.projection.orgs.push_back(std::move(porg));
    }
    p.projection.dims = p.dims;
    p.projection.delta = p.tables.delta;
    p.projection.Omega = config.budget;
    p.projection.cols_of_od_period = p.cols_of_od_period;
    return 0;
  });

  p.r_ue = std::move(ue.r_ue);
  p.demand.dims = p.dims;
  return p;
}

int fastest_route_of(const Pipeline& p, int od, int t) {
  int best = -1;
  double best_time = std::numeric_limits<double>::infinity();
  for (int r : p.routes.routes_of_od[od]) {
    const double dt = p.tables.delta[p.dims.route_period(r, t)];
    if (dt < best_time) {
      best_time = dt;
      best = r;
    }
  }
  return best;
}

void fill_route_times(const Pipeline& p, ScenarioReport* report) {
  for (int t = 0; t < p.dims.num_periods; ++t)
    for (int k = 0; k < p.dims.num_ods; ++k)
      for (int r : p.routes.routes_of_od[k]) {
        RouteTimeRow row;
        row.od = k;
        row.route = r;
        row.period = t;
        row.delta_minutes = p.tables.delta[p.dims.route_period(r, t)];
        row.eta_minutes = p.tables.eta[p.dims.od_period(k, t)];
        report->route_times.push_back(row);
      }
}

// Metrics and per-driver rows for a published plan. assigned_col[i][j] is a
// route-period column; the baseline plan passes an empty vector and puts
// everyone on the fastest route.
void fill_plan(const Pipeline& p, const std::vector<std::vector<int>>& assigned_col,
               const Vec& c, ScenarioReport* report) {
  const int n = static_cast<int>(p.active.size());
  Vec counts_total = p.background_counts;
  report->deviated_count = 0;
  report->org_costs.clear();
  report->assignments.clear();
  for (int i = 0; i < n; ++i) {
    const ActiveOrg& a = p.active[i];
    double assigned_minutes = 0.0;
    for (size_t j = 0; j < a.org.drivers.size(); ++j) {
      const int kp = a.driver_od_period[j];
      const int od = kp % p.dims.num_ods;
      const int t = kp / p.dims.num_ods;
      const int fastest = fastest_route_of(p, od, t);
      int col;
      if (assigned_col.empty())
        col = p.dims.route_period(fastest, t);
      else
        col = assigned_col[i][j];
      counts_total[col] += 1.0;
      const double dt = p.tables.delta[col];
      assigned_minutes += dt;
      DriverRow row;
      row.org = a.org.id;
      row.driver = static_cast<int>(j);
      row.origin = p.net->node_name(p.routes.od_pairs[od].first);
      row.destination = p.net->node_name(p.routes.od_pairs[od].second);
      row.entry_period = t;
      row.assigned_route = col % p.dims.num_routes;
      row.fastest_route = fastest;
      row.eta_minutes = p.tables.eta[kp];
      row.assigned_minutes = dt;
      row.cap_minutes = a.cap[static_cast<Eigen::Index>(j)];
      row.deviated = dt > row.eta_minutes;
      if (row.deviated) ++report->deviated_count;
      report->assignments.push_back(std::move(row));
    }
    OrgCostRow oc;
    oc.id = a.org.id;
    oc.cost = c.size() > 0 ? c[i] : 0.0;
    oc.assigned_minutes = assigned_minutes;
    oc.gamma_minutes = a.gamma;
    report->org_costs.push_back(oc);
  }
  report->total_cost = c.size() > 0 ? c.sum() : 0.0;
  const Vec volumes = expected_volumes(p.r_ue, counts_total);
  report->incentivized_vehh = p.problem.travel_time(volumes);
  report->cost_per_deviated =
      report->deviated_count > 0
          ? std::optional<double>(report->total_cost / report->deviated_count)
          : std::nullopt;
}

}  // namespace

ScenarioInputs load_inputs(const ScenarioConfig& config) {
  Network net = io::load_network(config.network_path);
  auto demand = io::load_demand_csv(config.demand_path);
  auto orgs = io::load_orgs(config.orgs_path, net);
  return ScenarioInputs{std::move(net), std::move(demand), std::move(orgs)};
}

ScenarioReport run_scenario(const ScenarioConfig& config) {
  return run_scenario(config, load_inputs(config));
}

ScenarioReport run_scenario(const ScenarioConfig& config, const ScenarioInputs& inputs) {
  ScenarioReport report;
  report.label = "solve";
  report.budget = config.budget;
  report.seed = config.seed;

  Pipeline p = build_pipeline(config, inputs);
  report.n_orgs = static_cast<int>(p.active.size());
  report.vot_per_min = p.active.empty() ? 0.0 : p.active.front().org.vot_per_min;
  report.baseline_vehh = p.f0;
  fill_route_times(p, &report);

  if (p.active.empty()) {
    fill_plan(p, {}, Vec(), &report);
    report.decrease_pct = 0.0;
    return report;
  }

  admm::RelaxedSolution relaxed = stage("admm", [&] {
    admm::AdmmParams params;
    params.rho = config.solver.rho;
    params.lambda_tilde = 0.0;
    params.max_iters = config.solver.iters;
    params.tol = config.solver.tol;
    admm::RelaxedSolution sol = admm::solve_relaxed(p.problem, params);
    if (config.solver.lambda_tilde > 0.0 && config.solver.anneal_iters > 0) {
      admm::AdmmParams anneal = params;
      anneal.lambda_tilde = config.solver.lambda_tilde;
      anneal.max_iters = config.solver.anneal_iters;
      admm::RelaxedSolution sharp = admm::solve_relaxed(p.problem, anneal, &sol.state);
      sharp.history.insert(sharp.history.begin(), sol.history.begin(), sol.history.end());
      // Keep the sharpened aggregates; the convex phase already fixed volumes.
      sol = std::move(sharp);
    }
    return sol;
  });
  report.admm_iterations = static_cast<int>(relaxed.history.size());
  report.admm_residual = relaxed.best_residual;
  report.admm_converged = relaxed.converged;

  milp::ProjectionResult proj = stage("projection", [&] {
    milp::BnbParams params;
    params.time_limit_s = config.solver.milp_time_limit_s;
    params.max_nodes = config.solver.milp_max_nodes;
    return milp::project_to_binary(relaxed.u, p.projection, params);
  });
  report.milp_gap = proj.gap;
  report.milp_nodes = proj.nodes;

  stage("acceptance_guard", [&] {
    fill_plan(p, proj.assigned_col, proj.c, &report);
    if (report.incentivized_vehh > p.f0) {
      report.fallback_to_baseline = true;
      fill_plan(p, {}, Vec::Zero(static_cast<Eigen::Index>(p.active.size())), &report);
    }
    report.decrease_pct =
        p.f0 > 0.0 ? 100.0 * (p.f0 - report.incentivized_vehh) / p.f0 : 0.0;
    return 0;
  });
  return report;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "budgets") return SweepAxis::kBudgets;
  if (name == "n_orgs") return SweepAxis::kNumOrgs;
  if (name == "vot") return SweepAxis::kVot;
  if (name == "participation") return SweepAxis::kParticipation;
  throw Error("unknown sweep axis '" + name + "'");
}

namespace {

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBudgets: return "budgets";
    case SweepAxis::kNumOrgs: return "n_orgs";
    case SweepAxis::kVot: return "vot";
    case SweepAxis::kParticipation: return "participation";
  }
  return "?";
}

// Fisher-Yates with an explicit generator so the order is identical across
// standard libraries.
template <typename T>
void det_shuffle(std::vector<T>& xs, std::mt19937_64& gen) {
  for (size_t i = xs.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(gen() % i);
    std::swap(xs[i - 1], xs[j]);
  }
}

struct DriverUnit {
  int origin, destination, entry_period;
  double b_factor;
};

io::OrgsFile partition_into_orgs(const std::vector<DriverUnit>& units, int n_orgs,
                                 double vot, std::mt19937_64& gen) {
  io::OrgsFile out;
  out.organizations.resize(n_orgs);
  for (int i = 0; i < n_orgs; ++i) {
    out.organizations[i].id = "org_" + std::to_string(i);
    out.organizations[i].vot_per_min = vot;
  }
  for (const auto& u : units) {
    const int org = static_cast<int>(gen() % static_cast<unsigned long>(n_orgs));
    Driver d;
    d.origin = u.origin;
    d.destination = u.destination;
    d.entry_period = u.entry_period;
    d.b_factor = u.b_factor;
    out.organizations[org].drivers.push_back(d);
  }
  // Organizations that received no drivers cannot be represented.
  io::OrgsFile filtered;
  for (auto& org : out.organizations)
    if (!org.drivers.empty()) filtered.organizations.push_back(std::move(org));
  return filtered;
}

}  // namespace

std::vector<ScenarioReport> sweep(const ScenarioConfig& config, SweepAxis axis,
                                  const std::vector<double>& values) {
  if (values.empty()) throw Error("sweep: no values given");
  const ScenarioInputs base = load_inputs(config);
  std::vector<double> ordered = values;
  std::sort(ordered.begin(), ordered.end());

  std::vector<ScenarioReport> reports;
  reports.reserve(ordered.size());
  int prev_idx = -1;
  const auto prev_accepted = [&]() -> const ScenarioReport* {
    return prev_idx >= 0 ? &reports[prev_idx] : nullptr;
  };

  for (size_t idx = 0; idx < ordered.size(); ++idx) {
    const double value = ordered[idx];
    ScenarioConfig cell = config;
    ScenarioInputs cell_inputs = base;
    std::string label = axis_name(axis) + "_" + std::to_string(idx);
    try {
      switch (axis) {
        case SweepAxis::kBudgets:
          cell.budget = value;
          break;
        case SweepAxis::kVot:
          cell.vot_override = value;
          break;
        case SweepAxis::kNumOrgs: {
          std::vector<DriverUnit> pool;
          double vot_sum = 0.0;
          long vot_count = 0;
          for (const auto& org : base.orgs.organizations) {
            if (org.background) continue;
            for (const auto& d : org.drivers) {
              pool.push_back({d.origin, d.destination, d.entry_period, d.b_factor});
              vot_sum += org.vot_per_min;
              ++vot_count;
            }
          }
          if (pool.empty()) throw Error("n_orgs sweep: no incentivized drivers");
          const double vot = config.vot_override
                                 ? *config.vot_override
                                 : (vot_count > 0 ? vot_sum / vot_count : 0.0);
          std::mt19937_64 gen(config.seed * 1000003ULL + static_cast<unsigned long>(value));
          cell_inputs.orgs =
              partition_into_orgs(pool, std::max(1, static_cast<int>(value)), vot, gen);
          break;
        }
        case SweepAxis::kParticipation: {
          double b = 1.5;
          if (!base.orgs.organizations.empty() &&
              !base.orgs.organizations.front().drivers.empty())
            b = base.orgs.organizations.front().drivers.front().b_factor;
          std::vector<DriverUnit> pool;
          for (const auto& e : base.demand) {
            const int o = base.network.node_id(e.origin);
            const int d = base.network.node_id(e.destination);
            for (long k = 0; k < e.count; ++k) pool.push_back({o, d, e.entry_period, b});
          }
          std::mt19937_64 order_gen(config.seed);
          det_shuffle(pool, order_gen);
          const size_t take = static_cast<size_t>(
              std::ceil(value * static_cast<double>(pool.size())));
          std::vector<DriverUnit> selected(pool.begin(),
                                           pool.begin() + std::min(take, pool.size()));
          int n_orgs = 0;
          for (const auto& org : base.orgs.organizations)
            if (!org.background) ++n_orgs;
          if (n_orgs == 0) n_orgs = 10;
          double vot = config.vot_override ? *config.vot_override : 2.63;
          if (!base.orgs.organizations.empty())
            vot = config.vot_override ? *config.vot_override
                                      : base.orgs.organizations.front().vot_per_min;
          std::mt19937_64 org_gen(config.seed + 1);
          cell_inputs.orgs = partition_into_orgs(selected, n_orgs, vot, org_gen);
          break;
        }
      }

      ScenarioReport fresh = run_scenario(cell, cell_inputs);
      fresh.label = label;
      fresh.axis = axis_name(axis);
      fresh.axis_value = value;
      if (axis == SweepAxis::kParticipation) fresh.participation = value;

      if (axis == SweepAxis::kBudgets && prev_accepted() != nullptr) {
        const bool improves =
            fresh.incentivized_vehh <= prev_accepted()->incentivized_vehh &&
            fresh.deviated_count >= prev_accepted()->deviated_count;
        if (!improves) {
          // The previous plan is still budget-feasible here; keep it so the
          // reported metrics stay weakly monotone in the budget.
          ScenarioReport carried = *prev_accepted();
          carried.label = label;
          carried.axis_value = value;
          carried.budget = value;
          carried.carried_forward = true;
          fresh = std::move(carried);
        }
      }
      reports.push_back(std::move(fresh));
      if (axis == SweepAxis::kBudgets) prev_idx = static_cast<int>(reports.size()) - 1;
    } catch (const Error& e) {
      if (axis == SweepAxis::kBudgets && prev_accepted() != nullptr) {
        ScenarioReport carried = *prev_accepted();
        carried.label = label;
        carried.axis_value = value;
        carried.budget = value;
        carried.carried_forward = true;
        reports.push_back(std::move(carried));
        prev_idx = static_cast<int>(reports.size()) - 1;
      } else {
        ScenarioReport failed;
        failed.label = label;
        failed.axis = axis_name(axis);
        failed.axis_value = value;
        failed.failed = true;
        failed.error = e.what();
        reports.push_back(std::move(failed));
      }
    }
  }
  return reports;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string report_csv(const std::vector<ScenarioReport>& reports) {
  std::ostringstream os;
  os << "label,axis,axis_value,budget,vot_per_min,n_orgs,participation,seed,"
        "baseline_vehh,incentivized_vehh,decrease_pct,total_cost,deviated_count,"
        "cost_per_deviated,admm_iterations,admm_residual,admm_converged,milp_gap,"
        "milp_nodes,fallback,carried_forward,failed,error\n";
  for (const auto& r : reports) {
    os << csv_escape(r.label) << ',' << r.axis << ',' << io::format_double(r.axis_value)
       << ',' << io::format_double(r.budget) << ',' << io::format_double(r.vot_per_min)
       << ',' << r.n_orgs << ',' << io::format_double(r.participation) << ',' << r.seed
       << ',' << io::format_double(r.baseline_vehh) << ','
       << io::format_double(r.incentivized_vehh) << ',' << io::format_double(r.decrease_pct)
       << ',' << io::format_double(r.total_cost) << ',' << r.deviated_count << ','
       << (r.cost_per_deviated ? io::format_double(*r.cost_per_deviated) : "null") << ','
       << r.admm_iterations << ',' << io::format_double(r.admm_residual) << ','
       << (r.admm_converged ? 1 : 0) << ',' << io::format_double(r.milp_gap) << ','
       << r.milp_nodes << ',' << (r.fallback_to_baseline ? 1 : 0) << ','
       << (r.carried_forward ? 1 : 0) << ',' << (r.failed ? 1 : 0) << ','
       << csv_escape(r.error) << '\n';
  }
  return os.str();
}

std::vector<ScenarioReport> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("report.csv: empty");
  std::vector<ScenarioReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // Fields never contain commas except the quoted label/error.
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"')
          quoted = false;
        else
          cur += c;
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    cells.push_back(cur);
    if (cells.size() != 23) throw ParseError("report.csv: wrong field count");
    ScenarioReport r;
    int f = 0;
    r.label = cells[f++];
    r.axis = cells[f++];
    r.axis_value = io::parse_double(cells[f++]);
    r.budget = io::parse_double(cells[f++]);
    r.vot_per_min = io::parse_double(cells[f++]);
    r.n_orgs = std::stoi(cells[f++]);
    r.participation = io::parse_double(cells[f++]);
    r.seed = std::stoul(cells[f++]);
    r.baseline_vehh = io::parse_double(cells[f++]);
    r.incentivized_vehh = io::parse_double(cells[f++]);
    r.decrease_pct = io::parse_double(cells[f++]);
    r.total_cost = io::parse_double(cells[f++]);
    r.deviated_count = std::stol(cells[f++]);
    if (cells[f] == "null")
      r.cost_per_deviated = std::nullopt, ++f;
    else
      r.cost_per_deviated = io::parse_double(cells[f++]);
    r.admm_iterations = std::stoi(cells[f++]);
    r.admm_residual = io::parse_double(cells[f++]);
    r.admm_converged = cells[f++] == "1";
    r.milp_gap = io::parse_double(cells[f++]);
    r.milp_nodes = std::stol(cells[f++]);
    r.fallback_to_baseline = cells[f++] == "1";
    r.carried_forward = cells[f++] == "1";
    r.failed = cells[f++] == "1";
    r.error = cells[f++];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> emit_report(const std::vector<ScenarioReport>& reports,
                                     const std::string& outdir) {
  std::vector<std::string> written;
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw Error("cannot create output directory '" + outdir + "': " + ec.message());

  auto emit = [&](const std::string& rel, const std::string& content) {
    const std::string path = (fs::path(outdir) / rel).string();
    fs::create_directories(fs::path(path).parent_path(), ec);
    io::write_file(path, content);
    written.push_back(path);
  };

  emit("report.csv", report_csv(reports));

  for (const auto& r : reports) {
    const std::string dir = "scenarios/" + r.label + "/";
    std::ostringstream oc;
    oc << "org,cost,assigned_minutes,gamma_minutes\n";
    for (const auto& row : r.org_costs)
      oc << csv_escape(row.id) << ',' << io::format_double(row.cost) << ','
         << io::format_double(row.assigned_minutes) << ','
         << io::format_double(row.gamma_minutes) << '\n';
    emit(dir + "org_costs.csv", oc.str());

    std::ostringstream oa;
    oa << "org,driver,origin,destination,entry_period,assigned_route,fastest_route,"
          "deviated,assigned_minutes,eta_minutes,cap_minutes\n";
    for (const auto& row : r.assignments)
      oa << csv_escape(row.org) << ',' << row.driver << ',' << row.origin << ','
         << row.destination << ',' << row.entry_period << ',' << row.assigned_route << ','
         << row.fastest_route << ',' << (row.deviated ? 1 : 0) << ','
         << io::format_double(row.assigned_minutes) << ','
         << io::format_double(row.eta_minutes) << ',' << io::format_double(row.cap_minutes)
         << '\n';
    emit(dir + "assignments.csv", oa.str());

    std::ostringstream ot;
    ot << "od,route,period,delta_minutes,eta_minutes\n";
    for (const auto& row : r.route_times)
      ot << row.od << ',' << row.route << ',' << row.period << ','
         << io::format_double(row.delta_minutes) << ',' << io::format_double(row.eta_minutes)
         << '\n';
    emit(dir + "route_times.csv", ot.str());
  }

  std::ostringstream bd, bc, od;
  bd << "budget,decrease_pct\n";
  bc << "budget,total_cost\n";
  od << "n_orgs,total_cost,decrease_pct\n";
  for (const auto& r : reports) {
    if (r.failed) continue;
    if (r.axis == "budgets" || r.axis.empty()) {
      bd << io::format_double(r.budget) << ',' << io::format_double(r.decrease_pct) << '\n';
      bc << io::format_double(r.budget) << ',' << io::format_double(r.total_cost) << '\n';
    }
    if (r.axis == "n_orgs")
      od << r.n_orgs << ',' << io::format_double(r.total_cost) << ','
         << io::format_double(r.decrease_pct) << '\n';
  }
  emit("plotdata/budget_vs_decrease.csv", bd.str());
  emit("plotdata/budget_vs_cost.csv", bc.str());
  emit("plotdata/cost_vs_decrease_by_orgs.csv", od.str());
  return written;
}

}  // namespace orgopt::harness
