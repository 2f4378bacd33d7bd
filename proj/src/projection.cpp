#include "orgopt/projection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "orgopt/incentives.hpp"

namespace orgopt::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-7;

struct SplitBounds {
  double pos_lo, pos_hi, neg_lo, neg_hi;
};

// Canonical pos/neg encoding of offset + pos - neg in [lo, hi]; every x in
// the interval keeps a representative with pos * neg = 0, so LP optima are
// unchanged while branching stays a pure bound change.
SplitBounds split_bounds(double lo, double hi, double offset) {
  if (lo > offset) return {lo - offset, hi - offset, 0.0, 0.0};
  if (hi < offset) return {0.0, 0.0, offset - hi, offset - lo};
  return {0.0, hi - offset, 0.0, offset - lo};
}

void apply_entity_bounds(lp::Model& model, const Entity& e, double lo, double hi) {
  const SplitBounds sb = split_bounds(lo, hi, e.offset);
  model.lo[e.pos] = sb.pos_lo;
  model.up[e.pos] = sb.pos_hi;
  model.lo[e.neg] = sb.neg_lo;
  model.up[e.neg] = sb.neg_hi;
}

struct Node {
  double bound = -kInf;
  long id = 0;
  std::vector<std::pair<int, std::pair<double, double>>> overrides;  // entity -> [lo,hi]
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

double exact_objective(const MilpInstance& inst, const Vec& entity_values, const Vec& lp_x) {
  double obj = 0.0;
  std::vector<bool> entity_var(inst.lp.num_vars(), false);
  for (size_t e = 0; e < inst.entities.size(); ++e) {
    const auto& ent = inst.entities[e];
    entity_var[ent.pos] = true;
    entity_var[ent.neg] = true;
    const double d = entity_values[static_cast<Eigen::Index>(e)] - ent.offset;
    obj += inst.lp.obj[ent.pos] * std::max(d, 0.0) + inst.lp.obj[ent.neg] * std::max(-d, 0.0);
  }
  for (int j = 0; j < inst.lp.num_vars(); ++j)
    if (!entity_var[j]) obj += inst.lp.obj[j] * lp_x[j];
  return obj;
}

}  // namespace

BnbSolution branch_and_bound(const MilpInstance& instance, const BnbParams& params,
                             const TieBreak& tie_break, const std::optional<Incumbent>& seed) {
  lp::Model model = instance.lp;
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  BnbSolution best;
  if (seed) {
    best.entity_values = seed->entity_values;
    best.objective = seed->objective;
    best.status = BnbStatus::kFeasible;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{});
  long next_id = 1;
  bool limit_hit = false;
  bool any_feasible_node = false;
  double open_bound = -kInf;

  while (!open.empty()) {
    if (best.nodes >= params.max_nodes || elapsed() > params.time_limit_s) {
      limit_hit = true;
      open_bound = open.top().bound;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= best.objective - params.gap_tol) continue;
    ++best.nodes;

    // Entity bounds: base, then the node's restrictions.
    for (const auto& e : instance.entities) apply_entity_bounds(model, e, e.lo, e.hi);
    for (const auto& [ei, lh] : node.overrides)
      apply_entity_bounds(model, instance.entities[ei], lh.first, lh.second);

    const lp::Solution sol = lp::solve(model);
    if (sol.status == lp::Status::kInfeasible) continue;
    if (sol.status == lp::Status::kUnbounded)
      throw Error("branch_and_bound: LP relaxation is unbounded");
    if (sol.status == lp::Status::kIterLimit)
      throw Error("branch_and_bound: LP iteration limit reached");
    any_feasible_node = true;
    if (sol.objective >= best.objective - params.gap_tol) continue;

    Vec xe(static_cast<Eigen::Index>(instance.entities.size()));
    int branch_entity = -1;
    double branch_score = -1.0;
    for (size_t e = 0; e < instance.entities.size(); ++e) {
      const auto& ent = instance.entities[e];
      const double v = ent.offset + sol.x[ent.pos] - sol.x[ent.neg];
      xe[static_cast<Eigen::Index>(e)] = v;
      const double frac = v - std::floor(v);
      const double dist = std::min(frac, 1.0 - frac);
      if (dist > kIntTol && dist > branch_score + 1e-12) {
        branch_score = dist;
        branch_entity = static_cast<int>(e);
      }
    }

    if (branch_entity < 0) {
      Vec rounded = xe;
      for (int e = 0; e < rounded.size(); ++e) rounded[e] = std::round(rounded[e]);
      const double obj = exact_objective(instance, rounded, sol.x);
      bool take = obj < best.objective - 1e-12;
      if (!take && obj <= best.objective + 1e-12 && tie_break && best.entity_values.size() > 0)
        take = tie_break(rounded, best.entity_values);
      if (take) {
        best.entity_values = rounded;
        best.lp_x = sol.x;
        best.objective = obj;
      }
      continue;
    }

    const double v = xe[branch_entity];
    const auto& ent = instance.entities[branch_entity];
    double lo = ent.lo, hi = ent.hi;
    for (const auto& [ei, lh] : node.overrides)
      if (ei == branch_entity) {
        lo = lh.first;
        hi = lh.second;
      }
    const double f = std::floor(v);
    Node down;
    down.bound = sol.objective;
    down.id = next_id++;
    down.overrides = node.overrides;
    down.overrides.emplace_back(branch_entity, std::make_pair(lo, f));
    Node up = down;
    up.id = next_id++;
    up.overrides.back().second = std::make_pair(f + 1.0, hi);
    if (f >= lo) open.push(std::move(down));
    if (f + 1.0 <= hi) open.push(std::move(up));
  }

  if (limit_hit) {
    best.bound = open_bound;
    best.gap = best.objective - open_bound;
    best.status = best.entity_values.size() > 0 ? BnbStatus::kFeasible : BnbStatus::kNoIncumbent;
    return best;
  }
  if (best.entity_values.size() == 0) {
    best.status = BnbStatus::kInfeasible;
    (void)any_feasible_node;
    return best;
  }
  best.bound = best.objective;
  best.gap = 0.0;
  best.status = BnbStatus::kOptimal;
  return best;
}

namespace {

struct Cell {
  int org = 0;
  int od_period = 0;
  int q = 0;
  std::vector<int> driver_ids;        // sorted by cap desc, then index asc
  std::vector<double> caps;           // aligned with driver_ids
  std::vector<int> route_cols;        // ascending column index
  std::vector<int> entity_ids;        // aligned with route_cols, -1 before build
};

std::vector<Cell> build_cells(const ProjectionInput& in) {
  std::vector<Cell> cells;
  for (int i = 0; i < static_cast<int>(in.orgs.size()); ++i) {
    const auto& org = in.orgs[i];
    std::map<int, Cell> by_kp;
    for (int j = 0; j < static_cast<int>(org.driver_od_period.size()); ++j) {
      const int kp = org.driver_od_period[j];
      auto& cell = by_kp[kp];
      cell.org = i;
      cell.od_period = kp;
      cell.q += 1;
      cell.driver_ids.push_back(j);
    }
    for (auto& [kp, cell] : by_kp) {
      if (kp < 0 || kp >= static_cast<int>(in.cols_of_od_period.size()))
        throw Error("projection: driver references an unknown OD-period");
      cell.route_cols = in.cols_of_od_period[kp];
      if (cell.route_cols.empty())
        throw InfeasibleError("organization '" + org.id + "': OD-period " +
                              std::to_string(kp) + " has drivers but no routes");
      std::sort(cell.driver_ids.begin(), cell.driver_ids.end(), [&](int a, int b) {
        if (org.cap[a] != org.cap[b]) return org.cap[a] > org.cap[b];
        return a < b;
      });
      for (int j : cell.driver_ids) cell.caps.push_back(org.cap[j]);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

int count_caps_at_least(const Cell& cell, double v) {
  int c = 0;
  for (double cap : cell.caps)
    if (cap >= v) ++c;
  return c;
}

void check_driver_feasibility(const ProjectionInput& in, const std::vector<Cell>& cells) {
  for (const auto& cell : cells) {
    const auto& org = in.orgs[cell.org];
    double fastest = kInf;
    for (int col : cell.route_cols) fastest = std::min(fastest, in.delta[col]);
    for (size_t d = 0; d < cell.driver_ids.size(); ++d)
      if (cell.caps[d] < fastest)
        throw InfeasibleError(
            "projection infeasible: organization '" + org.id + "' driver " +
            std::to_string(cell.driver_ids[d]) + " (od-period " +
            std::to_string(cell.od_period) + ") has fairness bound " +
            std::to_string(cell.caps[d]) + " min below the fastest route (" +
            std::to_string(fastest) + " min)");
  }
}

// Marginal-cost greedy for min sum |x_r - u_r| over one cell's count polytope
// (total q, Hall staircase caps). Exact: separable convex over a polymatroid
// base.
std::vector<int> cell_greedy(const Cell& cell, const ProjectionInput& in, const Vec& u) {
  const int nr = static_cast<int>(cell.route_cols.size());
  std::vector<int> x(nr, 0);
  std::vector<double> thresholds;
  for (int col : cell.route_cols) thresholds.push_back(in.delta[col]);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  auto placement_ok = [&](int r) {
    const double dr = in.delta[cell.route_cols[r]];
    for (double v : thresholds) {
      if (v > dr) continue;  // route not in this suffix set
      int sum = 1;           // the unit being placed
      for (int s = 0; s < nr; ++s)
        if (in.delta[cell.route_cols[s]] >= v) sum += x[s];
      if (sum > count_caps_at_least(cell, v)) return false;
    }
    return true;
  };
  for (int unit = 0; unit < cell.q; ++unit) {
    int pick = -1;
    double best = kInf;
    for (int r = 0; r < nr; ++r) {
      if (!placement_ok(r)) continue;
      const double ur = u[cell.route_cols[r]];
      const double marginal = std::abs(x[r] + 1 - ur) - std::abs(x[r] - ur);
      if (marginal < best - 1e-12) {
        best = marginal;
        pick = r;
      }
    }
    if (pick < 0) throw Error("projection: cell greedy ran out of placements");
    x[pick] += 1;
  }
  return x;
}

double org_time(const ProjectionInput& in, const std::vector<Cell>& cells,
                const std::vector<std::vector<int>>& counts, int org) {
  double t = 0.0;
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    if (cells[ci].org != org) continue;
    for (size_t r = 0; r < cells[ci].route_cols.size(); ++r)
      t += in.delta[cells[ci].route_cols[r]] * counts[ci][r];
  }
  return t;
}

}  // namespace

MilpInstance build_projection_milp(const std::vector<Vec>& u_star,
                                   const ProjectionInput& in) {
  MilpInstance inst;
  std::vector<Cell> cells = build_cells(in);
  check_driver_feasibility(in, cells);

  const int n = static_cast<int>(in.orgs.size());
  // One entity per (cell, route); pos/neg split around the relaxed value.
  std::vector<std::vector<std::pair<int, double>>> org_terms(n);  // entity -> delta coef
  for (auto& cell : cells) {
    for (int col : cell.route_cols) {
      Entity e;
      e.offset = u_star[cell.org][col];
      if (!std::isfinite(e.offset)) throw Error("projection: relaxed solution is not finite");
      e.lo = 0.0;
      e.hi = std::min<double>(cell.q, count_caps_at_least(cell, in.delta[col]));
      const SplitBounds sb = split_bounds(e.lo, e.hi, e.offset);
      e.pos = inst.lp.add_var(sb.pos_lo, sb.pos_hi, 1.0);
      e.neg = inst.lp.add_var(sb.neg_lo, sb.neg_hi, 1.0);
      cell.entity_ids.push_back(static_cast<int>(inst.entities.size()));
      org_terms[cell.org].emplace_back(static_cast<int>(inst.entities.size()), in.delta[col]);
      inst.entities.push_back(e);
    }
    // Total drivers of the cell.
    std::vector<std::pair<int, double>> row;
    double offset_sum = 0.0;
    for (int eid : cell.entity_ids) {
      row.emplace_back(inst.entities[eid].pos, 1.0);
      row.emplace_back(inst.entities[eid].neg, -1.0);
      offset_sum += inst.entities[eid].offset;
    }
    inst.lp.add_row(std::move(row), '=', cell.q - offset_sum);
    // Hall rows: drivers parked on slow routes need caps at that level.
    std::set<double> levels;
    for (int col : cell.route_cols) levels.insert(in.delta[col]);
    for (double v : levels) {
      const int cnt = count_caps_at_least(cell, v);
      if (cnt >= cell.q) continue;
      std::vector<std::pair<int, double>> hall;
      double shift = 0.0;
      for (size_t r = 0; r < cell.route_cols.size(); ++r) {
        if (in.delta[cell.route_cols[r]] < v) continue;
        const Entity& e = inst.entities[cell.entity_ids[r]];
        hall.emplace_back(e.pos, 1.0);
        hall.emplace_back(e.neg, -1.0);
        shift += e.offset;
      }
      inst.lp.add_row(std::move(hall), '<', cnt - shift);
    }
  }

  // Incentive pricing rows and the budget row.
  std::vector<std::pair<int, double>> budget;
  for (int i = 0; i < n; ++i) {
    const int c_var = inst.lp.add_var(0.0, kInf, 0.0);
    budget.emplace_back(c_var, 1.0);
    const double alpha = in.orgs[i].alpha;
    std::vector<std::pair<int, double>> row;
    double shift = 0.0;
    for (const auto& [eid, d] : org_terms[i]) {
      const Entity& e = inst.entities[eid];
      row.emplace_back(e.pos, alpha * d);
      row.emplace_back(e.neg, -alpha * d);
      shift += alpha * d * e.offset;
    }
    row.emplace_back(c_var, -1.0);
    inst.lp.add_row(std::move(row), '<', alpha * in.orgs[i].gamma - shift);
  }
  inst.lp.add_row(std::move(budget), '<', in.Omega);
  return inst;
}

ProjectionResult project_to_binary(const std::vector<Vec>& u_star,
                                   const ProjectionInput& in, const BnbParams& params) {
  const int n = static_cast<int>(in.orgs.size());
  if (static_cast<int>(u_star.size()) != n)
    throw Error("projection: one relaxed vector per organization expected");
  for (const auto& u : u_star)
    if (!u.allFinite()) throw Error("projection: relaxed solution is not finite");
  if (in.Omega < 0.0) throw InfeasibleError("projection: negative budget");

  std::vector<Cell> cells = build_cells(in);
  check_driver_feasibility(in, cells);

  // Budget-free per-cell optimum. Its value is a valid global lower bound.
  std::vector<std::vector<int>> counts(cells.size());
  for (size_t ci = 0; ci < cells.size(); ++ci)
    counts[ci] = cell_greedy(cells[ci], in, u_star[cells[ci].org]);

  auto total_cost = [&] {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      sum += incentive_value(in.orgs[i].alpha, org_time(in, cells, counts, i),
                             in.orgs[i].gamma);
    return sum;
  };

  ProjectionResult result;
  bool exact_at_root = total_cost() <= in.Omega;
  if (!exact_at_root) {
    // Repair: shift single drivers toward faster routes until within budget,
    // cheapest l1 damage first. Always terminates at the all-fastest plan.
    while (total_cost() > in.Omega) {
      double best_dl1 = kInf;
      double best_gain = -1.0;
      int best_cell = -1, best_a = -1, best_b = -1;
      for (size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        const auto& org = in.orgs[cell.org];
        if (incentive_value(org.alpha, org_time(in, cells, counts, cell.org), org.gamma) <=
            0.0)
          continue;
        for (size_t a = 0; a < cell.route_cols.size(); ++a) {
          if (counts[ci][a] == 0) continue;
          for (size_t b = 0; b < cell.route_cols.size(); ++b) {
            const double da = in.delta[cell.route_cols[a]];
            const double db = in.delta[cell.route_cols[b]];
            if (db >= da) continue;
            const Vec& u = u_star[cell.org];
            const double dl1 = std::abs(counts[ci][a] - 1 - u[cell.route_cols[a]]) -
                               std::abs(counts[ci][a] - u[cell.route_cols[a]]) +
                               std::abs(counts[ci][b] + 1 - u[cell.route_cols[b]]) -
                               std::abs(counts[ci][b] - u[cell.route_cols[b]]);
            const double gain = da - db;
            if (dl1 < best_dl1 - 1e-12 ||
                (dl1 < best_dl1 + 1e-12 && gain > best_gain + 1e-12)) {
              best_dl1 = dl1;
              best_gain = gain;
              best_cell = static_cast<int>(ci);
              best_a = static_cast<int>(a);
              best_b = static_cast<int>(b);
            }
          }
        }
      }
      if (best_cell < 0) throw Error("projection: budget repair found no move");
      counts[best_cell][best_a] -= 1;
      counts[best_cell][best_b] += 1;
    }
  }

  MilpInstance inst = build_projection_milp(u_star, in);
  // Align entity order with cells rebuilt inside the builder.
  std::vector<Cell> built_cells = build_cells(in);
  Vec seed_values(static_cast<Eigen::Index>(inst.entities.size()));
  {
    int eid = 0;
    for (size_t ci = 0; ci < built_cells.size(); ++ci)
      for (size_t r = 0; r < built_cells[ci].route_cols.size(); ++r)
        seed_values[eid++] = counts[ci][r];
  }

  BnbSolution bnb;
  if (exact_at_root) {
    bnb.status = BnbStatus::kOptimal;
    bnb.entity_values = seed_values;
    bnb.gap = 0.0;
    bnb.nodes = 0;
  } else {
    double seed_obj = 0.0;
    for (size_t e = 0; e < inst.entities.size(); ++e)
      seed_obj += std::abs(seed_values[static_cast<Eigen::Index>(e)] - inst.entities[e].offset);
    auto sum_min_cost = [&](const Vec& values) {
      std::vector<double> time_of_org(n, 0.0);
      int eid = 0;
      for (const auto& cell : built_cells)
        for (size_t r = 0; r < cell.route_cols.size(); ++r)
          time_of_org[cell.org] += in.delta[cell.route_cols[r]] * values[eid++];
      double total = 0.0;
      for (int i = 0; i < n; ++i)
        total += incentive_value(in.orgs[i].alpha, time_of_org[i], in.orgs[i].gamma);
      return total;
    };
    TieBreak tie = [&](const Vec& a, const Vec& b) {
      const double ca = sum_min_cost(a);
      const double cb = sum_min_cost(b);
      if (ca < cb - 1e-12) return true;
      if (ca > cb + 1e-12) return false;
      for (int e = 0; e < a.size(); ++e) {
        if (a[e] < b[e] - 1e-12) return true;
        if (a[e] > b[e] + 1e-12) return false;
      }
      return false;
    };
    bnb = branch_and_bound(inst, params, tie, Incumbent{seed_values, seed_obj});
    if (bnb.status == BnbStatus::kInfeasible)
      throw InfeasibleError("projection: constraint system proven infeasible");
    if (bnb.status == BnbStatus::kNoIncumbent)
      throw Error("projection: no feasible assignment found within limits");
    int eid = 0;
    for (size_t ci = 0; ci < built_cells.size(); ++ci)
      for (size_t r = 0; r < built_cells[ci].route_cols.size(); ++r)
        counts[ci][r] = static_cast<int>(std::llround(bnb.entity_values[eid++]));
  }

  // Expand counts to drivers: slowest routes go to the largest caps.
  result.assigned_col.resize(n);
  result.counts.assign(n, Vec::Zero(in.dims.route_periods()));
  for (int i = 0; i < n; ++i)
    result.assigned_col[i].assign(in.orgs[i].driver_od_period.size(), -1);
  for (size_t ci = 0; ci < built_cells.size(); ++ci) {
    const Cell& cell = built_cells[ci];
    std::vector<int> order(cell.route_cols.size());
    for (size_t r = 0; r < order.size(); ++r) order[r] = static_cast<int>(r);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = in.delta[cell.route_cols[a]];
      const double db = in.delta[cell.route_cols[b]];
      if (da != db) return da > db;
      return cell.route_cols[a] < cell.route_cols[b];
    });
    size_t next_driver = 0;
    for (int r : order) {
      for (int unit = 0; unit < counts[ci][r]; ++unit) {
        if (next_driver >= cell.driver_ids.size())
          throw Error("projection: cell counts exceed the cell size");
        const int driver = cell.driver_ids[next_driver++];
        if (in.orgs[cell.org].cap[driver] < in.delta[cell.route_cols[r]])
          throw Error("projection: expansion violated a fairness bound");
        result.assigned_col[cell.org][driver] = cell.route_cols[r];
        result.counts[cell.org][cell.route_cols[r]] += 1.0;
      }
    }
    if (next_driver != cell.driver_ids.size())
      throw Error("projection: cell counts do not cover all drivers");
  }

  result.c = Vec::Zero(n);
  result.distance = 0.0;
  for (int i = 0; i < n; ++i) {
    const double assigned = in.delta.dot(result.counts[i]);
    result.c[i] = incentive_value(in.orgs[i].alpha, assigned, in.orgs[i].gamma);
    result.distance += (result.counts[i] - u_star[i]).lpNorm<1>();
  }
  if (result.c.sum() > in.Omega + 1e-9 * std::max(1.0, in.Omega))
    throw Error("projection: published assignment exceeds the budget");
  result.gap = bnb.gap;
  result.status = bnb.status;
  result.nodes = bnb.nodes;
  return result;
}

namespace {

std::string pad(const std::string& s, size_t width) {
  std::string out = s;
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

std::string to_mps(const MilpInstance& inst, const std::string& name) {
  // Export in the x-variable form: one integer column per entity plus an l1
  // auxiliary, recovering Eq-style rows by undoing the pos/neg shift.
  const int n_ent = static_cast<int>(inst.entities.size());
  std::vector<int> entity_of_var(inst.lp.num_vars(), -1);
  std::vector<int> sign_of_var(inst.lp.num_vars(), 0);
  for (int e = 0; e < n_ent; ++e) {
    entity_of_var[inst.entities[e].pos] = e;
    sign_of_var[inst.entities[e].pos] = +1;
    entity_of_var[inst.entities[e].neg] = e;
    sign_of_var[inst.entities[e].neg] = -1;
  }

  std::ostringstream os;
  os << "NAME          " << name << "\n";
  os << "ROWS\n";
  os << " N  COST\n";
  for (size_t r = 0; r < inst.lp.rows.size(); ++r)
    os << ' ' << (inst.lp.rows[r].sense == '=' ? 'E' : (inst.lp.rows[r].sense == '<' ? 'L' : 'G'))
       << "  R" << r << "\n";

  // Column-major coefficient map: entities as X<e>, other vars as Y<j>.
  struct ColRef {
    std::string name;
    bool integer;
    double lo, hi, cost;
  };
  std::vector<ColRef> cols;
  std::map<std::string, std::vector<std::pair<std::string, double>>> col_terms;
  std::vector<double> rhs_shift(inst.lp.rows.size(), 0.0);

  for (int e = 0; e < n_ent; ++e) {
    const auto& ent = inst.entities[e];
    cols.push_back({"X" + std::to_string(e), true, ent.lo, ent.hi, 0.0});
    cols.push_back({"T" + std::to_string(e), false, 0.0, kInf, inst.lp.obj[ent.pos]});
  }
  for (int j = 0; j < inst.lp.num_vars(); ++j)
    if (entity_of_var[j] < 0)
      cols.push_back({"Y" + std::to_string(j), false, inst.lp.lo[j], inst.lp.up[j],
                      inst.lp.obj[j]});

  for (size_t r = 0; r < inst.lp.rows.size(); ++r) {
    std::map<int, double> entity_coef;
    for (const auto& [j, a] : inst.lp.rows[r].terms) {
      if (entity_of_var[j] >= 0)
        entity_coef[entity_of_var[j]] += sign_of_var[j] > 0 ? a : 0.0;
      else
        col_terms["Y" + std::to_string(j)].emplace_back("R" + std::to_string(r), a);
    }
    for (const auto& [e, a] : entity_coef) {
      if (a == 0.0) continue;
      col_terms["X" + std::to_string(e)].emplace_back("R" + std::to_string(r), a);
      rhs_shift[r] += a * inst.entities[e].offset;
    }
  }
  // l1 linearization rows: T_e >= X_e - u_e and T_e >= u_e - X_e.
  std::vector<std::string> extra_rows;
  for (int e = 0; e < n_ent; ++e) {
    const std::string rp = "ABSP" + std::to_string(e);
    const std::string rn = "ABSN" + std::to_string(e);
    extra_rows.push_back(" G  " + rp);
    extra_rows.push_back(" G  " + rn);
    col_terms["T" + std::to_string(e)].emplace_back(rp, 1.0);
    col_terms["X" + std::to_string(e)].emplace_back(rp, -1.0);
    col_terms["T" + std::to_string(e)].emplace_back(rn, 1.0);
    col_terms["X" + std::to_string(e)].emplace_back(rn, 1.0);
  }
  for (const auto& row : extra_rows) os << row << "\n";

  os << "COLUMNS\n";
  os << "    MARKER                 'MARKER'                 'INTORG'\n";
  auto emit_col = [&](const ColRef& c) {
    if (c.cost != 0.0)
      os << "    " << pad(c.name, 10) << pad("COST", 10) << c.cost << "\n";
    auto it = col_terms.find(c.name);
    if (it != col_terms.end())
      for (const auto& [row, a] : it->second)
        os << "    " << pad(c.name, 10) << pad(row, 10) << a << "\n";
  };
  for (const auto& c : cols)
    if (c.integer) emit_col(c);
  os << "    MARKER                 'MARKER'                 'INTEND'\n";
  for (const auto& c : cols)
    if (!c.integer) emit_col(c);

  os << "RHS\n";
  for (size_t r = 0; r < inst.lp.rows.size(); ++r) {
    const double rhs = inst.lp.rows[r].rhs + rhs_shift[r];
    if (rhs != 0.0) os << "    " << pad("RHS", 10) << pad("R" + std::to_string(r), 10) << rhs << "\n";
  }
  for (int e = 0; e < n_ent; ++e) {
    const double u = inst.entities[e].offset;
    if (u != 0.0) {
      os << "    " << pad("RHS", 10) << pad("ABSP" + std::to_string(e), 10) << -u << "\n";
      os << "    " << pad("RHS", 10) << pad("ABSN" + std::to_string(e), 10) << u << "\n";
    }
  }

  os << "BOUNDS\n";
  for (const auto& c : cols) {
    if (c.lo != 0.0) os << " LO " << pad("BND", 10) << pad(c.name, 10) << c.lo << "\n";
    if (std::isfinite(c.hi)) os << " UP " << pad("BND", 10) << pad(c.name, 10) << c.hi << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

}  // namespace orgopt::milp
