#include "orgopt/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "orgopt/network.hpp"

namespace orgopt::admm {

using json = nlohmann::json;

double ProblemInstance::travel_time(const Vec& volumes) const {
  double total = 0.0;
  for (int i = 0; i < volumes.size(); ++i)
    total += volumes[i] * bpr_travel_time(theta0_lt[i], cap_lt[i], std::max(0.0, volumes[i]));
  return total;
}

Vec ProblemInstance::travel_time_gradient(const Vec& volumes) const {
  Vec g(volumes.size());
  for (int i = 0; i < volumes.size(); ++i) {
    const double v = std::max(0.0, volumes[i]);
    g[i] = bpr_travel_time(theta0_lt[i], cap_lt[i], v) +
           v * bpr_derivative(theta0_lt[i], cap_lt[i], v);
  }
  return g;
}

Vec ProblemInstance::stacked_u_volumes(const std::vector<Vec>& u) const {
  Vec total = Vec::Zero(dims.route_periods());
  for (const auto& ui : u) total += ui;
  return v0 + R * total;
}

double Residuals::max_norm() const { return block_norms().maxCoeff(); }

Vec Residuals::block_norms() const {
  auto vnorm = [](const std::vector<Vec>& blocks) {
    double m = 0.0;
    for (const auto& b : blocks)
      if (b.size() > 0) m = std::max(m, b.lpNorm<Eigen::Infinity>());
    return m;
  };
  auto mnorm = [](const std::vector<Mat>& blocks) {
    double m = 0.0;
    for (const auto& b : blocks)
      if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
  };
  Vec norms(10);
  norms[0] = vnorm(r1);
  norms[1] = r2.size() > 0 ? r2.lpNorm<Eigen::Infinity>() : 0.0;
  norms[2] = vnorm(r3);
  norms[3] = vnorm(r4);
  norms[4] = mnorm(r5);
  norms[5] = vnorm(r6);
  norms[6] = r7.size() > 0 ? r7.lpNorm<Eigen::Infinity>() : 0.0;
  norms[7] = mnorm(r8);
  norms[8] = std::abs(r9);
  norms[9] = mnorm(r10);
  return norms;
}

FactorCache::FactorCache(const ProblemInstance& problem, double rho)
    : pb_(&problem), rho_(rho) {
  const int p = problem.dims.route_periods();
  const int m = problem.dims.link_periods();
  const int n = problem.num_orgs();

  group_cols_.assign(problem.dims.od_periods(), {});
  for (int col = 0; col < problem.D.outerSize(); ++col)
    for (SpMat::InnerIterator it(problem.D, col); it; ++it)
      group_cols_[it.row()].push_back(col);

  delta_sq_ = 1.0 + problem.delta.squaredNorm();

  w_sm_.resize(n);
  s_sm_.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vec a = problem.orgs[i].alpha * problem.delta;
    w_sm_[i] = m_solve(a);
    s_sm_[i] = 1.0 + a.dot(w_sm_[i]);
  }

  // Woodbury complement over the link-period dimension.
  SpMat rt = problem.R.transpose();
  Mat coupling = Mat::Identity(m, m);
  for (int i = 0; i < n; ++i) {
    Mat b(p, m);
    for (int j = 0; j < m; ++j) b.col(j) = a_inverse(i, Vec(rt.col(j)));
    coupling += problem.R * b;
  }
  coupling_ = Eigen::LDLT<Mat>(coupling);

  c_matrix_ = Mat::Zero(2 * n, 2 * n);
  c_matrix_.topLeftCorner(n, n) = Mat::Identity(n, n) + Mat::Ones(n, n);
  c_matrix_.topRightCorner(n, n) = -Mat::Identity(n, n);
  c_matrix_.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  c_matrix_.bottomRightCorner(n, n) = Mat::Identity(n, n);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(c_matrix_);
  c_pinv_ = cod.pseudoInverse();
}

Vec FactorCache::m_solve(const Vec& x) const {
  Vec y = x;
  for (const auto& cols : group_cols_) {
    if (cols.empty()) continue;
    double s = 0.0;
    for (int c : cols) s += x[c];
    const double shift = s / (1.0 + static_cast<double>(cols.size()));
    for (int c : cols) y[c] -= shift;
  }
  return y;
}

Vec FactorCache::a_inverse(int org, const Vec& x) const {
  Vec y = m_solve(x);
  const double alpha = pb_->orgs[org].alpha;
  const double proj = alpha * pb_->delta.dot(y);
  return y - w_sm_[org] * (proj / s_sm_[org]);
}

Mat FactorCache::apply_s_inverse(const Mat& x) const {
  const double m = static_cast<double>(x.cols());
  const Vec rowsum = x.rowwise().sum();
  return (x - rowsum * Eigen::RowVectorXd::Ones(x.cols()) / (3.0 + m)) / 3.0;
}

Mat FactorCache::apply_w_inverse(const Mat& y) const {
  const double p = static_cast<double>(y.rows());
  const Eigen::RowVectorXd colsum = y.colwise().sum();
  return y - Vec::Ones(y.rows()) * colsum / (1.0 + p);
}

Mat FactorCache::apply_h_inverse(const Mat& y) const {
  const Eigen::RowVectorXd proj = pb_->delta.transpose() * y;
  return y - pb_->delta * proj / delta_sq_;
}

Vec FactorCache::solve_c_tilde(const Vec& rhs) const { return c_pinv_ * rhs; }

std::vector<Vec> FactorCache::solve_u(const std::vector<Vec>& rhs) const {
  const int n = pb_->num_orgs();
  std::vector<Vec> t(n);
  Vec g = Vec::Zero(pb_->dims.link_periods());
  for (int i = 0; i < n; ++i) {
    t[i] = a_inverse(i, rhs[i]);
    g += pb_->R * t[i];
  }
  const Vec h = coupling_.solve(g);
  const Vec z = pb_->R.transpose() * h;
  std::vector<Vec> x(n);
  for (int i = 0; i < n; ++i) x[i] = t[i] - a_inverse(i, z);
  return x;
}

std::vector<Vec> FactorCache::apply_u_matrix(const std::vector<Vec>& x) const {
  const int n = pb_->num_orgs();
  Vec s = Vec::Zero(pb_->dims.link_periods());
  for (const auto& xi : x) s += pb_->R * xi;
  const Vec rs = pb_->R.transpose() * s;
  std::vector<Vec> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = x[i] + rs;
    for (const auto& cols : group_cols_) {
      if (cols.empty()) continue;
      double sum = 0.0;
      for (int c : cols) sum += x[i][c];
      for (int c : cols) y[i][c] += sum;
    }
    const double alpha = pb_->orgs[i].alpha;
    y[i] += alpha * pb_->delta * (alpha * pb_->delta.dot(x[i]));
  }
  return y;
}

double omega_subproblem(double a, double lambda2, double rho, double theta0,
                        double capacity) {
  if (rho <= 0.0) throw Error("omega_subproblem: rho must be positive");
  auto deriv = [&](double x) {
    const double r = x / capacity;
    return theta0 * (1.0 + 0.75 * r * r * r * r) + lambda2 + rho * (x - a);
  };
  if (deriv(0.0) >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = a + std::abs(lambda2) / rho + capacity;
  double x = std::max(0.0, a - lambda2 / rho);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = deriv(x);
    if (std::abs(g) <= 1e-9) break;
    if (g > 0.0)
      hi = x;
    else
      lo = x;
    const double r = x / capacity;
    const double g2 = rho + 3.0 * theta0 * r * r * r / capacity;
    double next = x - g / g2;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return std::max(0.0, x);
}

Mat s_update(const Vec& lambda1, const Mat& Lambda5, const Mat& Lambda8,
             const Mat& Lambda10, const Vec& u, const Mat& W, const Mat& H, const Mat& Z,
             double rho) {
  const int m = static_cast<int>(W.cols());
  Mat rhs = (-lambda1 + rho * u) * Eigen::RowVectorXd::Ones(m) - Lambda5 - Lambda8 -
            Lambda10 + rho * (W + H + Z);
  // Right-multiply by (rho 11' + 3 rho I)^-1 via Sherman-Morrison on the
  // driver dimension.
  const Vec rowsum = rhs.rowwise().sum();
  return (rhs - rowsum * Eigen::RowVectorXd::Ones(m) / (3.0 + m)) / (3.0 * rho);
}

Mat z_update(const Mat& S, const Mat& Lambda10, double rho, double lambda_tilde) {
  if (std::abs(rho - lambda_tilde) < 1e-12)
    throw Error("z_update: rho equals lambda_tilde, step is singular");
  Mat y = (rho * S + Lambda10 - Mat::Constant(S.rows(), S.cols(), lambda_tilde / 2.0)) /
          (rho - lambda_tilde);
  if (rho > lambda_tilde) return y.cwiseMax(0.0).cwiseMin(1.0);
  return (y.array() >= 0.5).cast<double>().matrix();
}

void dual_ascent(SolverState& state, const Residuals& r, double rho) {
  const int n = static_cast<int>(state.S.size());
  for (int i = 0; i < n; ++i) {
    state.lambda1[i] += rho * r.r1[i];
    state.lambda3[i] += rho * r.r3[i];
    state.lambda4[i] += rho * r.r4[i];
    state.Lambda5[i] += rho * r.r5[i];
    state.lambda6[i] += rho * r.r6[i];
    state.Lambda8[i] += rho * r.r8[i];
    state.Lambda10[i] += rho * r.r10[i];
  }
  state.lambda2 += rho * r.r2;
  state.lambda7 += rho * r.r7;
  state.lambda9 += rho * r.r9;
}

Residuals compute_residuals(const ProblemInstance& pb, const SolverState& st) {
  const int n = pb.num_orgs();
  Residuals r;
  r.r1.resize(n);
  r.r3.resize(n);
  r.r4.resize(n);
  r.r5.resize(n);
  r.r6.resize(n);
  r.r8.resize(n);
  r.r10.resize(n);
  r.r7.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& org = pb.orgs[i];
    r.r1[i] = st.S[i].rowwise().sum() - st.u[i];
    r.r3[i] = pb.D * st.u[i] - org.q;
    r.r4[i] = st.W[i].colwise().sum().transpose() - Vec::Ones(st.W[i].cols());
    r.r5[i] = st.S[i] - st.W[i];
    r.r6[i] = st.H[i].transpose() * pb.delta + st.beta[i] - org.cap;
    r.r8[i] = st.S[i] - st.H[i];
    r.r10[i] = st.S[i] - st.Z[i];
    r.r7[i] = org.alpha * (pb.delta.dot(st.u[i]) - org.gamma) - (st.c[i] - st.mu[i]);
  }
  r.r2 = st.omega - pb.stacked_u_volumes(st.u);
  r.r9 = st.c.sum() + st.beta_tilde - pb.Omega;
  return r;
}

double regularizer_value(const Mat& x, double lambda_tilde) {
  return -(lambda_tilde / 2.0) * (x.array() * (x.array() - 1.0)).sum();
}

void check_feasibility(const ProblemInstance& pb) {
  if (pb.Omega < 0.0) throw InfeasibleError("budget is negative");
  for (const auto& org : pb.orgs) {
    for (int j = 0; j < org.num_drivers(); ++j) {
      if (org.admissible_cols[j].empty())
        throw InfeasibleError("organization '" + org.id + "': driver " + std::to_string(j) +
                              " has no routes for its OD-period");
      double best = std::numeric_limits<double>::infinity();
      for (int col : org.admissible_cols[j]) best = std::min(best, pb.delta[col]);
      if (best > org.cap[j])
        throw InfeasibleError("organization '" + org.id + "': driver " + std::to_string(j) +
                              " (od-period " + std::to_string(org.driver_od_period[j]) +
                              "): fairness bound " + std::to_string(org.cap[j]) +
                              " min excludes all routes (fastest " + std::to_string(best) +
                              " min)");
    }
  }
}

SolverState initial_state(const ProblemInstance& pb, const AdmmParams& params) {
  const int n = pb.num_orgs();
  const int p = pb.dims.route_periods();
  SolverState st;
  st.rho = params.rho;
  st.lambda_tilde = params.lambda_tilde;
  st.S.resize(n);
  st.W.resize(n);
  st.H.resize(n);
  st.Z.resize(n);
  st.u.resize(n);
  st.beta.resize(n);
  st.lambda1.assign(n, Vec::Zero(p));
  st.lambda3.assign(n, Vec::Zero(pb.dims.od_periods()));
  st.lambda4.resize(n);
  st.Lambda5.resize(n);
  st.lambda6.resize(n);
  st.Lambda8.resize(n);
  st.Lambda10.resize(n);
  st.c = Vec::Zero(n);
  st.mu = Vec::Zero(n);
  st.lambda7 = Vec::Zero(n);
  st.lambda2 = Vec::Zero(pb.dims.link_periods());

  for (int i = 0; i < n; ++i) {
    const auto& org = pb.orgs[i];
    const int m = org.num_drivers();
    st.S[i] = Mat::Zero(p, m);
    for (int j = 0; j < m; ++j) {
      const auto& cols = org.admissible_cols[j];
      if (cols.empty())
        throw Error("organization '" + org.id + "': driver with no admissible routes");
      for (int col : cols) st.S[i](col, j) = 1.0 / static_cast<double>(cols.size());
    }
    st.W[i] = st.S[i];
    st.H[i] = st.S[i];
    st.Z[i] = st.S[i];
    st.u[i] = st.S[i].rowwise().sum();
    st.beta[i] = (org.cap - st.H[i].transpose() * pb.delta).cwiseMax(0.0);
    st.lambda4[i] = Vec::Zero(m);
    st.lambda6[i] = Vec::Zero(m);
    st.Lambda5[i] = Mat::Zero(p, m);
    st.Lambda8[i] = Mat::Zero(p, m);
    st.Lambda10[i] = Mat::Zero(p, m);
    const double net = org.alpha * (pb.delta.dot(st.u[i]) - org.gamma);
    st.c[i] = std::max(0.0, net);
    st.mu[i] = std::max(0.0, -net);
  }
  st.omega = pb.stacked_u_volumes(st.u);
  st.beta_tilde = std::max(0.0, pb.Omega - st.c.sum());
  return st;
}

namespace {

// Recomputes each constraint violation with standalone expressions and checks
// that the dual step advanced by exactly rho times it.
void audit_dual_step(const ProblemInstance& pb, const SolverState& before,
                     const SolverState& after, double rho) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)); };
  const int n = pb.num_orgs();
  for (int i = 0; i < n; ++i) {
    Vec su = Vec::Zero(pb.dims.route_periods());
    for (int col = 0; col < after.S[i].cols(); ++col) su += after.S[i].col(col);
    const Vec expect1 = before.lambda1[i] + rho * (su - after.u[i]);
    if ((expect1 - after.lambda1[i]).lpNorm<Eigen::Infinity>() > 1e-8)
      throw Error("dual bookkeeping mismatch on the assignment-sum block");
    double assigned = 0.0;
    for (int k = 0; k < pb.dims.route_periods(); ++k) assigned += pb.delta[k] * after.u[i][k];
    const double expect7 = before.lambda7[i] + rho * (pb.orgs[i].alpha * (assigned - pb.orgs[i].gamma) -
                                                      after.c[i] + after.mu[i]);
    if (!close(after.lambda7[i], expect7))
      throw Error("dual bookkeeping mismatch on the incentive block");
  }
  const double expect9 = before.lambda9 + rho * (after.c.sum() + after.beta_tilde - pb.Omega);
  if (!close(after.lambda9, expect9))
    throw Error("dual bookkeeping mismatch on the budget block");
}

}  // namespace

RelaxedSolution solve_relaxed(const ProblemInstance& pb, const AdmmParams& params,
                              const SolverState* warm, std::ostream* log) {
  if (params.rho <= 0.0) throw Error("solve_relaxed: rho must be positive");
  if (std::abs(params.rho - params.lambda_tilde) < 1e-12)
    throw Error("solve_relaxed: rho must differ from lambda_tilde");
  check_feasibility(pb);

  const double rho = params.rho;
  const int n = pb.num_orgs();
  FactorCache cache(pb, rho);
  SolverState st = warm ? *warm : initial_state(pb, params);
  st.rho = rho;
  st.lambda_tilde = params.lambda_tilde;

  RelaxedSolution out;
  out.best_residual = std::numeric_limits<double>::infinity();
  const auto t_start = std::chrono::steady_clock::now();
  if (log)
    *log << "iter,objective,r_sum,r_volume,r_demand,r_colsum,r_copy_w,r_fairness,"
            "r_incentive,r_copy_h,r_budget,r_copy_z,wall_s\n";

  for (int iter = 0; iter < params.max_iters; ++iter) {
    // Volume block, one strictly convex scalar problem per link-period.
    {
      const Vec a = pb.stacked_u_volumes(st.u);
      for (int idx = 0; idx < pb.dims.link_periods(); ++idx)
        st.omega[idx] = omega_subproblem(a[idx], st.lambda2[idx], rho, pb.theta0_lt[idx],
                                         pb.cap_lt[idx]);
    }
    for (int i = 0; i < n; ++i) {
      st.S[i] = s_update(st.lambda1[i], st.Lambda5[i], st.Lambda8[i], st.Lambda10[i],
                         st.u[i], st.W[i], st.H[i], st.Z[i], rho);
      st.beta[i] =
          (pb.orgs[i].cap - st.H[i].transpose() * pb.delta - st.lambda6[i] / rho).cwiseMax(0.0);
    }
    {
      Vec g(2 * n);
      for (int i = 0; i < n; ++i) {
        const double assigned = pb.delta.dot(st.u[i]);
        const auto& org = pb.orgs[i];
        const double coupling = rho * org.alpha * (assigned - org.gamma);
        g[i] = st.lambda7[i] - st.lambda9 + coupling - rho * st.beta_tilde + rho * pb.Omega;
        g[n + i] = -st.lambda7[i] - coupling;
      }
      const Vec ct = (cache.solve_c_tilde(g) / rho).cwiseMax(0.0);
      st.c = ct.head(n);
      st.mu = ct.tail(n);
    }
    {
      std::vector<Vec> rhs(n);
      const Vec r_l2 = pb.R.transpose() * st.lambda2;
      const Vec r_omega = pb.R.transpose() * (st.omega - pb.v0);
      for (int i = 0; i < n; ++i) {
        const auto& org = pb.orgs[i];
        const Vec a = org.alpha * pb.delta;
        rhs[i] = st.lambda1[i] + r_l2 - pb.D.transpose() * st.lambda3[i] -
                 a * st.lambda7[i] + rho * st.S[i].rowwise().sum() + rho * r_omega +
                 rho * pb.D.transpose() * org.q + rho * a * (org.alpha * org.gamma) +
                 rho * a * (st.c[i] - st.mu[i]);
      }
      auto solved = cache.solve_u(rhs);
      for (int i = 0; i < n; ++i) st.u[i] = solved[i] / rho;
    }
    for (int i = 0; i < n; ++i) {
      const int m = pb.orgs[i].num_drivers();
      const Eigen::RowVectorXd wrow =
          (Vec::Ones(m) - st.lambda4[i] / rho).transpose();
      st.W[i] = cache.apply_w_inverse(Vec::Ones(pb.dims.route_periods()) * wrow + st.S[i] +
                                      st.Lambda5[i] / rho);
      const Eigen::RowVectorXd hrow =
          (pb.orgs[i].cap - st.beta[i] - st.lambda6[i] / rho).transpose();
      st.H[i] = cache.apply_h_inverse(pb.delta * hrow + st.S[i] + st.Lambda8[i] / rho);
      st.Z[i] = z_update(st.S[i], st.Lambda10[i], rho, params.lambda_tilde);
    }
    st.beta_tilde = std::max(0.0, pb.Omega - st.c.sum() - st.lambda9 / rho);

    const Residuals res = compute_residuals(pb, st);
    const bool audit = (iter % 50) == 49;
    SolverState before;
    if (audit) before = st;
    dual_ascent(st, res, rho);
    if (audit) audit_dual_step(pb, before, st, rho);
    st.iteration += 1;

    double reg = 0.0;
    for (int i = 0; i < n; ++i) reg += regularizer_value(st.Z[i], params.lambda_tilde);
    const double objective = pb.travel_time(st.omega) + reg;
    const Vec norms = res.block_norms();
    const double rmax = norms.maxCoeff();

    IterationRecord rec;
    rec.iteration = st.iteration;
    rec.objective = objective;
    rec.block_norms = norms;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    out.history.push_back(rec);
    if (log) {
      *log << rec.iteration << ',' << objective;
      for (int k = 0; k < norms.size(); ++k) *log << ',' << norms[k];
      *log << ',' << rec.wall_seconds << '\n';
    }

    if (rmax < out.best_residual) {
      out.best_residual = rmax;
      out.u = st.u;
      out.S = st.S;
      out.c = st.c;
      out.omega = st.omega;
      out.objective = objective;
      out.iterations = st.iteration;
    }
    if (rmax < params.tol) {
      out.converged = true;
      break;
    }
    if (rmax > params.divergence_threshold)
      throw DivergenceError("solver diverged: residual " + std::to_string(rmax) +
                            " after " + std::to_string(st.iteration) + " iterations");
  }
  out.objective_at_u = pb.travel_time(pb.stacked_u_volumes(out.u));
  out.state = std::move(st);
  return out;
}

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a) {
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json obj;
  obj["rows"] = m.rows();
  obj["cols"] = m.cols();
  json a = json::array();
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) a.push_back(m(i, j));
  obj["data"] = a;
  return obj;
}

Mat mat_from_json(const json& obj) {
  Mat m(obj.at("rows").get<Eigen::Index>(), obj.at("cols").get<Eigen::Index>());
  const auto& a = obj.at("data");
  size_t k = 0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) m(i, j) = a[k++].get<double>();
  return m;
}

template <typename T, typename F>
json list_to_json(const std::vector<T>& xs, F f) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

}  // namespace

std::string save_state(const SolverState& st) {
  json j;
  j["version"] = 1;
  j["rho"] = st.rho;
  j["lambda_tilde"] = st.lambda_tilde;
  j["iteration"] = st.iteration;
  j["omega"] = vec_to_json(st.omega);
  j["c"] = vec_to_json(st.c);
  j["mu"] = vec_to_json(st.mu);
  j["beta_tilde"] = st.beta_tilde;
  j["lambda2"] = vec_to_json(st.lambda2);
  j["lambda7"] = vec_to_json(st.lambda7);
  j["lambda9"] = st.lambda9;
  j["S"] = list_to_json(st.S, mat_to_json);
  j["W"] = list_to_json(st.W, mat_to_json);
  j["H"] = list_to_json(st.H, mat_to_json);
  j["Z"] = list_to_json(st.Z, mat_to_json);
  j["Lambda5"] = list_to_json(st.Lambda5, mat_to_json);
  j["Lambda8"] = list_to_json(st.Lambda8, mat_to_json);
  j["Lambda10"] = list_to_json(st.Lambda10, mat_to_json);
  j["u"] = list_to_json(st.u, vec_to_json);
  j["beta"] = list_to_json(st.beta, vec_to_json);
  j["lambda1"] = list_to_json(st.lambda1, vec_to_json);
  j["lambda3"] = list_to_json(st.lambda3, vec_to_json);
  j["lambda4"] = list_to_json(st.lambda4, vec_to_json);
  j["lambda6"] = list_to_json(st.lambda6, vec_to_json);
  return j.dump();
}

SolverState load_state(const std::string& blob) {
  json j = json::parse(blob);
  if (j.at("version").get<int>() != 1)
    throw ParseError("checkpoint: unsupported version");
  SolverState st;
  st.rho = j.at("rho").get<double>();
  st.lambda_tilde = j.at("lambda_tilde").get<double>();
  st.iteration = j.at("iteration").get<int>();
  st.omega = vec_from_json(j.at("omega"));
  st.c = vec_from_json(j.at("c"));
  st.mu = vec_from_json(j.at("mu"));
  st.beta_tilde = j.at("beta_tilde").get<double>();
  st.lambda2 = vec_from_json(j.at("lambda2"));
  st.lambda7 = vec_from_json(j.at("lambda7"));
  st.lambda9 = j.at("lambda9").get<double>();
  auto mats = [&](const char* key) {
    std::vector<Mat> xs;
    for (const auto& item : j.at(key)) xs.push_back(mat_from_json(item));
    return xs;
  };
  auto vecs = [&](const char* key) {
    std::vector<Vec> xs;
    for (const auto& item : j.at(key)) xs.push_back(vec_from_json(item));
    return xs;
  };
  st.S = mats("S");
  st.W = mats("W");
  st.H = mats("H");
  st.Z = mats("Z");
  st.Lambda5 = mats("Lambda5");
  st.Lambda8 = mats("Lambda8");
  st.Lambda10 = mats("Lambda10");
  st.u = vecs("u");
  st.beta = vecs("beta");
  st.lambda1 = vecs("lambda1");
  st.lambda3 = vecs("lambda3");
  st.lambda4 = vecs("lambda4");
  st.lambda6 = vecs("lambda6");
  return st;
}

}  // namespace orgopt::admm
