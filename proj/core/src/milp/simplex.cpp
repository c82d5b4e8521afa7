#include "bessbid/milp/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "bessbid/error.hpp"

namespace bessbid::milp {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "OPTIMAL";
    case LpStatus::Infeasible: return "INFEASIBLE";
    case LpStatus::Unbounded: return "UNBOUNDED";
    case LpStatus::IterationLimit: return "ITERATION_LIMIT";
    case LpStatus::NumericalFailure: return "NUMERICAL_FAILURE";
  }
  return "?";
}

namespace {

using SparseMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// LU of the basis matrix followed by product-form (eta) updates.
class BasisFactor {
 public:
  bool factor(const SparseMat& b) {
    etas_.clear();
    lu_.compute(b);
    return lu_.info() == Eigen::Success;
  }

  std::size_t updates() const { return etas_.size(); }

  void ftran(Eigen::VectorXd& v) const {
    v = lu_.solve(v).eval();
    for (const auto& e : etas_) {
      const double vr = v(e.pos) / e.pivot;
      if (vr != 0.0) {
        for (std::size_t k = 0; k < e.index.size(); ++k) v(e.index[k]) -= e.value[k] * vr;
      }
      v(e.pos) = vr;
    }
  }

  void btran(Eigen::VectorXd& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v(it->pos);
      for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v(it->index[k]);
      v(it->pos) = acc / it->pivot;
    }
    v = lu_.transpose().solve(v).eval();
  }

  void update(int pos, const Eigen::VectorXd& alpha) {
    Eta e;
    e.pos = pos;
    e.pivot = alpha(pos);
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (i != pos && alpha(i) != 0.0) {
        e.index.push_back(static_cast<int>(i));
        e.value.push_back(alpha(i));
      }
    }
    etas_.push_back(std::move(e));
  }

 private:
  struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };
  mutable Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

enum class Phase { One, Two };

}  // namespace

struct SimplexSolver::Impl {
  LpOptions opt;
  int n = 0;
  int m = 0;
  int total = 0;
  double sign = 1.0;  // internal cost = sign * original objective
  std::vector<double> original_objective;
  std::vector<int> col_start;
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;
  std::vector<double> lo;
  std::vector<double> up;
  std::vector<double> x;
  std::vector<VarStatus> status;
  std::vector<int> head;
  std::vector<int> pos;
  BasisFactor factor;
  bool factored = false;
  bool values_dirty = true;
  long iterations = 0;
  long degenerate_run = 0;
  bool bland = false;
  int crashes = 0;
  std::string diag;
  Eigen::VectorXd duals;

  explicit Impl(const LinearProgram& lp, LpOptions options) : opt(options) {
    lp.validate();
    n = lp.num_cols();
    m = lp.num_rows();
    total = n + m;
    sign = lp.sense == ObjectiveSense::Minimize ? 1.0 : -1.0;
    auto csc = lp.to_csc();
    col_start = std::move(csc.start);
    row_index = std::move(csc.index);
    value = std::move(csc.value);
    cost.assign(static_cast<std::size_t>(total), 0.0);
    lo.resize(static_cast<std::size_t>(total));
    up.resize(static_cast<std::size_t>(total));
    for (int j = 0; j < n; ++j) {
      original_objective.push_back(lp.objective(j));
      cost[static_cast<std::size_t>(j)] = sign * lp.objective(j);
      lo[static_cast<std::size_t>(j)] = lp.col_lower(j);
      up[static_cast<std::size_t>(j)] = lp.col_upper(j);
    }
    for (int i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(n + i);
      switch (lp.row_sense(i)) {
        case RowSense::LessEqual: lo[k] = -kInf; up[k] = lp.rhs(i); break;
        case RowSense::GreaterEqual: lo[k] = lp.rhs(i); up[k] = kInf; break;
        case RowSense::Equal: lo[k] = lp.rhs(i); up[k] = lp.rhs(i); break;
      }
    }
    x.assign(static_cast<std::size_t>(total), 0.0);
    status.assign(static_cast<std::size_t>(total), VarStatus::AtLower);
    head.resize(static_cast<std::size_t>(m));
    pos.assign(static_cast<std::size_t>(total), -1);
    slack_basis();
  }

  std::size_t u(int j) const { return static_cast<std::size_t>(j); }

  VarStatus nonbasic_status_for(int j, double near) const {
    const double l = lo[u(j)], h = up[u(j)];
    const bool lf = std::isfinite(l), hf = std::isfinite(h);
    if (lf && hf) return std::abs(near - l) <= std::abs(near - h) ? VarStatus::AtLower : VarStatus::AtUpper;
    if (lf) return VarStatus::AtLower;
    if (hf) return VarStatus::AtUpper;
    return VarStatus::AtZero;
  }

  void place_nonbasic(int j) {
    switch (status[u(j)]) {
      case VarStatus::AtLower: x[u(j)] = lo[u(j)]; break;
      case VarStatus::AtUpper: x[u(j)] = up[u(j)]; break;
      case VarStatus::AtZero: x[u(j)] = 0.0; break;
      case VarStatus::Basic: break;
    }
  }

  // Keeps a nonbasic status consistent with (possibly changed) bounds.
  void normalize_nonbasic(int j) {
    auto& st = status[u(j)];
    if (st == VarStatus::Basic) return;
    const bool lf = std::isfinite(lo[u(j)]), hf = std::isfinite(up[u(j)]);
    if (st == VarStatus::AtLower && !lf) st = hf ? VarStatus::AtUpper : VarStatus::AtZero;
    else if (st == VarStatus::AtUpper && !hf) st = lf ? VarStatus::AtLower : VarStatus::AtZero;
    else if (st == VarStatus::AtZero && (lf || hf)) st = lf ? VarStatus::AtLower : VarStatus::AtUpper;
    place_nonbasic(j);
  }

  void slack_basis() {
    for (int j = 0; j < n; ++j) {
      if (status[u(j)] == VarStatus::Basic || pos[u(j)] >= 0) {
        status[u(j)] = nonbasic_status_for(j, x[u(j)]);
      }
      pos[u(j)] = -1;
      normalize_nonbasic(j);
    }
    for (int i = 0; i < m; ++i) {
      head[u(i)] = n + i;
      pos[u(n + i)] = i;
      status[u(n + i)] = VarStatus::Basic;
    }
    factored = false;
    values_dirty = true;
  }

  template <class F>
  void for_column(int j, F&& f) const {
    if (j < n) {
      for (int k = col_start[u(j)]; k < col_start[u(j) + 1]; ++k) f(row_index[u(k)], value[u(k)]);
    } else {
      f(j - n, -1.0);
    }
  }

  double dot_column(const Eigen::VectorXd& y, int j) const {
    if (j >= n) return -y(j - n);
    double s = 0.0;
    for (int k = col_start[u(j)]; k < col_start[u(j) + 1]; ++k) s += y(row_index[u(k)]) * value[u(k)];
    return s;
  }

  Eigen::VectorXd column(int j) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    for_column(j, [&](int i, double v) { a(i) += v; });
    return a;
  }

  bool refactor() {
    std::vector<Eigen::Triplet<double, int>> trips;
    for (int p = 0; p < m; ++p) {
      for_column(head[u(p)], [&](int i, double v) { trips.emplace_back(i, p, v); });
    }
    SparseMat b(m, m);
    b.setFromTriplets(trips.begin(), trips.end());
    b.makeCompressed();
    if (!factor.factor(b)) return false;
    factored = true;
    return true;
  }

  void ensure_factored() {
    if (factored && static_cast<int>(factor.updates()) < opt.refactor_interval) return;
    if (!refactor()) {
      ++crashes;
      diag = "singular basis; restarted from slack basis";
      slack_basis();
      if (!refactor()) throw SolverError("slack basis factorization failed");
    }
    values_dirty = true;
  }

  void compute_basic_values() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < total; ++j) {
      if (status[u(j)] == VarStatus::Basic) continue;
      const double v = x[u(j)];
      if (v != 0.0) for_column(j, [&](int i, double a) { rhs(i) -= a * v; });
    }
    factor.ftran(rhs);
    for (int p = 0; p < m; ++p) x[u(head[u(p)])] = rhs(p);
    values_dirty = false;
  }

  double infeasibility(int j) const {
    const double v = x[u(j)];
    if (v < lo[u(j)] - opt.primal_tolerance) return lo[u(j)] - v;
    if (v > up[u(j)] + opt.primal_tolerance) return v - up[u(j)];
    return 0.0;
  }

  bool primal_feasible() const {
    for (int p = 0; p < m; ++p) {
      if (infeasibility(head[u(p)]) > 0.0) return false;
    }
    return true;
  }

  Eigen::VectorXd phase_two_duals() const {
    Eigen::VectorXd cb(m);
    for (int p = 0; p < m; ++p) cb(p) = cost[u(head[u(p)])];
    factor.btran(cb);
    return cb;
  }

  void pivot(int r, int q, const Eigen::VectorXd& alpha, double leave_value, VarStatus leave_status) {
    const int b = head[u(r)];
    x[u(b)] = leave_value;
    status[u(b)] = leave_status;
    pos[u(b)] = -1;
    head[u(r)] = q;
    pos[u(q)] = r;
    status[u(q)] = VarStatus::Basic;
    factor.update(r, alpha);
    if (static_cast<int>(factor.updates()) >= opt.refactor_interval) {
      ensure_factored();
      compute_basic_values();
    }
  }

  void note_step(double theta) {
    if (theta <= 1e-12) {
      if (++degenerate_run >= opt.degenerate_limit) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }

  LpStatus primal() {
    for (;;) {
      if (iterations >= opt.max_iterations) return LpStatus::IterationLimit;
      Phase phase = primal_feasible() ? Phase::Two : Phase::One;
      Eigen::VectorXd y(m);
      for (int p = 0; p < m; ++p) {
        const int b = head[u(p)];
        if (phase == Phase::Two) {
          y(p) = cost[u(b)];
        } else {
          const double v = x[u(b)];
          y(p) = v < lo[u(b)] - opt.primal_tolerance ? -1.0
                 : v > up[u(b)] + opt.primal_tolerance ? 1.0
                                                       : 0.0;
        }
      }
      factor.btran(y);

      int q = -1;
      double best = 0.0;
      double dir = 0.0;
      for (int j = 0; j < total; ++j) {
        const auto st = status[u(j)];
        if (st == VarStatus::Basic || lo[u(j)] == up[u(j)]) continue;
        const double d = (phase == Phase::Two ? cost[u(j)] : 0.0) - dot_column(y, j);
        double score = 0.0;
        double jdir = 0.0;
        if (st == VarStatus::AtLower && d < -opt.dual_tolerance) {
          score = -d;
          jdir = 1.0;
        } else if (st == VarStatus::AtUpper && d > opt.dual_tolerance) {
          score = d;
          jdir = -1.0;
        } else if (st == VarStatus::AtZero && std::abs(d) > opt.dual_tolerance) {
          score = std::abs(d);
          jdir = d < 0.0 ? 1.0 : -1.0;
        }
        if (jdir == 0.0) continue;
        if (bland) {
          q = j;
          dir = jdir;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
          dir = jdir;
        }
      }
      if (q < 0) return phase == Phase::Two ? LpStatus::Optimal : LpStatus::Infeasible;

      Eigen::VectorXd alpha = column(q);
      factor.ftran(alpha);

      // Harris two-pass ratio test.
      const double tol = opt.primal_tolerance;
      double theta_max = kInf;
      auto limits = [&](int p, double& relaxed, double& exact, double& target, VarStatus& st) {
        const double a = alpha(p);
        if (std::abs(a) <= opt.pivot_tolerance) return false;
        const double delta = -dir * a;
        const int b = head[u(p)];
        const double v = x[u(b)], l = lo[u(b)], h = up[u(b)];
        if (phase == Phase::One && v < l - tol) {
          if (delta <= 0.0) return false;
          relaxed = (l - v + tol) / delta;
          exact = (l - v) / delta;
          target = l;
          st = VarStatus::AtLower;
          return true;
        }
        if (phase == Phase::One && v > h + tol) {
          if (delta >= 0.0) return false;
          relaxed = (v - h + tol) / -delta;
          exact = (v - h) / -delta;
          target = h;
          st = VarStatus::AtUpper;
          return true;
        }
        if (delta < 0.0 && std::isfinite(l)) {
          relaxed = (v - l + tol) / -delta;
          exact = (v - l) / -delta;
          target = l;
          st = VarStatus::AtLower;
          return true;
        }
        if (delta > 0.0 && std::isfinite(h)) {
          relaxed = (h - v + tol) / delta;
          exact = (h - v) / delta;
          target = h;
          st = VarStatus::AtUpper;
          return true;
        }
        return false;
      };

      int r = -1;
      double theta = kInf;
      double leave_value = 0.0;
      VarStatus leave_status = VarStatus::AtLower;
      if (!bland) {
        for (int p = 0; p < m; ++p) {
          double relaxed, exact, target;
          VarStatus st;
          if (limits(p, relaxed, exact, target, st)) theta_max = std::min(theta_max, relaxed);
        }
        double best_alpha = 0.0;
        for (int p = 0; p < m; ++p) {
          double relaxed, exact, target;
          VarStatus st;
          if (!limits(p, relaxed, exact, target, st)) continue;
          if (exact <= theta_max && std::abs(alpha(p)) > best_alpha) {
            best_alpha = std::abs(alpha(p));
            r = p;
            theta = std::max(0.0, exact);
            leave_value = target;
            leave_status = st;
          }
        }
      } else {
        for (int p = 0; p < m; ++p) {
          double relaxed, exact, target;
          VarStatus st;
          if (!limits(p, relaxed, exact, target, st)) continue;
          exact = std::max(0.0, exact);
          if (exact < theta || (exact == theta && r >= 0 && head[u(p)] < head[u(r)])) {
            theta = exact;
            r = p;
            leave_value = target;
            leave_status = st;
          }
        }
      }

      const double range = up[u(q)] - lo[u(q)];
      if (r < 0 && !std::isfinite(range)) {
        if (phase == Phase::Two) return LpStatus::Unbounded;
        diag = "phase one ratio test found no blocking variable";
        return LpStatus::NumericalFailure;
      }
      ++iterations;
      if (std::isfinite(range) && (r < 0 || range <= theta)) {
        // Bound flip of the entering variable.
        for (int p = 0; p < m; ++p) x[u(head[u(p)])] -= dir * alpha(p) * range;
        status[u(q)] = dir > 0.0 ? VarStatus::AtUpper : VarStatus::AtLower;
        x[u(q)] = dir > 0.0 ? up[u(q)] : lo[u(q)];
        note_step(range);
        continue;
      }
      for (int p = 0; p < m; ++p) x[u(head[u(p)])] -= dir * alpha(p) * theta;
      x[u(q)] += dir * theta;
      note_step(theta);
      pivot(r, q, alpha, leave_value, leave_status);
    }
  }

  // Restores dual feasibility by flipping boxed variables; false if some
  // nonbasic variable without an opposite bound has the wrong reduced cost.
  bool make_dual_feasible(const Eigen::VectorXd& y) {
    bool flipped = false;
    for (int j = 0; j < total; ++j) {
      const auto st = status[u(j)];
      if (st == VarStatus::Basic || lo[u(j)] == up[u(j)]) continue;
      const double d = cost[u(j)] - dot_column(y, j);
      const bool boxed = std::isfinite(lo[u(j)]) && std::isfinite(up[u(j)]);
      if (st == VarStatus::AtLower && d < -opt.dual_tolerance) {
        if (!boxed) return false;
        status[u(j)] = VarStatus::AtUpper;
        flipped = true;
      } else if (st == VarStatus::AtUpper && d > opt.dual_tolerance) {
        if (!boxed) return false;
        status[u(j)] = VarStatus::AtLower;
        flipped = true;
      } else if (st == VarStatus::AtZero && std::abs(d) > opt.dual_tolerance) {
        return false;
      }
      if (flipped) place_nonbasic(j);
    }
    if (flipped) compute_basic_values();
    return true;
  }

  LpStatus dual() {
    long dual_iterations = 0;
    const long dual_cap = 50L * (m + n) + 1000;
    for (;;) {
      if (iterations >= opt.max_iterations) return LpStatus::IterationLimit;
      if (dual_iterations++ > dual_cap) return LpStatus::IterationLimit;
      int r = -1;
      double worst = 0.0;
      for (int p = 0; p < m; ++p) {
        const double inf = infeasibility(head[u(p)]);
        if (inf > worst) {
          worst = inf;
          r = p;
        }
      }
      if (r < 0) return LpStatus::Optimal;
      const int b = head[u(r)];
      const bool below = x[u(b)] < lo[u(b)];
      const double target = below ? lo[u(b)] : up[u(b)];
      const double sigma = below ? 1.0 : -1.0;

      Eigen::VectorXd y = phase_two_duals();
      Eigen::VectorXd rho = Eigen::VectorXd::Zero(m);
      rho(r) = 1.0;
      factor.btran(rho);

      std::vector<std::pair<int, double>> candidates;  // (j, alpha_rj)
      double theta_max = kInf;
      for (int j = 0; j < total; ++j) {
        const auto st = status[u(j)];
        if (st == VarStatus::Basic || lo[u(j)] == up[u(j)]) continue;
        const double a = dot_column(rho, j);
        if (std::abs(a) <= opt.pivot_tolerance) continue;
        double slack;
        const double d = cost[u(j)] - dot_column(y, j);
        if (st == VarStatus::AtLower) {
          if (!(sigma * a < 0.0)) continue;
          slack = std::max(d, 0.0);
        } else if (st == VarStatus::AtUpper) {
          if (!(sigma * a > 0.0)) continue;
          slack = std::max(-d, 0.0);
        } else {
          slack = std::abs(d);
        }
        candidates.emplace_back(j, a);
        theta_max = std::min(theta_max, (slack + opt.dual_tolerance) / std::abs(a));
        (void)slack;
      }
      if (candidates.empty()) return LpStatus::Infeasible;
      int q = -1;
      double best_alpha = 0.0;
      for (const auto& [j, a] : candidates) {
        const double d = cost[u(j)] - dot_column(y, j);
        const auto st = status[u(j)];
        const double slack = st == VarStatus::AtLower   ? std::max(d, 0.0)
                             : st == VarStatus::AtUpper ? std::max(-d, 0.0)
                                                        : std::abs(d);
        if (slack / std::abs(a) <= theta_max && std::abs(a) > best_alpha) {
          best_alpha = std::abs(a);
          q = j;
        }
      }
      Eigen::VectorXd alpha = column(q);
      factor.ftran(alpha);
      const double arq = dot_column(rho, q);
      if (std::abs(alpha(r) - arq) > 1e-7 * (1.0 + std::abs(arq))) {
        if (factor.updates() == 0) {
          diag = "dual simplex pivot mismatch after refactorization";
          return LpStatus::NumericalFailure;
        }
        factored = false;
        ensure_factored();
        compute_basic_values();
        continue;
      }
      ++iterations;
      const double delta = (x[u(b)] - target) / alpha(r);
      for (int p = 0; p < m; ++p) x[u(head[u(p)])] -= alpha(p) * delta;
      x[u(q)] += delta;
      note_step(std::abs(delta));
      pivot(r, q, alpha, target, below ? VarStatus::AtLower : VarStatus::AtUpper);
    }
  }

  LpStatus solve() {
    diag.clear();
    for (int attempt = 0; attempt < 4; ++attempt) {
      ensure_factored();
      if (values_dirty) compute_basic_values();
      if (!primal_feasible()) {
        Eigen::VectorXd y = phase_two_duals();
        if (make_dual_feasible(y)) {
          LpStatus s = dual();
          if (s == LpStatus::Infeasible) {
            // Confirm with a fresh factorization before trusting the ray.
            factored = false;
            ensure_factored();
            compute_basic_values();
            Eigen::VectorXd y2 = phase_two_duals();
            if (make_dual_feasible(y2) && dual() == LpStatus::Infeasible) return LpStatus::Infeasible;
          } else if (s == LpStatus::IterationLimit && iterations >= opt.max_iterations) {
            return s;
          }
        }
      }
      LpStatus s = primal();
      if (s != LpStatus::Optimal) {
        if (s == LpStatus::NumericalFailure && attempt < 3) {
          factored = false;
          continue;
        }
        return s;
      }
      // Verify against a fresh factorization.
      factored = false;
      ensure_factored();
      compute_basic_values();
      if (primal_feasible()) {
        duals = phase_two_duals();
        return LpStatus::Optimal;
      }
    }
    diag = "could not reach a verified optimal basis";
    return LpStatus::NumericalFailure;
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& lp, LpOptions options)
    : impl_(std::make_unique<Impl>(lp, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

void SimplexSolver::set_bounds(int col, double lower, double upper) {
  auto& im = *impl_;
  if (col < 0 || col >= im.n) throw SolverError("set_bounds: column out of range");
  im.lo[im.u(col)] = lower;
  im.up[im.u(col)] = upper;
  if (im.status[im.u(col)] != VarStatus::Basic) {
    const double before = im.x[im.u(col)];
    im.normalize_nonbasic(col);
    if (im.x[im.u(col)] != before) im.values_dirty = true;
  }
}

double SimplexSolver::lower(int col) const { return impl_->lo[impl_->u(col)]; }
double SimplexSolver::upper(int col) const { return impl_->up[impl_->u(col)]; }

LpStatus SimplexSolver::solve() { return impl_->solve(); }

Basis SimplexSolver::basis() const { return {impl_->head, impl_->status}; }

void SimplexSolver::set_basis(const Basis& basis) {
  auto& im = *impl_;
  if (basis.head.size() != static_cast<std::size_t>(im.m) ||
      basis.status.size() != static_cast<std::size_t>(im.total)) {
    throw SolverError("basis dimensions do not match the program");
  }
  im.head = basis.head;
  im.status = basis.status;
  std::fill(im.pos.begin(), im.pos.end(), -1);
  for (int p = 0; p < im.m; ++p) im.pos[im.u(im.head[im.u(p)])] = p;
  for (int j = 0; j < im.total; ++j) {
    if (im.status[im.u(j)] != VarStatus::Basic) im.normalize_nonbasic(j);
  }
  im.factored = false;
  im.values_dirty = true;
}

std::vector<double> SimplexSolver::primal() const {
  return {impl_->x.begin(), impl_->x.begin() + impl_->n};
}

std::vector<double> SimplexSolver::row_duals() const {
  std::vector<double> out(static_cast<std::size_t>(impl_->m), 0.0);
  for (int i = 0; i < impl_->m && i < impl_->duals.size(); ++i) {
    out[static_cast<std::size_t>(i)] = impl_->sign * impl_->duals(i);
  }
  return out;
}

double SimplexSolver::objective() const {
  double v = 0.0;
  for (int j = 0; j < impl_->n; ++j) {
    v += impl_->original_objective[impl_->u(j)] * impl_->x[impl_->u(j)];
  }
  return v;
}

long SimplexSolver::iterations() const { return impl_->iterations; }
const std::string& SimplexSolver::diagnostics() const { return impl_->diag; }

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
  SimplexSolver solver(lp, options);
  LpResult result;
  result.status = solver.solve();
  result.iterations = solver.iterations();
  result.diagnostics = solver.diagnostics();
  if (result.status == LpStatus::Optimal) {
    result.x = solver.primal();
    result.row_duals = solver.row_duals();
    result.objective = solver.objective();
  }
  return result;
}

}  // namespace bessbid::milp
