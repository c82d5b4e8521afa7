#include "bessbid/spline_gam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bessbid/error.hpp"

namespace bessbid::gam {
namespace {

struct Solved {
  Eigen::VectorXd beta;
  std::vector<double> edf;  // per smoother
  double edf_total = 0.0;
  double rss = 0.0;
  double gcv = 0.0;
  bool ridge_used = false;
};

// Design, cross products and penalties for one response; re-solved for each
// candidate set of smoothing parameters.
class PenalizedProblem {
 public:
  PenalizedProblem(std::span<const double> y, std::span<const double> hours,
                   std::span<const double> days, const std::vector<BasisSpec>& specs) {
    if (hours.size() != y.size() || days.size() != y.size()) {
      throw NumericError("response and covariate lengths differ");
    }
    if (y.empty()) throw NumericError("empty response");
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!std::isfinite(y[i])) {
        throw NumericError("non-finite response value at index " + std::to_string(i));
      }
    }
    n_ = static_cast<Eigen::Index>(y.size());
    y_ = Eigen::Map<const Eigen::VectorXd>(y.data(), n_);

    std::vector<BasisBlock> blocks;
    Eigen::Index p = 1;
    for (const auto& spec : specs) {
      blocks.push_back(build_basis(spec, hours, days));
      offsets_.push_back(p);
      p += blocks.back().design.cols();
    }
    x_.resize(n_, p);
    x_.col(0).setOnes();
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      x_.middleCols(offsets_[j], blocks[j].design.cols()) = blocks[j].design;
      penalties_.push_back(blocks[j].penalty);
      smoothers_.push_back(std::move(blocks[j].smoother));
    }
    if (n_ < p) {
      throw NumericError("rank deficiency: " + std::to_string(n_) + " observations for " +
                         std::to_string(p) + " coefficients");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x_);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
      throw NumericError("rank deficiency: design rank " + std::to_string(qr.rank()) + " < " +
                         std::to_string(p) + " columns");
    }
    xtx_ = x_.transpose() * x_;
    xty_ = x_.transpose() * y_;
    const double mean = y_.mean();
    tss_ = (y_.array() - mean).square().sum();
  }

  std::size_t smoother_count() const { return penalties_.size(); }

  Solved solve(std::span<const double> lambdas) const {
    if (lambdas.size() != penalties_.size()) {
      throw NumericError("expected " + std::to_string(penalties_.size()) +
                         " smoothing parameters, got " + std::to_string(lambdas.size()));
    }
    Eigen::MatrixXd a = xtx_;
    for (std::size_t j = 0; j < penalties_.size(); ++j) {
      if (!(lambdas[j] >= 0.0) || !std::isfinite(lambdas[j])) {
        throw NumericError("smoothing parameter must be finite and >= 0");
      }
      const auto& s = penalties_[j];
      a.block(offsets_[j], offsets_[j], s.rows(), s.cols()) += lambdas[j] * s;
    }
    Solved out;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      const double ridge = 1e-10 * std::max(1.0, a.diagonal().maxCoeff());
      a.diagonal().array() += ridge;
      llt.compute(a);
      out.ridge_used = true;
      if (llt.info() != Eigen::Success) throw NumericError("penalized system is not positive definite");
    }
    out.beta = llt.solve(xty_);
    // One step of iterative refinement keeps the normal-equation residual
    // small for heavily penalized systems.
    Eigen::VectorXd r = xty_ - a * out.beta;
    out.beta += llt.solve(r);

    Eigen::MatrixXd f = llt.solve(xtx_);
    out.edf_total = f.trace();
    for (std::size_t j = 0; j < penalties_.size(); ++j) {
      out.edf.push_back(f.diagonal().segment(offsets_[j], penalties_[j].rows()).sum());
    }
    out.rss = (y_ - x_ * out.beta).squaredNorm();
    const double denom = static_cast<double>(n_) - out.edf_total;
    out.gcv = denom > 0.0 ? static_cast<double>(n_) * out.rss / (denom * denom)
                          : std::numeric_limits<double>::infinity();
    return out;
  }

  GamFit make_fit(const Solved& s, std::span<const double> lambdas) const {
    GamFit fit;
    fit.coefficients = s.beta;
    fit.intercept = s.beta(0);
    for (std::size_t j = 0; j < penalties_.size(); ++j) {
      fit.smoothers.push_back({smoothers_[j], static_cast<int>(offsets_[j]), lambdas[j], s.edf[j]});
    }
    auto& st = fit.stats;
    st.n = static_cast<int>(n_);
    st.rss = s.rss;
    st.tss = tss_;
    st.edf_total = s.edf_total;
    st.gcv = s.gcv;
    st.ridge_used = s.ridge_used;
    double edf_smooth = 0.0;
    for (double e : s.edf) edf_smooth += e;
    const double dof = static_cast<double>(n_) - s.edf_total;
    st.residual_variance = dof > 0.0 ? s.rss / dof : std::numeric_limits<double>::quiet_NaN();
    if (tss_ > 0.0) {
      st.r2 = 1.0 - s.rss / tss_;
    } else {
      st.r2 = s.rss <= 1e-20 ? 1.0 : 0.0;
    }
    const double denom = static_cast<double>(n_) - edf_smooth - 1.0;
    st.adjusted_r2 = denom > 0.0
                         ? 1.0 - (1.0 - st.r2) * (static_cast<double>(n_) - 1.0) / denom
                         : std::numeric_limits<double>::quiet_NaN();
    return fit;
  }

 private:
  Eigen::Index n_ = 0;
  Eigen::VectorXd y_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  double tss_ = 0.0;
  std::vector<Eigen::Index> offsets_;
  std::vector<Eigen::MatrixXd> penalties_;
  std::vector<Smoother> smoothers_;
};

}  // namespace

GamFit fit_penalized_ls(std::span<const double> y, std::span<const double> hours,
                        std::span<const double> days, const std::vector<BasisSpec>& smoothers,
                        std::span<const double> lambdas) {
  PenalizedProblem problem(y, hours, days, smoothers);
  return problem.make_fit(problem.solve(lambdas), lambdas);
}

GamFit select_lambda_gcv(std::span<const double> y, std::span<const double> hours,
                         std::span<const double> days, const std::vector<BasisSpec>& smoothers,
                         const GcvOptions& options) {
  if (options.grid_points < 2 || options.log10_lambda_max <= options.log10_lambda_min) {
    throw NumericError("invalid GCV grid");
  }
  PenalizedProblem problem(y, hours, days, smoothers);
  const std::size_t m = problem.smoother_count();
  if (m == 0) {
    std::vector<double> none;
    return problem.make_fit(problem.solve(none), none);
  }

  std::vector<double> grid(static_cast<std::size_t>(options.grid_points));
  for (int i = 0; i < options.grid_points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        options.log10_lambda_min + (options.log10_lambda_max - options.log10_lambda_min) * i /
                                       (options.grid_points - 1);
  }

  // A response without variance fits exactly at every lambda; its GCV values
  // are round-off and count as flat.
  double mean = 0.0, var = 0.0;
  for (double v : y) mean += v / static_cast<double>(y.size());
  for (double v : y) var += (v - mean) * (v - mean) / static_cast<double>(y.size());
  // Spread at the rounding level of y counts as a constant response; GCV
  // would otherwise chase that noise.
  const double scale = std::max(std::abs(mean), std::sqrt(var));
  const double eps_scale = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  const double flat_floor = std::max(eps_scale * eps_scale, 1e-300);
  const bool constant_y = var <= flat_floor;

  std::vector<double> log_lambda(m, 0.0);
  std::vector<double> lambdas(m, 1.0);
  auto score = [&](std::size_t j, double log_value) {
    auto trial = lambdas;
    trial[j] = std::pow(10.0, log_value);
    return problem.solve(trial).gcv;
  };

  double best = problem.solve(lambdas).gcv;
  bool all_flat = true;
  for (int sweep = 0; sweep < options.max_sweeps && !constant_y; ++sweep) {
    const double sweep_start = best;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> values(grid.size());
      std::size_t arg = 0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        values[g] = score(j, grid[g]);
        if (values[g] < values[arg]) arg = g;
      }
      const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
      if (sweep == 0 && std::isfinite(*hi_it) && *hi_it > flat_floor &&
          (*hi_it - *lo_it) > 1e-12 * std::max(1e-300, std::abs(*lo_it))) {
        all_flat = false;
      }
      double best_log = grid[arg];
      double best_value = values[arg];

      // Golden-section refinement between the neighbouring grid points.
      double a = grid[arg == 0 ? 0 : arg - 1];
      double b = grid[std::min(arg + 1, grid.size() - 1)];
      const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - ratio * (b - a);
      double d = a + ratio * (b - a);
      double fc = score(j, c);
      double fd = score(j, d);
      while (b - a > options.golden_tolerance) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - ratio * (b - a);
          fc = score(j, c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + ratio * (b - a);
          fd = score(j, d);
        }
      }
      const double mid = 0.5 * (a + b);
      const double fm = score(j, mid);
      if (fm < best_value) {
        best_value = fm;
        best_log = mid;
      }
      if (best_value <= best) {
        log_lambda[j] = best_log;
        lambdas[j] = std::pow(10.0, best_log);
        best = best_value;
      }
    }
    if (sweep == 0 && all_flat) break;
    if (sweep_start - best <= 1e-10 * std::abs(sweep_start)) break;
  }

  // Nothing to choose between: take the smoothest candidate.
  if (all_flat) {
    for (std::size_t j = 0; j < m; ++j) lambdas[j] = std::pow(10.0, grid.back());
  }
  GamFit fit = problem.make_fit(problem.solve(lambdas), lambdas);
  fit.stats.gcv_degenerate = all_flat;
  return fit;
}

Eigen::VectorXd predict_term(const GamFit& fit, std::size_t j, std::span<const double> hours,
                             std::span<const double> days) {
  return fit.smoothers.at(j).smoother.design(hours, days) * fit.block(j);
}

Eigen::VectorXd predict(const GamFit& fit, std::span<const double> hours,
                        std::span<const double> days) {
  if (hours.size() != days.size()) throw NumericError("hour and day vectors differ in length");
  Eigen::VectorXd out =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(hours.size()), fit.intercept);
  for (std::size_t j = 0; j < fit.smoothers.size(); ++j) out += predict_term(fit, j, hours, days);
  return out;
}

double adjusted_r2(const GamFit& fit) {
  double edf = 0.0;
  for (const auto& s : fit.smoothers) edf += s.edf;
  const double n = fit.stats.n;
  if (n <= edf + 1.0) {
    throw NumericError("adjusted R^2 undefined: n <= edf + 1");
  }
  double r2 = fit.stats.r2;
  return 1.0 - (1.0 - r2) * (n - 1.0) / (n - edf - 1.0);
}

}  // namespace bessbid::gam
