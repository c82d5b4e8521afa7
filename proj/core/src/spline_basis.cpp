#include <algorithm>
#include <cmath>
#include <set>

#include "bessbid/error.hpp"
#include "bessbid/spline_gam.hpp"

namespace bessbid::gam {

const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::CubicRegression: return "cr";
    case BasisKind::PSpline: return "ps";
    case BasisKind::TensorInteraction: return "ti";
  }
  return "?";
}

const char* to_string(Covariate c) {
  switch (c) {
    case Covariate::Hour: return "hour";
    case Covariate::Day: return "day";
    case Covariate::HourDay: return "hour:day";
  }
  return "?";
}

BasisSpec BasisSpec::cubic(Covariate c, int k, bool cyclic) {
  return BasisSpec{BasisKind::CubicRegression, k, c, cyclic, {}};
}

BasisSpec BasisSpec::pspline(Covariate c, int k) {
  return BasisSpec{BasisKind::PSpline, k, c, false, {}};
}

BasisSpec BasisSpec::tensor(BasisSpec hour_margin, BasisSpec day_margin) {
  BasisSpec s{BasisKind::TensorInteraction, 0, Covariate::HourDay, false, {}};
  s.margins = {std::move(hour_margin), std::move(day_margin)};
  return s;
}

CovariateDomain domain_of(Covariate c) {
  switch (c) {
    case Covariate::Hour: return {0.0, 23.0, 24.0};
    case Covariate::Day: return {0.0, 6.0, 7.0};
    case Covariate::HourDay: break;
  }
  throw NumericError("interaction covariate has no univariate domain");
}

namespace {

constexpr double kDomainSlack = 1e-9;

// Natural cubic spline parameterized by its values at the knots.
void cubic_regression_matrices(const Eigen::VectorXd& knots, Eigen::MatrixXd& f_map,
                               Eigen::MatrixXd& penalty) {
  const Eigen::Index k = knots.size();
  Eigen::VectorXd h = knots.tail(k - 1) - knots.head(k - 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k - 2, k);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k - 2, k - 2);
  for (Eigen::Index i = 0; i < k - 2; ++i) {
    d(i, i) = 1.0 / h(i);
    d(i, i + 1) = -1.0 / h(i) - 1.0 / h(i + 1);
    d(i, i + 2) = 1.0 / h(i + 1);
    b(i, i) = (h(i) + h(i + 1)) / 3.0;
    if (i + 1 < k - 2) {
      b(i, i + 1) = h(i + 1) / 6.0;
      b(i + 1, i) = h(i + 1) / 6.0;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  Eigen::MatrixXd inner = llt.solve(d);
  f_map = Eigen::MatrixXd::Zero(k, k);
  f_map.middleRows(1, k - 2) = inner;
  penalty = d.transpose() * inner;
  penalty = 0.5 * (penalty + penalty.transpose()).eval();
}

// Cyclic variant: knot values and second derivatives wrap around the period.
void cyclic_cubic_matrices(Eigen::Index k, double spacing, Eigen::MatrixXd& f_map,
                           Eigen::MatrixXd& penalty) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index prev = (i + k - 1) % k;
    const Eigen::Index next = (i + 1) % k;
    b(i, i) += 2.0 * spacing / 3.0;
    b(i, prev) += spacing / 6.0;
    b(i, next) += spacing / 6.0;
    d(i, i) += -2.0 / spacing;
    d(i, prev) += 1.0 / spacing;
    d(i, next) += 1.0 / spacing;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  f_map = llt.solve(d);
  penalty = d.transpose() * f_map;
  penalty = 0.5 * (penalty + penalty.transpose()).eval();
}

Eigen::MatrixXd second_difference_penalty(Eigen::Index k) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k - 2, k);
  for (Eigen::Index i = 0; i < k - 2; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -2.0;
    d(i, i + 2) = 1.0;
  }
  return d.transpose() * d;
}

Eigen::MatrixXd rowwise_kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      out.col(i * b.cols() + j) = a.col(i).cwiseProduct(b.col(j));
    }
  }
  return out;
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::span<const double> covariate_values(Covariate c, std::span<const double> hours,
                                         std::span<const double> days) {
  return c == Covariate::Hour ? hours : days;
}

void check_unique_count(const BasisSpec& spec, std::span<const double> values) {
  std::set<double> unique(values.begin(), values.end());
  if (static_cast<std::size_t>(spec.k) > unique.size()) {
    throw NumericError(std::string("basis dimension k=") + std::to_string(spec.k) +
                       " exceeds the " + std::to_string(unique.size()) + " unique " +
                       to_string(spec.covariate) + " values");
  }
}

}  // namespace

MarginalBasis::MarginalBasis(const BasisSpec& spec) : spec_(spec) {
  if (spec.kind == BasisKind::TensorInteraction) {
    throw NumericError("tensor interaction is not a marginal basis");
  }
  if (spec.covariate == Covariate::HourDay) {
    throw NumericError("marginal basis needs a univariate covariate");
  }
  domain_ = domain_of(spec.covariate);
  const Eigen::Index k = spec.k;

  if (spec.kind == BasisKind::CubicRegression) {
    if (k < 3) throw NumericError("cubic regression basis needs k >= 3");
    size_ = k;
    if (spec.cyclic) {
      const double spacing = domain_.period / static_cast<double>(k);
      knots_ = Eigen::VectorXd::LinSpaced(k, domain_.lower, domain_.lower + spacing * (k - 1));
      cyclic_cubic_matrices(k, spacing, second_derivative_map_, penalty_);
    } else {
      knots_ = Eigen::VectorXd::LinSpaced(k, domain_.lower, domain_.upper);
      cubic_regression_matrices(knots_, second_derivative_map_, penalty_);
    }
  } else {
    if (spec.cyclic) throw NumericError("cyclic P-spline bases are not supported");
    if (k < 4) throw NumericError("cubic P-spline basis needs k >= 4");
    size_ = k;
    const Eigen::Index segments = k - 3;
    const double dx = (domain_.upper - domain_.lower) / static_cast<double>(segments);
    knots_.resize(k + 4);
    for (Eigen::Index i = 0; i < k + 4; ++i) {
      knots_(i) = domain_.lower + static_cast<double>(i - 3) * dx;
    }
    penalty_ = second_difference_penalty(k);
  }
}

Eigen::RowVectorXd MarginalBasis::evaluate(double x) const {
  const bool cyclic = spec_.kind == BasisKind::CubicRegression && spec_.cyclic;
  const double hi = cyclic ? domain_.lower + domain_.period : domain_.upper;
  if (!(x >= domain_.lower - kDomainSlack && x <= hi + kDomainSlack)) {
    throw NumericError(std::string(to_string(spec_.covariate)) + " value " + std::to_string(x) +
                       " outside the covariate domain");
  }
  x = std::clamp(x, domain_.lower, hi);

  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(size_);
  if (spec_.kind == BasisKind::CubicRegression) {
    const Eigen::Index k = size_;
    Eigen::Index j = 0;
    double left = 0.0, right = 0.0;
    Eigen::Index next = 0;
    if (cyclic) {
      const double spacing = domain_.period / static_cast<double>(k);
      j = std::min<Eigen::Index>(static_cast<Eigen::Index>((x - domain_.lower) / spacing), k - 1);
      next = (j + 1) % k;
      left = knots_(j);
      right = left + spacing;
    } else {
      const double spacing = (domain_.upper - domain_.lower) / static_cast<double>(k - 1);
      j = std::min<Eigen::Index>(static_cast<Eigen::Index>((x - domain_.lower) / spacing), k - 2);
      next = j + 1;
      left = knots_(j);
      right = knots_(next);
    }
    const double h = right - left;
    const double am = (right - x) / h;
    const double ap = (x - left) / h;
    const double cm = ((right - x) * (right - x) * (right - x) / h - h * (right - x)) / 6.0;
    const double cp = ((x - left) * (x - left) * (x - left) / h - h * (x - left)) / 6.0;
    row(j) += am;
    row(next) += ap;
    row += cm * second_derivative_map_.row(j) + cp * second_derivative_map_.row(next);
    return row;
  }

  // Cubic B-splines via the triangular Cox-de Boor recursion.
  const Eigen::Index k = size_;
  const auto& t = knots_;
  Eigen::Index span = 3;
  while (span < k - 1 && x >= t(span + 1)) ++span;
  double n[4] = {1.0, 0.0, 0.0, 0.0};
  double left[4] = {0, 0, 0, 0};
  double right[4] = {0, 0, 0, 0};
  for (int d = 1; d <= 3; ++d) {
    left[d] = x - t(span + 1 - d);
    right[d] = t(span + d) - x;
    double saved = 0.0;
    for (int r = 0; r < d; ++r) {
      const double temp = n[r] / (right[r + 1] + left[d - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[d - r] * temp;
    }
    n[d] = saved;
  }
  for (int r = 0; r < 4; ++r) row(span - 3 + r) = n[r];
  return row;
}

Eigen::MatrixXd MarginalBasis::design(std::span<const double> x) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(x.size()), size_);
  for (std::size_t i = 0; i < x.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = evaluate(x[i]);
  return out;
}

Eigen::MatrixXd constraint_null_space(const Eigen::VectorXd& constraint) {
  const Eigen::Index k = constraint.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraint);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  return q.rightCols(k - 1);
}

Smoother::Smoother(const BasisSpec& spec, std::span<const double> hours,
                   std::span<const double> days)
    : spec_(spec) {
  if (spec.kind == BasisKind::TensorInteraction) {
    if (spec.margins.size() != 2) throw NumericError("tensor interaction needs two margins");
    std::vector<Eigen::MatrixXd> centered;
    for (const auto& m : spec.margins) {
      auto values = covariate_values(m.covariate, hours, days);
      check_unique_count(m, values);
      margins_.emplace_back(m);
      Eigen::MatrixXd x = margins_.back().design(values);
      Eigen::VectorXd c = x.colwise().sum().transpose();
      margin_constraints_.push_back(c);
      margin_null_spaces_.push_back(constraint_null_space(c));
      centered.push_back(x * margin_null_spaces_.back());
    }
    Eigen::MatrixXd t = rowwise_kronecker(centered[0], centered[1]);
    Eigen::VectorXd sums = t.colwise().sum().transpose();
    const double scale = std::max(1.0, t.cwiseAbs().sum());
    if (sums.cwiseAbs().maxCoeff() > 1e-12 * scale) tensor_constraint_ = sums;
  } else {
    if (spec.k < 3) throw NumericError("univariate basis needs k >= 3");
    auto values = covariate_values(spec.covariate, hours, days);
    check_unique_count(spec, values);
    margins_.emplace_back(spec);
    Eigen::MatrixXd x = margins_.back().design(values);
    margin_constraints_.push_back(x.colwise().sum().transpose());
  }
  finalize();
}

Smoother::Smoother(const BasisSpec& spec, std::vector<Eigen::VectorXd> margin_constraints,
                   Eigen::VectorXd tensor_constraint)
    : spec_(spec),
      margin_constraints_(std::move(margin_constraints)),
      tensor_constraint_(std::move(tensor_constraint)) {
  if (spec.kind == BasisKind::TensorInteraction) {
    for (const auto& m : spec.margins) margins_.emplace_back(m);
  } else {
    margins_.emplace_back(spec);
  }
  if (margin_constraints_.size() != margins_.size()) {
    throw NumericError("constraint count does not match the number of margins");
  }
  finalize();
}

void Smoother::finalize() {
  margin_null_spaces_.clear();
  for (std::size_t i = 0; i < margins_.size(); ++i) {
    if (margin_constraints_[i].size() != margins_[i].size()) {
      throw NumericError("constraint length does not match basis size");
    }
    margin_null_spaces_.push_back(constraint_null_space(margin_constraints_[i]));
  }
  if (spec_.kind == BasisKind::TensorInteraction) {
    const auto& z0 = margin_null_spaces_[0];
    const auto& z1 = margin_null_spaces_[1];
    Eigen::MatrixXd s0 = z0.transpose() * margins_[0].penalty() * z0;
    Eigen::MatrixXd s1 = z1.transpose() * margins_[1].penalty() * z1;
    Eigen::MatrixXd s = kronecker(s0, Eigen::MatrixXd::Identity(s1.rows(), s1.cols())) +
                        kronecker(Eigen::MatrixXd::Identity(s0.rows(), s0.cols()), s1);
    if (tensor_constraint_.size() > 0) {
      tensor_null_space_ = constraint_null_space(tensor_constraint_);
      s = tensor_null_space_.transpose() * s * tensor_null_space_;
    } else {
      tensor_null_space_.resize(0, 0);
    }
    penalty_ = 0.5 * (s + s.transpose());
  } else {
    const auto& z = margin_null_spaces_[0];
    Eigen::MatrixXd s = z.transpose() * margins_[0].penalty() * z;
    penalty_ = 0.5 * (s + s.transpose());
  }
}

Eigen::MatrixXd Smoother::raw_design(std::span<const double> hours,
                                     std::span<const double> days) const {
  if (spec_.kind == BasisKind::TensorInteraction) {
    Eigen::MatrixXd a = margins_[0].design(covariate_values(margins_[0].spec().covariate, hours, days)) *
                        margin_null_spaces_[0];
    Eigen::MatrixXd b = margins_[1].design(covariate_values(margins_[1].spec().covariate, hours, days)) *
                        margin_null_spaces_[1];
    return rowwise_kronecker(a, b);
  }
  return margins_[0].design(covariate_values(spec_.covariate, hours, days)) *
         margin_null_spaces_[0];
}

Eigen::MatrixXd Smoother::design(std::span<const double> hours,
                                 std::span<const double> days) const {
  if (hours.size() != days.size()) throw NumericError("hour and day vectors differ in length");
  Eigen::MatrixXd x = raw_design(hours, days);
  if (tensor_null_space_.size() > 0) return x * tensor_null_space_;
  return x;
}

BasisBlock build_basis(const BasisSpec& spec, std::span<const double> hours,
                       std::span<const double> days) {
  Smoother smoother(spec, hours, days);
  BasisBlock block;
  block.design = smoother.design(hours, days);
  block.penalty = smoother.penalty();
  block.smoother = std::move(smoother);
  return block;
}

}  // namespace bessbid::gam
