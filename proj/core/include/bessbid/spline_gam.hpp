#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bessbid::gam {

enum class BasisKind { CubicRegression, PSpline, TensorInteraction };
enum class Covariate { Hour, Day, HourDay };

const char* to_string(BasisKind k);
const char* to_string(Covariate c);

// One smoother term. For TensorInteraction, `margins` holds the two marginal
// specs (hour first, day second) and `k` is ignored.
struct BasisSpec {
  BasisKind kind = BasisKind::CubicRegression;
  int k = 10;
  Covariate covariate = Covariate::Hour;
  bool cyclic = false;
  std::vector<BasisSpec> margins;

  static BasisSpec cubic(Covariate c, int k, bool cyclic = false);
  static BasisSpec pspline(Covariate c, int k);
  static BasisSpec tensor(BasisSpec hour_margin, BasisSpec day_margin);
};

// Covariate domain: hours live on [0, 23], days on [0, 6]; cyclic bases wrap
// with period 24 and 7.
struct CovariateDomain {
  double lower = 0.0;
  double upper = 0.0;
  double period = 0.0;
};
CovariateDomain domain_of(Covariate c);

// Univariate spline basis before identifiability constraints.
class MarginalBasis {
 public:
  MarginalBasis() = default;
  MarginalBasis(const BasisSpec& spec);

  int size() const { return static_cast<int>(size_); }
  const BasisSpec& spec() const { return spec_; }
  const Eigen::VectorXd& knots() const { return knots_; }

  // Basis row at x. Throws NumericError outside the covariate domain.
  Eigen::RowVectorXd evaluate(double x) const;
  Eigen::MatrixXd design(std::span<const double> x) const;
  // Integrated squared second derivative (cubic regression) or squared
  // second differences (P-spline). Constants are in the null space of both.
  const Eigen::MatrixXd& penalty() const { return penalty_; }

 private:
  BasisSpec spec_;
  Eigen::Index size_ = 0;
  CovariateDomain domain_;
  Eigen::VectorXd knots_;
  // Cubic regression: maps knot values to knot second derivatives.
  Eigen::MatrixXd second_derivative_map_;
  Eigen::MatrixXd penalty_;
};

// Absorbs a single linear constraint c^T beta = 0 by QR of c: returns the k x
// (k-1) null-space basis Z (first column of Q dropped).
Eigen::MatrixXd constraint_null_space(const Eigen::VectorXd& constraint);

// A smoother after identifiability absorption, able to re-evaluate its design
// rows for new covariate values.
class Smoother {
 public:
  Smoother() = default;
  // Builds marginal bases and computes the centering constraint from the
  // training covariates.
  Smoother(const BasisSpec& spec, std::span<const double> hours, std::span<const double> days);
  // Rebuilds from stored constraint vectors (deserialization).
  Smoother(const BasisSpec& spec, std::vector<Eigen::VectorXd> margin_constraints,
           Eigen::VectorXd tensor_constraint);

  const BasisSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(penalty_.rows()); }
  const Eigen::MatrixXd& penalty() const { return penalty_; }
  const std::vector<MarginalBasis>& margins() const { return margins_; }
  const std::vector<Eigen::VectorXd>& margin_constraints() const { return margin_constraints_; }
  // Empty unless a tensor-level sum-to-zero constraint was needed.
  const Eigen::VectorXd& tensor_constraint() const { return tensor_constraint_; }

  Eigen::MatrixXd design(std::span<const double> hours, std::span<const double> days) const;

 private:
  void finalize();
  Eigen::MatrixXd raw_design(std::span<const double> hours, std::span<const double> days) const;

  BasisSpec spec_;
  std::vector<MarginalBasis> margins_;
  std::vector<Eigen::VectorXd> margin_constraints_;
  std::vector<Eigen::MatrixXd> margin_null_spaces_;
  Eigen::VectorXd tensor_constraint_;
  Eigen::MatrixXd tensor_null_space_;
  Eigen::MatrixXd penalty_;
};

struct BasisBlock {
  Eigen::MatrixXd design;   // n x (size after constraint absorption)
  Eigen::MatrixXd penalty;  // matching symmetric PSD penalty
  Smoother smoother;
};

// Throws NumericError when k exceeds the number of unique covariate values or
// a value lies outside the covariate domain.
BasisBlock build_basis(const BasisSpec& spec, std::span<const double> hours,
                       std::span<const double> days);

struct SmootherFit {
  Smoother smoother;
  int offset = 0;  // first column in the full coefficient vector
  double lambda = 0.0;
  double edf = 0.0;
};

struct FitStats {
  int n = 0;
  double rss = 0.0;
  double tss = 0.0;
  double residual_variance = 0.0;
  double edf_total = 0.0;  // including the intercept
  double r2 = 0.0;
  double adjusted_r2 = 0.0;
  double gcv = 0.0;
  bool gcv_degenerate = false;
  bool ridge_used = false;
};

struct GamFit {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;  // full vector, coefficients[0] == intercept
  std::vector<SmootherFit> smoothers;
  FitStats stats;

  // Coefficient block of smoother j (excluding intercept).
  Eigen::VectorXd block(std::size_t j) const {
    const auto& s = smoothers.at(j);
    return coefficients.segment(s.offset, s.smoother.size());
  }
};

// Minimizes ||y - X b||^2 + sum_j lambda_j b^T S_j b. Throws NumericError on
// non-finite responses, negative lambdas or a rank-deficient design.
GamFit fit_penalized_ls(std::span<const double> y, std::span<const double> hours,
                        std::span<const double> days, const std::vector<BasisSpec>& smoothers,
                        std::span<const double> lambdas);

struct GcvOptions {
  double log10_lambda_min = -4.0;
  double log10_lambda_max = 8.0;
  int grid_points = 25;
  int max_sweeps = 4;
  double golden_tolerance = 1e-3;  // in log10(lambda)
};

GamFit select_lambda_gcv(std::span<const double> y, std::span<const double> hours,
                         std::span<const double> days, const std::vector<BasisSpec>& smoothers,
                         const GcvOptions& options = {});

Eigen::VectorXd predict(const GamFit& fit, std::span<const double> hours,
                        std::span<const double> days);

// Contribution of smoother j alone at the given covariates.
Eigen::VectorXd predict_term(const GamFit& fit, std::size_t j, std::span<const double> hours,
                             std::span<const double> days);

// 1 - (1 - R^2)(n - 1)/(n - edf - 1) with edf summed over smoothers.
double adjusted_r2(const GamFit& fit);

inline constexpr int kGamFitJsonVersion = 1;
std::string to_json(const GamFit& fit);
GamFit gam_fit_from_json(const std::string& text);

}  // namespace bessbid::gam
