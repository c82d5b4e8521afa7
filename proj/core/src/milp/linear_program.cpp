#include "bessbid/milp/linear_program.hpp"

#include <algorithm>
#include <cmath>

#include "bessbid/error.hpp"

namespace bessbid::milp {

int LinearProgram::add_column(std::string name, double lower, double upper, double objective,
                              bool integer) {
  col_names_.push_back(std::move(name));
  col_lower_.push_back(lower);
  col_upper_.push_back(upper);
  objective_.push_back(objective);
  is_integer_.push_back(integer ? 1 : 0);
  return num_cols() - 1;
}

int LinearProgram::add_row(std::string name, std::span<const Term> terms, RowSense row_sense,
                           double rhs) {
  std::vector<Term> merged(terms.begin(), terms.end());
  std::sort(merged.begin(), merged.end(), [](const Term& a, const Term& b) { return a.col < b.col; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i].col < 0 || merged[i].col >= num_cols()) {
      throw SolverError("row '" + name + "' references unknown column " +
                        std::to_string(merged[i].col));
    }
    if (out > 0 && merged[out - 1].col == merged[i].col) {
      merged[out - 1].coef += merged[i].coef;
    } else {
      merged[out++] = merged[i];
    }
  }
  merged.resize(out);
  for (const auto& t : merged) {
    if (t.coef != 0.0) values_.push_back(t);
  }
  row_start_.push_back(values_.size());
  row_names_.push_back(std::move(name));
  row_sense_.push_back(row_sense);
  rhs_.push_back(rhs);
  return num_rows() - 1;
}

void LinearProgram::set_col_bounds(int j, double lower, double upper) {
  col_lower_[static_cast<std::size_t>(j)] = lower;
  col_upper_[static_cast<std::size_t>(j)] = upper;
}

std::span<const Term> LinearProgram::row(int i) const {
  const auto b = row_start_[static_cast<std::size_t>(i)];
  const auto e = row_start_[static_cast<std::size_t>(i) + 1];
  return {values_.data() + b, e - b};
}

void LinearProgram::validate() const {
  for (int j = 0; j < num_cols(); ++j) {
    const double lo = col_lower(j), hi = col_upper(j);
    if (std::isnan(lo) || std::isnan(hi) || std::isnan(objective(j)) || !std::isfinite(objective(j))) {
      throw SolverError("column '" + col_name(j) + "' has NaN or infinite data");
    }
    if (lo > hi) throw SolverError("column '" + col_name(j) + "' has lower > upper");
    if (is_integer(j) && (!std::isfinite(lo) || !std::isfinite(hi))) {
      throw SolverError("integer column '" + col_name(j) + "' needs finite bounds");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rhs(i))) throw SolverError("row '" + row_name(i) + "' has a non-finite rhs");
    for (const auto& t : row(i)) {
      if (!std::isfinite(t.coef)) {
        throw SolverError("row '" + row_name(i) + "' has a non-finite coefficient");
      }
    }
  }
}

double LinearProgram::evaluate_objective(std::span<const double> x) const {
  double v = 0.0;
  for (int j = 0; j < num_cols(); ++j) v += objective(j) * x[static_cast<std::size_t>(j)];
  return v;
}

double LinearProgram::row_activity(int i, std::span<const double> x) const {
  double v = 0.0;
  for (const auto& t : row(i)) v += t.coef * x[static_cast<std::size_t>(t.col)];
  return v;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    const double v = x[static_cast<std::size_t>(j)];
    worst = std::max({worst, col_lower(j) - v, v - col_upper(j)});
  }
  for (int i = 0; i < num_rows(); ++i) {
    const double a = row_activity(i, x);
    switch (row_sense(i)) {
      case RowSense::LessEqual: worst = std::max(worst, a - rhs(i)); break;
      case RowSense::GreaterEqual: worst = std::max(worst, rhs(i) - a); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(a - rhs(i))); break;
    }
  }
  return worst;
}

LinearProgram::Csc LinearProgram::to_csc() const {
  Csc csc;
  csc.start.assign(static_cast<std::size_t>(num_cols()) + 1, 0);
  for (const auto& t : values_) ++csc.start[static_cast<std::size_t>(t.col) + 1];
  for (int j = 0; j < num_cols(); ++j) {
    csc.start[static_cast<std::size_t>(j) + 1] += csc.start[static_cast<std::size_t>(j)];
  }
  csc.index.resize(values_.size());
  csc.value.resize(values_.size());
  std::vector<int> fill(csc.start.begin(), csc.start.end() - 1);
  for (int i = 0; i < num_rows(); ++i) {
    for (const auto& t : row(i)) {
      const auto pos = static_cast<std::size_t>(fill[static_cast<std::size_t>(t.col)]++);
      csc.index[pos] = i;
      csc.value[pos] = t.coef;
    }
  }
  return csc;
}

}  // namespace bessbid::milp
