#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bessbid::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { Maximize, Minimize };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Term {
  int col = 0;
  double coef = 0.0;
};

// Sparse mixed-integer linear program stored row-wise as it is built.
class LinearProgram {
 public:
  ObjectiveSense sense = ObjectiveSense::Maximize;

  int add_column(std::string name, double lower, double upper, double objective,
                 bool integer = false);
  // Duplicate column references within a row are summed; exact zeros dropped.
  int add_row(std::string name, std::span<const Term> terms, RowSense row_sense, double rhs);
  int add_row(std::string name, std::initializer_list<Term> terms, RowSense row_sense,
              double rhs) {
    return add_row(std::move(name), std::span<const Term>(terms.begin(), terms.size()),
                   row_sense, rhs);
  }

  int num_cols() const { return static_cast<int>(col_lower_.size()); }
  int num_rows() const { return static_cast<int>(row_sense_.size()); }
  std::size_t num_nonzeros() const { return values_.size(); }

  const std::string& col_name(int j) const { return col_names_[static_cast<std::size_t>(j)]; }
  double col_lower(int j) const { return col_lower_[static_cast<std::size_t>(j)]; }
  double col_upper(int j) const { return col_upper_[static_cast<std::size_t>(j)]; }
  double objective(int j) const { return objective_[static_cast<std::size_t>(j)]; }
  bool is_integer(int j) const { return is_integer_[static_cast<std::size_t>(j)] != 0; }

  void set_col_bounds(int j, double lower, double upper);
  void set_objective(int j, double c) { objective_[static_cast<std::size_t>(j)] = c; }
  void set_integer(int j, bool integer) { is_integer_[static_cast<std::size_t>(j)] = integer ? 1 : 0; }

  const std::string& row_name(int i) const { return row_names_[static_cast<std::size_t>(i)]; }
  RowSense row_sense(int i) const { return row_sense_[static_cast<std::size_t>(i)]; }
  double rhs(int i) const { return rhs_[static_cast<std::size_t>(i)]; }
  std::span<const Term> row(int i) const;

  // Throws SolverError on NaN data or integer columns with infinite bounds.
  void validate() const;

  double evaluate_objective(std::span<const double> x) const;
  double row_activity(int i, std::span<const double> x) const;
  // Largest bound or row violation of x, ignoring integrality.
  double max_violation(std::span<const double> x) const;

  // Column-compressed copy of the constraint matrix.
  struct Csc {
    std::vector<int> start;
    std::vector<int> index;
    std::vector<double> value;
  };
  Csc to_csc() const;

 private:
  std::vector<std::string> col_names_;
  std::vector<double> col_lower_;
  std::vector<double> col_upper_;
  std::vector<double> objective_;
  std::vector<std::uint8_t> is_integer_;

  std::vector<std::string> row_names_;
  std::vector<RowSense> row_sense_;
  std::vector<double> rhs_;
  std::vector<std::size_t> row_start_{0};
  std::vector<Term> values_;
};

}  // namespace bessbid::milp
