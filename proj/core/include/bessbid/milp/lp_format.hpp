#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "bessbid/milp/linear_program.hpp"

namespace bessbid::milp {

// Throws SolverError on empty, malformed or colliding column/row names.
void validate_lp_names(const LinearProgram& lp);

// CPLEX-style LP text. Every column is listed in the objective (zeros
// included) so that re-import reproduces the column order.
std::string export_lp_text(const LinearProgram& lp);
void write_lp(std::ostream& out, const LinearProgram& lp);

// Reads the subset of the LP format written by export_lp_text, plus the
// usual section aliases. Throws SolverError with a line number on bad input.
LinearProgram parse_lp_text(std::string_view text);

}  // namespace bessbid::milp
