#pragma once

#include <string>
#include <vector>

#include "lapinv/invariants.hpp"

namespace lapinv {

/// a_{20xy}, g_{x}, p_{x}: subscript concatenation with x, y, z for n <= 3
/// and x_1, ..., x_n otherwise.
std::string latex_variable(VarId v);
std::string latex(const Polynomial &p);
std::string latex(const JetExpr &e);

/// align* block with one line per record and its assumptions.
std::string latex(const std::vector<InvariantRecord> &records);

} // namespace lapinv
