#ifndef DIFFINV_LINALG_HPP
#define DIFFINV_LINALG_HPP

#include <vector>

#include "diffinv/rat.hpp"

namespace diffinv {

// Solve the square system M x = rhs over the rational-function field by
// fraction-free (Bareiss) elimination with full pivoting on nonzero symbolic
// pivots. Throws math_error if the system is singular.
std::vector<Rat> solve_unique(const std::vector<std::vector<Rat>>& M,
                              const std::vector<Rat>& rhs);

// Determinant by the same elimination.
Rat determinant(const std::vector<std::vector<Rat>>& M);

} // namespace diffinv

#endif
