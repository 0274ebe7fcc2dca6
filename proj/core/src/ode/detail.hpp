#pragma once

#include <vector>

#include "biocircuit/ode/types.hpp"

namespace biocircuit::ode::detail {

// Eigenvalue real parts of a row-major dim x dim matrix, sorted ascending.
std::vector<double> eigen_real_parts(const std::vector<double>& matrix, int dim);

Stability classify_from_real_parts(const std::vector<double>& real_parts);

// Solve A x = b in place (row-major A), Gaussian elimination with partial
// pivoting. Returns false on a numerically singular pivot.
bool solve_linear(std::vector<double> a, std::vector<double> b, int dim,
                  std::vector<double>& x);

}  // namespace biocircuit::ode::detail
