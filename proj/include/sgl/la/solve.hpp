#pragma once

#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::la {

// Gaussian elimination with partial pivoting. Throws SizeError on a
// numerically singular system.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Determinant via LU with partial pivoting (0.0 when singular).
double det(Matrix a);

} // namespace sgl::la
