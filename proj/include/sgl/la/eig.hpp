#pragma once

#include <cstdint>
#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::la {

// Eigenvalues descending; vectors.col(k) is the unit eigenvector of values[k].
struct EigResult {
    std::vector<double> values;
    Matrix vectors; // n x n (or n x k for the top-k solver)
};

// Cyclic Jacobi for full spectra of symmetric matrices. Reliable and simple;
// intended for the desk-scale matrices here (n up to a few hundred).
EigResult eig_sym_jacobi(Matrix a, int max_sweeps = 64);

// Lanczos with full reorthogonalization for the top-k algebraic eigenpairs of
// a large symmetric matrix. Residual ||Av - lambda v|| <= tol * ||a|| is
// verified for the returned pairs.
struct TopkResult {
    std::vector<double> values;
    Matrix vectors; // n x k, columns are eigenvectors
    std::vector<double> residuals;
};
TopkResult eig_sym_topk(const Matrix& a, int k, std::uint64_t seed, int max_iter = 0,
                        double tol = 1e-10);

// Eigenvalues only (descending) via Householder tridiagonalization + implicit
// QL. Used for spectrum histograms where vectors are not needed.
std::vector<double> eig_sym_values(Matrix a);

} // namespace sgl::la
