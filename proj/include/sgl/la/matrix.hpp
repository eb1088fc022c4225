#pragma once

#include <cstddef>
#include <vector>

namespace sgl::la {

// Row-major dense double matrix, zero-initialized.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

Matrix transpose(const Matrix& a);
// Frobenius norm and max |a_ij|
double frob_norm(const Matrix& a);
double max_abs(const Matrix& a);
// max_i |(Av)_i - lambda v_i| for a residual check
double eigen_residual(const Matrix& a, const std::vector<double>& v, double lambda);

} // namespace sgl::la
