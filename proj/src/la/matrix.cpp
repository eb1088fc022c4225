#include "sgl/la/matrix.hpp"

#include <cmath>

#include "sgl/simd/kernels.hpp"

namespace sgl::la {

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

double frob_norm(const Matrix& a) {
    return std::sqrt(simd::dot(a.data.data(), a.data.data(), a.data.size()));
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::fabs(v));
    return m;
}

double eigen_residual(const Matrix& a, const std::vector<double>& v, double lambda) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double av = simd::dot(a.row(i), v.data(), a.cols);
        worst = std::max(worst, std::fabs(av - lambda * v[i]));
    }
    return worst;
}

} // namespace sgl::la
