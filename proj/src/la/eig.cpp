#include "sgl/la/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgl/error.hpp"
#include "sgl/rng/rng.hpp"
#include "sgl/simd/kernels.hpp"

namespace sgl::la {

namespace {

void sort_desc_with_vectors(std::vector<double>& vals, Matrix& vecs) {
    const std::size_t n = vals.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    std::vector<double> sv(n);
    Matrix out(vecs.rows, vecs.cols);
    for (std::size_t k = 0; k < n; ++k) {
        sv[k] = vals[order[k]];
        for (std::size_t i = 0; i < vecs.rows; ++i) out(i, k) = vecs(i, order[k]);
    }
    vals = std::move(sv);
    vecs = std::move(out);
}

// Implicit QL with eigenvector accumulation on a tridiagonal matrix.
// d: diagonal (in/out eigenvalues), e: subdiagonal in e[1..n-1], z: identity
// in, rotations accumulated out (columns are eigenvectors).
void tql2(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = 2.22e-16;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                check_invariant(iter++ < 60, "tql2 failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow_restart = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow_restart = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        for (std::size_t k = 0; k < n; ++k) {
                            f = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
                            (*z)(k, i) = c * (*z)(k, i) - s * f;
                        }
                    }
                }
                if (underflow_restart) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Householder reduction to tridiagonal form, eigenvalues-only variant.
void tridiagonalize_values(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = z.rows;
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k < i; ++k) scale += std::fabs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (std::size_t k = 0; k < i; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    g = 0.0;
                    for (std::size_t k = 0; k < j + 1; ++k) g += z(j, k) * z(i, k);
                    for (std::size_t k = j + 1; k < i; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j < i; ++j) {
                    f = z(i, j);
                    const double gj = e[j] - hh * f;
                    e[j] = gj;
                    for (std::size_t k = 0; k < j + 1; ++k) z(j, k) -= f * e[k] + gj * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) d[i] = z(i, i);
}

} // namespace

EigResult eig_sym_jacobi(Matrix a, int max_sweeps) {
    const std::size_t n = a.rows;
    check_invariant(a.rows == a.cols, "eig_sym_jacobi needs a square matrix");
    Matrix v = Matrix::identity(n);
    if (n == 0) return {{}, v};

    double norm = frob_norm(a);
    if (norm == 0.0) norm = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= 1e-14 * norm) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i);
    sort_desc_with_vectors(vals, v);
    return {std::move(vals), std::move(v)};
}

std::vector<double> eig_sym_values(Matrix a) {
    check_invariant(a.rows == a.cols, "eig_sym_values needs a square matrix");
    std::vector<double> d, e;
    tridiagonalize_values(a, d, e);
    tql2(d, e, nullptr);
    std::sort(d.begin(), d.end(), std::greater<double>());
    return d;
}

TopkResult eig_sym_topk(const Matrix& a, int k, std::uint64_t seed, int max_iter, double tol) {
    const std::size_t n = a.rows;
    check_invariant(a.rows == a.cols, "eig_sym_topk needs a square matrix");
    require(k >= 1 && static_cast<std::size_t>(k) <= n, "ParamError", "top-k rank out of range");
    if (max_iter <= 0) max_iter = static_cast<int>(std::min<std::size_t>(n, 420));
    max_iter = static_cast<int>(std::min<std::size_t>(max_iter, n));
    max_iter = std::max(max_iter, k);

    // scale reference for tolerances
    double norm_est = max_abs(a);
    if (norm_est == 0.0) norm_est = 1.0;

    rng::Engine eng(seed, 0x7a9c);
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta; // beta[j] couples q_j and q_{j+1}

    auto random_orthonormal = [&]() {
        std::vector<double> w(n);
        for (;;) {
            for (auto& x : w) x = eng.gaussian();
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis)
                    simd::axpy(-simd::dot(w.data(), q.data(), n), q.data(), w.data(), n);
            const double nrm = std::sqrt(simd::dot(w.data(), w.data(), n));
            if (nrm > 1e-8) {
                simd::scal(1.0 / nrm, w.data(), n);
                return w;
            }
        }
    };

    basis.push_back(random_orthonormal());

    std::vector<double> ritz_vals;
    Matrix small_vecs;
    int m = 0;
    const int first_check = std::min(max_iter, std::max(3 * k + 30, 90));

    std::vector<double> w(n);
    while (true) {
        // extend the Krylov basis one step
        const auto& qj = basis.back();
        simd::matvec(a.data.data(), n, n, qj.data(), w.data());
        const double aj = simd::dot(w.data(), qj.data(), n);
        alpha.push_back(aj);
        ++m;
        if (m == max_iter) break;

        simd::axpy(-aj, qj.data(), w.data(), n);
        if (m >= 2) simd::axpy(-beta.back(), basis[m - 2].data(), w.data(), n);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis)
                simd::axpy(-simd::dot(w.data(), q.data(), n), q.data(), w.data(), n);
        double bj = std::sqrt(simd::dot(w.data(), w.data(), n));
        if (bj <= 1e-13 * norm_est) {
            // invariant subspace hit; restart with a fresh direction
            basis.push_back(random_orthonormal());
            beta.push_back(0.0);
        } else {
            simd::scal(1.0 / bj, w.data(), n);
            basis.push_back(w);
            beta.push_back(bj);
        }

        if (m >= first_check && (m % 30 == 0 || m == max_iter - 1)) {
            // Ritz values of the current tridiagonal; stop when the top-k
            // residual bounds |beta_m * y[m-1]| are below tolerance.
            std::vector<double> d = alpha, e(m, 0.0);
            for (int i = 1; i < m; ++i) e[i] = beta[i - 1];
            Matrix zz = Matrix::identity(m);
            tql2(d, e, &zz);
            std::vector<double> dv = d;
            sort_desc_with_vectors(dv, zz);
            const double tail = beta.empty() ? 0.0 : beta.back();
            double worst = 0.0;
            for (int i = 0; i < k; ++i)
                worst = std::max(worst, std::fabs(tail * zz(m - 1, i)));
            if (worst <= tol * norm_est) {
                ritz_vals = dv;
                small_vecs = std::move(zz);
                break;
            }
        }
    }

    if (ritz_vals.empty()) {
        std::vector<double> d = alpha, e(m, 0.0);
        for (int i = 1; i < m; ++i) e[i] = beta[i - 1];
        Matrix zz = Matrix::identity(m);
        tql2(d, e, &zz);
        sort_desc_with_vectors(d, zz);
        ritz_vals = d;
        small_vecs = std::move(zz);
    }

    TopkResult out;
    out.values.assign(ritz_vals.begin(), ritz_vals.begin() + k);
    out.vectors = Matrix(n, k);
    out.residuals.assign(k, 0.0);
    std::vector<double> rv(n);
    for (int i = 0; i < k; ++i) {
        std::fill(rv.begin(), rv.end(), 0.0);
        for (int j = 0; j < m; ++j) simd::axpy(small_vecs(j, i), basis[j].data(), rv.data(), n);
        const double nrm = std::sqrt(simd::dot(rv.data(), rv.data(), n));
        if (nrm > 0.0) simd::scal(1.0 / nrm, rv.data(), n);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, i) = rv[r];
        out.residuals[i] = eigen_residual(a, rv, out.values[i]);
    }
    return out;
}

} // namespace sgl::la
