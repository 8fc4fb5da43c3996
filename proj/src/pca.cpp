#include "aefuse/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aefuse/error.hpp"

namespace aefuse {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tol, std::size_t max_sweeps) {
    const std::size_t n = symmetric.rows();
    if (symmetric.cols() != n) throw ShapeError("jacobi_eigen: matrix " + symmetric.shape_string() + " is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (symmetric(i, j) != symmetric(j, i)) throw DataError("jacobi_eigen: matrix is not symmetric");

    Matrix a = symmetric;
    Matrix v = Matrix::identity(n);  // columns are eigenvectors
    const double threshold = tol * std::max(1.0, std::sqrt(sum_squares(a)));

    EigenDecomposition out;
    while (off_diagonal_norm(a) > threshold) {
        if (out.sweeps == max_sweeps) throw Error("jacobi_eigen: no convergence");
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                auto row_p = a.row(p);
                auto row_q = a.row(q);
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = row_p[k];
                    const double aqk = row_q[k];
                    row_p[k] = c * apk - s * aqk;
                    row_q[k] = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        out.values[r] = a(order[r], order[r]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v(k, order[r]);
    }
    return out;
}

Matrix covariance(const Matrix& x, std::vector<double>* mean_out) {
    if (x.rows() < 2) throw DataError("covariance needs at least two rows, got " + std::to_string(x.rows()));
    const Matrix mean = column_means(x);
    const Matrix centered = add_row_broadcast(x, scale(mean, -1.0));
    Matrix cov = scale(matmul_tn(centered, centered), 1.0 / static_cast<double>(x.rows() - 1));
    // Exact symmetry for the eigensolver.
    for (std::size_t i = 0; i < cov.rows(); ++i)
        for (std::size_t j = i + 1; j < cov.cols(); ++j) cov(j, i) = cov(i, j);
    if (mean_out) mean_out->assign(mean.data().begin(), mean.data().end());
    return cov;
}

PcaModel fit_pca(const Matrix& x, std::size_t k) {
    const std::size_t d = x.cols();
    if (k == 0 || k > d)
        throw ConfigError("PCA needs 1 <= k <= d, got k=" + std::to_string(k) + ", d=" + std::to_string(d));
    if (x.rows() < 2) throw DataError("PCA needs at least two samples, got " + std::to_string(x.rows()));

    PcaModel model;
    const Matrix cov = covariance(x, &model.mean);
    const EigenDecomposition eig = jacobi_eigen(cov);
    model.all_eigenvalues = eig.values;
    model.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
    model.components = eig.vectors.slice_rows(0, k);
    for (std::size_t r = 0; r < k; ++r) {
        auto row = model.components.row(r);
        const auto largest = std::max_element(row.begin(), row.end(),
                                              [](double a, double b) { return std::abs(a) < std::abs(b); });
        if (*largest < 0.0)
            for (double& v : row) v = -v;
    }
    return model;
}

Matrix pca_encode(const PcaModel& model, const Matrix& x) {
    if (x.cols() != model.mean.size())
        throw ShapeError("pca_encode: data " + x.shape_string() + " for a " +
                         std::to_string(model.mean.size()) + "-dimensional model");
    const Matrix centered = add_row_broadcast(x, scale(Matrix::row_vector(model.mean), -1.0));
    return matmul_nt(centered, model.components);
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& codes) {
    if (codes.cols() != model.components.rows())
        throw ShapeError("pca_reconstruct: codes " + codes.shape_string() + " for " +
                         std::to_string(model.components.rows()) + " components");
    return add_row_broadcast(matmul(codes, model.components), Matrix::row_vector(model.mean));
}

}  // namespace aefuse
