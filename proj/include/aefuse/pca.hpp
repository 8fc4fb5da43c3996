#pragma once

#include <cstddef>
#include <vector>

#include "aefuse/matrix.hpp"

namespace aefuse {

/// Principal components of a dataset.
struct PcaModel {
    std::vector<double> mean;          // d
    Matrix components;                 // k×d, orthonormal rows
    std::vector<double> eigenvalues;   // k, descending
    /// All d eigenvalues of the covariance, descending; the tail beyond k is
    /// the variance left unexplained.
    std::vector<double> all_eigenvalues;
};

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // row i is the unit eigenvector of values[i]
    std::size_t sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Iterates until the
/// off-diagonal Frobenius norm is at most tol·max(1, ||A||_F).
EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tol = 1e-12,
                                std::size_t max_sweeps = 100);

/// Sample covariance with divisor n - 1.
Matrix covariance(const Matrix& x, std::vector<double>* mean_out = nullptr);

/// Top-k principal components. Each component's largest-magnitude entry is
/// made positive. Throws ConfigError if k is 0 or exceeds d, DataError if n < 2.
PcaModel fit_pca(const Matrix& x, std::size_t k);

/// (x - mean) · componentsᵀ
Matrix pca_encode(const PcaModel& model, const Matrix& x);
/// codes · components + mean
Matrix pca_reconstruct(const PcaModel& model, const Matrix& codes);

}  // namespace aefuse
