#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace aefuse {

/// Dense row-major matrix of doubles. Batches are stored one sample per row.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds a matrix from nested braces; all rows must have equal length.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);
    static Matrix row_vector(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    /// Copies the listed rows, in order, into a new matrix.
    Matrix select_rows(std::span<const std::size_t> indices) const;
    /// Copies rows [begin, end).
    Matrix slice_rows(std::size_t begin, std::size_t end) const;

    std::string shape_string() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// a·b. Throws ShapeError naming both shapes when a.cols() != b.rows().
Matrix matmul(const Matrix& a, const Matrix& b);
/// a·bᵀ without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// aᵀ·b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

Matrix map(const Matrix& a, const std::function<double(double)>& f);
Matrix zip(const Matrix& a, const Matrix& b, const std::function<double(double, double)>& f);
Matrix scale(const Matrix& a, double s);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);

/// In-place a += s·b.
void axpy(Matrix& a, double s, const Matrix& b);

/// Adds the 1×cols row vector `row` to every row of `a`.
Matrix add_row_broadcast(const Matrix& a, const Matrix& row);
/// 1×cols matrix of column sums.
Matrix column_sums(const Matrix& a);
/// 1×cols matrix of column means. Throws DataError on an empty matrix.
Matrix column_means(const Matrix& a);

double sum(const Matrix& a);
double sum_squares(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

/// Throws ShapeError unless a and b have identical shapes.
void require_same_shape(const Matrix& a, const Matrix& b, const char* op);

}  // namespace aefuse
