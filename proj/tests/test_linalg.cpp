#include <gtest/gtest.h>

#include <cmath>

#include "aefuse/error.hpp"
#include "aefuse/matrix.hpp"
#include "aefuse/rng.hpp"

namespace aefuse {
namespace {

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
    const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
    EXPECT_EQ(matmul(Matrix::identity(2), b), b);
}

TEST(Matmul, HandComputedProduct) {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{5, 6}, {7, 8}});
    EXPECT_EQ(matmul(a, b), Matrix::from_rows({{19, 22}, {43, 50}}));
}

TEST(Matmul, ZeroAnnihilates) {
    Rng rng(3);
    const Matrix a = rng_uniform(rng, -1, 1, 3, 4);
    EXPECT_EQ(matmul(a, Matrix(4, 2)), Matrix(3, 2));
}

TEST(Matmul, ShapeErrorNamesBothShapes) {
    try {
        matmul(Matrix(2, 3), Matrix(2, 3));
        FAIL() << "expected ShapeError";
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("[2x3]"), std::string::npos);
        EXPECT_NE(msg.find("[2x3]"), msg.rfind("[2x3]"));
    }
}

TEST(Matmul, TransposedVariantsAgreeWithExplicitTranspose) {
    Rng rng(11);
    const Matrix a = rng_normal(rng, 0, 1, 4, 3);
    const Matrix b = rng_normal(rng, 0, 1, 5, 3);
    const Matrix c = rng_normal(rng, 0, 1, 4, 2);
    // Kernels may fuse multiply-adds differently, so allow round-off.
    EXPECT_LE(max_abs(subtract(matmul_nt(a, b), matmul(a, transpose(b)))), 1e-14);
    EXPECT_LE(max_abs(subtract(matmul_tn(a, c), matmul(transpose(a), c))), 1e-14);
}

TEST(Matmul, AssociativeOnRandomTriples) {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 1 + rng.below(5), k = 1 + rng.below(5), l = 1 + rng.below(5),
                          n = 1 + rng.below(5);
        const Matrix a = rng_uniform(rng, -2, 2, m, k);
        const Matrix b = rng_uniform(rng, -2, 2, k, l);
        const Matrix c = rng_uniform(rng, -2, 2, l, n);
        const Matrix lhs = matmul(matmul(a, b), c);
        const Matrix rhs = matmul(a, matmul(b, c));
        EXPECT_LE(max_abs(subtract(lhs, rhs)), 1e-9);
    }
}

TEST(Transpose, ProductRule) {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = rng_uniform(rng, -3, 3, 3, 4);
        const Matrix b = rng_uniform(rng, -3, 3, 4, 2);
        EXPECT_LE(max_abs(subtract(transpose(matmul(a, b)), matmul(transpose(b), transpose(a)))),
                  1e-12);
    }
}

TEST(Transpose, InvolutionRowToColumnAndSymmetry) {
    Rng rng(7);
    const Matrix a = rng_uniform(rng, -1, 1, 3, 5);
    EXPECT_EQ(transpose(transpose(a)), a);
    EXPECT_EQ(transpose(Matrix::from_rows({{1, 2, 3}})), Matrix::from_rows({{1}, {2}, {3}}));
    const Matrix s = Matrix::from_rows({{1, 2}, {2, 5}});
    EXPECT_EQ(transpose(s), s);
}

TEST(Elementwise, MapZipScale) {
    Rng rng(8);
    const Matrix a = rng_uniform(rng, -1, 1, 3, 3);
    EXPECT_EQ(map(a, [](double t) { return t; }), a);
    EXPECT_EQ(scale(a, 0.0), Matrix(3, 3));
    EXPECT_EQ(zip(a, a, [](double x, double y) { return x - y; }), Matrix(3, 3));
    EXPECT_THROW(zip(a, Matrix(2, 3), [](double x, double) { return x; }), ShapeError);
    EXPECT_THROW(add(a, Matrix(3, 2)), ShapeError);
}

TEST(Elementwise, BroadcastAndColumnReductions) {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    EXPECT_EQ(add_row_broadcast(a, Matrix::from_rows({{10, 20}})),
              Matrix::from_rows({{11, 22}, {13, 24}}));
    EXPECT_EQ(column_sums(a), Matrix::from_rows({{4, 6}}));
    EXPECT_EQ(column_means(a), Matrix::from_rows({{2, 3}}));
    EXPECT_THROW(column_means(Matrix(0, 2)), DataError);
}

TEST(RngUniform, DegenerateRangeIsZero) {
    Rng rng(1);
    EXPECT_EQ(rng_uniform(rng, 0, 0, 4, 4), Matrix(4, 4));
}

TEST(RngUniform, SameSeedSameMatrix) {
    Rng a(42), b(42);
    EXPECT_EQ(rng_uniform(a, -1, 1, 10, 10), rng_uniform(b, -1, 1, 10, 10));
}

TEST(RngUniform, EntriesInHalfOpenRangeAndMeanNearHalf) {
    Rng rng(2024);
    const Matrix u = rng_uniform(rng, 0, 1, 100, 100);
    for (double v : u.data()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
    EXPECT_NEAR(sum(u) / 1e4, 0.5, 0.02);
}

TEST(RngUniform, RejectsInvertedRange) {
    Rng rng(1);
    EXPECT_THROW(rng_uniform(rng, 1, 0, 2, 2), ConfigError);
}

TEST(RngNormal, ZeroSdGivesMean) {
    Rng rng(1);
    EXPECT_EQ(rng_normal(rng, 2.5, 0.0, 3, 3), Matrix(3, 3, 2.5));
}

TEST(RngNormal, SampleVarianceNearOne) {
    Rng rng(99);
    const Matrix z = rng_normal(rng, 0, 1, 100, 100);
    const double mean = sum(z) / 1e4;
    double var = 0.0;
    for (double v : z.data()) var += (v - mean) * (v - mean);
    var /= (1e4 - 1);
    EXPECT_NEAR(var, 1.0, 0.1);
}

TEST(RngNormal, SameSeedSameOutputAndRejectsNegativeSd) {
    Rng a(7), b(7);
    EXPECT_EQ(rng_normal(a, 0, 1, 5, 5), rng_normal(b, 0, 1, 5, 5));
    EXPECT_THROW(rng_normal(a, 0, -1, 1, 1), ConfigError);
}

TEST(Rng, PermutationIsBijection) {
    Rng rng(3);
    auto p = rng.permutation(100);
    std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

}  // namespace
}  // namespace aefuse
