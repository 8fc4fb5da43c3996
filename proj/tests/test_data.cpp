#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "aefuse/data.hpp"
#include "aefuse/error.hpp"

namespace aefuse {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("aefuse_data_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_text(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }
    fs::path write_bytes(const std::string& name, const std::vector<std::uint8_t>& bytes) {
        const fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        return p;
    }

    fs::path dir_;
};

using Idx = TempDir;
using Csv = TempDir;

TEST(IdxHeader, CanonicalMnistTrainImages) {
    // 00 00 08 03 | 60000 | 28 | 28
    const std::vector<std::uint8_t> bytes{0, 0, 8, 3, 0, 0, 0xEA, 0x60, 0, 0, 0, 28, 0, 0, 0, 28};
    const IdxHeader h = parse_idx_header(bytes, "header");
    EXPECT_EQ(h.magic(), kIdxImagesMagic);
    EXPECT_EQ(h.dims, (std::vector<std::uint32_t>{60000, 28, 28}));
}

TEST(IdxHeader, RejectsBadPrefixAndShortInput) {
    EXPECT_THROW(parse_idx_header({1, 0, 8, 3}, "x"), ParseError);
    EXPECT_THROW(parse_idx_header({0, 0, 8, 3, 0, 0}, "x"), ParseError);
}

TEST_F(Idx, HandBuiltFileByteExact) {
    const auto images = write_bytes("img.idx", {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2,
                                                0, 128, 255, 64});
    const auto labels = write_bytes("lbl.idx", {0, 0, 8, 1, 0, 0, 0, 1, 7});
    const Dataset ds = load_idx(images, labels);
    ASSERT_EQ(ds.size(), 1u);
    ASSERT_EQ(ds.dim(), 4u);
    EXPECT_EQ(ds.x, Matrix::from_rows({{0, 128, 255, 64}}));
    EXPECT_EQ(*ds.labels, std::vector<int>{7});
}

TEST_F(Idx, WrongMagicTruncationAndCountMismatch) {
    const auto images = write_bytes("img.idx", {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 2,
                                                1, 2, 3, 4});
    EXPECT_THROW(load_idx(images, images), ParseError);
    EXPECT_THROW(load_idx(images, write_bytes("one.idx", {0, 0, 8, 1, 0, 0, 0, 1, 7})), DataError);
    EXPECT_THROW(load_idx(write_bytes("short.idx", {0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 2, 1})),
                 ParseError);
}

TEST_F(Idx, WriteReadRoundTripPlainAndGzip) {
    std::vector<std::uint8_t> payload(3 * 4 * 5);
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i * 37);
    for (const char* name : {"t.idx", "t.idx.gz"}) {
        write_idx(dir_ / name, {3, 4, 5}, payload);
        const Dataset ds = load_idx(dir_ / name);
        ASSERT_EQ(ds.size(), 3u);
        ASSERT_EQ(ds.dim(), 20u);
        for (std::size_t i = 0; i < payload.size(); ++i) EXPECT_EQ(ds.x.data()[i], payload[i]);
    }
}

TEST_F(Csv, NumericWithoutLabels) {
    CsvOptions opts;
    opts.has_header = false;
    const Dataset ds = load_csv(write_text("a.csv", "1,2\n3.5,-4e1\n"), opts);
    EXPECT_EQ(ds.x, Matrix::from_rows({{1, 2}, {3.5, -40}}));
    EXPECT_FALSE(ds.labels.has_value());
}

TEST_F(Csv, ErrorsCiteRowAndColumn) {
    try {
        load_csv(write_text("b.csv", "a,b\n1,2\n3,oops\n"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_csv(write_text("c.csv", "a,b\n1,2\n3\n")), ParseError);
}

TEST_F(Csv, TextLabelsNumberedByFirstAppearance) {
    CsvOptions opts;
    opts.label_column = "cls";
    const Dataset ds = load_csv(write_text("d.csv", "x,cls\n1,M\n2,B\n3,M\n"), opts);
    EXPECT_EQ(*ds.labels, (std::vector<int>{0, 1, 0}));
    EXPECT_EQ(ds.dim(), 1u);
}

TEST(Wdbc, ShapeAndClassBalance) {
    CsvOptions opts;
    opts.label_column = "diagnosis";
    const Dataset ds = load_csv(fs::path(AEFUSE_DATA_DIR) / "wdbc.csv", opts);
    EXPECT_EQ(ds.size(), 569u);
    EXPECT_EQ(ds.dim(), 30u);
    std::size_t malignant = 0;
    for (int l : *ds.labels) malignant += l == 1;
    EXPECT_EQ(std::set<int>(ds.labels->begin(), ds.labels->end()).size(), 2u);
    EXPECT_NEAR(static_cast<double>(malignant) / 569.0, 0.373, 0.001);

    const Dataset n = normalize(ds, NormalizeMode::PerColumn);
    for (double v : n.x.data()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(max_abs(subtract(denormalize(n, n.x), ds.x)), 1e-12 * max_abs(ds.x));
}

TEST(Normalize, ImageEndpointsAndIdempotence) {
    Dataset img;
    img.x = Matrix::from_rows({{0, 255, 51}});
    img.feature_range = {0.0, 255.0};
    const Dataset n = normalize(img, NormalizeMode::GlobalRange);
    EXPECT_EQ(n.x, Matrix::from_rows({{0, 1, 0.2}}));

    Dataset unit;
    unit.x = Matrix::from_rows({{0, 1}, {0.25, 0.5}, {1, 0}});
    EXPECT_EQ(normalize(unit, NormalizeMode::PerColumn).x, unit.x);
}

TEST(Normalize, ConstantColumnWarnsAndBecomesZero) {
    static int warnings = 0;
    warnings = 0;
    const WarningHandler previous = set_warning_handler([](const std::string&) { ++warnings; });
    Dataset ds;
    ds.x = Matrix::from_rows({{3, 1}, {3, 2}});
    const Dataset n = normalize(ds, NormalizeMode::PerColumn);
    set_warning_handler(previous);
    EXPECT_EQ(n.x, Matrix::from_rows({{0, 0}, {0, 1}}));
    EXPECT_EQ(warnings, 1);
}

TEST(Subsample, DeterministicWithoutReplacement) {
    Dataset ds;
    ds.x = Matrix(10, 1);
    for (std::size_t i = 0; i < 10; ++i) ds.x(i, 0) = static_cast<double>(i);
    const Dataset a = subsample(ds, 10, 4), b = subsample(ds, 10, 4);
    EXPECT_EQ(a.x, b.x);
    std::set<double> seen(a.x.data().begin(), a.x.data().end());
    EXPECT_EQ(seen.size(), 10u);
    EXPECT_THROW(subsample(ds, 11, 4), DataError);

    const auto [train, test] = split(ds, 0.7, 1);
    EXPECT_EQ(train.size(), 7u);
    EXPECT_EQ(test.size(), 3u);
}

TEST(Mnist, BundledSubsetLoads) {
    const fs::path dir(AEFUSE_DATA_DIR);
    const Dataset ds = load_idx(dir / "mnist-train-images-idx3-ubyte.gz",
                                dir / "mnist-train-labels-idx1-ubyte.gz");
    EXPECT_EQ(ds.dim(), 784u);
    EXPECT_EQ(ds.size(), 8000u);
    const Dataset sub = subsample(ds, 1000, 3);
    EXPECT_EQ(sub.size(), 1000u);
    EXPECT_EQ(sub.labels->size(), 1000u);
}

}  // namespace
}  // namespace aefuse
