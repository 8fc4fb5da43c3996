#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aefuse/model_io.hpp"
#include "cli.hpp"
#include "render.hpp"

namespace aefuse {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result aefuse_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "aefuse");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Pgm {
    std::size_t width = 0, height = 0;
    int maxval = 0;
    std::vector<int> pixels;
};

Pgm read_pgm(const fs::path& p) {
    std::ifstream f(p);
    std::string magic;
    Pgm img;
    f >> magic >> img.width >> img.height >> img.maxval;
    EXPECT_EQ(magic, "P2");
    for (int v; f >> v;) img.pixels.push_back(v);
    return img;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("aefuse_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("AEFUSE_SEED");
    }
    void TearDown() override {
        fs::remove_all(dir_);
        unsetenv("AEFUSE_SEED");
    }

    // 4-column CSV with a label column, values in a rank-2 pattern.
    std::string tiny_csv(std::size_t rows = 20) {
        const fs::path p = dir_ / "tiny.csv";
        std::ofstream f(p);
        f << "a,b,c,d,label\n";
        Rng rng(5);
        for (std::size_t r = 0; r < rows; ++r) {
            const double s = rng.uniform(), t = rng.uniform();
            f << s << ',' << t << ',' << (s + t) / 2 << ',' << 1 - s << ',' << (s > 0.5) << '\n';
        }
        return p.string();
    }

    std::string out(const std::string& name) { return (dir_ / name).string(); }

    fs::path dir_;
};

TEST_F(Cli, ZeroEpochsWritesInitialModelAndEmptyLoss) {
    const std::string csv = tiny_csv();
    const Result r = aefuse_cli({"train", "--csv", csv, "--label-column", "label", "--encoding-dim",
                                 "2", "--epochs", "0", "--seed", "9", "--out", out("run")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir_ / "run" / "loss.csv"), "epoch,loss,penalty\n");
    AeConfig cfg;
    cfg.input_dim = 4;
    cfg.encoding_dim = 2;
    Rng rng(9);
    EXPECT_EQ(load_model(dir_ / "run" / "model.aef"), build_autoencoder(cfg, rng));
    const auto manifest = nlohmann::json::parse(slurp(dir_ / "run" / "run.json"));
    EXPECT_EQ(manifest["seed"], 9);
    EXPECT_EQ(manifest["config"]["optimizer"], "rmsprop");
    EXPECT_EQ(manifest["config"]["loss"], "xent");
}

TEST_F(Cli, TrainWritesOneLossRowPerEpochAndIsReproducible) {
    const std::string csv = tiny_csv();
    for (const char* name : {"a", "b"}) {
        const Result r = aefuse_cli({"train", "--csv", csv, "--label-column", "label",
                                     "--encoding-dim", "2", "--epochs", "3", "--batch-size", "8",
                                     "--denoising", "--out", out(name)});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_NE(r.out.find("final loss"), std::string::npos);
    }
    const std::string loss = slurp(dir_ / "a" / "loss.csv");
    EXPECT_EQ(std::count(loss.begin(), loss.end(), '\n'), 4);
    EXPECT_EQ(loss, slurp(dir_ / "b" / "loss.csv"));
    EXPECT_EQ(slurp(dir_ / "a" / "model.aef"), slurp(dir_ / "b" / "model.aef"));
}

TEST_F(Cli, SeedFallsBackToEnvironment) {
    setenv("AEFUSE_SEED", "42", 1);
    const Result r = aefuse_cli({"train", "--csv", tiny_csv(), "--label-column", "label",
                                 "--encoding-dim", "2", "--epochs", "0", "--out", out("env")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "env" / "run.json"))["seed"], 42);
    setenv("AEFUSE_SEED", "forty-two", 1);
    EXPECT_EQ(aefuse_cli({"train", "--csv", tiny_csv(), "--epochs", "0", "--out", out("bad")}).code, 1);
}

TEST_F(Cli, RobustForcesCorrentropyWithWarning) {
    const Result r = aefuse_cli({"train", "--csv", tiny_csv(), "--label-column", "label", "--robust",
                                 "--loss", "xent", "--encoding-dim", "2", "--epochs", "1", "--out",
                                 out("robust")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("warning: --robust overrides --loss xent"), std::string::npos) << r.err;
    EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "robust" / "run.json"))["config"]["loss"], "corr");
}

TEST_F(Cli, ConflictingFlagsRejectedBeforeTraining) {
    const std::string csv = tiny_csv();
    const std::vector<std::vector<std::string>> bad{
        {"--rho", "0.1"},
        {"--corruption-level", "0.3"},
        {"--lambda", "0.1"},
        {"--contractive-weight", "1"},
        {"--kernel-sigma", "0.5"},
        {"--contractive", "--hidden-dims", "3"},
        {"--sparse", "--activation", "relu"},
        {"--loss", "xent", "--out-activation", "tanh"},
        {"--pretrain-epochs", "2"},
    };
    for (const auto& extra : bad) {
        std::vector<std::string> args{"train", "--csv", csv, "--encoding-dim", "2", "--out", out("x")};
        args.insert(args.end(), extra.begin(), extra.end());
        const Result r = aefuse_cli(args);
        EXPECT_EQ(r.code, 1) << extra.front();
        EXPECT_NE(r.err.find("error:"), std::string::npos);
        EXPECT_FALSE(fs::exists(dir_ / "x" / "model.aef")) << extra.front();
    }
}

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(aefuse_cli({}).code, 2);
    EXPECT_EQ(aefuse_cli({"train", "--no-such-flag"}).code, 2);
    EXPECT_EQ(aefuse_cli({"train", "--optimizer", "lbfgs"}).code, 2);
    EXPECT_EQ(aefuse_cli({"--help"}).code, 0);
}

TEST_F(Cli, MissingDataIsAnError) {
    const Result r = aefuse_cli({"train", "--images", out("missing.idx"), "--out", out("m")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("missing.idx"), std::string::npos) << r.err;
}

TEST_F(Cli, ReconstructIdentityNetReproducesOriginals) {
    const std::string csv = tiny_csv(16);
    ASSERT_EQ(aefuse_cli({"train", "--csv", csv, "--label-column", "label", "--encoding-dim", "4",
                          "--activation", "linear", "--out-activation", "linear", "--loss", "mse",
                          "--optimizer", "adam", "--lr", "0.01", "--epochs", "800", "--batch-size",
                          "16", "--out", out("id")})
                  .code,
              0);
    const Result r = aefuse_cli({"reconstruct", "--model", out("id/model.aef"), "--csv", csv,
                                 "--label-column", "label", "--count", "5", "--out", out("id")});
    ASSERT_EQ(r.code, 0) << r.err;
    const Pgm img = read_pgm(dir_ / "id" / "reconstruct.pgm");
    EXPECT_EQ(img.maxval, 255);
    ASSERT_EQ(img.pixels.size(), img.width * img.height);
    // 2×2 tiles, 2-pixel gaps: originals on rows 2-3, reconstructions on rows 10-11.
    EXPECT_EQ(img.width, 5u * 2 + 6 * 2);
    EXPECT_EQ(img.height, 3u * 2 + 4 * 2);
    int worst = 0;
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            worst = std::max(worst, std::abs(img.pixels[(2 + y) * img.width + x] -
                                             img.pixels[(10 + y) * img.width + x]));
    EXPECT_LE(worst, 3);
    EXPECT_TRUE(fs::exists(dir_ / "id" / "run-reconstruct.json"));
    EXPECT_TRUE(fs::exists(dir_ / "id" / "run.json"));
}

TEST_F(Cli, ReconstructRejectsWidthMismatch) {
    ASSERT_EQ(aefuse_cli({"train", "--csv", tiny_csv(), "--encoding-dim", "2", "--epochs", "0",
                          "--out", out("m")})
                  .code,
              0);
    const Result r = aefuse_cli({"reconstruct", "--model", out("m/model.aef"), "--data", "wdbc",
                                 "--out", out("m")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("expects 5 features"), std::string::npos) << r.err;
}

TEST_F(Cli, ScatterWritesTwoClassSvg) {
    ASSERT_EQ(aefuse_cli({"train", "--data", "wdbc", "--encoding-dim", "2", "--weight-decay",
                          "--epochs", "2", "--out", out("w")})
                  .code,
              0);
    const Result r = aefuse_cli({"scatter", "--model", out("w/model.aef"), "--data", "wdbc", "--out", out("w")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string svg = slurp(dir_ / "w" / "scatter.svg");
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find(">V1</text>"), std::string::npos);
    EXPECT_NE(svg.find(">V2</text>"), std::string::npos);
    EXPECT_NE(svg.find("class=\"label-0\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"label-1\""), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n'), std::ptrdiff_t(569 + 2 * 2 + 9));
}

TEST_F(Cli, ScatterRefusesWrongWidthAndEmptyData) {
    const std::string csv = tiny_csv();
    ASSERT_EQ(aefuse_cli({"train", "--csv", csv, "--label-column", "label", "--encoding-dim", "3",
                          "--epochs", "0", "--out", out("c3")})
                  .code,
              0);
    Result r = aefuse_cli({"scatter", "--model", out("c3/model.aef"), "--csv", csv,
                           "--label-column", "label", "--out", out("c3")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--encoding-dim 2"), std::string::npos) << r.err;

    ASSERT_EQ(aefuse_cli({"train", "--csv", csv, "--label-column", "label", "--encoding-dim", "2",
                          "--epochs", "0", "--out", out("c2")})
                  .code,
              0);
    std::ofstream(dir_ / "empty.csv") << "a,b,c,d,label\n";
    r = aefuse_cli({"scatter", "--model", out("c2/model.aef"), "--csv", out("empty.csv"),
                    "--label-column", "label", "--out", out("c2")});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(fs::exists(dir_ / "c2" / "scatter.svg"));
}

TEST_F(Cli, PcaFullBasisReconstructsAndEigenvaluesDescend) {
    const std::string csv = tiny_csv();
    const Result r = aefuse_cli({"pca", "--csv", csv, "--label-column", "label", "--components",
                                 "4", "--count", "5", "--out", out("pca")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(dir_ / "pca" / "eigenvalues.csv");
    std::string line;
    std::getline(f, line);
    EXPECT_EQ(line, "component,eigenvalue");
    double previous = INFINITY;
    int rows = 0;
    while (std::getline(f, line)) {
        const double v = std::stod(line.substr(line.find(',') + 1));
        EXPECT_LE(v, previous);
        previous = v;
        ++rows;
    }
    EXPECT_EQ(rows, 4);

    const Network net = load_model(dir_ / "pca" / "pca.aef");
    EXPECT_TRUE(net.tied());
    const Pgm img = read_pgm(dir_ / "pca" / "reconstruct.pgm");
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            EXPECT_LE(std::abs(img.pixels[(2 + y) * img.width + x] - img.pixels[(10 + y) * img.width + x]), 1);
}

TEST_F(Cli, PcaRejectsTooManyComponents) {
    const Result r = aefuse_cli({"pca", "--csv", tiny_csv(), "--label-column", "label",
                                 "--components", "5", "--out", out("pca")});
    EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, GradCheckPassesAndDetectsCorruption) {
    Result r = aefuse_cli({"gradcheck", "--seeds", "1", "--out", out("gc")});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("48/48 configurations"), std::string::npos) << r.out;
    r = aefuse_cli({"gradcheck", "--seeds", "1", "--eps", "1e-3", "--tolerance", "1e-2", "--out", out("gc")});
    EXPECT_EQ(r.code, 0) << r.out;
    r = aefuse_cli({"gradcheck", "--seeds", "1", "--corrupt-analytic", "--out", out("gc")});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Render, TileShapes) {
    EXPECT_EQ(cli::tile_shape(784), (std::pair<std::size_t, std::size_t>{28, 28}));
    EXPECT_EQ(cli::tile_shape(36), (std::pair<std::size_t, std::size_t>{6, 6}));
    EXPECT_EQ(cli::tile_shape(30), (std::pair<std::size_t, std::size_t>{30, 1}));
}

TEST(Render, MnistGridLayoutWithSquareCodeTiles) {
    const Matrix x(10, 784, 0.5);
    const Matrix codes(10, 36, 0.0);
    const cli::Image img = cli::reconstruction_grid(x, codes, x, std::pair{-1.0, 1.0});
    // 28-pixel cells; 6×6 codes upscaled by 4 to 24×24.
    EXPECT_EQ(img.width, 10u * 28 + 11 * 2);
    EXPECT_EQ(img.height, 28u + 24 + 28 + 4 * 2);
    EXPECT_EQ(img.at(2, 2), 128);
    EXPECT_EQ(img.at(2, 2 + 28 + 2), 128);  // code 0 in [-1, 1] maps to mid-gray
}

}  // namespace
}  // namespace aefuse
