#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aefuse/error.hpp"
#include "aefuse/model_io.hpp"

namespace aefuse {
namespace {

Network sample_net(bool tied, std::vector<std::size_t> hidden = {}) {
    AeConfig cfg;
    cfg.input_dim = 7;
    cfg.encoding_dim = 3;
    cfg.hidden_dims = std::move(hidden);
    cfg.tied = tied;
    Rng rng(21);
    Network net = build_autoencoder(cfg, rng);
    // Non-trivial biases so they are exercised too.
    for (std::size_t i = 0; i < net.depth(); ++i)
        net.layer(i).bias = rng_normal(rng, 0, 1, 1, net.layer(i).out_dim());
    return net;
}

std::string to_text(const Network& net) {
    std::ostringstream out;
    write_model(out, net);
    return out.str();
}

TEST(ModelIo, HeaderLayout) {
    const std::string text = to_text(sample_net(false));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "AEFv1");
    std::getline(in, line);
    EXPECT_EQ(line, "layers 2");
    std::getline(in, line);
    EXPECT_EQ(line, "split 1");
    std::getline(in, line);
    EXPECT_EQ(line, "tied 0");
    std::getline(in, line);
    EXPECT_EQ(line, "layer 0 7 3 tanh");
}

TEST(ModelIo, RoundTripIsBitExactAndIdempotent) {
    for (bool tied : {false, true}) {
        const Network net = sample_net(tied, {5});
        const std::string first = to_text(net);
        std::istringstream in(first);
        const Network loaded = read_model(in);
        EXPECT_EQ(loaded, net);
        EXPECT_EQ(to_text(loaded), first);
        Rng rng(3);
        const Matrix x = rng_uniform(rng, 0, 1, 4, 7);
        EXPECT_EQ(reconstruct(loaded, x), reconstruct(net, x));
    }
}

TEST(ModelIo, FileRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "aefuse_model_io_test";
    std::filesystem::create_directories(dir);
    const Network net = sample_net(true);
    save_model(net, dir / "a.aef");
    save_model(load_model(dir / "a.aef"), dir / "b.aef");
    std::ifstream a(dir / "a.aef"), b(dir / "b.aef");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    std::filesystem::remove_all(dir);
}

int parse_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        read_model(in);
    } catch (const ParseError& e) {
        return static_cast<int>(e.line());
    }
    return -1;
}

TEST(ModelIo, TruncatedFileReportsLine) {
    const std::string text = to_text(sample_net(false));
    // Keep the header and first two weight rows only.
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) pos = text.find('\n', pos) + 1;
    EXPECT_EQ(parse_error_line(text.substr(0, pos)), 8);
}

TEST(ModelIo, MalformedContent) {
    std::string text = to_text(sample_net(false));
    EXPECT_EQ(parse_error_line("AEFv2\n" + text.substr(6)), 1);
    std::string bad_number = text;
    const auto row = bad_number.find('\n', bad_number.find("layer 0")) + 1;
    bad_number.replace(row, 1, "x");
    EXPECT_EQ(parse_error_line(bad_number), 6);
    std::string non_finite = text;
    non_finite.replace(row, 0, "nan ");
    EXPECT_EQ(parse_error_line(non_finite), 6);
    std::string wrong_dims = text;
    wrong_dims.replace(wrong_dims.find("layer 0 7 3"), 11, "layer 0 7 4");
    EXPECT_GT(parse_error_line(wrong_dims), 0);
}

TEST(ModelIo, BrokenTieIsRejected) {
    std::string text = to_text(sample_net(true));
    const auto dec = text.find("layer 1");
    const auto row = text.find('\n', dec) + 1;
    text.replace(row, 0, "0.5 ");
    const auto end = text.find(' ', row + 4);
    text.erase(row + 4, end - (row + 4) + 1);
    EXPECT_EQ(parse_error_line(text), 10);
}

}  // namespace
}  // namespace aefuse
