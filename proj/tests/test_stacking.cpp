#include <gtest/gtest.h>

#include <vector>

#include "aefuse/error.hpp"
#include "aefuse/train.hpp"

namespace aefuse {
namespace {

Matrix toy_data(std::uint64_t seed, std::size_t n, std::size_t d) {
    Rng rng(seed);
    return rng_uniform(rng, 0, 1, n, d);
}

TrainConfig short_training() {
    TrainConfig tc;
    tc.epochs = 3;
    tc.batch_size = 8;
    return tc;
}

TEST(Stacking, TwoDimsEqualsShallowTraining) {
    const Matrix x = toy_data(1, 24, 10);
    AeConfig cfg;
    cfg.input_dim = 10;
    cfg.encoding_dim = 4;
    const TrainConfig tc = short_training();

    Rng a(7);
    const std::vector<std::size_t> dims{10, 4};
    const Network stacked = stack_pretrain(dims, x, cfg, tc, a);

    Rng b(7);
    Network shallow = build_autoencoder(cfg, b);
    train(shallow, x, tc, cfg);
    EXPECT_EQ(stacked, shallow);
}

TEST(Stacking, UnrolledStructureMirrorsDims) {
    const Matrix x = toy_data(2, 20, 12);
    AeConfig cfg;
    Rng rng(3);
    const std::vector<std::size_t> dims{12, 8, 5, 3};
    const Network net = stack_pretrain(dims, x, cfg, short_training(), rng);
    ASSERT_EQ(net.depth(), 6u);
    EXPECT_EQ(net.split(), 3u);
    const std::vector<std::size_t> widths{12, 8, 5, 3, 5, 8, 12};
    for (std::size_t i = 0; i < net.depth(); ++i) {
        EXPECT_EQ(net.layer(i).in_dim(), widths[i]);
        EXPECT_EQ(net.layer(i).out_dim(), widths[i + 1]);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(net.layer(5 - k).weights, transpose(net.layer(k).weights));
        EXPECT_EQ(net.layer(5 - k).bias, Matrix(1, net.layer(5 - k).out_dim()));
    }
    EXPECT_EQ(net.layer(5).activation, cfg.out_activation);
    EXPECT_EQ(net.layer(3).activation, cfg.enc_activation);
}

TEST(Stacking, SecondStageTrainsOnFirstStageCodes) {
    const Matrix x = toy_data(4, 20, 12);
    AeConfig cfg;
    const TrainConfig tc = short_training();
    const std::vector<std::size_t> dims{12, 6, 3};
    Rng rng(5);
    const Network net = stack_pretrain(dims, x, cfg, tc, rng);

    // Replay: the first stage is the shallow 12-6-12 AE trained from the same
    // stream; the second stage must equal training 6-3-6 on its codes.
    Rng replay(5);
    AeConfig first = cfg;
    first.input_dim = 12;
    first.encoding_dim = 6;
    Network s1 = build_autoencoder(first, replay);
    train(s1, x, tc, first);
    EXPECT_EQ(net.layer(0), s1.layer(0));
    const Matrix codes = encode(s1, x);
    EXPECT_EQ(forward(net, x).post[0], codes);

    AeConfig second = cfg;
    second.input_dim = 6;
    second.encoding_dim = 3;
    second.out_activation = cfg.enc_activation;
    second.loss = Loss::mse();
    Network s2 = build_autoencoder(second, replay);
    train(s2, codes, tc, second);
    EXPECT_EQ(net.layer(1), s2.layer(0));
}

TEST(Stacking, Errors) {
    Rng rng(1);
    const Matrix x = toy_data(1, 5, 4);
    const std::vector<std::size_t> one{4};
    const std::vector<std::size_t> wrong{5, 2};
    EXPECT_THROW(stack_pretrain(one, x, AeConfig{}, short_training(), rng), ConfigError);
    EXPECT_THROW(stack_pretrain(wrong, x, AeConfig{}, short_training(), rng), ShapeError);
}

TEST(Stacking, FineTuningReusesTrain) {
    const Matrix x = toy_data(6, 32, 12);
    AeConfig cfg;
    const std::vector<std::size_t> dims{12, 8, 4};
    Rng rng(9);
    Network net = stack_pretrain(dims, x, cfg, short_training(), rng);
    TrainConfig tune = short_training();
    tune.optimizer = Adam{};
    tune.epochs = 10;
    const double before = mean_loss(net, x, cfg.loss);
    train(net, x, tune, cfg);
    EXPECT_LT(mean_loss(net, x, cfg.loss), before);
}

}  // namespace
}  // namespace aefuse
