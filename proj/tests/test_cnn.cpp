// Copyright 2026 The qutomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "qutomo/cnn.hpp"
#include "qutomo/dataset.hpp"
#include "qutomo/errors.hpp"
#include "qutomo/fidelity.hpp"

using namespace qutomo;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path p = fs::temp_directory_path() / "qutomo_test_cnn";
    fs::create_directories(p);
    return p;
}

std::vector<double> random_input(Rng& rng, const CnnShape& s) {
    std::vector<double> in(static_cast<std::size_t>(s.input_h) * s.input_w);
    for (double& x : in) {
        x = rng.next_double();
    }
    return in;
}

Tau16 random_target(Rng& rng) {
    Tau16 t;
    for (double& x : t.v) {
        x = rng.next_gaussian();
    }
    return t;
}

Dataset tiny_dataset(int states, int noisy, int train, std::uint64_t seed) {
    DatasetConfig cfg;
    cfg.n_states = states;
    cfg.noisy_per_state = noisy;
    cfg.train_per_state = train;
    cfg.sigma = std::numbers::pi / 6.0;
    cfg.master_seed = seed;
    return generate(cfg);
}

}  // namespace

TEST_CASE("forward shape trace matches the declared pipeline") {
    Rng rng(1);
    const CnnShape s;
    const CnnParams params = CnnParams::init(s, rng);
    const std::vector<double> input = random_input(rng, s);
    ForwardCache cache;
    forward(params, input, RunMode::kEval, nullptr, &cache);

    CHECK(cache.conv1_act.size() == 6u * 6u * 25u);
    CHECK(cache.pool_out.size() == 3u * 3u * 25u);
    CHECK(cache.conv2_act.size() == 3u * 3u * 25u);
    CHECK(s.flat_units() == 225);
    CHECK(cache.fc1_act.size() == 720u);
    CHECK(cache.fc2_act.size() == 450u);
    CHECK(cache.out.size() == 16u);

    std::vector<double> wrong(35, 0.0);
    CHECK_THROWS_AS(forward(params, wrong, RunMode::kEval, nullptr, nullptr),
                    ShapeMismatch);
}

TEST_CASE("zero parameters map everything to zero") {
    CnnParams params;
    params.shape = CnnShape{};
    params.value = CnnTensors::zeros(params.shape);
    params.adagrad_acc = CnnTensors::zeros(params.shape);
    Rng rng(2);
    const Tau16 out =
        forward(params, random_input(rng, params.shape), RunMode::kEval,
                nullptr, nullptr);
    for (double v : out.v) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("eval mode is deterministic and equals the all-keep forward") {
    Rng rng(3);
    const CnnShape s;
    const CnnParams params = CnnParams::init(s, rng);
    const std::vector<double> input = random_input(rng, s);

    const Tau16 a = forward(params, input, RunMode::kEval, nullptr, nullptr);
    const Tau16 b = forward(params, input, RunMode::kEval, nullptr, nullptr);
    CHECK(a == b);

    const std::vector<double> ones1(static_cast<std::size_t>(s.fc1_units), 1.0);
    const std::vector<double> ones2(static_cast<std::size_t>(s.fc2_units), 1.0);
    const Tau16 c = forward_with_multipliers(params, input, ones1, ones2, nullptr);
    CHECK(a == c);
}

TEST_CASE("train mode without an rng is rejected") {
    Rng rng(4);
    const CnnParams params = CnnParams::init(CnnShape{}, rng);
    const std::vector<double> input = random_input(rng, params.shape);
    CHECK_THROWS_AS(forward(params, input, RunMode::kTrain, nullptr, nullptr),
                    InvalidArgument);
}

TEST_CASE("dropout keeps units at the configured rate") {
    Rng rng(5);
    CnnShape s;
    s.input_h = 2;
    s.input_w = 2;
    s.conv_maps = 2;
    s.fc1_units = 8;
    s.fc2_units = 6;
    const CnnParams params = CnnParams::init(s, rng);
    const std::vector<double> input = random_input(rng, s);

    std::size_t kept = 0, total_units = 0;
    ForwardCache cache;
    for (int i = 0; i < 10000; ++i) {
        forward(params, input, RunMode::kTrain, &rng, &cache);
        for (double m : cache.drop1_mult) {
            kept += m != 0.0;
        }
        for (double m : cache.drop2_mult) {
            kept += m != 0.0;
        }
        total_units += cache.drop1_mult.size() + cache.drop2_mult.size();
        // Inverted dropout: kept units are scaled by 1/keep = 2.
        for (double m : cache.drop1_mult) {
            CHECK((m == 0.0 || m == 2.0));
        }
    }
    const double frac = static_cast<double>(kept) / static_cast<double>(total_units);
    CHECK(std::abs(frac - 0.5) < 0.01);
}

TEST_CASE("loss_mse is the mean of 16 squared differences") {
    Tau16 a, b;
    CHECK(loss_mse(a, b) == 0.0);
    a.v[0] = 1.0;
    CHECK(loss_mse(a, b) == doctest::Approx(1.0 / 16.0));

    Rng rng(6);
    const Tau16 x = random_target(rng);
    const Tau16 y = random_target(rng);
    double expect = 0.0;
    for (int i = 0; i < 16; ++i) {
        expect += (x.v[i] - y.v[i]) * (x.v[i] - y.v[i]);
    }
    CHECK(loss_mse(x, y) == doctest::Approx(expect / 16.0).epsilon(1e-14));
}

TEST_CASE("gradients vanish at zero loss") {
    // Zero parameters, zero target: prediction equals target, loss is 0.
    CnnParams params;
    params.shape = CnnShape{};
    params.value = CnnTensors::zeros(params.shape);
    params.adagrad_acc = CnnTensors::zeros(params.shape);
    Rng rng(7);
    ForwardCache cache;
    forward(params, random_input(rng, params.shape), RunMode::kEval, nullptr,
            &cache);
    const CnnTensors grad = backward(params, cache, Tau16{});
    for (const std::vector<double>* b : grad.blocks()) {
        for (double g : *b) {
            CHECK(g == 0.0);
        }
    }
}

TEST_CASE("output bias gradient is the scaled residual") {
    Rng rng(8);
    const CnnParams params = CnnParams::init(CnnShape{}, rng);
    const std::vector<double> input = random_input(rng, params.shape);
    const Tau16 target = random_target(rng);
    ForwardCache cache;
    const Tau16 pred =
        forward(params, input, RunMode::kTrain, &rng, &cache);
    const CnnTensors grad = backward(params, cache, target);
    for (int i = 0; i < 16; ++i) {
        CHECK(grad.out_b[static_cast<std::size_t>(i)] ==
              doctest::Approx(2.0 * (pred.v[i] - target.v[i]) / 16.0)
                  .epsilon(1e-12));
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(9);
    CnnParams params = CnnParams::init(CnnShape{}, rng);
    const std::vector<double> input = random_input(rng, params.shape);
    const Tau16 target = random_target(rng);

    // Train-mode multipliers drawn once and then held fixed.
    ForwardCache cache;
    forward(params, input, RunMode::kTrain, &rng, &cache);
    const std::vector<double> d1 = cache.drop1_mult;
    const std::vector<double> d2 = cache.drop2_mult;
    const CnnTensors grad = backward(params, cache, target);

    auto loss_at = [&]() {
        return loss_mse(
            forward_with_multipliers(params, input, d1, d2, nullptr), target);
    };

    const double h = 1e-6;
    Rng pick(10);
    auto blocks = params.value.blocks();
    auto grad_blocks = grad.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int probe = 0; probe < 8; ++probe) {
            const std::size_t idx = pick.next_below(blocks[b]->size());
            double& w = (*blocks[b])[idx];
            const double keep = w;
            w = keep + h;
            const double up = loss_at();
            w = keep - h;
            const double dn = loss_at();
            w = keep;
            const double fd = (up - dn) / (2.0 * h);
            const double an = (*grad_blocks[b])[idx];
            const double rel =
                std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6});
            CHECK(rel < 1e-4);
        }
    }
}

TEST_CASE("batched backward equals per-sample accumulation") {
    Rng rng(11);
    const CnnParams params = CnnParams::init(CnnShape{}, rng);
    std::vector<ForwardCache> caches(4);
    std::vector<Tau16> targets(4);
    for (int b = 0; b < 4; ++b) {
        forward(params, random_input(rng, params.shape), RunMode::kTrain, &rng,
                &caches[static_cast<std::size_t>(b)]);
        targets[static_cast<std::size_t>(b)] = random_target(rng);
    }
    CnnTensors batch = CnnTensors::zeros(params.shape);
    backward_batch(params, caches, targets, batch);
    CnnTensors singles = CnnTensors::zeros(params.shape);
    for (int b = 0; b < 4; ++b) {
        backward_accumulate(params, caches[static_cast<std::size_t>(b)],
                            targets[static_cast<std::size_t>(b)], singles);
    }
    auto ba = batch.blocks();
    auto sa = singles.blocks();
    for (std::size_t i = 0; i < ba.size(); ++i) {
        for (std::size_t j = 0; j < ba[i]->size(); ++j) {
            CHECK(std::abs((*ba[i])[j] - (*sa[i])[j]) < 1e-12);
        }
    }
}

TEST_CASE("adagrad step behavior") {
    Rng rng(12);
    CnnParams params = CnnParams::init(CnnShape{}, rng);
    const CnnParams before = params;

    CnnTensors zero = CnnTensors::zeros(params.shape);
    params = adagrad_step(std::move(params), zero, 0.008);
    CHECK(params.value == before.value);
    CHECK(params.step == 1);

    // Unit gradient on one coordinate: first step is about -lr.
    CnnTensors g = CnnTensors::zeros(params.shape);
    g.fc1_w[0] = 1.0;
    const double w0 = params.value.fc1_w[0];
    params = adagrad_step(std::move(params), g, 0.008);
    const double step1 = params.value.fc1_w[0] - w0;
    CHECK(step1 == doctest::Approx(-0.008).epsilon(1e-6));

    // Second identical step is strictly smaller in magnitude, and the
    // accumulator never decreases.
    const double acc1 = params.adagrad_acc.fc1_w[0];
    const double w1 = params.value.fc1_w[0];
    params = adagrad_step(std::move(params), g, 0.008);
    const double step2 = params.value.fc1_w[0] - w1;
    CHECK(std::abs(step2) < std::abs(step1));
    CHECK(params.adagrad_acc.fc1_w[0] > acc1);
}

TEST_CASE("train with zero epochs returns the initialization") {
    const Dataset ds = tiny_dataset(2, 4, 3, 21);
    TrainConfig cfg;
    cfg.epochs = 0;
    cfg.seed = 77;
    auto [params, history] = train(ds, cfg);
    CHECK(history.epochs.empty());

    Rng rng(77);
    const CnnParams fresh = CnnParams::init(CnnShape{}, rng);
    CHECK(params.value == fresh.value);
    CHECK(params.step == 0);
}

TEST_CASE("training is deterministic in the seed") {
    const Dataset ds = tiny_dataset(2, 6, 4, 22);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.seed = 5;
    auto [p1, h1] = train(ds, cfg);
    auto [p2, h2] = train(ds, cfg);
    CHECK(p1.value == p2.value);
    CHECK(p1.adagrad_acc == p2.adagrad_acc);
    CHECK(p1.step == p2.step);
    REQUIRE(h1.epochs.size() == h2.epochs.size());
    for (std::size_t i = 0; i < h1.epochs.size(); ++i) {
        CHECK(h1.epochs[i].mean_train_loss == h2.epochs[i].mean_train_loss);
        CHECK(h1.epochs[i].mean_test_fidelity == h2.epochs[i].mean_test_fidelity);
    }
}

TEST_CASE("a single sample is memorized") {
    const Dataset ds = tiny_dataset(1, 2, 1, 23);
    REQUIRE(ds.train.size() == 1);
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.seed = 3;
    cfg.dropout_rate = 0.0;  // memorization oracle, no stochastic masking
    auto [params, history] = train(ds, cfg);
    CHECK(history.epochs.back().mean_train_loss < 1e-4);
}

TEST_CASE("training rejects an empty train split") {
    Dataset ds = tiny_dataset(1, 3, 2, 24);
    ds.train.clear();
    TrainConfig cfg;
    cfg.epochs = 1;
    CHECK_THROWS_AS(train(ds, cfg), EmptyDataset);
}

TEST_CASE("training improves fidelity over the untrained network") {
    const Dataset ds = tiny_dataset(4, 25, 20, 25);
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.seed = 9;
    auto [trained, history] = train(ds, cfg);

    Rng rng(9);
    const CnnParams untrained = CnnParams::init(CnnShape{}, rng);

    std::vector<double> gains;
    for (std::size_t i = 0; i < 50 && i < ds.train.size(); ++i) {
        const Sample& s = ds.train[i];
        const double after =
            fidelity(predict_density(trained, s.grid), s.reference);
        const double before =
            fidelity(predict_density(untrained, s.grid), s.reference);
        gains.push_back(after - before);
    }
    std::sort(gains.begin(), gains.end());
    CHECK(gains[gains.size() / 2] > 0.0);  // median gain
}

TEST_CASE("predictions are always physical; zero tau is rejected") {
    Rng rng(26);
    const CnnParams params = CnnParams::init(CnnShape{}, rng);
    const Dataset ds = tiny_dataset(2, 3, 2, 27);
    for (const Sample& s : ds.train) {
        const DensityMatrix rho = predict_density(params, s.grid);
        CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-12);
        CHECK(rho.min_eigenvalue() > -1e-10);
    }

    CnnParams zero;
    zero.shape = CnnShape{};
    zero.value = CnnTensors::zeros(zero.shape);
    zero.adagrad_acc = CnnTensors::zeros(zero.shape);
    CHECK_THROWS_AS(predict_density(zero, ds.train[0].grid), DegenerateTau);
}

TEST_CASE("compact input shapes run end to end") {
    Rng rng(28);
    CnnShape s;
    s.input_h = 2;
    s.input_w = 2;
    const CnnParams params = CnnParams::init(s, rng);
    const std::vector<double> input{0.3, 0.1, 0.2, 0.4};
    ForwardCache cache;
    forward(params, input, RunMode::kEval, nullptr, &cache);
    CHECK(cache.pool_out.size() == 1u * 1u * 25u);
    CHECK(s.flat_units() == 25);
}

TEST_CASE("checkpoint round trip preserves everything") {
    Rng rng(29);
    CnnParams params = CnnParams::init(CnnShape{}, rng);
    // Touch the accumulators and step so the round trip is nontrivial.
    CnnTensors g = CnnTensors::zeros(params.shape);
    g.fc2_w[7] = 0.25;
    params = adagrad_step(std::move(params), g, 0.008);

    const fs::path path = temp_dir() / "ckpt.bin";
    save_checkpoint(params, path.string());
    const CnnParams loaded = load_checkpoint(path.string());
    CHECK(loaded.shape == params.shape);
    CHECK(loaded.value == params.value);
    CHECK(loaded.adagrad_acc == params.adagrad_acc);
    CHECK(loaded.step == params.step);
}

TEST_CASE("checkpoint loading rejects bad files") {
    Rng rng(30);
    const CnnParams params = CnnParams::init(CnnShape{}, rng);
    const fs::path dir = temp_dir();

    CHECK_THROWS_AS(load_checkpoint((dir / "missing.bin").string()), IoError);

    const fs::path good = dir / "good.bin";
    save_checkpoint(params, good.string());

    // Bump the version field (offset 8, little-endian u32).
    {
        std::fstream f(good, std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(8);
        const std::uint32_t v = 999;
        f.write(reinterpret_cast<const char*>(&v), 4);
    }
    CHECK_THROWS_AS(load_checkpoint(good.string()), FormatVersionMismatch);

    // Rewrite and truncate.
    save_checkpoint(params, good.string());
    const auto size = fs::file_size(good);
    fs::resize_file(good, size / 2);
    CHECK_THROWS_AS(load_checkpoint(good.string()), IoError);

    // Corrupt the magic.
    save_checkpoint(params, good.string());
    {
        std::fstream f(good, std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(0);
        f.write("XX", 2);
    }
    CHECK_THROWS_AS(load_checkpoint(good.string()), IoError);
}

TEST_CASE("train config validation") {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = TrainConfig{};
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = TrainConfig{};
    cfg.dropout_rate = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = TrainConfig{};
    cfg.epochs = -1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
