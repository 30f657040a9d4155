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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qutomo/dataset.hpp"
#include "qutomo/measurement.hpp"
#include "qutomo/rng.hpp"
#include "qutomo/tau.hpp"

namespace qutomo {

/// Network layout. The default is the full-size regressor:
///   6x6x1 -> conv 2x2/s1 same, 25 maps, ReLU -> maxpool 2x2/s2
///   -> conv 2x2/s1 same, 25 maps, ReLU -> flatten (225)
///   -> fc 720 ReLU -> dropout -> fc 450 ReLU -> dropout -> fc 16 linear.
/// input_h/input_w may be changed to train on compact (non-padded) inputs;
/// everything downstream of the flatten keeps its width.
struct CnnShape {
    int input_h = 6;
    int input_w = 6;
    int conv_maps = 25;
    int fc1_units = 720;
    int fc2_units = 450;
    int out_units = 16;

    static constexpr int kKernel = 2;

    int pooled_h() const { return (input_h + 1) / 2; }
    int pooled_w() const { return (input_w + 1) / 2; }
    int flat_units() const { return pooled_h() * pooled_w() * conv_maps; }

    void validate() const;

    bool operator==(const CnnShape& other) const = default;
};

/// One vector per parameter block. Used for the weights themselves, for
/// gradients, and for the Adagrad accumulators (all share shapes).
///
/// Layouts (all row-major, last index fastest):
///   conv weights  [kr][kc][in_ch][out_ch]
///   fc weights    [in][out]
struct CnnTensors {
    std::vector<double> conv1_w, conv1_b;
    std::vector<double> conv2_w, conv2_b;
    std::vector<double> fc1_w, fc1_b;
    std::vector<double> fc2_w, fc2_b;
    std::vector<double> out_w, out_b;

    static CnnTensors zeros(const CnnShape& shape);

    /// Blocks in declared order; used by the optimizer, the checkpoint
    /// serializer and the gradient checker.
    std::array<std::vector<double>*, 10> blocks();
    std::array<const std::vector<double>*, 10> blocks() const;

    void fill(double value);
    void add_scaled(const CnnTensors& other, double factor);

    bool operator==(const CnnTensors& other) const = default;
};

struct CnnParams {
    CnnShape shape;
    CnnTensors value;
    CnnTensors adagrad_acc;
    std::uint64_t step = 0;

    /// Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases,
    /// zero accumulators. Weight draws consume the rng in declared block
    /// order, index order within a block.
    static CnnParams init(const CnnShape& shape, Rng& rng);
};

enum class RunMode { kTrain, kEval };

/// Every intermediate a backward pass needs, for one input.
struct ForwardCache {
    CnnShape shape;
    std::vector<double> input;
    std::vector<double> conv1_pre, conv1_act;
    std::vector<int> pool_argmax;
    std::vector<double> pool_out;
    std::vector<double> conv2_pre, conv2_act;
    std::vector<double> fc1_pre, fc1_act, fc1_drop;
    std::vector<double> fc2_pre, fc2_act, fc2_drop;
    std::vector<double> drop1_mult, drop2_mult;
    std::vector<double> out;
};

/// Run the network. In train mode dropout multipliers are drawn from rng
/// (one uniform per unit, kept iff u < 1-rate, kept activations scaled by
/// 1/(1-rate)); in eval mode no rng is consumed and no rescaling happens.
/// input.size() must equal shape.input_h * shape.input_w.
Tau16 forward(const CnnParams& params, std::span<const double> input,
              RunMode mode, Rng* rng, ForwardCache* cache,
              double dropout_rate = 0.5);

Tau16 forward(const CnnParams& params, const MeasurementGrid& grid,
              RunMode mode, Rng* rng, ForwardCache* cache,
              double dropout_rate = 0.5);

/// Deterministic forward with caller-supplied dropout multipliers
/// (sizes fc1_units and fc2_units). Passing all-ones reproduces eval mode
/// exactly; the gradient checker uses it to hold masks fixed.
Tau16 forward_with_multipliers(const CnnParams& params,
                               std::span<const double> input,
                               std::span<const double> drop1,
                               std::span<const double> drop2,
                               ForwardCache* cache);

/// Mean over the 16 outputs of the squared difference.
double loss_mse(const Tau16& pred, const Tau16& target);

/// Exact gradients of loss_mse w.r.t. every parameter, dropout multipliers
/// held fixed as recorded in the cache.
CnnTensors backward(const CnnParams& params, const ForwardCache& cache,
                    const Tau16& target);

/// Same, accumulating into grad_sum (for batch averaging without churn).
void backward_accumulate(const CnnParams& params, const ForwardCache& cache,
                         const Tau16& target, CnnTensors& grad_sum);

/// Sum of per-sample gradients for a whole batch, accumulated into grad_sum.
/// Equivalent to calling backward_accumulate per sample, but streams the
/// fully connected weight matrices once per batch instead of once per
/// sample.
void backward_batch(const CnnParams& params,
                    std::span<const ForwardCache> caches,
                    std::span<const Tau16> targets, CnnTensors& grad_sum);

/// acc += g^2; w -= lr * g / (sqrt(acc) + 1e-8). Returns the updated
/// parameters with the step counter advanced.
CnnParams adagrad_step(CnnParams params, const CnnTensors& grads, double lr);

struct TrainConfig {
    double learning_rate = 0.008;
    int batch_size = 4;
    int epochs = 0;
    double dropout_rate = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochStats {
    double mean_train_loss = 0.0;
    /// NaN when the dataset has no test split.
    double mean_test_fidelity = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
};

/// Self-contained sample for the generic training loop (compact-input
/// variants reshape grids before calling this).
struct TrainingSample {
    std::vector<double> input;
    Tau16 target;
    DensityMatrix reference;
};

/// Deterministic minibatch training: per epoch, Fisher-Yates shuffle, then
/// batches of cfg.batch_size (final partial batch allowed), gradients
/// averaged over each batch, one Adagrad step per batch. After every epoch
/// the mean test fidelity of predict_density against the sample references
/// is recorded. All randomness comes from Rng(cfg.seed).
std::pair<CnnParams, TrainHistory> train_samples(
    const CnnShape& shape, const std::vector<TrainingSample>& train,
    const std::vector<TrainingSample>& test, const TrainConfig& cfg);

/// Train on a generated dataset (standard 6x6 inputs).
std::pair<CnnParams, TrainHistory> train(const Dataset& dataset,
                                         const TrainConfig& cfg);

/// Eval-mode forward, unpack, invert. Always physical; throws DegenerateTau
/// if the predicted tau vanishes (e.g. all-zero parameters).
DensityMatrix predict_density(const CnnParams& params,
                              const MeasurementGrid& grid);

DensityMatrix predict_density(const CnnParams& params,
                              std::span<const double> input);

/// Versioned binary checkpoint; byte layout documented in the README.
void save_checkpoint(const CnnParams& params, const std::string& path);
CnnParams load_checkpoint(const std::string& path);

}  // namespace qutomo
