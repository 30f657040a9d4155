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

#include "qutomo/cnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "qutomo/errors.hpp"
#include "qutomo/fidelity.hpp"

namespace qutomo {

namespace {

constexpr double kAdagradDelta = 1e-8;

int conv_w_size(int in_ch, int out_ch) {
    return CnnShape::kKernel * CnnShape::kKernel * in_ch * out_ch;
}

// Zero-padded conv 2x2 stride 1 (pad at bottom/right), channel-fastest
// buffers: in[(r*w + c)*in_ch + ic], w[((dr*2+dc)*in_ch + ic)*out_ch + oc].
void conv_forward(const double* in, int h, int w, int in_ch, const double* wts,
                  const double* bias, int out_ch, double* out) {
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double* o = out + (r * w + c) * out_ch;
            for (int oc = 0; oc < out_ch; ++oc) {
                o[oc] = bias[oc];
            }
            for (int dr = 0; dr < 2; ++dr) {
                const int rr = r + dr;
                if (rr >= h) {
                    continue;
                }
                for (int dc = 0; dc < 2; ++dc) {
                    const int cc = c + dc;
                    if (cc >= w) {
                        continue;
                    }
                    const double* iv = in + (rr * w + cc) * in_ch;
                    const double* wv = wts + (dr * 2 + dc) * in_ch * out_ch;
                    for (int ic = 0; ic < in_ch; ++ic) {
                        const double a = iv[ic];
                        const double* wrow = wv + ic * out_ch;
                        for (int oc = 0; oc < out_ch; ++oc) {
                            o[oc] += a * wrow[oc];
                        }
                    }
                }
            }
        }
    }
}

// Gradients w.r.t. conv weights/bias and (optionally) inputs.
void conv_backward(const double* in, int h, int w, int in_ch, const double* wts,
                   int out_ch, const double* dout, double* dwts, double* dbias,
                   double* din) {
    if (din != nullptr) {
        std::fill(din, din + h * w * in_ch, 0.0);
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double* dv = dout + (r * w + c) * out_ch;
            for (int oc = 0; oc < out_ch; ++oc) {
                dbias[oc] += dv[oc];
            }
            for (int dr = 0; dr < 2; ++dr) {
                const int rr = r + dr;
                if (rr >= h) {
                    continue;
                }
                for (int dc = 0; dc < 2; ++dc) {
                    const int cc = c + dc;
                    if (cc >= w) {
                        continue;
                    }
                    const double* iv = in + (rr * w + cc) * in_ch;
                    double* dw = dwts + (dr * 2 + dc) * in_ch * out_ch;
                    for (int ic = 0; ic < in_ch; ++ic) {
                        const double a = iv[ic];
                        double* dwrow = dw + ic * out_ch;
                        for (int oc = 0; oc < out_ch; ++oc) {
                            dwrow[oc] += a * dv[oc];
                        }
                    }
                    if (din != nullptr) {
                        double* dinv = din + (rr * w + cc) * in_ch;
                        const double* wv = wts + (dr * 2 + dc) * in_ch * out_ch;
                        for (int ic = 0; ic < in_ch; ++ic) {
                            const double* wrow = wv + ic * out_ch;
                            double acc = 0.0;
                            for (int oc = 0; oc < out_ch; ++oc) {
                                acc += wrow[oc] * dv[oc];
                            }
                            dinv[ic] += acc;
                        }
                    }
                }
            }
        }
    }
}

// y[o] = b[o] + sum_i x[i] W[i*out + o]
void fc_forward(const double* x, int in, const double* wts, const double* bias,
                int out, double* y) {
    std::memcpy(y, bias, sizeof(double) * static_cast<std::size_t>(out));
    for (int i = 0; i < in; ++i) {
        const double a = x[i];
        if (a == 0.0) {
            continue;  // dropout zeros make this branch common
        }
        const double* wrow = wts + i * out;
        for (int o = 0; o < out; ++o) {
            y[o] += a * wrow[o];
        }
    }
}

void relu(const double* pre, int n, double* act) {
    for (int i = 0; i < n; ++i) {
        act[i] = pre[i] > 0.0 ? pre[i] : 0.0;
    }
}

void relu_backward(const double* pre, int n, double* d) {
    for (int i = 0; i < n; ++i) {
        if (pre[i] <= 0.0) {
            d[i] = 0.0;
        }
    }
}

}  // namespace

void CnnShape::validate() const {
    if (input_h < 1 || input_w < 1 || conv_maps < 1 || fc1_units < 1 ||
        fc2_units < 1 || out_units < 1) {
        throw ShapeMismatch("CnnShape: all dimensions must be positive");
    }
}

CnnTensors CnnTensors::zeros(const CnnShape& shape) {
    shape.validate();
    CnnTensors t;
    t.conv1_w.resize(conv_w_size(1, shape.conv_maps));
    t.conv1_b.resize(shape.conv_maps);
    t.conv2_w.resize(conv_w_size(shape.conv_maps, shape.conv_maps));
    t.conv2_b.resize(shape.conv_maps);
    t.fc1_w.resize(static_cast<std::size_t>(shape.flat_units()) * shape.fc1_units);
    t.fc1_b.resize(shape.fc1_units);
    t.fc2_w.resize(static_cast<std::size_t>(shape.fc1_units) * shape.fc2_units);
    t.fc2_b.resize(shape.fc2_units);
    t.out_w.resize(static_cast<std::size_t>(shape.fc2_units) * shape.out_units);
    t.out_b.resize(shape.out_units);
    return t;
}

std::array<std::vector<double>*, 10> CnnTensors::blocks() {
    return {&conv1_w, &conv1_b, &conv2_w, &conv2_b, &fc1_w,
            &fc1_b,   &fc2_w,   &fc2_b,   &out_w,   &out_b};
}

std::array<const std::vector<double>*, 10> CnnTensors::blocks() const {
    return {&conv1_w, &conv1_b, &conv2_w, &conv2_b, &fc1_w,
            &fc1_b,   &fc2_w,   &fc2_b,   &out_w,   &out_b};
}

void CnnTensors::fill(double value) {
    for (std::vector<double>* b : blocks()) {
        std::fill(b->begin(), b->end(), value);
    }
}

void CnnTensors::add_scaled(const CnnTensors& other, double factor) {
    auto mine = blocks();
    auto theirs = other.blocks();
    for (std::size_t i = 0; i < mine.size(); ++i) {
        if (mine[i]->size() != theirs[i]->size()) {
            throw ShapeMismatch("CnnTensors::add_scaled: block size mismatch");
        }
        for (std::size_t j = 0; j < mine[i]->size(); ++j) {
            (*mine[i])[j] += factor * (*theirs[i])[j];
        }
    }
}

CnnParams CnnParams::init(const CnnShape& shape, Rng& rng) {
    CnnParams p;
    p.shape = shape;
    p.value = CnnTensors::zeros(shape);
    p.adagrad_acc = CnnTensors::zeros(shape);

    const int k2 = CnnShape::kKernel * CnnShape::kKernel;
    auto glorot = [&rng](std::vector<double>& w, int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& x : w) {
            x = (2.0 * rng.next_double() - 1.0) * limit;
        }
    };
    glorot(p.value.conv1_w, k2 * 1, k2 * shape.conv_maps);
    glorot(p.value.conv2_w, k2 * shape.conv_maps, k2 * shape.conv_maps);
    glorot(p.value.fc1_w, shape.flat_units(), shape.fc1_units);
    glorot(p.value.fc2_w, shape.fc1_units, shape.fc2_units);
    glorot(p.value.out_w, shape.fc2_units, shape.out_units);
    return p;
}

Tau16 forward_with_multipliers(const CnnParams& params,
                               std::span<const double> input,
                               std::span<const double> drop1,
                               std::span<const double> drop2,
                               ForwardCache* cache) {
    const CnnShape& s = params.shape;
    s.validate();
    const int h = s.input_h;
    const int w = s.input_w;
    const int maps = s.conv_maps;
    const int ph = s.pooled_h();
    const int pw = s.pooled_w();
    if (static_cast<int>(input.size()) != h * w) {
        throw ShapeMismatch("forward: input size does not match shape");
    }
    if (static_cast<int>(drop1.size()) != s.fc1_units ||
        static_cast<int>(drop2.size()) != s.fc2_units) {
        throw ShapeMismatch("forward: dropout multiplier size mismatch");
    }
    if (static_cast<int>(params.value.fc1_w.size()) !=
        s.flat_units() * s.fc1_units) {
        throw ShapeMismatch("forward: parameter blocks do not match shape");
    }

    ForwardCache local;
    ForwardCache& cc = cache != nullptr ? *cache : local;
    cc.shape = s;
    cc.input.assign(input.begin(), input.end());
    cc.conv1_pre.resize(static_cast<std::size_t>(h) * w * maps);
    cc.conv1_act.resize(cc.conv1_pre.size());
    cc.pool_out.resize(static_cast<std::size_t>(ph) * pw * maps);
    cc.pool_argmax.resize(cc.pool_out.size());
    cc.conv2_pre.resize(cc.pool_out.size());
    cc.conv2_act.resize(cc.pool_out.size());
    cc.fc1_pre.resize(s.fc1_units);
    cc.fc1_act.resize(s.fc1_units);
    cc.fc1_drop.resize(s.fc1_units);
    cc.fc2_pre.resize(s.fc2_units);
    cc.fc2_act.resize(s.fc2_units);
    cc.fc2_drop.resize(s.fc2_units);
    cc.drop1_mult.assign(drop1.begin(), drop1.end());
    cc.drop2_mult.assign(drop2.begin(), drop2.end());
    cc.out.resize(s.out_units);

    conv_forward(cc.input.data(), h, w, 1, params.value.conv1_w.data(),
                 params.value.conv1_b.data(), maps, cc.conv1_pre.data());
    relu(cc.conv1_pre.data(), h * w * maps, cc.conv1_act.data());

    // Max pool 2x2 stride 2, windows clipped at the border (so odd input
    // sizes round up). Ties resolve to the first cell in scan order.
    for (int pr = 0; pr < ph; ++pr) {
        for (int pc = 0; pc < pw; ++pc) {
            for (int ch = 0; ch < maps; ++ch) {
                double best = -std::numeric_limits<double>::infinity();
                int best_idx = -1;
                for (int dr = 0; dr < 2; ++dr) {
                    const int r = 2 * pr + dr;
                    if (r >= h) {
                        continue;
                    }
                    for (int dc = 0; dc < 2; ++dc) {
                        const int c = 2 * pc + dc;
                        if (c >= w) {
                            continue;
                        }
                        const int idx = (r * w + c) * maps + ch;
                        if (cc.conv1_act[idx] > best) {
                            best = cc.conv1_act[idx];
                            best_idx = idx;
                        }
                    }
                }
                const int pidx = (pr * pw + pc) * maps + ch;
                cc.pool_out[pidx] = best;
                cc.pool_argmax[pidx] = best_idx;
            }
        }
    }

    conv_forward(cc.pool_out.data(), ph, pw, maps, params.value.conv2_w.data(),
                 params.value.conv2_b.data(), maps, cc.conv2_pre.data());
    relu(cc.conv2_pre.data(), ph * pw * maps, cc.conv2_act.data());

    // conv2_act is already the flatten order: (row, col, channel).
    fc_forward(cc.conv2_act.data(), s.flat_units(), params.value.fc1_w.data(),
               params.value.fc1_b.data(), s.fc1_units, cc.fc1_pre.data());
    relu(cc.fc1_pre.data(), s.fc1_units, cc.fc1_act.data());
    for (int i = 0; i < s.fc1_units; ++i) {
        cc.fc1_drop[i] = cc.fc1_act[i] * cc.drop1_mult[i];
    }

    fc_forward(cc.fc1_drop.data(), s.fc1_units, params.value.fc2_w.data(),
               params.value.fc2_b.data(), s.fc2_units, cc.fc2_pre.data());
    relu(cc.fc2_pre.data(), s.fc2_units, cc.fc2_act.data());
    for (int i = 0; i < s.fc2_units; ++i) {
        cc.fc2_drop[i] = cc.fc2_act[i] * cc.drop2_mult[i];
    }

    fc_forward(cc.fc2_drop.data(), s.fc2_units, params.value.out_w.data(),
               params.value.out_b.data(), s.out_units, cc.out.data());

    Tau16 result;
    if (s.out_units != 16) {
        throw ShapeMismatch("forward: output layer must have 16 units");
    }
    std::copy(cc.out.begin(), cc.out.end(), result.v.begin());
    return result;
}

Tau16 forward(const CnnParams& params, std::span<const double> input,
              RunMode mode, Rng* rng, ForwardCache* cache,
              double dropout_rate) {
    const CnnShape& s = params.shape;
    std::vector<double> d1(s.fc1_units, 1.0);
    std::vector<double> d2(s.fc2_units, 1.0);
    if (mode == RunMode::kTrain && dropout_rate > 0.0) {
        if (rng == nullptr) {
            throw InvalidArgument("forward: train mode with dropout needs an rng");
        }
        const double keep = 1.0 - dropout_rate;
        const double scale = 1.0 / keep;
        for (double& m : d1) {
            m = rng->next_double() < keep ? scale : 0.0;
        }
        for (double& m : d2) {
            m = rng->next_double() < keep ? scale : 0.0;
        }
    }
    return forward_with_multipliers(params, input, d1, d2, cache);
}

Tau16 forward(const CnnParams& params, const MeasurementGrid& grid,
              RunMode mode, Rng* rng, ForwardCache* cache,
              double dropout_rate) {
    return forward(params,
                   std::span<const double>(grid.values().data(), 36), mode,
                   rng, cache, dropout_rate);
}

double loss_mse(const Tau16& pred, const Tau16& target) {
    double s = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        const double d = pred.v[i] - target.v[i];
        s += d * d;
    }
    return s / 16.0;
}

namespace {

// Batched dense-layer backward. x_b / dy_b hold one pointer per sample.
// Accumulates dW[i][o] += sum_b x_b[i] dy_b[o], db[o] += sum_b dy_b[o],
// and writes dx_b[i] = sum_o W[i][o] dy_b[o]. W and dW are streamed once
// for the whole batch.
void fc_backward_batch(std::span<const double* const> x_b, int in,
                       const double* wts, int out,
                       std::span<const double* const> dy_b, double* dwts,
                       double* dbias, std::span<double* const> dx_b) {
    const int bsz = static_cast<int>(x_b.size());
    for (int b = 0; b < bsz; ++b) {
        const double* dy = dy_b[b];
        for (int o = 0; o < out; ++o) {
            dbias[o] += dy[o];
        }
    }
    // Column-blocked copy of the upstream gradients: dyt[o*bsz + b].
    std::vector<double> dyt(static_cast<std::size_t>(out) * bsz);
    for (int o = 0; o < out; ++o) {
        for (int b = 0; b < bsz; ++b) {
            dyt[static_cast<std::size_t>(o) * bsz + b] = dy_b[b][o];
        }
    }
    std::vector<double> a(static_cast<std::size_t>(bsz));
    std::vector<double> dxacc(static_cast<std::size_t>(bsz));
    for (int i = 0; i < in; ++i) {
        bool any = false;
        for (int b = 0; b < bsz; ++b) {
            a[static_cast<std::size_t>(b)] = x_b[b][i];
            any = any || a[static_cast<std::size_t>(b)] != 0.0;
        }
        std::fill(dxacc.begin(), dxacc.end(), 0.0);
        const double* wrow = wts + static_cast<std::size_t>(i) * out;
        double* dwrow = dwts + static_cast<std::size_t>(i) * out;
        const double* dt = dyt.data();
        if (any) {
            for (int o = 0; o < out; ++o, dt += bsz) {
                double wsum = 0.0;
                const double wv = wrow[o];
                for (int b = 0; b < bsz; ++b) {
                    wsum += a[static_cast<std::size_t>(b)] * dt[b];
                    dxacc[static_cast<std::size_t>(b)] += wv * dt[b];
                }
                dwrow[o] += wsum;
            }
        } else {
            for (int o = 0; o < out; ++o, dt += bsz) {
                const double wv = wrow[o];
                for (int b = 0; b < bsz; ++b) {
                    dxacc[static_cast<std::size_t>(b)] += wv * dt[b];
                }
            }
        }
        for (int b = 0; b < bsz; ++b) {
            dx_b[b][i] = dxacc[static_cast<std::size_t>(b)];
        }
    }
}

}  // namespace

void backward_batch(const CnnParams& params,
                    std::span<const ForwardCache> caches,
                    std::span<const Tau16> targets, CnnTensors& grad) {
    const CnnShape& s = params.shape;
    const int bsz = static_cast<int>(caches.size());
    if (bsz == 0 || targets.size() != caches.size()) {
        throw ShapeMismatch("backward_batch: caches/targets size mismatch");
    }
    for (const ForwardCache& c : caches) {
        if (c.shape != s) {
            throw ShapeMismatch("backward: cache shape does not match parameters");
        }
    }
    const int h = s.input_h;
    const int w = s.input_w;
    const int maps = s.conv_maps;
    const int ph = s.pooled_h();
    const int pw = s.pooled_w();
    const auto bs = static_cast<std::size_t>(bsz);

    // d loss / d out_i for the mean-square loss over 16 outputs.
    std::vector<std::vector<double>> dout(bs);
    for (std::size_t b = 0; b < bs; ++b) {
        dout[b].resize(s.out_units);
        for (int i = 0; i < s.out_units; ++i) {
            dout[b][static_cast<std::size_t>(i)] =
                2.0 * (caches[b].out[static_cast<std::size_t>(i)] -
                       targets[b].v[static_cast<std::size_t>(i)]) /
                16.0;
        }
    }

    auto gather = [&](auto member) {
        std::vector<const double*> ptrs(bs);
        for (std::size_t b = 0; b < bs; ++b) {
            ptrs[b] = (caches[b].*member).data();
        }
        return ptrs;
    };
    auto mutable_ptrs = [&](std::vector<std::vector<double>>& v, int n) {
        std::vector<double*> ptrs(bs);
        for (std::size_t b = 0; b < bs; ++b) {
            v[b].resize(static_cast<std::size_t>(n));
            ptrs[b] = v[b].data();
        }
        return ptrs;
    };
    auto const_ptrs = [&](const std::vector<std::vector<double>>& v) {
        std::vector<const double*> ptrs(bs);
        for (std::size_t b = 0; b < bs; ++b) {
            ptrs[b] = v[b].data();
        }
        return ptrs;
    };

    // Output layer.
    std::vector<std::vector<double>> dfc2_drop(bs);
    fc_backward_batch(gather(&ForwardCache::fc2_drop), s.fc2_units,
                      params.value.out_w.data(), s.out_units,
                      const_ptrs(dout), grad.out_w.data(), grad.out_b.data(),
                      mutable_ptrs(dfc2_drop, s.fc2_units));

    // Through dropout 2 and ReLU 2.
    for (std::size_t b = 0; b < bs; ++b) {
        for (int i = 0; i < s.fc2_units; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            dfc2_drop[b][ii] *= caches[b].drop2_mult[ii];
        }
        relu_backward(caches[b].fc2_pre.data(), s.fc2_units, dfc2_drop[b].data());
    }

    std::vector<std::vector<double>> dfc1_drop(bs);
    fc_backward_batch(gather(&ForwardCache::fc1_drop), s.fc1_units,
                      params.value.fc2_w.data(), s.fc2_units,
                      const_ptrs(dfc2_drop), grad.fc2_w.data(),
                      grad.fc2_b.data(), mutable_ptrs(dfc1_drop, s.fc1_units));

    for (std::size_t b = 0; b < bs; ++b) {
        for (int i = 0; i < s.fc1_units; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            dfc1_drop[b][ii] *= caches[b].drop1_mult[ii];
        }
        relu_backward(caches[b].fc1_pre.data(), s.fc1_units, dfc1_drop[b].data());
    }

    std::vector<std::vector<double>> dflat(bs);
    fc_backward_batch(gather(&ForwardCache::conv2_act), s.flat_units(),
                      params.value.fc1_w.data(), s.fc1_units,
                      const_ptrs(dfc1_drop), grad.fc1_w.data(),
                      grad.fc1_b.data(), mutable_ptrs(dflat, s.flat_units()));

    // Conv stack per sample (small buffers, negligible traffic).
    std::vector<double> dpool(static_cast<std::size_t>(ph) * pw * maps);
    std::vector<double> dconv1(static_cast<std::size_t>(h) * w * maps);
    for (std::size_t b = 0; b < bs; ++b) {
        relu_backward(caches[b].conv2_pre.data(), ph * pw * maps,
                      dflat[b].data());
        conv_backward(caches[b].pool_out.data(), ph, pw, maps,
                      params.value.conv2_w.data(), maps, dflat[b].data(),
                      grad.conv2_w.data(), grad.conv2_b.data(), dpool.data());

        // Max pool routes each pooled gradient to its argmax cell.
        std::fill(dconv1.begin(), dconv1.end(), 0.0);
        for (std::size_t i = 0; i < dpool.size(); ++i) {
            dconv1[static_cast<std::size_t>(caches[b].pool_argmax[i])] +=
                dpool[i];
        }
        relu_backward(caches[b].conv1_pre.data(), h * w * maps, dconv1.data());
        conv_backward(caches[b].input.data(), h, w, 1,
                      params.value.conv1_w.data(), maps, dconv1.data(),
                      grad.conv1_w.data(), grad.conv1_b.data(), nullptr);
    }
}

void backward_accumulate(const CnnParams& params, const ForwardCache& cache,
                         const Tau16& target, CnnTensors& grad) {
    backward_batch(params, std::span<const ForwardCache>(&cache, 1),
                   std::span<const Tau16>(&target, 1), grad);
}

CnnTensors backward(const CnnParams& params, const ForwardCache& cache,
                    const Tau16& target) {
    CnnTensors grad = CnnTensors::zeros(params.shape);
    backward_accumulate(params, cache, target, grad);
    return grad;
}

CnnParams adagrad_step(CnnParams params, const CnnTensors& grads, double lr) {
    auto values = params.value.blocks();
    auto accs = params.adagrad_acc.blocks();
    auto gs = grads.blocks();
    for (std::size_t b = 0; b < values.size(); ++b) {
        if (gs[b]->size() != values[b]->size()) {
            throw ShapeMismatch("adagrad_step: gradient block size mismatch");
        }
        double* w = values[b]->data();
        double* acc = accs[b]->data();
        const double* g = gs[b]->data();
        const std::size_t n = values[b]->size();
        for (std::size_t i = 0; i < n; ++i) {
            // g == 0 leaves both the accumulator and the weight unchanged;
            // skipping it avoids the sqrt/div on the (common, with dropout)
            // zero entries.
            if (g[i] == 0.0) {
                continue;
            }
            acc[i] += g[i] * g[i];
            w[i] -= lr * g[i] / (std::sqrt(acc[i]) + kAdagradDelta);
        }
    }
    ++params.step;
    return params;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw InvalidArgument("TrainConfig: learning_rate must be > 0");
    }
    if (batch_size < 1) {
        throw InvalidArgument("TrainConfig: batch_size must be >= 1");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw InvalidArgument("TrainConfig: dropout_rate must be in [0, 1)");
    }
    if (epochs < 0) {
        throw InvalidArgument("TrainConfig: epochs must be >= 0");
    }
}

std::pair<CnnParams, TrainHistory> train_samples(
    const CnnShape& shape, const std::vector<TrainingSample>& train_set,
    const std::vector<TrainingSample>& test_set, const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) {
        throw EmptyDataset("train: no training samples");
    }

    Rng rng(cfg.seed);
    CnnParams params = CnnParams::init(shape, rng);
    TrainHistory history;
    history.epochs.reserve(static_cast<std::size_t>(cfg.epochs));

    const std::size_t n = train_set.size();
    std::vector<std::size_t> order(n);
    CnnTensors grad = CnnTensors::zeros(shape);
    std::vector<ForwardCache> caches(static_cast<std::size_t>(cfg.batch_size));
    std::vector<Tau16> batch_targets(static_cast<std::size_t>(cfg.batch_size));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Fisher-Yates, top-down, one draw per position.
        for (std::size_t i = n; i-- > 1;) {
            const std::size_t j = rng.next_below(i + 1);
            std::swap(order[i], order[j]);
        }

        double loss_sum = 0.0;
        std::size_t pos = 0;
        while (pos < n) {
            const std::size_t batch_end =
                std::min(pos + static_cast<std::size_t>(cfg.batch_size), n);
            const std::size_t batch_n = batch_end - pos;
            grad.fill(0.0);
            for (std::size_t k = pos; k < batch_end; ++k) {
                const TrainingSample& sample = train_set[order[k]];
                const Tau16 pred =
                    forward(params, sample.input, RunMode::kTrain, &rng,
                            &caches[k - pos], cfg.dropout_rate);
                batch_targets[k - pos] = sample.target;
                loss_sum += loss_mse(pred, sample.target);
            }
            backward_batch(params,
                           std::span<const ForwardCache>(caches.data(), batch_n),
                           std::span<const Tau16>(batch_targets.data(), batch_n),
                           grad);
            if (batch_n > 1) {
                const double inv = 1.0 / static_cast<double>(batch_n);
                for (std::vector<double>* b : grad.blocks()) {
                    for (double& g : *b) {
                        g *= inv;
                    }
                }
            }
            params = adagrad_step(std::move(params), grad, cfg.learning_rate);
            pos = batch_end;
        }

        EpochStats stats;
        stats.mean_train_loss = loss_sum / static_cast<double>(n);
        if (test_set.empty()) {
            stats.mean_test_fidelity = std::numeric_limits<double>::quiet_NaN();
        } else {
            double fid_sum = 0.0;
            for (const TrainingSample& sample : test_set) {
                const DensityMatrix pred = predict_density(params, sample.input);
                fid_sum += fidelity(pred, sample.reference);
            }
            stats.mean_test_fidelity =
                fid_sum / static_cast<double>(test_set.size());
        }
        history.epochs.push_back(stats);
    }
    return {std::move(params), std::move(history)};
}

namespace {

std::vector<TrainingSample> to_training_samples(const std::vector<Sample>& in) {
    std::vector<TrainingSample> out;
    out.reserve(in.size());
    for (const Sample& s : in) {
        out.push_back(TrainingSample{
            std::vector<double>(s.grid.values().begin(), s.grid.values().end()),
            s.target, s.reference});
    }
    return out;
}

}  // namespace

std::pair<CnnParams, TrainHistory> train(const Dataset& dataset,
                                         const TrainConfig& cfg) {
    return train_samples(CnnShape{}, to_training_samples(dataset.train),
                         to_training_samples(dataset.test), cfg);
}

DensityMatrix predict_density(const CnnParams& params,
                              std::span<const double> input) {
    const Tau16 t = forward(params, input, RunMode::kEval, nullptr, nullptr);
    return density_from_tau(unpack_tau16(t));
}

DensityMatrix predict_density(const CnnParams& params,
                              const MeasurementGrid& grid) {
    return predict_density(params,
                           std::span<const double>(grid.values().data(), 36));
}

// ---------------------------------------------------------------------------
// Checkpoint serialization. See README "File formats" for the byte layout.
// ---------------------------------------------------------------------------

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

constexpr char kCheckpointMagic[8] = {'T', 'O', 'M', 'O', 'C', 'N', 'N', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    buf.append(reinterpret_cast<const char*>(&v), 4);
}

void put_u64(std::string& buf, std::uint64_t v) {
    buf.append(reinterpret_cast<const char*>(&v), 8);
}

void put_doubles(std::string& buf, const std::vector<double>& v) {
    buf.append(reinterpret_cast<const char*>(v.data()), v.size() * 8);
}

}  // namespace

void save_checkpoint(const CnnParams& params, const std::string& path) {
    std::string buf;
    buf.append(kCheckpointMagic, 8);
    put_u32(buf, kCheckpointVersion);
    put_u32(buf, static_cast<std::uint32_t>(params.shape.input_h));
    put_u32(buf, static_cast<std::uint32_t>(params.shape.input_w));
    put_u32(buf, static_cast<std::uint32_t>(params.shape.conv_maps));
    put_u32(buf, static_cast<std::uint32_t>(params.shape.fc1_units));
    put_u32(buf, static_cast<std::uint32_t>(params.shape.fc2_units));
    put_u32(buf, static_cast<std::uint32_t>(params.shape.out_units));
    for (const std::vector<double>* b : params.value.blocks()) {
        put_doubles(buf, *b);
    }
    for (const std::vector<double>* b : params.adagrad_acc.blocks()) {
        put_doubles(buf, *b);
    }
    put_u64(buf, params.step);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("save_checkpoint: cannot open " + path);
    }
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) {
        throw IoError("save_checkpoint: short write to " + path);
    }
}

CnnParams load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("load_checkpoint: cannot open " + path);
    }
    std::string buf((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (pos + n > buf.size()) {
            throw IoError("load_checkpoint: truncated file " + path);
        }
    };
    need(8);
    if (std::memcmp(buf.data(), kCheckpointMagic, 8) != 0) {
        throw IoError("load_checkpoint: bad magic in " + path);
    }
    pos = 8;
    auto get_u32 = [&]() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, buf.data() + pos, 4);
        pos += 4;
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kCheckpointVersion) {
        throw FormatVersionMismatch("load_checkpoint: unsupported version " +
                                    std::to_string(version));
    }
    CnnShape shape;
    shape.input_h = static_cast<int>(get_u32());
    shape.input_w = static_cast<int>(get_u32());
    shape.conv_maps = static_cast<int>(get_u32());
    shape.fc1_units = static_cast<int>(get_u32());
    shape.fc2_units = static_cast<int>(get_u32());
    shape.out_units = static_cast<int>(get_u32());
    shape.validate();

    CnnParams params;
    params.shape = shape;
    params.value = CnnTensors::zeros(shape);
    params.adagrad_acc = CnnTensors::zeros(shape);
    auto get_doubles = [&](std::vector<double>& v) {
        need(v.size() * 8);
        std::memcpy(v.data(), buf.data() + pos, v.size() * 8);
        pos += v.size() * 8;
    };
    for (std::vector<double>* b : params.value.blocks()) {
        get_doubles(*b);
    }
    for (std::vector<double>* b : params.adagrad_acc.blocks()) {
        get_doubles(*b);
    }
    need(8);
    std::memcpy(&params.step, buf.data() + pos, 8);
    pos += 8;
    if (pos != buf.size()) {
        throw IoError("load_checkpoint: trailing bytes in " + path);
    }
    return params;
}

}  // namespace qutomo
