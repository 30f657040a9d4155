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
#include <string>
#include <utility>
#include <vector>

#include "qutomo/dataset.hpp"
#include "qutomo/reporting.hpp"

namespace qutomo {

enum class ExperimentKind { kFig2a, kFig2b, kFig3a, kFig3b, kNoiseless };

/// Named run profiles. kDesk keeps a full run in CI-scale minutes, kPaper
/// reproduces the published sweeps, kSmoke is a seconds-scale plumbing and
/// determinism check.
enum class Profile { kDesk, kPaper, kSmoke };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::kFig2a;
    /// Swept values; the meaning depends on kind (number of states, training
    /// grids per state, sigma, kept projectors, or total noiseless samples).
    std::vector<double> swept;
    int repetitions = 3;
    int epochs = 200;
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    int n_states = 20;
    int noisy_per_state = 200;
    int train_per_state = 195;
    double sigma = 0.0;  // set by make_spec
    int keep_projectors = 36;
    StateKind state_kind = StateKind::kMixed;
    bool dump_samples = false;
    /// 0 = use the TOMO_WORKERS env var, falling back to
    /// hardware_concurrency.
    int workers = 0;

    void validate() const;
};

/// Profile defaults for an experiment. Flags may override fields afterwards.
ExperimentSpec make_spec(ExperimentKind kind, Profile profile);

std::vector<ResultRow> run_fig2a(const ExperimentSpec& spec);
std::vector<ResultRow> run_fig2b(const ExperimentSpec& spec);
std::vector<ResultRow> run_fig3a(const ExperimentSpec& spec);
std::vector<ResultRow> run_fig3b(const ExperimentSpec& spec);
std::vector<ResultRow> run_noiseless(const ExperimentSpec& spec);

/// Dispatch on spec.kind.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Smallest rectangle (h, w), h <= w, with h*w >= k; ties prefer the most
/// square shape. Used for the compact (non-zero-padded) network input.
std::pair<int, int> compact_rectangle(int k);

/// The first k row-major grid values packed row-major into an h*w buffer,
/// remainder zero.
std::vector<double> compact_input(const MeasurementGrid& g, int k, int h,
                                  int w);

}  // namespace qutomo
