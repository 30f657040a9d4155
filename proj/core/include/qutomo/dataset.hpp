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
#include <vector>

#include "qutomo/measurement.hpp"
#include "qutomo/states.hpp"
#include "qutomo/tau.hpp"

namespace qutomo {

enum class StateKind { kPure, kMixed };

/// Seed streams for child-seed derivation (Rng::derive tags). State draws,
/// training-noise draws and test-noise draws are independent streams, so the
/// test grids of a state do not move when train_per_state changes.
namespace seed_stream {
inline constexpr std::uint64_t kState = 1;
inline constexpr std::uint64_t kTrainNoise = 2;
inline constexpr std::uint64_t kTestNoise = 3;
}  // namespace seed_stream

struct DatasetConfig {
    int n_states = 0;
    StateKind state_kind = StateKind::kMixed;
    int noisy_per_state = 200;
    int train_per_state = 195;
    double sigma = 0.0;
    int keep_projectors = 36;
    std::uint64_t master_seed = 0;

    void validate() const;

    bool operator==(const DatasetConfig& other) const = default;
};

struct Sample {
    MeasurementGrid grid;
    Tau16 target;
    int state_index = 0;
    DensityMatrix reference;

    bool operator==(const Sample& other) const = default;
};

struct Dataset {
    DatasetConfig config;
    std::vector<Sample> train;
    std::vector<Sample> test;

    /// True when produced by generate_noiseless_random (one grid per state,
    /// splits disjoint in states); false for the replicated noisy layout.
    bool unique_states = false;

    bool operator==(const Dataset& other) const = default;
};

/// For each of n_states random states: factor the tau target once, then draw
/// train_per_state noisy grids from the train-noise stream and
/// (noisy_per_state - train_per_state) from the test-noise stream, each with
/// 36 fresh rotations, masked down to keep_projectors. Near-singular state
/// draws are retried with a fresh child seed (up to 10 times).
Dataset generate(const DatasetConfig& cfg);

/// n unique random states with ONE noiseless grid each, split 11:1
/// (train = floor(n*11/12), clamped so both splits are nonempty).
Dataset generate_noiseless_random(int n, std::uint64_t seed,
                                  StateKind kind = StateKind::kMixed);

/// Writes <path_stem>.json (manifest) and <path_stem>.bin (payload).
/// Byte layout documented in the README; the manifest records a CRC32 of
/// the payload.
void save(const Dataset& ds, const std::string& path_stem);

/// Inverse of save; throws IoError / FormatVersionMismatch /
/// ChecksumMismatch.
Dataset load(const std::string& path_stem);

}  // namespace qutomo
