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

#include "qutomo/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "qutomo/errors.hpp"

namespace qutomo {

namespace {

static_assert(std::endian::native == std::endian::little,
              "dataset payload format assumes a little-endian host");

constexpr std::uint32_t kFormatVersion = 1;

// CRC-32 (IEEE 802.3, reflected, poly 0xEDB88320).
std::uint32_t crc32(const unsigned char* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) {
                c = (c & 1) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i) {
        c = table[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
    }
    return c ^ 0xFFFFFFFFu;
}

DensityMatrix draw_state(Rng& rng, StateKind kind) {
    return kind == StateKind::kPure ? random_pure_state(rng)
                                    : random_mixed_state(rng);
}

// Draw a state and its tau target, retrying near-singular draws with a
// fresh child seed.
std::pair<DensityMatrix, Tau16> draw_labeled_state(std::uint64_t master,
                                                   int state_index,
                                                   StateKind kind) {
    constexpr int kMaxRetries = 10;
    for (int attempt = 0;; ++attempt) {
        Rng rng(Rng::derive(master, seed_stream::kState,
                            static_cast<std::uint64_t>(state_index),
                            static_cast<std::uint64_t>(attempt)));
        DensityMatrix rho = draw_state(rng, kind);
        try {
            const Tau16 target = pack_tau16(tau_from_density(rho));
            return {std::move(rho), target};
        } catch (const SingularState&) {
            if (attempt + 1 >= kMaxRetries) {
                throw;
            }
        }
    }
}

MeasurementGrid draw_noisy_grid(const DensityMatrix& rho, std::uint64_t seed,
                                double sigma, int keep) {
    Rng rng(seed);
    const NoiseParams noise{sigma};
    const MeasurementGrid full = measure(rho, noisy_projector_grid(rng, noise));
    return keep == 36 ? full : mask_measurements(full, keep);
}

}  // namespace

void DatasetConfig::validate() const {
    if (n_states < 1) {
        throw InvalidArgument("DatasetConfig: n_states must be >= 1");
    }
    if (noisy_per_state < 1 || train_per_state < 1 ||
        train_per_state >= noisy_per_state) {
        throw InvalidArgument(
            "DatasetConfig: need 1 <= train_per_state < noisy_per_state");
    }
    if (keep_projectors < 1 || keep_projectors > 36) {
        throw InvalidArgument("DatasetConfig: keep_projectors must be in [1, 36]");
    }
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("DatasetConfig: sigma must be >= 0");
    }
}

Dataset generate(const DatasetConfig& cfg) {
    cfg.validate();
    Dataset ds;
    ds.config = cfg;
    ds.unique_states = false;
    const int n_test = cfg.noisy_per_state - cfg.train_per_state;
    ds.train.reserve(static_cast<std::size_t>(cfg.n_states) * cfg.train_per_state);
    ds.test.reserve(static_cast<std::size_t>(cfg.n_states) * n_test);

    for (int i = 0; i < cfg.n_states; ++i) {
        auto [rho, target] = draw_labeled_state(cfg.master_seed, i, cfg.state_kind);
        for (int j = 0; j < cfg.train_per_state; ++j) {
            const std::uint64_t seed =
                Rng::derive(cfg.master_seed, seed_stream::kTrainNoise,
                            static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
            ds.train.push_back(Sample{
                draw_noisy_grid(rho, seed, cfg.sigma, cfg.keep_projectors),
                target, i, rho});
        }
        for (int j = 0; j < n_test; ++j) {
            const std::uint64_t seed =
                Rng::derive(cfg.master_seed, seed_stream::kTestNoise,
                            static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(j));
            ds.test.push_back(Sample{
                draw_noisy_grid(rho, seed, cfg.sigma, cfg.keep_projectors),
                target, i, rho});
        }
    }
    return ds;
}

Dataset generate_noiseless_random(int n, std::uint64_t seed, StateKind kind) {
    if (n < 2) {
        throw InvalidArgument("generate_noiseless_random: need n >= 2");
    }
    int n_train = static_cast<int>((static_cast<std::int64_t>(n) * 11) / 12);
    n_train = std::max(1, std::min(n_train, n - 1));

    Dataset ds;
    ds.unique_states = true;
    ds.config = DatasetConfig{n, kind, 1, 1, 0.0, 36, seed};
    ds.train.reserve(static_cast<std::size_t>(n_train));
    ds.test.reserve(static_cast<std::size_t>(n - n_train));
    for (int i = 0; i < n; ++i) {
        auto [rho, target] = draw_labeled_state(seed, i, kind);
        Sample s{measure(rho, projector_grid()), target, i, rho};
        if (i < n_train) {
            ds.train.push_back(std::move(s));
        } else {
            ds.test.push_back(std::move(s));
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Serialization: <stem>.json manifest + <stem>.bin payload.
// Per sample: 36 f64 grid values (row-major), one u64 of mask bits (bit i =
// row-major cell i, LSB first), 16 f64 targets, 32 f64 reference entries
// (row-major, real then imaginary per entry). See README "File formats".
// ---------------------------------------------------------------------------

namespace {

void append_sample(std::string& buf, const Sample& s) {
    buf.append(reinterpret_cast<const char*>(s.grid.values().data()), 36 * 8);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < 36; ++i) {
        if (s.grid.mask()[i]) {
            bits |= (std::uint64_t{1} << i);
        }
    }
    buf.append(reinterpret_cast<const char*>(&bits), 8);
    buf.append(reinterpret_cast<const char*>(s.target.v.data()), 16 * 8);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const Complex z = s.reference(r, c);
            const double re = z.real();
            const double im = z.imag();
            buf.append(reinterpret_cast<const char*>(&re), 8);
            buf.append(reinterpret_cast<const char*>(&im), 8);
        }
    }
}

constexpr std::size_t kSampleBytes = 36 * 8 + 8 + 16 * 8 + 32 * 8;

Sample parse_sample(const char* p, int state_index) {
    MeasurementGrid grid;
    std::array<double, 36> values;
    std::memcpy(values.data(), p, 36 * 8);
    p += 36 * 8;
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    p += 8;
    for (std::size_t i = 0; i < 36; ++i) {
        grid.set(i / 6, i % 6, values[i], (bits >> i) & 1);
    }
    Tau16 target;
    std::memcpy(target.v.data(), p, 16 * 8);
    p += 16 * 8;
    CMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            double re, im;
            std::memcpy(&re, p, 8);
            p += 8;
            std::memcpy(&im, p, 8);
            p += 8;
            m(r, c) = Complex(re, im);
        }
    }
    return Sample{grid, target, state_index, DensityMatrix::from_matrix(m)};
}

nlohmann::json config_to_json(const DatasetConfig& cfg) {
    return nlohmann::json{
        {"n_states", cfg.n_states},
        {"state_kind", cfg.state_kind == StateKind::kPure ? "pure" : "mixed"},
        {"noisy_per_state", cfg.noisy_per_state},
        {"train_per_state", cfg.train_per_state},
        {"sigma", cfg.sigma},
        {"keep_projectors", cfg.keep_projectors},
        {"master_seed", cfg.master_seed},
    };
}

DatasetConfig config_from_json(const nlohmann::json& j) {
    DatasetConfig cfg;
    cfg.n_states = j.at("n_states").get<int>();
    cfg.state_kind = j.at("state_kind").get<std::string>() == "pure"
                         ? StateKind::kPure
                         : StateKind::kMixed;
    cfg.noisy_per_state = j.at("noisy_per_state").get<int>();
    cfg.train_per_state = j.at("train_per_state").get<int>();
    cfg.sigma = j.at("sigma").get<double>();
    cfg.keep_projectors = j.at("keep_projectors").get<int>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    return cfg;
}

}  // namespace

void save(const Dataset& ds, const std::string& path_stem) {
    std::string payload;
    payload.reserve((ds.train.size() + ds.test.size()) * kSampleBytes);
    for (const Sample& s : ds.train) {
        append_sample(payload, s);
    }
    for (const Sample& s : ds.test) {
        append_sample(payload, s);
    }
    const std::uint32_t checksum =
        crc32(reinterpret_cast<const unsigned char*>(payload.data()),
              payload.size());

    nlohmann::json manifest{
        {"format_version", kFormatVersion},
        {"kind", "tomo-dataset"},
        {"config", config_to_json(ds.config)},
        {"split_layout", ds.unique_states ? "unique" : "replicated"},
        {"n_train", ds.train.size()},
        {"n_test", ds.test.size()},
        {"payload_bytes", payload.size()},
        {"payload_crc32", checksum},
    };

    std::ofstream jf(path_stem + ".json", std::ios::trunc);
    if (!jf) {
        throw IoError("save: cannot open " + path_stem + ".json");
    }
    jf << manifest.dump(2) << "\n";
    if (!jf) {
        throw IoError("save: short write to " + path_stem + ".json");
    }
    std::ofstream bf(path_stem + ".bin", std::ios::binary | std::ios::trunc);
    if (!bf) {
        throw IoError("save: cannot open " + path_stem + ".bin");
    }
    bf.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!bf) {
        throw IoError("save: short write to " + path_stem + ".bin");
    }
}

Dataset load(const std::string& path_stem) {
    std::ifstream jf(path_stem + ".json");
    if (!jf) {
        throw IoError("load: cannot open " + path_stem + ".json");
    }
    nlohmann::json manifest;
    try {
        jf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load: bad manifest in " + path_stem + ".json: " + e.what());
    }
    if (manifest.value("format_version", -1) != static_cast<int>(kFormatVersion)) {
        throw FormatVersionMismatch("load: unsupported dataset format version");
    }

    std::ifstream bf(path_stem + ".bin", std::ios::binary);
    if (!bf) {
        throw IoError("load: cannot open " + path_stem + ".bin");
    }
    std::string payload((std::istreambuf_iterator<char>(bf)),
                        std::istreambuf_iterator<char>());

    const std::size_t expected_bytes = manifest.at("payload_bytes").get<std::size_t>();
    const std::uint32_t expected_crc = manifest.at("payload_crc32").get<std::uint32_t>();
    if (payload.size() != expected_bytes ||
        crc32(reinterpret_cast<const unsigned char*>(payload.data()),
              payload.size()) != expected_crc) {
        throw ChecksumMismatch("load: payload checksum mismatch for " +
                               path_stem + ".bin");
    }

    Dataset ds;
    ds.config = config_from_json(manifest.at("config"));
    ds.unique_states = manifest.at("split_layout").get<std::string>() == "unique";
    const std::size_t n_train = manifest.at("n_train").get<std::size_t>();
    const std::size_t n_test = manifest.at("n_test").get<std::size_t>();
    if (payload.size() != (n_train + n_test) * kSampleBytes) {
        throw IoError("load: payload size does not match sample counts");
    }

    const int per_state_train = ds.config.train_per_state;
    const int per_state_test = ds.config.noisy_per_state - ds.config.train_per_state;
    const char* p = payload.data();
    ds.train.reserve(n_train);
    for (std::size_t i = 0; i < n_train; ++i, p += kSampleBytes) {
        const int state_index =
            ds.unique_states ? static_cast<int>(i)
                             : static_cast<int>(i / static_cast<std::size_t>(
                                                        per_state_train));
        ds.train.push_back(parse_sample(p, state_index));
    }
    ds.test.reserve(n_test);
    for (std::size_t i = 0; i < n_test; ++i, p += kSampleBytes) {
        const int state_index =
            ds.unique_states
                ? static_cast<int>(n_train + i)
                : static_cast<int>(i / static_cast<std::size_t>(per_state_test));
        ds.test.push_back(parse_sample(p, state_index));
    }
    return ds;
}

}  // namespace qutomo
