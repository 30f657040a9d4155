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

#include "qutomo/experiments.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "qutomo/cnn.hpp"
#include "qutomo/errors.hpp"
#include "qutomo/fidelity.hpp"
#include "qutomo/stokes.hpp"

namespace qutomo {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDatasetStream = 101;
constexpr std::uint64_t kTrainStream = 102;

struct PerSampleRecord {
    double swept;
    int rep;
    int sample;
    double cnn_fidelity;
    double stokes_fidelity;
    double stokes_min_eig_preclamp;
};

struct JobOutcome {
    double cnn = 0.0;
    double stokes = 0.0;
    double seconds = 0.0;
    std::vector<PerSampleRecord> samples;
};

struct JobSpec {
    double swept = 0.0;
    int point = 0;
    int rep = 0;
    DatasetConfig dataset_cfg;
    std::uint64_t train_seed = 0;
    int epochs = 0;
    /// keep < 36 and compact: reshape inputs to the compact rectangle.
    bool compact = false;
};

int resolve_workers(int requested, std::size_t n_jobs) {
    int w = requested;
    if (w <= 0) {
        if (const char* env = std::getenv("TOMO_WORKERS")) {
            w = std::atoi(env);
        }
    }
    if (w <= 0) {
        w = static_cast<int>(std::thread::hardware_concurrency());
    }
    if (w <= 0) {
        w = 1;
    }
    return static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(w), n_jobs));
}

void run_parallel(const std::vector<std::function<void()>>& jobs, int workers) {
    if (workers <= 1) {
        for (const auto& j : jobs) {
            j();
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) {
                return;
            }
            try {
                jobs[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) {
        threads.emplace_back(worker);
    }
    for (std::thread& t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::string job_cache_key(const std::string& series, const JobSpec& js) {
    // Fingerprint every input that affects the result, so stale cache
    // entries can never be confused with a different configuration.
    std::uint64_t h = Rng::derive(js.dataset_cfg.master_seed, 0xCAC4Eu,
                                  static_cast<std::uint64_t>(js.point),
                                  static_cast<std::uint64_t>(js.rep));
    h = Rng::derive(h, static_cast<std::uint64_t>(js.dataset_cfg.n_states),
                    static_cast<std::uint64_t>(js.dataset_cfg.noisy_per_state),
                    static_cast<std::uint64_t>(js.dataset_cfg.train_per_state));
    h = Rng::derive(h, static_cast<std::uint64_t>(js.dataset_cfg.keep_projectors),
                    std::bit_cast<std::uint64_t>(js.dataset_cfg.sigma),
                    std::bit_cast<std::uint64_t>(js.swept));
    h = Rng::derive(h, js.train_seed, static_cast<std::uint64_t>(js.epochs),
                    (js.dataset_cfg.state_kind == StateKind::kPure ? 1u : 0u) |
                        (js.compact ? 2u : 0u));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return series + "_" + buf;
}

std::vector<TrainingSample> compact_training_samples(
    const std::vector<Sample>& in, int k, int h, int w) {
    std::vector<TrainingSample> out;
    out.reserve(in.size());
    for (const Sample& s : in) {
        out.push_back(TrainingSample{compact_input(s.grid, k, h, w), s.target,
                                     s.reference});
    }
    return out;
}

/// Mean Stokes-baseline fidelity over the test split; optionally records
/// per-sample values.
double stokes_baseline(const Dataset& ds, double swept, int rep,
                       std::vector<PerSampleRecord>* samples) {
    double sum = 0.0;
    int idx = 0;
    for (const Sample& s : ds.test) {
        const PhysicalizeResult ph =
            physicalize_with_diagnostics(stokes_reconstruct(s.grid));
        const double f = fidelity(ph.rho, s.reference);
        sum += f;
        if (samples != nullptr) {
            (*samples)[static_cast<std::size_t>(idx)].swept = swept;
            (*samples)[static_cast<std::size_t>(idx)].rep = rep;
            (*samples)[static_cast<std::size_t>(idx)].sample = idx;
            (*samples)[static_cast<std::size_t>(idx)].stokes_fidelity = f;
            (*samples)[static_cast<std::size_t>(idx)].stokes_min_eig_preclamp =
                ph.min_eigenvalue_before;
        }
        ++idx;
    }
    return sum / static_cast<double>(ds.test.size());
}

JobOutcome run_job(const JobSpec& js, bool dump_samples) {
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset ds = generate(js.dataset_cfg);

    TrainConfig cfg;
    cfg.epochs = js.epochs;
    cfg.seed = js.train_seed;

    double cnn_fid;
    JobOutcome out;
    if (dump_samples) {
        out.samples.resize(ds.test.size());
    }
    if (js.compact) {
        const auto [h, w] = compact_rectangle(js.dataset_cfg.keep_projectors);
        CnnShape shape;
        shape.input_h = h;
        shape.input_w = w;
        auto train_view = compact_training_samples(
            ds.train, js.dataset_cfg.keep_projectors, h, w);
        auto test_view = compact_training_samples(
            ds.test, js.dataset_cfg.keep_projectors, h, w);
        auto [params, history] = train_samples(shape, train_view, test_view, cfg);
        cnn_fid = history.epochs.back().mean_test_fidelity;
        if (dump_samples) {
            for (std::size_t i = 0; i < test_view.size(); ++i) {
                out.samples[i].cnn_fidelity = fidelity(
                    predict_density(params, test_view[i].input),
                    test_view[i].reference);
            }
        }
    } else {
        auto [params, history] = train(ds, cfg);
        cnn_fid = history.epochs.back().mean_test_fidelity;
        if (dump_samples) {
            for (std::size_t i = 0; i < ds.test.size(); ++i) {
                out.samples[i].cnn_fidelity =
                    fidelity(predict_density(params, ds.test[i].grid),
                             ds.test[i].reference);
            }
        }
    }

    out.cnn = cnn_fid;
    out.stokes = stokes_baseline(ds, js.swept, js.rep,
                                 dump_samples ? &out.samples : nullptr);
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
}

struct SeriesRunner {
    const ExperimentSpec& spec;
    std::string series_name;

    std::vector<ResultRow> run(const std::vector<JobSpec>& jobs,
                               int points) const {
        const fs::path out_dir(spec.out_dir);
        const fs::path cache_dir = out_dir / "cache";
        fs::create_directories(cache_dir);

        std::vector<JobOutcome> outcomes(jobs.size());
        std::vector<std::function<void()>> tasks;
        tasks.reserve(jobs.size());
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            tasks.push_back([&, i] {
                const JobSpec& js = jobs[i];
                const fs::path cache_file =
                    cache_dir / (job_cache_key(series_name, js) + ".json");
                if (!spec.dump_samples && fs::exists(cache_file)) {
                    std::ifstream f(cache_file);
                    json j;
                    f >> j;
                    outcomes[i].cnn = j.at("cnn").get<double>();
                    outcomes[i].stokes = j.at("stokes").get<double>();
                    outcomes[i].seconds = j.at("seconds").get<double>();
                    return;
                }
                outcomes[i] = run_job(js, spec.dump_samples);
                json j{{"cnn", outcomes[i].cnn},
                       {"stokes", outcomes[i].stokes},
                       {"seconds", outcomes[i].seconds}};
                std::ofstream f(cache_file, std::ios::trunc);
                f << j.dump(2) << "\n";
            });
        }
        run_parallel(tasks, resolve_workers(spec.workers, tasks.size()));

        // Aggregate per point over repetitions.
        std::vector<ResultRow> rows;
        rows.reserve(static_cast<std::size_t>(points));
        for (int p = 0; p < points; ++p) {
            std::vector<double> cnn, stokes;
            double seconds = 0.0;
            double swept = 0.0;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                if (jobs[i].point != p) {
                    continue;
                }
                swept = jobs[i].swept;
                cnn.push_back(outcomes[i].cnn);
                stokes.push_back(outcomes[i].stokes);
                seconds += outcomes[i].seconds;
            }
            rows.push_back(ResultRow{swept, mean(cnn), sample_std(cnn),
                                     mean(stokes), sample_std(stokes),
                                     seconds});
        }

        if (spec.dump_samples) {
            dump(jobs, outcomes, out_dir);
        }
        return rows;
    }

    static double mean(const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    }

    static double sample_std(const std::vector<double>& v) {
        if (v.size() < 2) {
            return 0.0;
        }
        const double m = mean(v);
        double s = 0.0;
        for (double x : v) {
            s += (x - m) * (x - m);
        }
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    }

    void dump(const std::vector<JobSpec>& jobs,
              const std::vector<JobOutcome>& outcomes,
              const fs::path& out_dir) const {
        std::ofstream f(out_dir / (series_name + "_samples.csv"),
                        std::ios::trunc);
        f << "swept,rep,sample,cnn_fidelity,stokes_fidelity,stokes_min_eig_"
             "preclamp\n";
        char buf[160];
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            for (const PerSampleRecord& r : outcomes[i].samples) {
                std::snprintf(buf, sizeof(buf),
                              "%.10g,%d,%d,%.10g,%.10g,%.10g\n", r.swept,
                              r.rep, r.sample, r.cnn_fidelity,
                              r.stokes_fidelity, r.stokes_min_eig_preclamp);
                f << buf;
            }
        }
    }
};

void write_manifest(const ExperimentSpec& spec, const std::string& name,
                    const json& extra) {
    json j{{"experiment", name},
           {"seed", spec.seed},
           {"swept", spec.swept},
           {"repetitions", spec.repetitions},
           {"epochs", spec.epochs},
           {"n_states", spec.n_states},
           {"noisy_per_state", spec.noisy_per_state},
           {"train_per_state", spec.train_per_state},
           {"sigma", spec.sigma},
           {"keep_projectors", spec.keep_projectors},
           {"state_kind",
            spec.state_kind == StateKind::kPure ? "pure" : "mixed"},
           {"dump_samples", spec.dump_samples}};
    j.update(extra);
    fs::create_directories(spec.out_dir);
    std::ofstream f(fs::path(spec.out_dir) / (name + "_manifest.json"),
                    std::ios::trunc);
    f << j.dump(2) << "\n";
}

// Series index feeds the seed derivation so pure/mixed (or padded/compact)
// runs draw independent training streams.
std::uint64_t dataset_master(const ExperimentSpec& spec, int point,
                             int series) {
    return Rng::derive(spec.seed, kDatasetStream,
                       static_cast<std::uint64_t>(point),
                       static_cast<std::uint64_t>(series));
}

std::uint64_t train_seed(const ExperimentSpec& spec, int point, int rep,
                         int series) {
    return Rng::derive(spec.seed, kTrainStream,
                       static_cast<std::uint64_t>(point) << 20 |
                           static_cast<std::uint64_t>(rep),
                       static_cast<std::uint64_t>(series));
}

}  // namespace

void ExperimentSpec::validate() const {
    if (swept.empty()) {
        throw InvalidArgument("ExperimentSpec: swept values must be nonempty");
    }
    if (repetitions < 1) {
        throw InvalidArgument("ExperimentSpec: repetitions must be >= 1");
    }
    if (epochs < 1) {
        throw InvalidArgument("ExperimentSpec: epochs must be >= 1");
    }
}

ExperimentSpec make_spec(ExperimentKind kind, Profile profile) {
    const double pi = std::numbers::pi;
    ExperimentSpec s;
    s.kind = kind;
    s.sigma = pi / 6.0;
    switch (profile) {
        case Profile::kDesk:
            s.repetitions = 3;
            s.epochs = 200;
            s.n_states = 20;
            switch (kind) {
                case ExperimentKind::kFig2a:
                    s.swept = {5, 10, 20};
                    break;
                case ExperimentKind::kFig2b:
                    s.swept = {40, 120, 195};
                    break;
                case ExperimentKind::kFig3a:
                    s.swept = {pi, pi / 6.0, pi / 21.0};
                    break;
                case ExperimentKind::kFig3b:
                    s.n_states = 30;
                    s.state_kind = StateKind::kPure;
                    s.swept = {4, 16, 28, 36};
                    break;
                case ExperimentKind::kNoiseless:
                    s.swept = {5000};
                    s.repetitions = 1;
                    break;
            }
            break;
        case Profile::kPaper:
            s.repetitions = 10;
            s.n_states = 100;
            switch (kind) {
                case ExperimentKind::kFig2a:
                    s.epochs = 800;
                    s.swept = {20, 40, 80, 120, 160, 200};
                    break;
                case ExperimentKind::kFig2b:
                    s.epochs = 800;
                    s.swept = {40, 80, 120, 160, 195};
                    break;
                case ExperimentKind::kFig3a:
                    s.epochs = 500;
                    s.swept = {pi,        pi / 2.0,   pi / 3.0,  pi / 6.0,
                               pi / 11.0, pi / 16.0,  pi / 21.0, pi / 800.0,
                               pi / 1200.0, pi / 1600.0};
                    break;
                case ExperimentKind::kFig3b:
                    s.epochs = 500;
                    s.state_kind = StateKind::kPure;
                    s.swept = {4, 8, 12, 16, 20, 24, 28, 32, 36};
                    break;
                case ExperimentKind::kNoiseless:
                    s.epochs = 500;
                    s.swept = {60000};
                    s.repetitions = 1;
                    break;
            }
            break;
        case Profile::kSmoke:
            s.repetitions = 2;
            s.epochs = 8;
            s.n_states = 3;
            s.noisy_per_state = 12;
            s.train_per_state = 9;
            switch (kind) {
                case ExperimentKind::kFig2a:
                    s.swept = {3, 5};
                    break;
                case ExperimentKind::kFig2b:
                    s.swept = {6, 9};
                    break;
                case ExperimentKind::kFig3a:
                    s.swept = {pi, pi / 6.0};
                    break;
                case ExperimentKind::kFig3b:
                    s.swept = {4, 36};
                    break;
                case ExperimentKind::kNoiseless:
                    s.swept = {60};
                    s.repetitions = 1;
                    break;
            }
            break;
    }
    return s;
}

std::pair<int, int> compact_rectangle(int k) {
    if (k < 1 || k > 36) {
        throw BadCount("compact_rectangle: k must be in [1, 36]");
    }
    int best_h = 1, best_w = k;
    for (int h = 1; h * h <= k; ++h) {
        const int w = (k + h - 1) / h;
        const int area = h * w;
        const int best_area = best_h * best_w;
        if (area < best_area ||
            (area == best_area && (w - h) < (best_w - best_h))) {
            best_h = h;
            best_w = w;
        }
    }
    return {best_h, best_w};
}

std::vector<double> compact_input(const MeasurementGrid& g, int k, int h,
                                  int w) {
    if (h * w < k) {
        throw BadCount("compact_input: rectangle smaller than k");
    }
    std::vector<double> out(static_cast<std::size_t>(h) * w, 0.0);
    for (int i = 0; i < k; ++i) {
        out[static_cast<std::size_t>(i)] =
            g.value(static_cast<std::size_t>(i) / 6,
                    static_cast<std::size_t>(i) % 6);
    }
    return out;
}

namespace {

std::vector<ResultRow> run_kind_series(const ExperimentSpec& spec,
                                       StateKind kind,
                                       const std::string& series_name,
                                       int series_id, bool fixed_dataset) {
    std::vector<JobSpec> jobs;
    for (int p = 0; p < static_cast<int>(spec.swept.size()); ++p) {
        const double value = spec.swept[p];
        DatasetConfig cfg;
        cfg.state_kind = kind;
        cfg.sigma = spec.sigma;
        cfg.keep_projectors = spec.keep_projectors;
        cfg.n_states = spec.n_states;
        cfg.noisy_per_state = spec.noisy_per_state;
        cfg.train_per_state = spec.train_per_state;
        switch (spec.kind) {
            case ExperimentKind::kFig2a:
                cfg.n_states = static_cast<int>(value);
                break;
            case ExperimentKind::kFig2b:
                // Fixed 5-grid test split at every sweep point; the test
                // stream is indexed independently of the train count.
                cfg.train_per_state = static_cast<int>(value);
                cfg.noisy_per_state = static_cast<int>(value) + 5;
                break;
            case ExperimentKind::kFig3a:
                cfg.sigma = value;
                break;
            case ExperimentKind::kFig3b:
                cfg.keep_projectors = static_cast<int>(value);
                break;
            case ExperimentKind::kNoiseless:
                break;
        }
        cfg.master_seed = dataset_master(spec, fixed_dataset ? 0 : p, series_id);
        for (int r = 0; r < spec.repetitions; ++r) {
            JobSpec js;
            js.swept = value;
            js.point = p;
            js.rep = r;
            js.dataset_cfg = cfg;
            js.train_seed = train_seed(spec, p, r, series_id);
            js.epochs = spec.epochs;
            js.compact = false;
            jobs.push_back(js);
        }
    }
    SeriesRunner runner{spec, series_name};
    std::vector<ResultRow> rows =
        runner.run(jobs, static_cast<int>(spec.swept.size()));
    emit_plot(rows, (fs::path(spec.out_dir) / series_name).string());
    return rows;
}

}  // namespace

std::vector<ResultRow> run_fig2a(const ExperimentSpec& spec) {
    spec.validate();
    write_manifest(spec, "fig2a", json::object());
    std::vector<ResultRow> all =
        run_kind_series(spec, StateKind::kPure, "fig2a_pure", 0, true);
    std::vector<ResultRow> mixed =
        run_kind_series(spec, StateKind::kMixed, "fig2a_mixed", 1, true);
    all.insert(all.end(), mixed.begin(), mixed.end());
    return all;
}

std::vector<ResultRow> run_fig2b(const ExperimentSpec& spec) {
    spec.validate();
    write_manifest(spec, "fig2b", json::object());
    std::vector<ResultRow> all =
        run_kind_series(spec, StateKind::kPure, "fig2b_pure", 0, true);
    std::vector<ResultRow> mixed =
        run_kind_series(spec, StateKind::kMixed, "fig2b_mixed", 1, true);
    all.insert(all.end(), mixed.begin(), mixed.end());
    return all;
}

std::vector<ResultRow> run_fig3a(const ExperimentSpec& spec) {
    spec.validate();
    write_manifest(spec, "fig3a", json::object());
    return run_kind_series(spec, spec.state_kind, "fig3a", 0, false);
}

std::vector<ResultRow> run_fig3b(const ExperimentSpec& spec) {
    spec.validate();
    json extra;
    for (double v : spec.swept) {
        const auto [h, w] = compact_rectangle(static_cast<int>(v));
        extra["compact_shapes"][std::to_string(static_cast<int>(v))] = {h, w};
    }
    write_manifest(spec, "fig3b", extra);

    // Padded and compact variants share datasets point by point; only the
    // network input layout (and its training stream) differs.
    std::vector<JobSpec> padded_jobs, compact_jobs;
    for (int p = 0; p < static_cast<int>(spec.swept.size()); ++p) {
        const int k = static_cast<int>(spec.swept[p]);
        DatasetConfig cfg;
        cfg.state_kind = spec.state_kind;
        cfg.sigma = spec.sigma;
        cfg.keep_projectors = k;
        cfg.n_states = spec.n_states;
        cfg.noisy_per_state = spec.noisy_per_state;
        cfg.train_per_state = spec.train_per_state;
        cfg.master_seed = dataset_master(spec, p, 0);
        for (int r = 0; r < spec.repetitions; ++r) {
            JobSpec js;
            js.swept = k;
            js.point = p;
            js.rep = r;
            js.dataset_cfg = cfg;
            js.epochs = spec.epochs;
            js.train_seed = train_seed(spec, p, r, 0);
            js.compact = false;
            padded_jobs.push_back(js);
            js.train_seed = train_seed(spec, p, r, 1);
            js.compact = true;
            compact_jobs.push_back(js);
        }
    }
    SeriesRunner padded{spec, "fig3b"};
    std::vector<ResultRow> rows =
        padded.run(padded_jobs, static_cast<int>(spec.swept.size()));
    emit_plot(rows, (fs::path(spec.out_dir) / "fig3b").string());

    SeriesRunner compact{spec, "fig3b_compact"};
    std::vector<ResultRow> compact_rows =
        compact.run(compact_jobs, static_cast<int>(spec.swept.size()));
    emit_plot(compact_rows, (fs::path(spec.out_dir) / "fig3b_compact").string());

    rows.insert(rows.end(), compact_rows.begin(), compact_rows.end());
    return rows;
}

std::vector<ResultRow> run_noiseless(const ExperimentSpec& spec) {
    spec.validate();
    write_manifest(spec, "noiseless", json::object());
    const int n = static_cast<int>(spec.swept.front());
    fs::create_directories(spec.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const Dataset ds = generate_noiseless_random(
        n, dataset_master(spec, 0, 0), spec.state_kind);

    std::vector<double> cnn_vals;
    TrainHistory first_history;
    for (int r = 0; r < spec.repetitions; ++r) {
        TrainConfig cfg;
        cfg.epochs = spec.epochs;
        cfg.seed = train_seed(spec, 0, r, 0);
        auto [params, history] = train(ds, cfg);
        cnn_vals.push_back(history.epochs.back().mean_test_fidelity);
        if (r == 0) {
            first_history = std::move(history);
        }
    }
    const double stokes = stokes_baseline(ds, static_cast<double>(n), 0, nullptr);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    {
        std::ofstream f(fs::path(spec.out_dir) / "noiseless_history.csv",
                        std::ios::trunc);
        f << "epoch,mean_train_loss,mean_test_fidelity\n";
        char buf[96];
        for (std::size_t e = 0; e < first_history.epochs.size(); ++e) {
            std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", e + 1,
                          first_history.epochs[e].mean_train_loss,
                          first_history.epochs[e].mean_test_fidelity);
            f << buf;
        }
    }

    std::vector<ResultRow> rows{ResultRow{
        static_cast<double>(n), SeriesRunner::mean(cnn_vals),
        SeriesRunner::sample_std(cnn_vals), stokes, 0.0, seconds}};
    emit_plot(rows, (fs::path(spec.out_dir) / "noiseless").string());
    return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::kFig2a:
            return run_fig2a(spec);
        case ExperimentKind::kFig2b:
            return run_fig2b(spec);
        case ExperimentKind::kFig3a:
            return run_fig3a(spec);
        case ExperimentKind::kFig3b:
            return run_fig3b(spec);
        case ExperimentKind::kNoiseless:
            return run_noiseless(spec);
    }
    throw InvalidArgument("run_experiment: unknown kind");
}

}  // namespace qutomo
