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

// Command-line front end: dataset generation, training, evaluation, the
// four figure-style sweep experiments, and a built-in selftest.
//
// Exit codes: 0 success, 2 validation/usage/IO failure, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "qutomo/cnn.hpp"
#include "qutomo/dataset.hpp"
#include "qutomo/errors.hpp"
#include "qutomo/experiments.hpp"
#include "qutomo/fidelity.hpp"
#include "qutomo/stokes.hpp"

namespace {

using namespace qutomo;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

StateKind parse_kind(const std::string& s) {
    if (s == "pure") {
        return StateKind::kPure;
    }
    if (s == "mixed") {
        return StateKind::kMixed;
    }
    throw InvalidArgument("--kind must be 'pure' or 'mixed'");
}

struct ExperimentFlags {
    std::uint64_t seed = 1;
    std::string out = "out";
    int epochs = -1;
    int reps = -1;
    int states = -1;
    double sigma = -1.0;
    int keep = -1;
    std::string kind = "";
    bool paper_scale = false;
    bool smoke = false;
    bool dump_samples = false;
    int workers = 0;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
    cmd->add_option("--seed", f.seed, "Master seed for the experiment");
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_option("--epochs", f.epochs, "Training epochs per run");
    cmd->add_option("--reps", f.reps, "Repetitions per sweep point");
    cmd->add_option("--states", f.states, "Number of random states");
    cmd->add_option("--sigma", f.sigma, "Rotation-noise sigma (radians)");
    cmd->add_option("--keep", f.keep, "Projectors kept out of 36");
    cmd->add_option("--kind", f.kind, "State kind: pure|mixed");
    cmd->add_flag("--paper-scale", f.paper_scale,
                  "Run the full published sweep sizes");
    cmd->add_flag("--smoke", f.smoke, "Tiny seconds-scale profile");
    cmd->add_flag("--dump-samples", f.dump_samples,
                  "Write per-sample fidelity logs (forces recompute)");
    cmd->add_option("--workers", f.workers,
                    "Parallel worker slots (default: TOMO_WORKERS env or all cores)");
}

ExperimentSpec build_spec(ExperimentKind kind, const ExperimentFlags& f) {
    const Profile profile = f.smoke ? Profile::kSmoke
                            : f.paper_scale ? Profile::kPaper
                                            : Profile::kDesk;
    ExperimentSpec spec = make_spec(kind, profile);
    spec.seed = f.seed;
    spec.out_dir = f.out;
    spec.dump_samples = f.dump_samples;
    spec.workers = f.workers;
    if (f.epochs > 0) {
        spec.epochs = f.epochs;
    }
    if (f.reps > 0) {
        spec.repetitions = f.reps;
    }
    if (f.states > 0) {
        spec.n_states = f.states;
    }
    if (f.sigma >= 0.0) {
        spec.sigma = f.sigma;
    }
    if (f.keep > 0) {
        spec.keep_projectors = f.keep;
    }
    if (!f.kind.empty()) {
        spec.state_kind = parse_kind(f.kind);
    }
    return spec;
}

void print_rows(const std::vector<ResultRow>& rows) {
    std::printf("%s\n", kResultCsvHeader);
    for (const ResultRow& r : rows) {
        std::printf("%.10g,%.10g,%.10g,%.10g,%.10g,%.3f\n", r.swept,
                    r.cnn_mean, r.cnn_std, r.stokes_mean, r.stokes_std,
                    r.seconds);
    }
}

int cmd_generate(std::uint64_t seed, int states, double sigma, int keep,
                 const std::string& kind, int n_noisy, int n_train,
                 bool noiseless, int n_samples, const std::string& out) {
    std::filesystem::create_directories(out);
    const std::string stem = (std::filesystem::path(out) / "dataset").string();
    Dataset ds;
    if (noiseless) {
        ds = generate_noiseless_random(n_samples, seed, parse_kind(kind));
    } else {
        DatasetConfig cfg;
        cfg.n_states = states;
        cfg.state_kind = parse_kind(kind);
        cfg.noisy_per_state = n_noisy;
        cfg.train_per_state = n_train;
        cfg.sigma = sigma;
        cfg.keep_projectors = keep;
        cfg.master_seed = seed;
        ds = generate(cfg);
    }
    save(ds, stem);
    std::printf("wrote %s.json / %s.bin (%zu train, %zu test)\n", stem.c_str(),
                stem.c_str(), ds.train.size(), ds.test.size());
    return kExitOk;
}

int cmd_train(const std::string& data, int epochs, std::uint64_t seed,
              double lr, int batch, double dropout, const std::string& out) {
    const Dataset ds = load(data);
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.seed = seed;
    cfg.learning_rate = lr;
    cfg.batch_size = batch;
    cfg.dropout_rate = dropout;
    auto [params, history] = train(ds, cfg);

    std::filesystem::create_directories(out);
    const std::string ckpt =
        (std::filesystem::path(out) / "checkpoint.bin").string();
    save_checkpoint(params, ckpt);
    {
        std::ofstream f(std::filesystem::path(out) / "history.csv",
                        std::ios::trunc);
        f << "epoch,mean_train_loss,mean_test_fidelity\n";
        char buf[96];
        for (std::size_t e = 0; e < history.epochs.size(); ++e) {
            std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", e + 1,
                          history.epochs[e].mean_train_loss,
                          history.epochs[e].mean_test_fidelity);
            f << buf;
        }
    }
    if (!history.epochs.empty()) {
        std::printf("final mean train loss %.6g, mean test fidelity %.6g\n",
                    history.epochs.back().mean_train_loss,
                    history.epochs.back().mean_test_fidelity);
    }
    std::printf("wrote %s\n", ckpt.c_str());
    return kExitOk;
}

int cmd_eval(const std::string& data, const std::string& ckpt,
             bool dump_samples, const std::string& out) {
    const Dataset ds = load(data);
    const CnnParams params = load_checkpoint(ckpt);
    if (ds.test.empty()) {
        throw EmptyDataset("eval: dataset has no test split");
    }

    double cnn_sum = 0.0, stokes_sum = 0.0;
    std::ofstream dump;
    if (dump_samples) {
        std::filesystem::create_directories(out);
        dump.open(std::filesystem::path(out) / "eval_samples.csv",
                  std::ios::trunc);
        dump << "sample,cnn_fidelity,stokes_fidelity,stokes_min_eig_preclamp\n";
    }
    int idx = 0;
    char buf[128];
    for (const Sample& s : ds.test) {
        const double cnn_f =
            fidelity(predict_density(params, s.grid), s.reference);
        const PhysicalizeResult ph =
            physicalize_with_diagnostics(stokes_reconstruct(s.grid));
        const double stokes_f = fidelity(ph.rho, s.reference);
        cnn_sum += cnn_f;
        stokes_sum += stokes_f;
        if (dump_samples) {
            std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g\n", idx,
                          cnn_f, stokes_f, ph.min_eigenvalue_before);
            dump << buf;
        }
        ++idx;
    }
    std::printf("samples %zu\n", ds.test.size());
    std::printf("cnn_mean_fidelity %.10g\n",
                cnn_sum / static_cast<double>(ds.test.size()));
    std::printf("stokes_mean_fidelity %.10g\n",
                stokes_sum / static_cast<double>(ds.test.size()));
    return kExitOk;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&failures](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) {
            ++failures;
        }
    };

    Rng rng(20260810);
    {
        const CMatrix u = haar_random_unitary(rng, 4);
        const CMatrix gram = u.adjoint() * u;
        check("haar unitary: U^dag U = I within 1e-12",
              gram.max_abs_diff(CMatrix::identity(4)) < 1e-12);
    }
    {
        bool ok = true;
        for (int i = 0; i < 20; ++i) {
            const DensityMatrix rho = random_mixed_state(rng);
            const DensityMatrix back = density_from_tau(tau_from_density(rho));
            ok = ok && back.matrix().max_abs_diff(rho.matrix()) < 1e-8;
        }
        check("tau round trip on mixed states within 1e-8", ok);
    }
    {
        bool ok = true;
        for (int i = 0; i < 20; ++i) {
            const DensityMatrix rho = random_mixed_state(rng);
            const CMatrix rec = stokes_reconstruct(measure(rho, projector_grid()));
            ok = ok && rec.max_abs_diff(rho.matrix()) < 1e-10;
        }
        check("stokes exact inversion on noiseless grids within 1e-10", ok);
    }
    {
        bool ok = true;
        for (int i = 0; i < 1000; ++i) {
            Tau16 v;
            for (double& x : v.v) {
                x = 2.0 * rng.next_double() - 1.0;
            }
            const DensityMatrix rho = density_from_tau(unpack_tau16(v));
            ok = ok && rho.min_eigenvalue() > -1e-10;
        }
        check("physicality closure over random tau vectors", ok);
    }
    {
        CnnShape shape;
        shape.input_h = 3;
        shape.input_w = 3;
        shape.conv_maps = 4;
        shape.fc1_units = 10;
        shape.fc2_units = 8;
        CnnParams params = CnnParams::init(shape, rng);
        std::vector<double> input(9);
        for (double& x : input) {
            x = rng.next_double();
        }
        Tau16 target;
        for (double& x : target.v) {
            x = rng.next_double();
        }
        std::vector<double> ones1(shape.fc1_units, 1.0);
        std::vector<double> ones2(shape.fc2_units, 1.0);
        ForwardCache cache;
        forward_with_multipliers(params, input, ones1, ones2, &cache);
        const CnnTensors grad = backward(params, cache, target);
        bool ok = true;
        const double h = 1e-6;
        for (int probe = 0; probe < 10; ++probe) {
            double* w = &params.value.fc2_w[static_cast<std::size_t>(probe) * 7];
            const double keep = *w;
            *w = keep + h;
            const double up = loss_mse(
                forward_with_multipliers(params, input, ones1, ones2, nullptr),
                target);
            *w = keep - h;
            const double dn = loss_mse(
                forward_with_multipliers(params, input, ones1, ones2, nullptr),
                target);
            *w = keep;
            const double fd = (up - dn) / (2.0 * h);
            const double an = grad.fc2_w[static_cast<std::size_t>(probe) * 7];
            ok = ok && std::abs(fd - an) / std::max({std::abs(fd), std::abs(an),
                                                     1e-6}) < 1e-4;
        }
        check("gradient spot check vs central differences", ok);
    }
    {
        const MeasurementGrid g =
            measure(physicalize(0.25 * CMatrix::identity(4)), projector_grid());
        bool ok = true;
        for (std::size_t i = 0; i < 36; ++i) {
            ok = ok && std::abs(g.values()[i] - 0.25) < 1e-12;
        }
        check("maximally mixed state measures 0.25 everywhere", ok);
    }
    return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tomo: simulated two-qubit tomography, Stokes and CNN state "
        "reconstruction, and fidelity benchmarks"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate and save a dataset");
    std::uint64_t g_seed = 1;
    int g_states = 20, g_keep = 36, g_noisy = 200, g_train = 195,
        g_samples = 1000;
    double g_sigma = std::numbers::pi / 6.0;
    std::string g_kind = "mixed", g_out = "out";
    bool g_noiseless = false;
    gen->add_option("--seed", g_seed, "Master seed");
    gen->add_option("--states", g_states, "Number of random states")
        ->capture_default_str();
    gen->add_option("--sigma", g_sigma, "Rotation-noise sigma (radians)")
        ->capture_default_str();
    gen->add_option("--keep", g_keep, "Projectors kept out of 36")
        ->capture_default_str();
    gen->add_option("--kind", g_kind, "State kind: pure|mixed")
        ->capture_default_str();
    gen->add_option("--n-noisy", g_noisy, "Noisy grids per state")
        ->capture_default_str();
    gen->add_option("--n-train", g_train, "Training grids per state")
        ->capture_default_str();
    gen->add_flag("--noiseless", g_noiseless,
                  "One noiseless grid per state, 11:1 split");
    gen->add_option("--samples", g_samples,
                    "Total states for --noiseless datasets")
        ->capture_default_str();
    gen->add_option("--out", g_out, "Output directory")->capture_default_str();

    // train
    auto* tr = app.add_subcommand("train", "Train the regressor on a dataset");
    std::string t_data, t_out = "out";
    int t_epochs = 200, t_batch = 4;
    std::uint64_t t_seed = 1;
    double t_lr = 0.008, t_dropout = 0.5;
    tr->add_option("--data", t_data, "Dataset path stem (no extension)")
        ->required();
    tr->add_option("--epochs", t_epochs, "Training epochs")->capture_default_str();
    tr->add_option("--seed", t_seed, "Initialization/shuffle seed");
    tr->add_option("--lr", t_lr, "Adagrad learning rate")->capture_default_str();
    tr->add_option("--batch", t_batch, "Batch size")->capture_default_str();
    tr->add_option("--dropout", t_dropout, "Dropout rate on the FC layers")
        ->capture_default_str();
    tr->add_option("--out", t_out, "Output directory")->capture_default_str();

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    std::string e_data, e_ckpt, e_out = "out";
    bool e_dump = false;
    ev->add_option("--data", e_data, "Dataset path stem")->required();
    ev->add_option("--ckpt", e_ckpt, "Checkpoint file")->required();
    ev->add_flag("--dump-samples", e_dump, "Write per-sample fidelities");
    ev->add_option("--out", e_out, "Output directory")->capture_default_str();

    // experiments
    ExperimentFlags f2a, f2b, f3a, f3b, fnl;
    auto* c2a = app.add_subcommand(
        "fig2a", "Fidelity vs number of states (pure and mixed)");
    add_experiment_flags(c2a, f2a);
    auto* c2b = app.add_subcommand(
        "fig2b", "Fidelity vs noisy training grids per state");
    add_experiment_flags(c2b, f2b);
    auto* c3a =
        app.add_subcommand("fig3a", "Fidelity vs noise strength sigma");
    add_experiment_flags(c3a, f3a);
    auto* c3b = app.add_subcommand(
        "fig3b", "Fidelity vs number of measured projectors");
    add_experiment_flags(c3b, f3b);
    auto* cnl = app.add_subcommand(
        "noiseless", "Fidelity on unique noiseless measurement sets");
    add_experiment_flags(cnl, fnl);

    auto* st = app.add_subcommand("selftest", "Run built-in sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(g_seed, g_states, g_sigma, g_keep, g_kind,
                                g_noisy, g_train, g_noiseless, g_samples,
                                g_out);
        }
        if (tr->parsed()) {
            return cmd_train(t_data, t_epochs, t_seed, t_lr, t_batch,
                             t_dropout, t_out);
        }
        if (ev->parsed()) {
            return cmd_eval(e_data, e_ckpt, e_dump, e_out);
        }
        if (st->parsed()) {
            return cmd_selftest();
        }
        const std::pair<CLI::App*, std::pair<ExperimentKind, ExperimentFlags*>>
            experiments[] = {
                {c2a, {ExperimentKind::kFig2a, &f2a}},
                {c2b, {ExperimentKind::kFig2b, &f2b}},
                {c3a, {ExperimentKind::kFig3a, &f3a}},
                {c3b, {ExperimentKind::kFig3b, &f3b}},
                {cnl, {ExperimentKind::kNoiseless, &fnl}},
            };
        for (const auto& [cmd, kindflags] : experiments) {
            if (cmd->parsed()) {
                const ExperimentSpec spec =
                    build_spec(kindflags.first, *kindflags.second);
                print_rows(run_experiment(spec));
                return kExitOk;
            }
        }
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitValidation;
    } catch (const NumericalFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const SingularState& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const DegenerateTau& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
