#include "specb/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "specb/augment.hpp"
#include "specb/checkpoint.hpp"
#include "specb/config.hpp"
#include "specb/darcy.hpp"
#include "specb/dataset_io.hpp"
#include "specb/diffusion_reaction.hpp"
#include "specb/navier_stokes.hpp"
#include "specb/rollout.hpp"
#include "specb/spectrum.hpp"
#include "specb/svg.hpp"

namespace specb {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExperimentConfig load_config(const CommandOptions& opts) {
    if (opts.config_path.empty()) throw ConfigError("missing --config");
    ExperimentConfig cfg = ExperimentConfig::load(opts.config_path);
    if (!opts.precision.empty()) {
        if (opts.precision != "f32" && opts.precision != "f64") {
            throw ConfigError("--precision must be f32 or f64");
        }
        cfg.train.precision = opts.precision;
    }
    return cfg;
}

void echo_config(const ExperimentConfig& cfg, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / "config_resolved.cfg");
    f << cfg.serialize();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows, const json& meta) {
    std::ostringstream o;
    o.precision(17);
    for (size_t c = 0; c < columns.size(); ++c) {
        o << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            o << row[c] << (c + 1 < row.size() ? "," : "\n");
        }
    }
    write_text(path, o.str());
    json side = meta;
    side["schema_version"] = 1;
    side["columns"] = columns;
    write_text(path + ".meta.json", side.dump(2) + "\n");
}

json dataset_params_json(const DatasetBlock& d) {
    json p;
    p["name"] = d.name;
    p["resolution"] = d.resolution;
    p["n_train"] = d.n_train;
    p["n_test"] = d.n_test;
    p["seed"] = d.seed;
    p["split_seed"] = d.split_seed;
    p["rollout_start"] = d.effective_rollout_start();
    if (d.name == "darcy") {
        p["grf_alpha"] = d.grf_alpha;
        p["grf_tau"] = d.grf_tau;
        p["coeff_high"] = d.coeff_high;
        p["coeff_low"] = d.coeff_low;
    } else if (d.name == "ns") {
        p["nu"] = d.nu;
        p["t_final"] = d.t_final;
        p["record_dt"] = d.record_dt;
        p["forcing_amp"] = d.forcing_amp;
        p["grf_alpha"] = d.ns_grf_alpha;
        p["grf_tau"] = d.ns_grf_tau;
        p["grf_sigma"] = d.ns_grf_sigma;
        p["dt_max"] = d.ns_dt_max;
    } else {
        p["d_u"] = d.d_u;
        p["d_v"] = d.d_v;
        p["kappa"] = d.kappa;
        p["dt"] = d.dr_dt;
        p["record_dt"] = d.dr_record_dt;
        p["frames"] = d.dr_frames;
        p["burn_in"] = d.dr_burn_in;
        p["noise_amp"] = d.dr_noise_amp;
    }
    return p;
}

/// Train/test assignment: counter-generated samples are shuffled once by the
/// split seed, first n_train go to the train split.
std::vector<size_t> split_order(size_t n_total, uint64_t split_seed) {
    std::vector<size_t> order(n_total);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(derive_seed(split_seed, 0x5711));
    rng.shuffle(order);
    return order;
}

void pack_fields(const std::vector<Field<double>>& fields, std::vector<float>& out) {
    for (const auto& f : fields) {
        for (double v : f.data) out.push_back(static_cast<float>(v));
    }
}

struct ChannelStats {
    double mean = 0.0;
    double stddev = 0.0;
};

ChannelStats stats_of(const std::vector<float>& v) {
    double m = 0.0;
    for (float x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (float x : v) s += (x - m) * (x - m);
    return {m, std::sqrt(s / static_cast<double>(v.size()))};
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

void generate_impl(const ExperimentConfig& cfg, const std::string& out_dir) {
    const DatasetBlock& d = cfg.dataset;
    const size_t n_total = static_cast<size_t>(d.n_train) + d.n_test;
    auto order = split_order(n_total, d.split_seed);

    std::map<std::string, std::pair<std::vector<long>, std::vector<float>>> arrays;
    json meta;
    meta["dataset"] = d.name;
    meta["params"] = dataset_params_json(d);

    if (d.name == "darcy") {
        DarcyParams prm;
        prm.grf_alpha = d.grf_alpha;
        prm.grf_tau = d.grf_tau;
        prm.coeff_high = d.coeff_high;
        prm.coeff_low = d.coeff_low;
        auto samples = generate_darcy(static_cast<int>(n_total), d.resolution, d.seed, prm);
        auto pack_split = [&](const std::string& split, size_t begin, size_t count) {
            std::vector<float> a, u;
            a.reserve(count * samples[0].a.size());
            u.reserve(count * samples[0].u.size());
            for (size_t i = begin; i < begin + count; ++i) {
                pack_fields({samples[order[i]].a}, a);
                pack_fields({samples[order[i]].u}, u);
            }
            std::vector<long> shape = {static_cast<long>(count), 1, d.resolution, d.resolution};
            arrays[split + "_a"] = {shape, std::move(a)};
            arrays[split + "_u"] = {shape, std::move(u)};
        };
        pack_split("train", 0, d.n_train);
        pack_split("test", d.n_train, d.n_test);
    } else if (d.name == "ns") {
        NsParams prm;
        prm.n = d.resolution;
        prm.nu = d.nu;
        prm.t_final = d.t_final;
        prm.record_dt = d.record_dt;
        prm.forcing_amp = d.forcing_amp;
        prm.grf_alpha = d.ns_grf_alpha;
        prm.grf_tau = d.ns_grf_tau;
        prm.grf_sigma = d.ns_grf_sigma;
        prm.dt_max = d.ns_dt_max;
        auto seqs = generate_ns(static_cast<int>(n_total), prm, d.seed);
        const long T_steps = static_cast<long>(seqs[0].frames.size());
        meta["params"]["recorded_steps"] = T_steps;
        auto pack_split = [&](const std::string& split, size_t begin, size_t count) {
            std::vector<float> w;
            w.reserve(count * T_steps * seqs[0].frames[0].size());
            for (size_t i = begin; i < begin + count; ++i) {
                pack_fields(seqs[order[i]].frames, w);
            }
            arrays[split + "_w"] = {
                {static_cast<long>(count), T_steps, 1, d.resolution, d.resolution}, std::move(w)};
        };
        pack_split("train", 0, d.n_train);
        pack_split("test", d.n_train, d.n_test);
    } else {
        DiffReactParams prm;
        prm.n = d.resolution;
        prm.d_u = d.d_u;
        prm.d_v = d.d_v;
        prm.kappa = d.kappa;
        prm.dt = d.dr_dt;
        prm.record_dt = d.dr_record_dt;
        prm.frames = d.dr_frames;
        prm.burn_in = d.dr_burn_in;
        prm.noise_amp = d.dr_noise_amp;
        auto seqs = generate_diffusion_reaction(static_cast<int>(n_total), d.resolution, d.seed,
                                                prm);
        const long T_steps = static_cast<long>(seqs[0].frames.size());
        meta["params"]["recorded_steps"] = T_steps;
        auto pack_split = [&](const std::string& split, size_t begin, size_t count) {
            std::vector<float> uv;
            uv.reserve(count * T_steps * seqs[0].frames[0].size());
            for (size_t i = begin; i < begin + count; ++i) {
                pack_fields(seqs[order[i]].frames, uv);
            }
            arrays[split + "_uv"] = {
                {static_cast<long>(count), T_steps, 2, d.resolution, d.resolution}, std::move(uv)};
        };
        pack_split("train", 0, d.n_train);
        pack_split("test", d.n_train, d.n_test);
    }

    write_container(out_dir, meta, arrays);
    std::cout << "dataset '" << d.name << "' written to " << out_dir << "\n";
    for (const auto& [name, arr] : arrays) {
        auto st = stats_of(arr.second);
        std::cout << "  " << name << ": shape (";
        for (size_t i = 0; i < arr.first.size(); ++i) {
            std::cout << arr.first[i] << (i + 1 < arr.first.size() ? ", " : ")");
        }
        std::cout << " mean " << st.mean << " std " << st.stddev << "\n";
    }
}

// ---------------------------------------------------------------------------
// shared training / evaluation plumbing
// ---------------------------------------------------------------------------

template <typename T>
struct LoadedData {
    bool sequential = false;
    int rollout_start = 0;
    PairDataset<T> train_pairs;
    PairDataset<T> test_pairs;  // all ground-truth pairs of the test split
    SeqDataset<T> test_seqs;
};

template <typename T>
LoadedData<T> load_data(const ExperimentConfig& cfg, const DatasetContainer& container) {
    LoadedData<T> data;
    const std::string name = container.manifest.at("dataset");
    if (name != cfg.dataset.name) {
        throw ConfigError("config dataset.name '" + cfg.dataset.name +
                          "' does not match container dataset '" + name + "'");
    }
    data.rollout_start = cfg.dataset.effective_rollout_start();
    if (name == "darcy") {
        data.train_pairs = pairs_from_container<T>(container, "train");
        data.test_pairs = pairs_from_container<T>(container, "test");
        if (cfg.dataset.augment_train) data.train_pairs = augment(data.train_pairs);
        return data;
    }
    data.sequential = true;
    const std::string suffix = name == "ns" ? "w" : "uv";
    SeqDataset<T> train_seqs = seqs_from_container<T>(container, "train", suffix);
    data.test_seqs = seqs_from_container<T>(container, "test", suffix);
    if (cfg.dataset.augment_train) train_seqs = augment(train_seqs);
    data.train_pairs = make_pairs(train_seqs);
    for (const auto& s : data.test_seqs) {
        for (size_t t = 0; t + 1 < s.frames.size(); ++t) {
            data.test_pairs.push_back({s.frames[t], s.frames[t + 1]});
        }
    }
    const int T_steps = static_cast<int>(data.test_seqs[0].frames.size());
    if (data.rollout_start + 1 >= T_steps) {
        throw ConfigError("rollout_start " + std::to_string(data.rollout_start) +
                          " leaves nothing to predict for sequences of length " +
                          std::to_string(T_steps));
    }
    return data;
}

template <typename T>
json report_to_json(const EvalReport& rep) {
    json j;
    j["one_step_nrmse"] = rep.one_step_nrmse;
    j["one_step_nmse"] = rep.one_step_nmse;
    j["rollout_nrmse"] = rep.rollout_nrmse;
    j["one_step_nrmse_per_channel"] = rep.one_step_nrmse_per_channel;
    j["per_sample_nrmse"] = rep.per_sample_nrmse;
    if (rep.sequential) {
        j["per_step_nrmse"] = rep.per_step_nrmse;
        j["rollout_start"] = rep.rollout_start;
    }
    return j;
}

/// One-step-only evaluation used by --one-step-only and as the shared
/// single-shot path for static datasets.
template <typename T, typename PredictFn>
EvalReport evaluate_one_step(PredictFn&& predict, const PairDataset<T>& pairs) {
    return evaluate_pairs(std::forward<PredictFn>(predict), pairs);
}

template <typename T>
void write_eval_outputs(const std::string& out_dir, const BoostEnsemble<T>& ensemble,
                        const LoadedData<T>& data, bool one_step_only, const json& context) {
    auto full = [&](const Field<T>& x) { return ensemble.predict(x); };
    auto stage0 = [&](const Field<T>& x) { return ensemble.predict_upto(x, 0); };

    json j;
    j["schema_version"] = 1;
    j["precision"] = sizeof(T) == 4 ? "float32" : "float64";
    j["sequential"] = data.sequential;
    j["residual_stages"] = ensemble.residual_stages();
    j["context"] = context;

    EvalReport rep;
    if (!data.sequential || one_step_only) {
        rep = evaluate_one_step<T>(full, data.test_pairs);
        if (one_step_only) j["one_step_only"] = true;
    } else {
        rep = evaluate_sequences<T>(full, data.test_seqs, data.rollout_start);
    }
    j["ensemble"] = report_to_json<T>(rep);

    if (ensemble.residual_stages() > 0) {
        EvalReport rep0;
        if (!data.sequential || one_step_only) {
            rep0 = evaluate_one_step<T>(stage0, data.test_pairs);
        } else {
            rep0 = evaluate_sequences<T>(stage0, data.test_seqs, data.rollout_start);
        }
        j["stage0"] = report_to_json<T>(rep0);
    }

    fs::create_directories(out_dir);
    write_text((fs::path(out_dir) / "eval.json").string(), j.dump(2) + "\n");

    if (data.sequential && !one_step_only) {
        std::vector<std::vector<double>> rows;
        for (size_t t = 0; t < rep.per_step_nrmse.size(); ++t) {
            rows.push_back({static_cast<double>(t + 1), rep.per_step_nrmse[t]});
        }
        write_csv((fs::path(out_dir) / "per_step.csv").string(), {"step", "nrmse"}, rows,
                  json{{"kind", "per_step_rollout_nrmse"},
                       {"rollout_start", data.rollout_start}});
    }
    std::cout << "eval: one-step NRMSE " << rep.one_step_nrmse;
    if (data.sequential && !one_step_only) std::cout << ", rollout NRMSE " << rep.rollout_nrmse;
    std::cout << "\n";
}

template <typename T>
void train_impl(const ExperimentConfig& cfg, const CommandOptions& opts,
                const std::string& out_dir) {
    DatasetContainer container = read_container(cfg.paths.dataset_dir);
    LoadedData<T> data = load_data<T>(cfg, container);

    const int total_stages = cfg.boost.stages + 1;
    BoostEnsemble<T> ensemble;
    int existing = saved_stage_count(out_dir);
    if (existing > total_stages) {
        throw ConfigError("checkpoint at '" + out_dir + "' already has " +
                          std::to_string(existing) + " stages, config asks for " +
                          std::to_string(total_stages));
    }
    if (existing > 0) {
        ensemble = load_ensemble<T>(out_dir);
        std::cout << "resuming from " << existing << " trained stage(s)\n";
    }

    FnoConfig fcfg = cfg.model.to_fno_config(cfg.dataset.channels(), cfg.dataset.channels());
    TrainConfig tcfg = cfg.train.to_train_config();
    if (opts.seed_set) tcfg.seed = opts.seed;
    fcfg.validate_resolution(cfg.dataset.resolution, cfg.dataset.resolution);

    for (int stage = existing; stage < total_stages; ++stage) {
        std::cout << "training stage " << stage << "/" << total_stages - 1 << " ("
                  << data.train_pairs.size() << " pairs)\n";
        auto log_epoch = [stage](int epoch, double loss) {
            std::cout << "  stage " << stage << " epoch " << epoch << " train nrmse " << loss
                      << "\n"
                      << std::flush;
        };
        train_stage(stage, ensemble, data.train_pairs, fcfg, tcfg, log_epoch);
        json prov;
        prov["config"] = cfg.serialize();
        prov["dataset_dir"] = cfg.paths.dataset_dir;
        prov["dataset_params"] = container.manifest.value("params", json::object());
        prov["train_seed"] = tcfg.seed;
        save_ensemble(out_dir, ensemble, prov);
    }

    // loss history across stages
    std::vector<std::vector<double>> rows;
    for (size_t s = 0; s < ensemble.stages.size(); ++s) {
        const auto& h = ensemble.stages[s].loss_history;
        for (size_t e = 0; e < h.size(); ++e) {
            rows.push_back({static_cast<double>(s), static_cast<double>(e), h[e]});
        }
    }
    write_csv((fs::path(out_dir) / "loss_history.csv").string(), {"stage", "epoch", "train_nrmse"},
              rows, json{{"kind", "loss_history"}});

    write_eval_outputs(out_dir, ensemble, data, false, json{{"command", "train"}});
}

template <typename T>
std::pair<std::vector<Field<T>>, std::vector<Field<T>>> one_step_predictions(
    const BoostEnsemble<T>& ensemble, const PairDataset<T>& pairs, int upto) {
    std::vector<Field<T>> preds, targets;
    preds.reserve(pairs.size());
    targets.reserve(pairs.size());
    for (const auto& s : pairs) {
        preds.push_back(upto < 0 ? ensemble.predict(s.x) : ensemble.predict_upto(s.x, upto));
        targets.push_back(s.y);
    }
    return {std::move(preds), std::move(targets)};
}

std::vector<std::vector<double>> profile_rows(const SpectrumProfile& p) {
    std::vector<std::vector<double>> rows;
    for (size_t r = 0; r < p.ring_energy.size(); ++r) {
        rows.push_back({static_cast<double>(r), p.ring_energy[r],
                        p.ring_energy[r] > 0.0 ? std::log10(p.ring_energy[r])
                                               : -std::numeric_limits<double>::infinity()});
    }
    return rows;
}

std::vector<std::pair<double, double>> profile_points(const SpectrumProfile& p) {
    std::vector<std::pair<double, double>> pts;
    for (size_t r = 0; r < p.ring_energy.size(); ++r) {
        pts.push_back({static_cast<double>(r), p.ring_energy[r]});
    }
    return pts;
}

template <typename T>
void spectrum_impl(const ExperimentConfig& cfg, const std::string& out_dir) {
    DatasetContainer container = read_container(cfg.paths.dataset_dir);
    LoadedData<T> data = load_data<T>(cfg, container);
    BoostEnsemble<T> ensemble = load_ensemble<T>(cfg.paths.checkpoint_dir);

    auto [preds, targets] = one_step_predictions(ensemble, data.test_pairs, -1);
    SpectrumProfile model_prof = nmse_spectrum(preds, targets);
    SpectrumProfile target_prof = target_energy_spectrum(targets);
    const int k = ensemble.stages[0].model.config().modes;

    json meta{{"kind", "nmse_spectrum"},
              {"field_size", model_prof.field_size},
              {"samples", model_prof.sample_count},
              {"truncation_frequency", k},
              {"nmse_sum", model_prof.sum()}};
    write_csv((fs::path(out_dir) / "spectrum_model.csv").string(),
              {"ring", "energy", "log10_energy"}, profile_rows(model_prof), meta);
    write_csv((fs::path(out_dir) / "spectrum_target.csv").string(),
              {"ring", "energy", "log10_energy"}, profile_rows(target_prof),
              json{{"kind", "target_energy_spectrum"}, {"sum", target_prof.sum()}});

    SvgChart chart;
    chart.title = "NMSE spectrum";
    chart.x_label = "frequency mode (ring)";
    chart.y_label = "energy";
    chart.log_y = true;
    chart.v_lines = {static_cast<double>(k)};
    chart.series.push_back({"target energy", "#888888", profile_points(target_prof)});
    chart.series.push_back({"model residual", "#d62728", profile_points(model_prof)});

    if (ensemble.residual_stages() > 0) {
        auto [preds0, targets0] = one_step_predictions(ensemble, data.test_pairs, 0);
        SpectrumProfile stage0_prof = nmse_spectrum(preds0, targets0);
        auto ratio = improvement_profile(stage0_prof, model_prof);
        std::vector<std::vector<double>> rows;
        for (size_t r = 0; r < ratio.size(); ++r) {
            rows.push_back({static_cast<double>(r), stage0_prof.ring_energy[r],
                            model_prof.ring_energy[r], ratio[r]});
        }
        write_csv((fs::path(out_dir) / "improvement.csv").string(),
                  {"ring", "stage0_energy", "ensemble_energy", "ratio"}, rows,
                  json{{"kind", "improvement_profile"}, {"truncation_frequency", k}});
        chart.series.push_back({"stage-0 residual", "#1f77b4", profile_points(stage0_prof)});
    }
    chart.write((fs::path(out_dir) / "spectrum.svg").string());
    std::cout << "spectrum: profile sum " << model_prof.sum() << " over "
              << model_prof.sample_count << " samples\n";
}

template <typename T>
void figure1_impl(const ExperimentConfig& cfg, const std::string& out_dir) {
    DatasetContainer container = read_container(cfg.paths.dataset_dir);
    LoadedData<T> data = load_data<T>(cfg, container);

    std::vector<Field<T>> targets;
    for (const auto& s : data.test_pairs) targets.push_back(s.y);

    auto spatial = energy_cdf(targets, EnergyDomain::Spatial);
    auto fourier = energy_cdf(targets, EnergyDomain::Fourier);
    auto curve_rows = [](const std::vector<std::pair<double, double>>& c) {
        std::vector<std::vector<double>> rows;
        for (auto [x, y] : c) rows.push_back({x, y});
        return rows;
    };
    fs::create_directories(out_dir);
    write_csv((fs::path(out_dir) / "energy_cdf_spatial.csv").string(),
              {"pixel_fraction", "energy_fraction"}, curve_rows(spatial),
              json{{"kind", "energy_cdf"}, {"domain", "spatial"}});
    write_csv((fs::path(out_dir) / "energy_cdf_fourier_target.csv").string(),
              {"pixel_fraction", "energy_fraction"}, curve_rows(fourier),
              json{{"kind", "energy_cdf"}, {"domain", "fourier"}});

    SvgChart chart;
    chart.title = "Energy concentration";
    chart.x_label = "pixel fraction";
    chart.y_label = "cumulative energy fraction";
    chart.series.push_back({"target, spatial", "#1f77b4", spatial});
    chart.series.push_back({"target, fourier", "#d62728", fourier});

    if (!cfg.paths.checkpoint_dir.empty() &&
        fs::exists(fs::path(cfg.paths.checkpoint_dir) / "ensemble.json")) {
        BoostEnsemble<T> ensemble = load_ensemble<T>(cfg.paths.checkpoint_dir);
        std::vector<Field<T>> residuals;
        for (const auto& s : data.test_pairs) {
            Field<T> pred = ensemble.predict(s.x);
            residuals.push_back(s.y - pred);
        }
        auto res_fourier = energy_cdf(residuals, EnergyDomain::Fourier);
        write_csv((fs::path(out_dir) / "energy_cdf_fourier_residual.csv").string(),
                  {"pixel_fraction", "energy_fraction"}, curve_rows(res_fourier),
                  json{{"kind", "energy_cdf"}, {"domain", "fourier_residual"}});
        chart.series.push_back({"residual, fourier", "#2ca02c", res_fourier});
    }
    chart.write((fs::path(out_dir) / "figure1.svg").string());
    std::cout << "figure1: fourier 99% fraction " << cdf_fraction_at(fourier, 0.99)
              << ", spatial 99% fraction " << cdf_fraction_at(spatial, 0.99) << "\n";
}

std::string resolve_out(const CommandOptions& opts, const std::string& fallback,
                        const char* what) {
    std::string out = !opts.out_dir.empty() ? opts.out_dir : fallback;
    if (out.empty()) {
        throw ConfigError(std::string("no output directory: set --out or paths.") + what);
    }
    return out;
}

}  // namespace

void run_generate(const CommandOptions& opts) {
    ExperimentConfig cfg = load_config(opts);
    if (opts.seed_set) cfg.dataset.seed = opts.seed;
    std::string out = resolve_out(opts, cfg.paths.dataset_dir, "dataset_dir");
    cfg.paths.dataset_dir = out;
    echo_config(cfg, out);
    generate_impl(cfg, out);
}

void run_train(const CommandOptions& opts) {
    ExperimentConfig cfg = load_config(opts);
    std::string out = resolve_out(opts, cfg.paths.checkpoint_dir, "checkpoint_dir");
    cfg.paths.checkpoint_dir = out;
    if (opts.seed_set) cfg.train.seed = opts.seed;
    echo_config(cfg, out);
    if (cfg.train.precision == "f64") {
        train_impl<double>(cfg, opts, out);
    } else {
        train_impl<float>(cfg, opts, out);
    }
}

void run_evaluate(const CommandOptions& opts) {
    ExperimentConfig cfg = load_config(opts);
    std::string out = resolve_out(opts, cfg.paths.checkpoint_dir, "checkpoint_dir");
    const std::string dtype = saved_dtype(cfg.paths.checkpoint_dir);
    if (dtype == "float64") {
        DatasetContainer container = read_container(cfg.paths.dataset_dir);
        LoadedData<double> data = load_data<double>(cfg, container);
        BoostEnsemble<double> e = load_ensemble<double>(cfg.paths.checkpoint_dir);
        write_eval_outputs(out, e, data, opts.one_step_only, json{{"command", "evaluate"}});
    } else {
        DatasetContainer container = read_container(cfg.paths.dataset_dir);
        LoadedData<float> data = load_data<float>(cfg, container);
        BoostEnsemble<float> e = load_ensemble<float>(cfg.paths.checkpoint_dir);
        write_eval_outputs(out, e, data, opts.one_step_only, json{{"command", "evaluate"}});
    }
}

void run_spectrum(const CommandOptions& opts) {
    ExperimentConfig cfg = load_config(opts);
    std::string out = resolve_out(opts, cfg.paths.checkpoint_dir, "checkpoint_dir");
    fs::create_directories(out);
    if (saved_dtype(cfg.paths.checkpoint_dir) == "float64") {
        spectrum_impl<double>(cfg, out);
    } else {
        spectrum_impl<float>(cfg, out);
    }
}

void run_figure1(const CommandOptions& opts) {
    ExperimentConfig cfg = load_config(opts);
    std::string fallback = !cfg.paths.checkpoint_dir.empty() ? cfg.paths.checkpoint_dir
                                                             : cfg.paths.dataset_dir;
    std::string out = resolve_out(opts, fallback, "checkpoint_dir");
    if (cfg.train.precision == "f64") {
        figure1_impl<double>(cfg, out);
    } else {
        figure1_impl<float>(cfg, out);
    }
}

}  // namespace specb
