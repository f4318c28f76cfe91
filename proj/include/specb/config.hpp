#pragma once

#include <cstdint>
#include <string>

#include "specb/fno.hpp"
#include "specb/trainer.hpp"

namespace specb {

/// Exit-code-2 class of failures: anything wrong with user-provided
/// configuration, caught before compute starts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetBlock {
    std::string name;  // darcy | ns | diffusion_reaction
    int resolution = 64;
    int n_train = 0;
    int n_test = 0;
    uint64_t seed = 7;
    uint64_t split_seed = 0;
    bool augment_train = false;
    int rollout_start = -1;  // -1: dataset default (ns: 9, others: 0)

    // darcy
    double grf_alpha = 2.0;
    double grf_tau = 3.0;
    double coeff_high = 12.0;
    double coeff_low = 3.0;

    // navier-stokes
    double nu = 1e-3;
    double t_final = 19.0;
    double record_dt = 1.0;
    double forcing_amp = 0.1;
    double ns_grf_alpha = 2.5;
    double ns_grf_tau = 7.0;
    double ns_grf_sigma = 18.520259177452136;  // tau^1.5
    double ns_dt_max = 1e-2;

    // diffusion-reaction
    double d_u = 1e-3;
    double d_v = 5e-3;
    double kappa = 5e-3;
    double dr_dt = 1e-2;
    double dr_record_dt = 0.05;
    int dr_frames = 11;
    double dr_burn_in = 0.5;
    double dr_noise_amp = 1.0;

    bool sequential() const { return name == "ns" || name == "diffusion_reaction"; }
    int channels() const { return name == "diffusion_reaction" ? 2 : 1; }
    int default_rollout_start() const { return name == "ns" ? 9 : 0; }
    int effective_rollout_start() const {
        return rollout_start >= 0 ? rollout_start : default_rollout_start();
    }
};

struct ModelBlock {
    int modes = 16;
    int hidden_channels = 32;
    int layers = 4;
    std::string variant = "skip";
    std::string activation = "gelu";
    double padding_fraction = 0.0;
    int projection_hidden = 0;  // 0: 2 * hidden
    int lifting_hidden = 0;     // 0: affine lifting
    bool coord_features = true;

    FnoConfig to_fno_config(int in_channels, int out_channels) const {
        FnoConfig cfg;
        cfg.in_channels = in_channels;
        cfg.out_channels = out_channels;
        cfg.hidden = hidden_channels;
        cfg.layers = layers;
        cfg.modes = modes;
        cfg.variant = layer_variant_from_string(variant);
        cfg.activation = activation_from_string(activation);
        cfg.padding_fraction = padding_fraction;
        cfg.projection_hidden = projection_hidden;
        cfg.lifting_hidden = lifting_hidden;
        cfg.coord_features = coord_features;
        return cfg;
    }
};

struct TrainBlock {
    int batch_size = 20;
    int epochs = 50;
    double lr = 2e-4;
    double weight_decay = 1e-4;
    std::string precision = "f32";
    uint64_t seed = 1;

    TrainConfig to_train_config() const {
        TrainConfig tc;
        tc.batch_size = batch_size;
        tc.epochs = epochs;
        tc.lr = lr;
        tc.weight_decay = weight_decay;
        tc.seed = seed;
        return tc;
    }
};

struct BoostBlock {
    int stages = 0;  // residual stages T; 0 collapses to a plain FNO
};

struct PathsBlock {
    std::string dataset_dir;
    std::string checkpoint_dir;
};

struct ExperimentConfig {
    DatasetBlock dataset;
    ModelBlock model;
    TrainBlock train;
    BoostBlock boost;
    PathsBlock paths;

    /// Parse the key = value config file; unknown sections or keys are
    /// rejected with a ConfigError.
    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(const std::string& text, const std::string& origin);

    /// Fully resolved config echoed into every output directory.
    std::string serialize() const;

    void validate() const;
};

}  // namespace specb
