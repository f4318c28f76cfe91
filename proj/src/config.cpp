#include "specb/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace specb {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct Setter {
    std::function<void(const std::string&)> apply;
};

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return r;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::map<std::string, Setter> keys;

    auto add_int = [&](const std::string& k, int& field) {
        keys[k] = {[&field, k](const std::string& v) { field = static_cast<int>(parse_int(k, v)); }};
    };
    auto add_u64 = [&](const std::string& k, uint64_t& field) {
        keys[k] = {
            [&field, k](const std::string& v) { field = static_cast<uint64_t>(parse_int(k, v)); }};
    };
    auto add_double = [&](const std::string& k, double& field) {
        keys[k] = {[&field, k](const std::string& v) { field = parse_double(k, v); }};
    };
    auto add_bool = [&](const std::string& k, bool& field) {
        keys[k] = {[&field, k](const std::string& v) { field = parse_bool(k, v); }};
    };
    auto add_string = [&](const std::string& k, std::string& field) {
        keys[k] = {[&field](const std::string& v) { field = v; }};
    };

    add_string("dataset.name", cfg.dataset.name);
    add_int("dataset.resolution", cfg.dataset.resolution);
    add_int("dataset.n_train", cfg.dataset.n_train);
    add_int("dataset.n_test", cfg.dataset.n_test);
    add_u64("dataset.seed", cfg.dataset.seed);
    add_u64("dataset.split_seed", cfg.dataset.split_seed);
    add_bool("dataset.augment_train", cfg.dataset.augment_train);
    add_int("dataset.rollout_start", cfg.dataset.rollout_start);
    add_double("dataset.grf_alpha", cfg.dataset.grf_alpha);
    add_double("dataset.grf_tau", cfg.dataset.grf_tau);
    add_double("dataset.coeff_high", cfg.dataset.coeff_high);
    add_double("dataset.coeff_low", cfg.dataset.coeff_low);
    add_double("dataset.nu", cfg.dataset.nu);
    add_double("dataset.t_final", cfg.dataset.t_final);
    add_double("dataset.record_dt", cfg.dataset.record_dt);
    add_double("dataset.forcing_amp", cfg.dataset.forcing_amp);
    add_double("dataset.ns_grf_alpha", cfg.dataset.ns_grf_alpha);
    add_double("dataset.ns_grf_tau", cfg.dataset.ns_grf_tau);
    add_double("dataset.ns_grf_sigma", cfg.dataset.ns_grf_sigma);
    add_double("dataset.ns_dt_max", cfg.dataset.ns_dt_max);
    add_double("dataset.d_u", cfg.dataset.d_u);
    add_double("dataset.d_v", cfg.dataset.d_v);
    add_double("dataset.kappa", cfg.dataset.kappa);
    add_double("dataset.dr_dt", cfg.dataset.dr_dt);
    add_double("dataset.dr_record_dt", cfg.dataset.dr_record_dt);
    add_int("dataset.dr_frames", cfg.dataset.dr_frames);
    add_double("dataset.dr_burn_in", cfg.dataset.dr_burn_in);
    add_double("dataset.dr_noise_amp", cfg.dataset.dr_noise_amp);

    add_int("model.modes", cfg.model.modes);
    add_int("model.hidden_channels", cfg.model.hidden_channels);
    add_int("model.layers", cfg.model.layers);
    add_string("model.variant", cfg.model.variant);
    add_string("model.activation", cfg.model.activation);
    add_double("model.padding_fraction", cfg.model.padding_fraction);
    add_int("model.projection_hidden", cfg.model.projection_hidden);
    add_int("model.lifting_hidden", cfg.model.lifting_hidden);
    add_bool("model.coord_features", cfg.model.coord_features);

    add_int("train.batch_size", cfg.train.batch_size);
    add_int("train.epochs", cfg.train.epochs);
    add_double("train.lr", cfg.train.lr);
    add_double("train.weight_decay", cfg.train.weight_decay);
    add_string("train.precision", cfg.train.precision);
    add_u64("train.seed", cfg.train.seed);

    add_int("boost.stages", cfg.boost.stages);

    add_string("paths.dataset_dir", cfg.paths.dataset_dir);
    add_string("paths.checkpoint_dir", cfg.paths.checkpoint_dir);

    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "dataset" && section != "model" && section != "train" &&
                section != "boost" && section != "paths") {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": key outside of any section");
        }
        std::string full = section + "." + key;
        auto it = keys.find(full);
        if (it == keys.end()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + full +
                              "'");
        }
        it->second.apply(value);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    ExperimentConfig cfg = parse(ss.str(), path);
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (dataset.name != "darcy" && dataset.name != "ns" && dataset.name != "diffusion_reaction") {
        throw ConfigError("config: dataset.name must be darcy, ns or diffusion_reaction, got '" +
                          dataset.name + "'");
    }
    if (dataset.resolution < 16 || dataset.resolution % 2 != 0) {
        throw ConfigError("config: dataset.resolution must be even and >= 16");
    }
    if (dataset.n_train < 1 || dataset.n_test < 1) {
        throw ConfigError("config: dataset.n_train and dataset.n_test must be >= 1");
    }
    if (train.precision != "f32" && train.precision != "f64") {
        throw ConfigError("config: train.precision must be f32 or f64");
    }
    if (boost.stages < 0) throw ConfigError("config: boost.stages must be >= 0");
    try {
        FnoConfig fc = model.to_fno_config(dataset.channels(), dataset.channels());
        fc.validate();
        fc.validate_resolution(dataset.resolution, dataset.resolution);
        train.to_train_config().validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream o;
    o.precision(17);
    o << "[dataset]\n";
    o << "name = " << dataset.name << "\n";
    o << "resolution = " << dataset.resolution << "\n";
    o << "n_train = " << dataset.n_train << "\n";
    o << "n_test = " << dataset.n_test << "\n";
    o << "seed = " << dataset.seed << "\n";
    o << "split_seed = " << dataset.split_seed << "\n";
    o << "augment_train = " << (dataset.augment_train ? "true" : "false") << "\n";
    o << "rollout_start = " << dataset.effective_rollout_start() << "\n";
    if (dataset.name == "darcy") {
        o << "grf_alpha = " << dataset.grf_alpha << "\n";
        o << "grf_tau = " << dataset.grf_tau << "\n";
        o << "coeff_high = " << dataset.coeff_high << "\n";
        o << "coeff_low = " << dataset.coeff_low << "\n";
    } else if (dataset.name == "ns") {
        o << "nu = " << dataset.nu << "\n";
        o << "t_final = " << dataset.t_final << "\n";
        o << "record_dt = " << dataset.record_dt << "\n";
        o << "forcing_amp = " << dataset.forcing_amp << "\n";
        o << "ns_grf_alpha = " << dataset.ns_grf_alpha << "\n";
        o << "ns_grf_tau = " << dataset.ns_grf_tau << "\n";
        o << "ns_grf_sigma = " << dataset.ns_grf_sigma << "\n";
        o << "ns_dt_max = " << dataset.ns_dt_max << "\n";
    } else {
        o << "d_u = " << dataset.d_u << "\n";
        o << "d_v = " << dataset.d_v << "\n";
        o << "kappa = " << dataset.kappa << "\n";
        o << "dr_dt = " << dataset.dr_dt << "\n";
        o << "dr_record_dt = " << dataset.dr_record_dt << "\n";
        o << "dr_frames = " << dataset.dr_frames << "\n";
        o << "dr_burn_in = " << dataset.dr_burn_in << "\n";
        o << "dr_noise_amp = " << dataset.dr_noise_amp << "\n";
    }
    o << "\n[model]\n";
    o << "modes = " << model.modes << "\n";
    o << "hidden_channels = " << model.hidden_channels << "\n";
    o << "layers = " << model.layers << "\n";
    o << "variant = " << model.variant << "\n";
    o << "activation = " << model.activation << "\n";
    o << "padding_fraction = " << model.padding_fraction << "\n";
    o << "projection_hidden = " << model.projection_hidden << "\n";
    o << "lifting_hidden = " << model.lifting_hidden << "\n";
    o << "coord_features = " << (model.coord_features ? "true" : "false") << "\n";
    o << "\n[train]\n";
    o << "batch_size = " << train.batch_size << "\n";
    o << "epochs = " << train.epochs << "\n";
    o << "lr = " << train.lr << "\n";
    o << "weight_decay = " << train.weight_decay << "\n";
    o << "precision = " << train.precision << "\n";
    o << "seed = " << train.seed << "\n";
    o << "\n[boost]\n";
    o << "stages = " << boost.stages << "\n";
    o << "\n[paths]\n";
    o << "dataset_dir = " << paths.dataset_dir << "\n";
    o << "checkpoint_dir = " << paths.checkpoint_dir << "\n";
    return o.str();
}

}  // namespace specb
