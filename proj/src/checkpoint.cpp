#include "specb/checkpoint.hpp"

#include <bit>
#include <filesystem>
#include <fstream>

namespace specb {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace {

template <typename T>
const char* dtype_name() {
    return sizeof(T) == 4 ? "float32" : "float64";
}

/// Disk order of the flat parameter vector: spectral blocks are stored
/// interleaved (re, im) per complex entry; everything else verbatim.
template <typename T>
std::vector<T> to_disk_order(const FnoModel<T>& model) {
    std::vector<T> out(model.params().size());
    const auto& p = model.params();
    std::copy(p.begin(), p.end(), out.begin());
    for (const auto& ls : model.layout().layer) {
        const size_t half = ls.spec.count / 2;
        const T* re = p.data() + ls.spec.offset;
        const T* im = re + half;
        T* dst = out.data() + ls.spec.offset;
        for (size_t i = 0; i < half; ++i) {
            dst[2 * i] = re[i];
            dst[2 * i + 1] = im[i];
        }
    }
    return out;
}

template <typename T>
void from_disk_order(FnoModel<T>& model, const std::vector<T>& disk) {
    auto& p = model.params();
    std::copy(disk.begin(), disk.end(), p.begin());
    for (const auto& ls : model.layout().layer) {
        const size_t half = ls.spec.count / 2;
        const T* src = disk.data() + ls.spec.offset;
        T* re = p.data() + ls.spec.offset;
        T* im = re + half;
        for (size_t i = 0; i < half; ++i) {
            re[i] = src[2 * i];
            im[i] = src[2 * i + 1];
        }
    }
}

nlohmann::json fno_config_to_json(const FnoConfig& c) {
    nlohmann::json j;
    j["in_channels"] = c.in_channels;
    j["out_channels"] = c.out_channels;
    j["hidden_channels"] = c.hidden;
    j["layers"] = c.layers;
    j["modes"] = c.modes;
    j["variant"] = to_string(c.variant);
    j["activation"] = to_string(c.activation);
    j["lifting_hidden"] = c.lifting_hidden;
    j["projection_hidden"] = c.projection_hidden;
    j["padding_fraction"] = c.padding_fraction;
    j["coord_features"] = c.coord_features;
    return j;
}

FnoConfig fno_config_from_json(const nlohmann::json& j) {
    FnoConfig c;
    c.in_channels = j.at("in_channels");
    c.out_channels = j.at("out_channels");
    c.hidden = j.at("hidden_channels");
    c.layers = j.at("layers");
    c.modes = j.at("modes");
    c.variant = layer_variant_from_string(j.at("variant"));
    c.activation = activation_from_string(j.at("activation"));
    c.lifting_hidden = j.at("lifting_hidden");
    c.projection_hidden = j.at("projection_hidden");
    c.padding_fraction = j.at("padding_fraction");
    c.coord_features = j.at("coord_features");
    return c;
}

template <typename T>
nlohmann::json normalizer_to_json(const Normalizer<T>& n) {
    return nlohmann::json{{"mean", n.mean}, {"std", n.std_dev}};
}

template <typename T>
Normalizer<T> normalizer_from_json(const nlohmann::json& j) {
    Normalizer<T> n;
    n.mean = j.at("mean").get<std::vector<double>>();
    n.std_dev = j.at("std").get<std::vector<double>>();
    return n;
}

}  // namespace

template <typename T>
void save_ensemble(const std::string& dir, const BoostEnsemble<T>& ensemble,
                   const nlohmann::json& provenance) {
    fs::create_directories(dir);
    nlohmann::json top;
    top["schema_version"] = 1;
    top["dtype"] = dtype_name<T>();
    top["data_channels"] = ensemble.data_channels;
    top["stages"] = nlohmann::json::array();
    top["provenance"] = provenance;
    for (size_t i = 0; i < ensemble.stages.size(); ++i) {
        const std::string stage_name = "stage_" + std::to_string(i);
        top["stages"].push_back(stage_name);
        const fs::path sdir = fs::path(dir) / stage_name;
        fs::create_directories(sdir);
        const auto& st = ensemble.stages[i];

        nlohmann::json mj;
        mj["schema_version"] = 1;
        mj["dtype"] = dtype_name<T>();
        mj["arch"] = fno_config_to_json(st.model.config());
        mj["normalizer_x"] = normalizer_to_json(st.xnorm);
        mj["normalizer_y"] = normalizer_to_json(st.ynorm);
        mj["loss_history"] = st.loss_history;
        mj["param_count"] = st.model.count_params();
        std::ofstream mf(sdir / "model.json");
        mf << mj.dump(2) << "\n";

        std::vector<T> disk = to_disk_order(st.model);
        std::ofstream pf(sdir / "params.bin", std::ios::binary);
        pf.write(reinterpret_cast<const char*>(disk.data()),
                 static_cast<std::streamsize>(disk.size() * sizeof(T)));
    }
    std::ofstream tf(fs::path(dir) / "ensemble.json");
    tf << top.dump(2) << "\n";
}

template <typename T>
BoostEnsemble<T> load_ensemble(const std::string& dir) {
    std::ifstream tf(fs::path(dir) / "ensemble.json");
    if (!tf) throw std::runtime_error("checkpoint: cannot open '" + dir + "/ensemble.json'");
    nlohmann::json top;
    tf >> top;
    if (top.value("dtype", "") != dtype_name<T>()) {
        throw std::runtime_error("checkpoint: stored dtype " + top.value("dtype", "?") +
                                 " does not match requested precision");
    }
    BoostEnsemble<T> ensemble;
    ensemble.data_channels = top.at("data_channels");
    for (const auto& stage_name : top.at("stages")) {
        const fs::path sdir = fs::path(dir) / stage_name.get<std::string>();
        std::ifstream mf(sdir / "model.json");
        if (!mf) throw std::runtime_error("checkpoint: missing " + sdir.string() + "/model.json");
        nlohmann::json mj;
        mf >> mj;
        BoostStage<T> st;
        st.model = FnoModel<T>(fno_config_from_json(mj.at("arch")));
        st.xnorm = normalizer_from_json<T>(mj.at("normalizer_x"));
        st.ynorm = normalizer_from_json<T>(mj.at("normalizer_y"));
        st.loss_history = mj.at("loss_history").get<std::vector<double>>();

        std::ifstream pf(sdir / "params.bin", std::ios::binary);
        if (!pf) throw std::runtime_error("checkpoint: missing " + sdir.string() + "/params.bin");
        std::vector<T> disk(st.model.count_params());
        pf.read(reinterpret_cast<char*>(disk.data()),
                static_cast<std::streamsize>(disk.size() * sizeof(T)));
        if (static_cast<size_t>(pf.gcount()) != disk.size() * sizeof(T)) {
            throw std::runtime_error("checkpoint: params.bin shorter than the declared model");
        }
        from_disk_order(st.model, disk);
        ensemble.stages.push_back(std::move(st));
    }
    return ensemble;
}

int saved_stage_count(const std::string& dir) {
    std::ifstream tf(fs::path(dir) / "ensemble.json");
    if (!tf) return 0;
    nlohmann::json top;
    tf >> top;
    return static_cast<int>(top.at("stages").size());
}

std::string saved_dtype(const std::string& dir) {
    std::ifstream tf(fs::path(dir) / "ensemble.json");
    if (!tf) throw std::runtime_error("checkpoint: cannot open '" + dir + "/ensemble.json'");
    nlohmann::json top;
    tf >> top;
    return top.value("dtype", "float32");
}

nlohmann::json load_ensemble_meta(const std::string& dir) {
    std::ifstream tf(fs::path(dir) / "ensemble.json");
    if (!tf) throw std::runtime_error("checkpoint: cannot open '" + dir + "/ensemble.json'");
    nlohmann::json top;
    tf >> top;
    return top;
}

template void save_ensemble<float>(const std::string&, const BoostEnsemble<float>&,
                                   const nlohmann::json&);
template void save_ensemble<double>(const std::string&, const BoostEnsemble<double>&,
                                    const nlohmann::json&);
template BoostEnsemble<float> load_ensemble<float>(const std::string&);
template BoostEnsemble<double> load_ensemble<double>(const std::string&);

}  // namespace specb
