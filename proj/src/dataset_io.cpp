#include "specb/dataset_io.hpp"

#include <bit>
#include <filesystem>
#include <fstream>

namespace specb {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "raw container format is little-endian");

const std::pair<std::vector<long>, std::vector<float>>& DatasetContainer::array(
    const std::string& name) const {
    auto it = arrays.find(name);
    if (it == arrays.end()) {
        throw std::runtime_error("dataset container: missing array '" + name + "'");
    }
    return it->second;
}

void write_container(
    const std::string& dir, const nlohmann::json& meta,
    const std::map<std::string, std::pair<std::vector<long>, std::vector<float>>>& arrays) {
    fs::create_directories(dir);
    nlohmann::json manifest = meta;
    manifest["schema_version"] = 1;
    manifest["dtype"] = "float32";
    manifest["byte_order"] = "little";
    manifest["arrays"] = nlohmann::json::array();
    for (const auto& [name, arr] : arrays) {
        const auto& [shape, data] = arr;
        size_t expect = 1;
        for (long d : shape) expect *= static_cast<size_t>(d);
        if (expect != data.size()) {
            throw std::runtime_error("write_container: shape/size mismatch for '" + name + "'");
        }
        nlohmann::json a;
        a["name"] = name;
        a["shape"] = shape;
        a["file"] = name + ".bin";
        manifest["arrays"].push_back(a);
        std::ofstream f(fs::path(dir) / (name + ".bin"), std::ios::binary);
        if (!f) throw std::runtime_error("write_container: cannot write '" + name + ".bin'");
        f.write(reinterpret_cast<const char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(float)));
    }
    std::ofstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw std::runtime_error("write_container: cannot write manifest.json");
    mf << manifest.dump(2) << "\n";
}

DatasetContainer read_container(const std::string& dir) {
    std::ifstream mf(fs::path(dir) / "manifest.json");
    if (!mf) {
        throw std::runtime_error("dataset container: cannot open '" + dir + "/manifest.json'");
    }
    DatasetContainer c;
    mf >> c.manifest;
    if (c.manifest.value("schema_version", 0) != 1) {
        throw std::runtime_error("dataset container: unsupported schema version");
    }
    for (const auto& a : c.manifest.at("arrays")) {
        const std::string name = a.at("name");
        std::vector<long> shape = a.at("shape").get<std::vector<long>>();
        size_t count = 1;
        for (long d : shape) count *= static_cast<size_t>(d);
        std::ifstream f(fs::path(dir) / a.at("file").get<std::string>(), std::ios::binary);
        if (!f) throw std::runtime_error("dataset container: cannot open array '" + name + "'");
        std::vector<float> data(count);
        f.read(reinterpret_cast<char*>(data.data()),
               static_cast<std::streamsize>(count * sizeof(float)));
        if (static_cast<size_t>(f.gcount()) != count * sizeof(float)) {
            throw std::runtime_error("dataset container: array '" + name +
                                     "' shorter than its manifest shape");
        }
        c.arrays[name] = {std::move(shape), std::move(data)};
    }
    return c;
}

}  // namespace specb
