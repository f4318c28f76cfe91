#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>
#include <cmath>

#include "specb/rng.hpp"

namespace fs = std::filesystem;

#ifndef SPECB_CLI_PATH
#define SPECB_CLI_PATH "specb"
#endif

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("specb_cli_" + std::to_string(specb::Rng(std::random_device{}()).next_u64()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    std::string cmd = std::string(SPECB_CLI_PATH) + " " + args + " >/dev/null 2>/tmp/specb_cli_err";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string stderr_text() {
    std::ifstream f("/tmp/specb_cli_err");
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void write_tiny_config(const fs::path& p, const fs::path& data_dir, const fs::path& run_dir) {
    std::ofstream f(p);
    f << "[dataset]\nname = darcy\nresolution = 32\nn_train = 4\nn_test = 2\nseed = 5\n"
      << "[model]\nmodes = 4\nhidden_channels = 4\nlayers = 1\n"
      << "[train]\nbatch_size = 2\nepochs = 1\nlr = 1e-3\nseed = 1\n"
      << "[boost]\nstages = 0\n"
      << "[paths]\ndataset_dir = " << data_dir.string() << "\ncheckpoint_dir = "
      << run_dir.string() << "\n";
}

std::string read_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cli: config errors exit 2 with machine-readable json") {
    CHECK(run("generate --config /nonexistent.cfg") == 2);
    CHECK(stderr_text().find("\"error\"") != std::string::npos);

    TempDir tmp;
    std::ofstream bad(tmp.path / "bad.cfg");
    bad << "[dataset]\nname = nope\n";
    bad.close();
    CHECK(run("generate --config " + (tmp.path / "bad.cfg").string()) == 2);
}

TEST_CASE("cli: runtime errors exit 3") {
    TempDir tmp;
    write_tiny_config(tmp.path / "c.cfg", tmp.path / "data", tmp.path / "run");
    // training before the dataset exists is a runtime failure
    CHECK(run("train --config " + (tmp.path / "c.cfg").string()) == 3);
}

TEST_CASE("cli: generate twice is byte-identical, full pipeline exits 0") {
    TempDir tmp;
    write_tiny_config(tmp.path / "c.cfg", tmp.path / "data", tmp.path / "run");
    const std::string cfg = (tmp.path / "c.cfg").string();
    CHECK(run("generate --config " + cfg) == 0);
    std::string first = read_bytes(tmp.path / "data" / "train_u.bin");
    CHECK(run("generate --config " + cfg) == 0);
    CHECK(read_bytes(tmp.path / "data" / "train_u.bin") == first);

    CHECK(run("train --config " + cfg) == 0);
    CHECK(fs::exists(tmp.path / "run" / "eval.json"));
    CHECK(fs::exists(tmp.path / "run" / "loss_history.csv"));
    CHECK(fs::exists(tmp.path / "run" / "config_resolved.cfg"));
    CHECK(run("evaluate --config " + cfg) == 0);
    CHECK(run("spectrum --config " + cfg) == 0);
    CHECK(fs::exists(tmp.path / "run" / "spectrum_model.csv"));
    CHECK(fs::exists(tmp.path / "run" / "spectrum.svg"));
    CHECK(run("figure1 --config " + cfg) == 0);
    CHECK(fs::exists(tmp.path / "run" / "energy_cdf_fourier_target.csv"));
}

TEST_CASE("cli: evaluating a checkpoint twice gives identical output") {
    TempDir tmp;
    write_tiny_config(tmp.path / "c.cfg", tmp.path / "data", tmp.path / "run");
    const std::string cfg = (tmp.path / "c.cfg").string();
    REQUIRE(run("generate --config " + cfg) == 0);
    REQUIRE(run("train --config " + cfg) == 0);
    REQUIRE(run("evaluate --config " + cfg + " --out " + (tmp.path / "e1").string()) == 0);
    REQUIRE(run("evaluate --config " + cfg + " --out " + (tmp.path / "e2").string()) == 0);
    CHECK(read_bytes(tmp.path / "e1" / "eval.json") == read_bytes(tmp.path / "e2" / "eval.json"));
}

TEST_CASE("cli: adding a boost stage resumes without touching stage 0") {
    TempDir tmp;
    write_tiny_config(tmp.path / "c.cfg", tmp.path / "data", tmp.path / "run");
    const std::string cfg0 = (tmp.path / "c.cfg").string();
    REQUIRE(run("generate --config " + cfg0) == 0);
    REQUIRE(run("train --config " + cfg0) == 0);
    std::string stage0_params = read_bytes(tmp.path / "run" / "stage_0" / "params.bin");

    // same config with one residual stage: stage 0 is loaded, only stage 1 trains
    std::string text = read_bytes(tmp.path / "c.cfg");
    text.replace(text.find("stages = 0"), 10, "stages = 1");
    std::ofstream(tmp.path / "c.cfg") << text;
    REQUIRE(run("train --config " + cfg0) == 0);
    CHECK(read_bytes(tmp.path / "run" / "stage_0" / "params.bin") == stage0_params);
    CHECK(fs::exists(tmp.path / "run" / "stage_1" / "params.bin"));
}

TEST_CASE("cli: sequential dataset rollout artifacts and cross-file consistency") {
    TempDir tmp;
    std::ofstream cfg(tmp.path / "ns.cfg");
    cfg << "[dataset]\nname = ns\nresolution = 32\nn_train = 4\nn_test = 2\nseed = 5\n"
        << "t_final = 4\nrecord_dt = 1.0\nrollout_start = 1\n"
        << "[model]\nmodes = 4\nhidden_channels = 4\nlayers = 1\n"
        << "[train]\nbatch_size = 4\nepochs = 1\nlr = 1e-3\nseed = 1\n"
        << "[boost]\nstages = 0\n"
        << "[paths]\ndataset_dir = " << (tmp.path / "data").string()
        << "\ncheckpoint_dir = " << (tmp.path / "run").string() << "\n";
    cfg.close();
    const std::string c = (tmp.path / "ns.cfg").string();
    REQUIRE(run("generate --config " + c) == 0);
    REQUIRE(run("train --config " + c) == 0);

    // sequences have 5 recorded frames; rollout from index 1 predicts 3 steps
    std::ifstream per_step(tmp.path / "run" / "per_step.csv");
    REQUIRE(per_step);
    std::string line;
    std::getline(per_step, line);  // header
    int rows = 0;
    while (std::getline(per_step, line)) ++rows;
    CHECK(rows == 3);

    // one-step-only mode skips the rollout artifacts
    REQUIRE(run("evaluate --config " + c + " --one-step-only --out " +
                (tmp.path / "eone").string()) == 0);
    CHECK(!fs::exists(tmp.path / "eone" / "per_step.csv"));
    auto eone = nlohmann::json::parse(read_bytes(tmp.path / "eone" / "eval.json"));
    CHECK(eone.at("one_step_only") == true);

    // spectrum profile sum matches the one-step NMSE reported by evaluate
    REQUIRE(run("spectrum --config " + c) == 0);
    auto meta = nlohmann::json::parse(
        read_bytes(tmp.path / "run" / "spectrum_model.csv.meta.json"));
    const double profile_sum = meta.at("nmse_sum");
    const double eval_nmse = eone.at("ensemble").at("one_step_nmse");
    CHECK(std::abs(profile_sum - eval_nmse) / eval_nmse < 1e-5);
}
