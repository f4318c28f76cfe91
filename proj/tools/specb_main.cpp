#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "specb/commands.hpp"
#include "specb/config.hpp"

namespace {

void add_common(CLI::App* cmd, specb::CommandOptions& opts, bool& seed_flag) {
    cmd->add_option("--config", opts.config_path, "experiment config file")->required();
    cmd->add_option("--seed", opts.seed, "override the relevant seed")
        ->each([&seed_flag](const std::string&) { seed_flag = true; });
    cmd->add_option("--precision", opts.precision, "f32 or f64");
    cmd->add_option("--out", opts.out_dir, "output directory override");
}

void emit_error(int code, const char* kind, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"code", code}, {"type", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* workers = std::getenv("SPECB_NUM_WORKERS")) {
        int n = std::atoi(workers);
        if (n > 0) omp_set_num_threads(n);
    }

    CLI::App app{"Fourier neural operator training with spectral residual boosting"};
    app.require_subcommand(1);

    specb::CommandOptions opts;
    bool seed_flag = false;

    CLI::App* generate = app.add_subcommand("generate", "generate a synthetic PDE dataset");
    add_common(generate, opts, seed_flag);
    CLI::App* train = app.add_subcommand("train", "train a model or boosting ensemble");
    add_common(train, opts, seed_flag);
    CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
    add_common(evaluate, opts, seed_flag);
    evaluate->add_flag("--one-step-only", opts.one_step_only,
                       "report one-step metrics without autoregressive rollout");
    CLI::App* spectrum = app.add_subcommand("spectrum", "emit NMSE spectrum profiles and plots");
    add_common(spectrum, opts, seed_flag);
    CLI::App* figure1 = app.add_subcommand("figure1", "emit energy-concentration CDFs");
    add_common(figure1, opts, seed_flag);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        emit_error(2, "cli", e.what());
        return 2;
    }
    opts.seed_set = seed_flag;

    try {
        if (generate->parsed()) {
            specb::run_generate(opts);
        } else if (train->parsed()) {
            specb::run_train(opts);
        } else if (evaluate->parsed()) {
            specb::run_evaluate(opts);
        } else if (spectrum->parsed()) {
            specb::run_spectrum(opts);
        } else if (figure1->parsed()) {
            specb::run_figure1(opts);
        }
    } catch (const specb::ConfigError& e) {
        emit_error(2, "config", e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(3, "runtime", e.what());
        return 3;
    }
    return 0;
}
