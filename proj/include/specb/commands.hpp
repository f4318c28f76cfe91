#pragma once

#include <cstdint>
#include <string>

namespace specb {

struct CommandOptions {
    std::string config_path;
    std::string out_dir;    // overrides the config's output location
    std::string precision;  // overrides train.precision (f32 | f64)
    uint64_t seed = 0;
    bool seed_set = false;
    bool one_step_only = false;
};

void run_generate(const CommandOptions& opts);
void run_train(const CommandOptions& opts);
void run_evaluate(const CommandOptions& opts);
void run_spectrum(const CommandOptions& opts);
void run_figure1(const CommandOptions& opts);

}  // namespace specb
