#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specb/dataset.hpp"
#include "specb/loss.hpp"

namespace specb {

/// Autoregressive rollout: out[0] = step(initial), out[t] = step(out[t-1]).
/// Aborts if any value exceeds the divergence guard.
template <typename T, typename StepFn>
std::vector<Field<T>> rollout(StepFn&& step, const Field<T>& initial, int steps,
                              double guard = 1e6) {
    if (steps < 1) throw std::invalid_argument("rollout: steps must be >= 1");
    std::vector<Field<T>> out;
    out.reserve(steps);
    const Field<T>* cur = &initial;
    for (int t = 0; t < steps; ++t) {
        out.push_back(step(*cur));
        cur = &out.back();
        for (const T& v : cur->data) {
            if (!(std::abs(static_cast<double>(v)) <= guard)) {
                throw std::runtime_error("rollout: diverged at step " + std::to_string(t) +
                                         " (|value| > " + std::to_string(guard) + ")");
            }
        }
    }
    return out;
}

/// Evaluation report. For sequential data the rollout mean equals the average
/// of the per-step curve weighted by step counts; for static pair data only
/// the one-step (single-shot) numbers are populated.
struct EvalReport {
    double one_step_nrmse = 0.0;
    double one_step_nmse = 0.0;
    double rollout_nrmse = 0.0;
    std::vector<double> per_step_nrmse;             // mean over sequences, per rollout step
    std::vector<double> per_sample_nrmse;           // rollout mean per sequence (or per pair)
    std::vector<double> one_step_nrmse_per_channel; // joint metric split by channel
    bool sequential = false;
    int rollout_start = 0;
};

/// Per-channel relative L2, averaged over samples, one entry per channel.
template <typename T>
std::vector<double> per_channel_nrmse(const std::vector<Field<T>>& preds,
                                      const std::vector<Field<T>>& targets) {
    const int C = preds.at(0).channels;
    std::vector<double> acc(C, 0.0);
    for (size_t s = 0; s < preds.size(); ++s) {
        for (int c = 0; c < C; ++c) {
            double num = 0.0, den = 0.0;
            const T* p = preds[s].chan(c);
            const T* t = targets[s].chan(c);
            for (size_t i = 0; i < preds[s].pixels(); ++i) {
                double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
                num += d * d;
                den += static_cast<double>(t[i]) * static_cast<double>(t[i]);
            }
            if (den == 0.0) throw std::runtime_error("nrmse: target channel has zero norm");
            acc[c] += std::sqrt(num / den);
        }
    }
    for (double& v : acc) v /= static_cast<double>(preds.size());
    return acc;
}

/// Static pair evaluation: single-shot prediction metrics only.
template <typename T, typename PredictFn>
EvalReport evaluate_pairs(PredictFn&& predict, const PairDataset<T>& test) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
    std::vector<Field<T>> preds, targets;
    preds.reserve(test.size());
    targets.reserve(test.size());
    EvalReport rep;
    for (const auto& s : test) {
        preds.push_back(predict(s.x));
        targets.push_back(s.y);
        rep.per_sample_nrmse.push_back(rel_l2(preds.back(), targets.back()));
    }
    rep.one_step_nrmse = nrmse(preds, targets);
    rep.one_step_nmse = nmse(preds, targets);
    rep.rollout_nrmse = rep.one_step_nrmse;
    rep.one_step_nrmse_per_channel = per_channel_nrmse(preds, targets);
    rep.sequential = false;
    return rep;
}

/// Sequential evaluation: one-step error over all ground-truth pairs plus an
/// autoregressive rollout from frame[rollout_start] to the end of each
/// sequence.
template <typename T, typename PredictFn>
EvalReport evaluate_sequences(PredictFn&& predict, const SeqDataset<T>& test, int rollout_start) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
    EvalReport rep;
    rep.sequential = true;
    rep.rollout_start = rollout_start;

    std::vector<Field<T>> preds, targets;
    for (const auto& seq : test) {
        for (size_t t = 0; t + 1 < seq.frames.size(); ++t) {
            preds.push_back(predict(seq.frames[t]));
            targets.push_back(seq.frames[t + 1]);
        }
    }
    rep.one_step_nrmse = nrmse(preds, targets);
    rep.one_step_nmse = nmse(preds, targets);
    rep.one_step_nrmse_per_channel = per_channel_nrmse(preds, targets);

    const int T_steps = static_cast<int>(test[0].frames.size());
    if (rollout_start < 0 || rollout_start + 1 >= T_steps) {
        throw std::invalid_argument("evaluate: rollout start " + std::to_string(rollout_start) +
                                    " leaves no steps to predict (T = " +
                                    std::to_string(T_steps) + ")");
    }
    const int horizon = T_steps - 1 - rollout_start;
    rep.per_step_nrmse.assign(horizon, 0.0);
    double total = 0.0;
    for (const auto& seq : test) {
        if (static_cast<int>(seq.frames.size()) != T_steps) {
            throw std::invalid_argument("evaluate: sequences must share a common length");
        }
        auto traj = rollout([&](const Field<T>& f) { return predict(f); },
                            seq.frames[rollout_start], horizon);
        double seq_acc = 0.0;
        for (int t = 0; t < horizon; ++t) {
            double e = rel_l2(traj[t], seq.frames[rollout_start + 1 + t]);
            rep.per_step_nrmse[t] += e;
            seq_acc += e;
        }
        rep.per_sample_nrmse.push_back(seq_acc / horizon);
        total += seq_acc;
    }
    for (double& v : rep.per_step_nrmse) v /= static_cast<double>(test.size());
    rep.rollout_nrmse = total / (static_cast<double>(test.size()) * horizon);
    return rep;
}

}  // namespace specb
