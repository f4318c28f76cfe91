#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "specb/dataset.hpp"
#include "specb/fno.hpp"
#include "specb/normalizer.hpp"
#include "specb/trainer.hpp"

namespace specb {

/// One trained boosting stage: the residual module plus the normalizers it
/// was trained with. Stage 0 predicts the target itself; stages >= 1 predict
/// the residual left by the previous stages from [x, r_hat_{i-1}].
template <typename T>
struct BoostStage {
    FnoModel<T> model;
    Normalizer<T> xnorm;
    Normalizer<T> ynorm;
    std::vector<double> loss_history;

    Field<T> run(const Field<T>& x) const {
        return ynorm.denormalize(model.forward(xnorm.normalize(x)));
    }
};

/// Ordered boosting ensemble G_0..G_T. The ensemble prediction is the sum of
/// the per-stage outputs, each computed in original data units.
template <typename T>
struct BoostEnsemble {
    std::vector<BoostStage<T>> stages;
    int data_channels = 0;

    int residual_stages() const { return static_cast<int>(stages.size()) - 1; }

    /// Outputs r_hat_0 .. r_hat_T for one input.
    std::vector<Field<T>> stage_outputs(const Field<T>& x) const {
        if (stages.empty()) throw std::runtime_error("boost ensemble: no trained stages");
        std::vector<Field<T>> outs;
        outs.reserve(stages.size());
        outs.push_back(stages[0].run(x));
        for (size_t i = 1; i < stages.size(); ++i) {
            outs.push_back(stages[i].run(concat_channels(x, outs.back())));
        }
        return outs;
    }

    Field<T> predict(const Field<T>& x) const {
        auto outs = stage_outputs(x);
        Field<T> acc = outs[0];
        for (size_t i = 1; i < outs.size(); ++i) {
            for (size_t t = 0; t < acc.data.size(); ++t) acc.data[t] += outs[i].data[t];
        }
        return acc;
    }

    /// Prediction of the truncated ensemble G_0..G_{upto}.
    Field<T> predict_upto(const Field<T>& x, int upto) const {
        auto outs = stage_outputs(x);
        Field<T> acc = outs[0];
        for (int i = 1; i <= upto; ++i) {
            for (size_t t = 0; t < acc.data.size(); ++t) acc.data[t] += outs[i].data[t];
        }
        return acc;
    }
};

/// Ground truth of the residual for stage i: r_i = y - sum_j r_hat_j, j < i.
/// The partial predictions are accumulated in stage order before the single
/// subtraction, which makes y - predict(x) bit-identical to the residual of
/// the full ensemble.
template <typename T>
Field<T> residual_target(const Field<T>& y, const std::vector<Field<T>>& partial_preds) {
    if (partial_preds.empty()) return y;
    for (const auto& p : partial_preds) {
        if (!p.same_shape(y)) throw std::invalid_argument("residual_target: shape mismatch");
    }
    Field<T> sum = partial_preds[0];
    for (size_t i = 1; i < partial_preds.size(); ++i) {
        for (size_t t = 0; t < sum.data.size(); ++t) sum.data[t] += partial_preds[i].data[t];
    }
    Field<T> r = y;
    for (size_t t = 0; t < r.data.size(); ++t) r.data[t] -= sum.data[t];
    return r;
}

/// Stage input [x, r_hat_{i-1}]: the original input first, then the previous
/// stage's prediction.
template <typename T>
Field<T> stage_input(const Field<T>& x, const Field<T>& prev_pred) {
    return concat_channels(x, prev_pred);
}

/// Train stage i of the ensemble. Stages 0..i-1 must already be trained; their
/// outputs over the training pairs are precomputed once, which matches the
/// per-batch recomputation in the stagewise algorithm because earlier modules
/// are frozen.
template <typename T>
void train_stage(int i, BoostEnsemble<T>& ensemble, const PairDataset<T>& pairs,
                 const FnoConfig& stage0_cfg, const TrainConfig& tcfg,
                 const EpochCallback& on_epoch = {}) {
    if (i != static_cast<int>(ensemble.stages.size())) {
        throw std::invalid_argument("train_stage: stage " + std::to_string(i) +
                                    " requested but " +
                                    std::to_string(ensemble.stages.size()) +
                                    " stages are trained (no gaps allowed)");
    }
    if (pairs.empty()) throw std::invalid_argument("train_stage: empty training set");

    PairDataset<T> stage_pairs;
    stage_pairs.reserve(pairs.size());
    if (i == 0) {
        ensemble.data_channels = pairs[0].y.channels;
        stage_pairs = pairs;
    } else {
        for (const auto& s : pairs) {
            auto outs = ensemble.stage_outputs(s.x);
            Field<T> r = residual_target(s.y, outs);
            stage_pairs.push_back({stage_input(s.x, outs.back()), std::move(r)});
        }
    }

    FnoConfig cfg = stage0_cfg;
    cfg.in_channels = i == 0 ? ensemble.data_channels : 2 * ensemble.data_channels;
    cfg.out_channels = ensemble.data_channels;

    BoostStage<T> stage;
    stage.model = FnoModel<T>(cfg);
    stage.model.init(derive_seed(tcfg.seed, 0x1217 + i));
    std::vector<Field<T>> xs, ys;
    xs.reserve(stage_pairs.size());
    ys.reserve(stage_pairs.size());
    for (const auto& s : stage_pairs) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    stage.xnorm = Normalizer<T>::fit(xs);
    stage.ynorm = Normalizer<T>::fit(ys);

    TrainConfig stage_cfg = tcfg;
    stage_cfg.seed = derive_seed(tcfg.seed, 0xBEE5 + i);
    stage.loss_history =
        fit(stage.model, stage_pairs, stage_cfg, stage.xnorm, stage.ynorm, on_epoch);
    ensemble.stages.push_back(std::move(stage));
}

/// Full stagewise training: the initial module on (x, y), then T residual
/// modules. T = 0 collapses to a plain FNO.
template <typename T>
BoostEnsemble<T> train_specb(const PairDataset<T>& pairs, const FnoConfig& fno_cfg,
                             const TrainConfig& tcfg, int residual_stages) {
    if (residual_stages < 0) throw std::invalid_argument("train_specb: T must be >= 0");
    BoostEnsemble<T> ensemble;
    for (int i = 0; i <= residual_stages; ++i) {
        train_stage(i, ensemble, pairs, fno_cfg, tcfg);
    }
    return ensemble;
}

}  // namespace specb
