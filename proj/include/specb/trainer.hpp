#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "specb/dataset.hpp"
#include "specb/fno.hpp"
#include "specb/loss.hpp"
#include "specb/normalizer.hpp"
#include "specb/rng.hpp"

namespace specb {

struct TrainConfig {
    int batch_size = 20;
    int epochs = 50;
    double lr = 2e-4;
    double weight_decay = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    uint64_t seed = 1;

    void validate() const {
        if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
        if (!(lr >= 0.0)) throw std::invalid_argument("train config: lr must be >= 0");
        if (batch_size < 1) throw std::invalid_argument("train config: batch size must be >= 1");
    }
};

/// Cosine decay from lr to 1% of lr over total_steps.
inline double cosine_lr(double lr0, long step, long total_steps) {
    const double lr_end = 0.01 * lr0;
    if (total_steps <= 1) return lr0;
    double t = static_cast<double>(step) / static_cast<double>(total_steps - 1);
    return lr_end + 0.5 * (lr0 - lr_end) * (1.0 + std::cos(3.14159265358979323846 * t));
}

/// Train a model on supervised pairs with batched Adam. Inputs and targets are
/// standardized by the given normalizers; the loss (per-sample relative L2,
/// summed over the batch) is computed in original units. Returns the per-epoch
/// mean train loss.
using EpochCallback = std::function<void(int epoch, double loss)>;

template <typename T>
std::vector<double> fit(FnoModel<T>& model, const PairDataset<T>& pairs, const TrainConfig& cfg,
                        const Normalizer<T>& xnorm, const Normalizer<T>& ynorm,
                        const EpochCallback& on_epoch = {}) {
    cfg.validate();
    if (pairs.empty()) throw std::invalid_argument("fit: empty training set");

    const size_t n = pairs.size();
    const size_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
    const long total_steps = static_cast<long>(steps_per_epoch) * cfg.epochs;

    std::vector<T> grad(model.params().size(), T(0));
    std::vector<T> adam_m(model.params().size(), T(0));
    std::vector<T> adam_v(model.params().size(), T(0));
    FnoCache<T> cache;
    Field<T> loss_grad;

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});

    std::vector<double> history;
    history.reserve(cfg.epochs);
    long step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, 0x5F000000ULL + epoch));
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (size_t b0 = 0; b0 < n; b0 += cfg.batch_size) {
            const size_t b1 = std::min(n, b0 + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), T(0));
            double batch_loss = 0.0;
            for (size_t bi = b0; bi < b1; ++bi) {
                const auto& sample = pairs[order[bi]];
                Field<T> xn = xnorm.normalize(sample.x);
                Field<T> out_n = model.forward(xn, cache);
                Field<T> pred = ynorm.denormalize(out_n);
                batch_loss += rel_l2_with_grad(pred, sample.y, loss_grad);
                Field<T> g_out = ynorm.denormalize_grad(loss_grad);
                model.backward(xn, g_out, cache, grad);
            }
            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("fit: loss is not finite at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(b0 / cfg.batch_size));
            }
            const double lr_t = cosine_lr(cfg.lr, step, total_steps);
            ++step;
            kernels::adam_step(model.params().data(), grad.data(), adam_m.data(), adam_v.data(),
                               grad.size(), static_cast<T>(lr_t), static_cast<T>(cfg.beta1),
                               static_cast<T>(cfg.beta2), static_cast<T>(cfg.adam_eps),
                               static_cast<T>(cfg.weight_decay), step);
            epoch_loss += batch_loss;
        }
        history.push_back(epoch_loss / static_cast<double>(n));
        if (on_epoch) on_epoch(epoch, history.back());
    }
    return history;
}

}  // namespace specb
