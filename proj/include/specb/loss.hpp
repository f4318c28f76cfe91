#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specb/field.hpp"

namespace specb {

/// ||a - b||_2 over all channels and pixels, accumulated in double.
template <typename T>
double l2_diff(const Field<T>& a, const Field<T>& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("l2_diff: shape mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        acc += d * d;
    }
    return std::sqrt(acc);
}

template <typename T>
double l2_norm(const Field<T>& a) {
    double acc = 0.0;
    for (const T& v : a.data) acc += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(acc);
}

/// Per-sample relative L2 error ||pred - target|| / ||target||.
template <typename T>
double rel_l2(const Field<T>& pred, const Field<T>& target) {
    double den = l2_norm(target);
    if (den == 0.0) {
        throw std::runtime_error("nrmse: target has zero L2 norm");
    }
    return l2_diff(pred, target) / den;
}

/// NRMSE: mean over samples of per-sample relative L2 error.
template <typename T>
double nrmse(const std::vector<Field<T>>& preds, const std::vector<Field<T>>& targets) {
    if (preds.size() != targets.size() || preds.empty()) {
        throw std::invalid_argument("nrmse: batch size mismatch or empty batch");
    }
    double acc = 0.0;
    for (size_t s = 0; s < preds.size(); ++s) acc += rel_l2(preds[s], targets[s]);
    return acc / static_cast<double>(preds.size());
}

/// NMSE: mean over samples of squared relative L2 error.
template <typename T>
double nmse(const std::vector<Field<T>>& preds, const std::vector<Field<T>>& targets) {
    if (preds.size() != targets.size() || preds.empty()) {
        throw std::invalid_argument("nmse: batch size mismatch or empty batch");
    }
    double acc = 0.0;
    for (size_t s = 0; s < preds.size(); ++s) {
        double r = rel_l2(preds[s], targets[s]);
        acc += r * r;
    }
    return acc / static_cast<double>(preds.size());
}

/// Gradient of rel_l2 wrt pred: (pred - target) / (||pred - target|| ||target||).
/// Returns the loss value; grad is overwritten.
template <typename T>
double rel_l2_with_grad(const Field<T>& pred, const Field<T>& target, Field<T>& grad) {
    double den = l2_norm(target);
    if (den == 0.0) throw std::runtime_error("nrmse: target has zero L2 norm");
    double num = l2_diff(pred, target);
    if (grad.channels != pred.channels || grad.height != pred.height ||
        grad.width != pred.width) {
        grad = Field<T>(pred.channels, pred.height, pred.width);
    }
    if (num == 0.0) {
        std::fill(grad.data.begin(), grad.data.end(), T(0));
        return 0.0;
    }
    const double scale = 1.0 / (num * den);
    for (size_t i = 0; i < grad.data.size(); ++i) {
        grad.data[i] = static_cast<T>(
            (static_cast<double>(pred.data[i]) - static_cast<double>(target.data[i])) * scale);
    }
    return num / den;
}

}  // namespace specb
