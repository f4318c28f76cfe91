#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "specb/fft.hpp"
#include "specb/field.hpp"
#include "specb/kernels.hpp"
#include "specb/rng.hpp"

namespace specb {

enum class LayerVariant { Basic, Mlp, Skip };

inline LayerVariant layer_variant_from_string(const std::string& s) {
    if (s == "basic") return LayerVariant::Basic;
    if (s == "mlp") return LayerVariant::Mlp;
    if (s == "skip") return LayerVariant::Skip;
    throw std::invalid_argument("unknown layer variant: " + s);
}

inline std::string to_string(LayerVariant v) {
    switch (v) {
        case LayerVariant::Basic: return "basic";
        case LayerVariant::Mlp: return "mlp";
        case LayerVariant::Skip: return "skip";
    }
    return "skip";
}

inline kernels::Activation activation_from_string(const std::string& s) {
    if (s == "gelu") return kernels::Activation::Gelu;
    if (s == "relu") return kernels::Activation::Relu;
    if (s == "tanh") return kernels::Activation::Tanh;
    if (s == "identity") return kernels::Activation::Identity;
    throw std::invalid_argument("unknown activation: " + s);
}

inline std::string to_string(kernels::Activation a) {
    switch (a) {
        case kernels::Activation::Gelu: return "gelu";
        case kernels::Activation::Relu: return "relu";
        case kernels::Activation::Tanh: return "tanh";
        case kernels::Activation::Identity: return "identity";
    }
    return "gelu";
}

struct FnoConfig {
    int in_channels = 1;
    int out_channels = 1;
    int hidden = 32;        // lifted channel width C
    int layers = 4;         // L
    int modes = 16;         // truncation frequency k
    LayerVariant variant = LayerVariant::Skip;
    kernels::Activation activation = kernels::Activation::Gelu;
    int lifting_hidden = 0;     // 0: affine lifting
    int projection_hidden = 0;  // 0: 2 * hidden
    double padding_fraction = 0.0;
    // two normalized coordinate channels appended before lifting; without
    // them the operator is translation-equivariant and cannot represent
    // boundary-conditioned problems
    bool coord_features = true;

    int q_hidden() const { return projection_hidden > 0 ? projection_hidden : 2 * hidden; }
    bool has_mlp() const { return variant != LayerVariant::Basic; }
    int lift_in() const { return in_channels + (coord_features ? 2 : 0); }

    void validate() const {
        if (in_channels < 1 || out_channels < 1 || hidden < 1) {
            throw std::invalid_argument("fno config: channel counts must be >= 1");
        }
        if (layers < 1) throw std::invalid_argument("fno config: need at least one layer");
        if (modes < 1) throw std::invalid_argument("fno config: truncation frequency must be >= 1");
        if (padding_fraction < 0.0 || padding_fraction >= 0.5) {
            throw std::invalid_argument("fno config: padding fraction must be in [0, 0.5)");
        }
    }

    void validate_resolution(int H, int W) const {
        if (2 * modes > H || modes > W / 2 + 1) {
            throw std::invalid_argument(
                "fno config: truncation frequency " + std::to_string(modes) +
                " exceeds resolution " + std::to_string(H) + "x" + std::to_string(W) +
                " (need 2k <= H and k <= W/2+1)");
        }
    }
};

namespace fno_detail {

struct Span {
    size_t offset = 0;
    size_t count = 0;
};

struct LayerSpans {
    Span spec;  // split-complex: 2k*k*c_out*c_in re values then as many im values
    Span phi_w, phi_b;
    Span m1_w, m1_b, m2_w, m2_b;
};

struct Layout {
    Span lift_w1, lift_b1, lift_w2, lift_b2;  // w2 unused for affine lifting
    std::vector<LayerSpans> layer;
    Span q_w1, q_b1, q_w2, q_b2;
    size_t total = 0;
};

inline Layout make_layout(const FnoConfig& cfg) {
    Layout lay;
    size_t at = 0;
    auto take = [&](size_t n) {
        Span s{at, n};
        at += n;
        return s;
    };
    const size_t C = cfg.hidden;
    const size_t lift_in = cfg.lift_in();
    if (cfg.lifting_hidden > 0) {
        const size_t Lh = cfg.lifting_hidden;
        lay.lift_w1 = take(Lh * lift_in);
        lay.lift_b1 = take(Lh);
        lay.lift_w2 = take(C * Lh);
        lay.lift_b2 = take(C);
    } else {
        lay.lift_w1 = take(C * lift_in);
        lay.lift_b1 = take(C);
    }
    const size_t spec_complex = static_cast<size_t>(2 * cfg.modes) * cfg.modes * C * C;
    lay.layer.resize(cfg.layers);
    for (int l = 0; l < cfg.layers; ++l) {
        auto& ls = lay.layer[l];
        ls.spec = take(2 * spec_complex);
        ls.phi_w = take(C * C);
        ls.phi_b = take(C);
        if (cfg.has_mlp()) {
            ls.m1_w = take(C * C);
            ls.m1_b = take(C);
            ls.m2_w = take(C * C);
            ls.m2_b = take(C);
        }
    }
    const size_t Q = cfg.q_hidden();
    lay.q_w1 = take(Q * C);
    lay.q_b1 = take(Q);
    lay.q_w2 = take(static_cast<size_t>(cfg.out_channels) * Q);
    lay.q_b2 = take(cfg.out_channels);
    lay.total = at;
    return lay;
}

}  // namespace fno_detail

/// Per-sample forward cache plus scratch buffers, reused across training
/// steps so the hot path performs no allocation after the first sample.
template <typename T>
struct FnoCache {
    int H = 0, W = 0;    // unpadded spatial shape
    int Hp = 0, Wp = 0;  // padded shape seen by the Fourier layers
    Field<T> aug_in;  // input with coordinate channels appended
    Field<T> lifted;
    Field<T> lift_z1, lift_h1;
    std::vector<Field<T>> layer_in;     // x_l
    std::vector<HalfSpectrum<T>> spec;  // X_l = rfft2(x_l)
    std::vector<Field<T>> k_real;       // irfft2(W X)
    std::vector<Field<T>> m_z1, m_h1;   // MLP hidden pre/post activation
    std::vector<Field<T>> z;            // layer pre-activation
    Field<T> cropped;                   // hidden field after cropping
    Field<T> q_z1, q_h1;

    // scratch
    HalfSpectrum<T> y_spec;
    Field<T> phi_out, m_out;
    Field<T> bw_dcur, bw_dz, bw_dx, bw_dk, bw_dmh1, bw_dmz1, bw_dxk;
    Field<T> bw_dqh1, bw_dqz1, bw_dcrop, bw_dlh1, bw_dlz1;
    HalfSpectrum<T> bw_dy, bw_dspec, bw_scratch_spec;
};

/// Fourier Neural Operator: pixel-wise lifting, L Fourier layers with
/// frequency-truncated spectral kernels, pixel-wise projection. Parameters
/// live in one flat array so optimizers and checkpoints can treat the model
/// as a single vector.
template <typename T>
class FnoModel {
  public:
    FnoModel() = default;

    explicit FnoModel(const FnoConfig& cfg) : cfg_(cfg) {
        cfg.validate();
        layout_ = fno_detail::make_layout(cfg);
        params_.assign(layout_.total, T(0));
    }

    const FnoConfig& config() const { return cfg_; }
    std::vector<T>& params() { return params_; }
    const std::vector<T>& params() const { return params_; }
    size_t count_params() const { return params_.size(); }

    /// Spectral weight count in complex entries, all layers.
    size_t count_spectral_complex() const {
        return static_cast<size_t>(cfg_.layers) * 2 * cfg_.modes * cfg_.modes * cfg_.hidden *
               cfg_.hidden;
    }

    void init(uint64_t seed) {
        Rng rng(seed);
        auto uniform_span = [&](fno_detail::Span s, double bound) {
            for (size_t i = 0; i < s.count; ++i) {
                params_[s.offset + i] = static_cast<T>(rng.uniform(-bound, bound));
            }
        };
        const double C = cfg_.hidden;
        const double lift_fan = cfg_.lift_in();
        if (cfg_.lifting_hidden > 0) {
            uniform_span(layout_.lift_w1, 1.0 / std::sqrt(lift_fan));
            uniform_span(layout_.lift_b1, 1.0 / std::sqrt(lift_fan));
            uniform_span(layout_.lift_w2, 1.0 / std::sqrt(static_cast<double>(cfg_.lifting_hidden)));
            uniform_span(layout_.lift_b2, 1.0 / std::sqrt(static_cast<double>(cfg_.lifting_hidden)));
        } else {
            uniform_span(layout_.lift_w1, 1.0 / std::sqrt(lift_fan));
            uniform_span(layout_.lift_b1, 1.0 / std::sqrt(lift_fan));
        }
        const double spec_scale = 1.0 / (C * C);
        for (auto& ls : layout_.layer) {
            uniform_span(ls.spec, spec_scale);
            uniform_span(ls.phi_w, 1.0 / std::sqrt(C));
            uniform_span(ls.phi_b, 1.0 / std::sqrt(C));
            if (cfg_.has_mlp()) {
                uniform_span(ls.m1_w, 1.0 / std::sqrt(C));
                uniform_span(ls.m1_b, 1.0 / std::sqrt(C));
                uniform_span(ls.m2_w, 1.0 / std::sqrt(C));
                uniform_span(ls.m2_b, 1.0 / std::sqrt(C));
            }
        }
        uniform_span(layout_.q_w1, 1.0 / std::sqrt(C));
        uniform_span(layout_.q_b1, 1.0 / std::sqrt(C));
        uniform_span(layout_.q_w2, 1.0 / std::sqrt(static_cast<double>(cfg_.q_hidden())));
        uniform_span(layout_.q_b2, 1.0 / std::sqrt(static_cast<double>(cfg_.q_hidden())));
    }

    Field<T> forward(const Field<T>& x) const {
        FnoCache<T> cache;
        return forward(x, cache);
    }

    Field<T> forward(const Field<T>& x, FnoCache<T>& c) const {
        if (x.channels != cfg_.in_channels) {
            throw std::invalid_argument("fno forward: expected " +
                                        std::to_string(cfg_.in_channels) + " input channels, got " +
                                        std::to_string(x.channels));
        }
        c.H = x.height;
        c.W = x.width;
        const int ph = pad_amount(x.height);
        const int pw = pad_amount(x.width);
        c.Hp = x.height + 2 * ph;
        c.Wp = x.width + 2 * pw;
        cfg_.validate_resolution(c.Hp, c.Wp);

        const int C = cfg_.hidden;
        const size_t P = static_cast<size_t>(c.Hp) * c.Wp;
        const size_t P0 = x.pixels();

        // Lifting on the unpadded grid, then zero padding of the hidden field.
        append_coords(x, c.aug_in);
        ensure_field(c.lifted, C, x.height, x.width);
        if (cfg_.lifting_hidden > 0) {
            ensure_field(c.lift_z1, cfg_.lifting_hidden, x.height, x.width);
            kernels::pixelwise_linear(c.aug_in.data.data(), c.lift_z1.data.data(),
                                      p(layout_.lift_w1), p(layout_.lift_b1), cfg_.lift_in(),
                                      cfg_.lifting_hidden, P0);
            ensure_field(c.lift_h1, cfg_.lifting_hidden, x.height, x.width);
            kernels::activation_forward(c.lift_z1.data.data(), c.lift_h1.data.data(),
                                        c.lift_h1.size(), cfg_.activation);
            kernels::pixelwise_linear(c.lift_h1.data.data(), c.lifted.data.data(),
                                      p(layout_.lift_w2), p(layout_.lift_b2), cfg_.lifting_hidden,
                                      C, P0);
        } else {
            kernels::pixelwise_linear(c.aug_in.data.data(), c.lifted.data.data(),
                                      p(layout_.lift_w1), p(layout_.lift_b1), cfg_.lift_in(), C,
                                      P0);
        }

        if (static_cast<int>(c.layer_in.size()) != cfg_.layers) {
            c.layer_in.resize(cfg_.layers);
            c.spec.resize(cfg_.layers);
            c.k_real.resize(cfg_.layers);
            c.z.resize(cfg_.layers);
            c.m_z1.resize(cfg_.layers);
            c.m_h1.resize(cfg_.layers);
        }

        pad_field_into(c.lifted, ph, pw, c.layer_in[0]);
        for (int l = 0; l < cfg_.layers; ++l) {
            const auto& ls = layout_.layer[l];
            const Field<T>& cur = c.layer_in[l];

            forward_rfft2_into(cur, c.spec[l]);
            ensure_spec(c.y_spec, C, c.Hp, c.Wp);
            kernels::spectral_apply(c.spec[l].data.data(), c.y_spec.data.data(), p(ls.spec), C, C,
                                    c.Hp, c.y_spec.half_width(), cfg_.modes);
            inverse_rfft2_into(c.y_spec, c.Hp, c.Wp, c.k_real[l]);

            ensure_field(c.phi_out, C, c.Hp, c.Wp);
            kernels::pixelwise_linear(cur.data.data(), c.phi_out.data.data(), p(ls.phi_w),
                                      p(ls.phi_b), C, C, P);

            ensure_field(c.z[l], C, c.Hp, c.Wp);
            if (cfg_.has_mlp()) {
                ensure_field(c.m_z1[l], C, c.Hp, c.Wp);
                kernels::pixelwise_linear(c.k_real[l].data.data(), c.m_z1[l].data.data(),
                                          p(ls.m1_w), p(ls.m1_b), C, C, P);
                ensure_field(c.m_h1[l], C, c.Hp, c.Wp);
                kernels::activation_forward(c.m_z1[l].data.data(), c.m_h1[l].data.data(),
                                            c.m_h1[l].size(), cfg_.activation);
                ensure_field(c.m_out, C, c.Hp, c.Wp);
                kernels::pixelwise_linear(c.m_h1[l].data.data(), c.m_out.data.data(), p(ls.m2_w),
                                          p(ls.m2_b), C, C, P);
                if (cfg_.variant == LayerVariant::Skip) {
                    kernels::add3(c.z[l].data.data(), cur.data.data(), c.phi_out.data.data(),
                                  c.m_out.data.data(), c.z[l].size());
                } else {
                    kernels::add2(c.z[l].data.data(), c.phi_out.data.data(),
                                  c.m_out.data.data(), c.z[l].size());
                }
            } else {
                kernels::add2(c.z[l].data.data(), c.phi_out.data.data(),
                              c.k_real[l].data.data(), c.z[l].size());
            }
            if (l + 1 < cfg_.layers) {
                ensure_field(c.layer_in[l + 1], C, c.Hp, c.Wp);
                kernels::activation_forward(c.z[l].data.data(), c.layer_in[l + 1].data.data(),
                                            c.z[l].size(), cfg_.activation);
            }
            // no activation after the last Fourier layer
        }

        crop_field_into(c.z[cfg_.layers - 1], ph, pw, x.height, x.width, c.cropped);

        ensure_field(c.q_z1, cfg_.q_hidden(), x.height, x.width);
        kernels::pixelwise_linear(c.cropped.data.data(), c.q_z1.data.data(), p(layout_.q_w1),
                                  p(layout_.q_b1), C, cfg_.q_hidden(), P0);
        ensure_field(c.q_h1, cfg_.q_hidden(), x.height, x.width);
        kernels::activation_forward(c.q_z1.data.data(), c.q_h1.data.data(), c.q_h1.size(),
                                    cfg_.activation);
        Field<T> out(cfg_.out_channels, x.height, x.width);
        kernels::pixelwise_linear(c.q_h1.data.data(), out.data.data(), p(layout_.q_w2),
                                  p(layout_.q_b2), cfg_.q_hidden(), cfg_.out_channels, P0);
        return out;
    }

    /// Backward pass. grad accumulates d loss / d params; the input gradient is
    /// not needed by any caller and is dropped. The cache must come from the
    /// forward pass of the same input. x is that same input field.
    void backward(const Field<T>& x, const Field<T>& grad_out, FnoCache<T>& c,
                  std::vector<T>& grad) const {
        if (grad.size() != params_.size()) {
            throw std::invalid_argument("fno backward: gradient buffer size mismatch");
        }
        const int C = cfg_.hidden;
        const size_t P = static_cast<size_t>(c.Hp) * c.Wp;
        const size_t P0 = static_cast<size_t>(c.H) * c.W;
        const int ph = (c.Hp - c.H) / 2, pw = (c.Wp - c.W) / 2;

        // Projection.
        ensure_field(c.bw_dqh1, cfg_.q_hidden(), c.H, c.W);
        kernels::pixelwise_linear_back_params(grad_out.data.data(), c.q_h1.data.data(),
                                              g(layout_.q_w2, grad), g(layout_.q_b2, grad),
                                              cfg_.q_hidden(), cfg_.out_channels, P0);
        kernels::pixelwise_linear_back_input(grad_out.data.data(), c.bw_dqh1.data.data(),
                                             p(layout_.q_w2), cfg_.q_hidden(), cfg_.out_channels,
                                             P0);
        ensure_field(c.bw_dqz1, cfg_.q_hidden(), c.H, c.W);
        kernels::activation_backward(c.q_z1.data.data(), c.bw_dqh1.data.data(),
                                     c.bw_dqz1.data.data(), c.bw_dqz1.size(), cfg_.activation);
        kernels::pixelwise_linear_back_params(c.bw_dqz1.data.data(), c.cropped.data.data(),
                                              g(layout_.q_w1, grad), g(layout_.q_b1, grad), C,
                                              cfg_.q_hidden(), P0);
        ensure_field(c.bw_dcrop, C, c.H, c.W);
        kernels::pixelwise_linear_back_input(c.bw_dqz1.data.data(), c.bw_dcrop.data.data(),
                                             p(layout_.q_w1), C, cfg_.q_hidden(), P0);

        pad_field_into(c.bw_dcrop, ph, pw, c.bw_dcur);  // adjoint of crop

        // Fourier layers, last to first.
        for (int l = cfg_.layers - 1; l >= 0; --l) {
            const auto& ls = layout_.layer[l];
            Field<T>& dz = (l + 1 < cfg_.layers) ? c.bw_dz : c.bw_dcur;
            if (l + 1 < cfg_.layers) {
                ensure_field(c.bw_dz, C, c.Hp, c.Wp);
                kernels::activation_backward(c.z[l].data.data(), c.bw_dcur.data.data(),
                                             dz.data.data(), dz.size(), cfg_.activation);
            }

            // phi branch
            kernels::pixelwise_linear_back_params(dz.data.data(), c.layer_in[l].data.data(),
                                                  g(ls.phi_w, grad), g(ls.phi_b, grad), C, C, P);
            ensure_field(c.bw_dx, C, c.Hp, c.Wp);
            kernels::pixelwise_linear_back_input(dz.data.data(), c.bw_dx.data.data(), p(ls.phi_w),
                                                 C, C, P);

            // kernel branch
            const Field<T>* dk = &dz;
            if (cfg_.has_mlp()) {
                kernels::pixelwise_linear_back_params(dz.data.data(), c.m_h1[l].data.data(),
                                                      g(ls.m2_w, grad), g(ls.m2_b, grad), C, C, P);
                ensure_field(c.bw_dmh1, C, c.Hp, c.Wp);
                kernels::pixelwise_linear_back_input(dz.data.data(), c.bw_dmh1.data.data(),
                                                     p(ls.m2_w), C, C, P);
                ensure_field(c.bw_dmz1, C, c.Hp, c.Wp);
                kernels::activation_backward(c.m_z1[l].data.data(), c.bw_dmh1.data.data(),
                                             c.bw_dmz1.data.data(), c.bw_dmz1.size(),
                                             cfg_.activation);
                kernels::pixelwise_linear_back_params(c.bw_dmz1.data.data(),
                                                      c.k_real[l].data.data(), g(ls.m1_w, grad),
                                                      g(ls.m1_b, grad), C, C, P);
                ensure_field(c.bw_dk, C, c.Hp, c.Wp);
                kernels::pixelwise_linear_back_input(c.bw_dmz1.data.data(), c.bw_dk.data.data(),
                                                     p(ls.m1_w), C, C, P);
                dk = &c.bw_dk;
            }

            inverse_rfft2_adjoint_into(*dk, c.bw_dy);
            ensure_spec(c.bw_dspec, C, c.Hp, c.Wp);
            kernels::spectral_apply_backward(c.spec[l].data.data(), c.bw_dy.data.data(),
                                             c.bw_dspec.data.data(), p(ls.spec), g(ls.spec, grad),
                                             C, C, c.Hp, c.bw_dspec.half_width(), cfg_.modes);
            forward_rfft2_adjoint_into(c.bw_dspec, c.bw_dxk, c.bw_scratch_spec);
            kernels::axpy(c.bw_dx.data.data(), c.bw_dxk.data.data(), T(1), c.bw_dx.size());

            if (cfg_.variant == LayerVariant::Skip) {
                kernels::axpy(c.bw_dx.data.data(), dz.data.data(), T(1), c.bw_dx.size());
            }
            std::swap(c.bw_dcur.data, c.bw_dx.data);
            std::swap(c.bw_dcur.channels, c.bw_dx.channels);
            std::swap(c.bw_dcur.height, c.bw_dx.height);
            std::swap(c.bw_dcur.width, c.bw_dx.width);
        }

        crop_field_into(c.bw_dcur, ph, pw, c.H, c.W, c.bw_dcrop);  // adjoint of pad

        if (cfg_.lifting_hidden > 0) {
            kernels::pixelwise_linear_back_params(c.bw_dcrop.data.data(), c.lift_h1.data.data(),
                                                  g(layout_.lift_w2, grad),
                                                  g(layout_.lift_b2, grad), cfg_.lifting_hidden, C,
                                                  P0);
            ensure_field(c.bw_dlh1, cfg_.lifting_hidden, c.H, c.W);
            kernels::pixelwise_linear_back_input(c.bw_dcrop.data.data(), c.bw_dlh1.data.data(),
                                                 p(layout_.lift_w2), cfg_.lifting_hidden, C, P0);
            ensure_field(c.bw_dlz1, cfg_.lifting_hidden, c.H, c.W);
            kernels::activation_backward(c.lift_z1.data.data(), c.bw_dlh1.data.data(),
                                         c.bw_dlz1.data.data(), c.bw_dlz1.size(),
                                         cfg_.activation);
            kernels::pixelwise_linear_back_params(c.bw_dlz1.data.data(), c.aug_in.data.data(),
                                                  g(layout_.lift_w1, grad),
                                                  g(layout_.lift_b1, grad), cfg_.lift_in(),
                                                  cfg_.lifting_hidden, P0);
        } else {
            kernels::pixelwise_linear_back_params(c.bw_dcrop.data.data(), c.aug_in.data.data(),
                                                  g(layout_.lift_w1, grad),
                                                  g(layout_.lift_b1, grad), cfg_.lift_in(), C,
                                                  P0);
        }
        (void)x;
    }

    const fno_detail::Layout& layout() const { return layout_; }

  private:
    int pad_amount(int n) const {
        return static_cast<int>(std::lround(cfg_.padding_fraction * n));
    }

    void append_coords(const Field<T>& x, Field<T>& out) const {
        if (!cfg_.coord_features) {
            ensure_field(out, x.channels, x.height, x.width);
            std::copy(x.data.begin(), x.data.end(), out.data.begin());
            return;
        }
        ensure_field(out, x.channels + 2, x.height, x.width);
        std::copy(x.data.begin(), x.data.end(), out.data.begin());
        T* gx = out.chan(x.channels);
        T* gy = out.chan(x.channels + 1);
        for (int i = 0; i < x.height; ++i) {
            const T xi = static_cast<T>(i) / static_cast<T>(x.height - 1);
            for (int j = 0; j < x.width; ++j) {
                gx[static_cast<size_t>(i) * x.width + j] = xi;
                gy[static_cast<size_t>(i) * x.width + j] =
                    static_cast<T>(j) / static_cast<T>(x.width - 1);
            }
        }
    }

    static void pad_field_into(const Field<T>& f, int ph, int pw, Field<T>& out) {
        ensure_field(out, f.channels, f.height + 2 * ph, f.width + 2 * pw);
        if (ph == 0 && pw == 0) {
            std::copy(f.data.begin(), f.data.end(), out.data.begin());
            return;
        }
        std::fill(out.data.begin(), out.data.end(), T(0));
        for (int ch = 0; ch < f.channels; ++ch) {
            for (int i = 0; i < f.height; ++i) {
                std::copy(f.chan(ch) + static_cast<size_t>(i) * f.width,
                          f.chan(ch) + static_cast<size_t>(i + 1) * f.width,
                          out.chan(ch) + static_cast<size_t>(i + ph) * out.width + pw);
            }
        }
    }

    static void crop_field_into(const Field<T>& f, int ph, int pw, int H, int W, Field<T>& out) {
        ensure_field(out, f.channels, H, W);
        for (int ch = 0; ch < f.channels; ++ch) {
            for (int i = 0; i < H; ++i) {
                std::copy(f.chan(ch) + static_cast<size_t>(i + ph) * f.width + pw,
                          f.chan(ch) + static_cast<size_t>(i + ph) * f.width + pw + W,
                          out.chan(ch) + static_cast<size_t>(i) * W);
            }
        }
    }

    const T* p(fno_detail::Span s) const { return params_.data() + s.offset; }
    static T* g(fno_detail::Span s, std::vector<T>& grad) { return grad.data() + s.offset; }

    FnoConfig cfg_;
    fno_detail::Layout layout_;
    std::vector<T> params_;
};

/// Stand-alone spectral convolution: y = irfft2(W . truncate(rfft2(x))).
/// w is split-complex (2k*k, c_out, c_in) as in FnoModel layers.
template <typename T>
Field<T> spectral_conv(const Field<T>& x, const T* w, int c_out, int k) {
    if (2 * k > x.height || k > x.width / 2 + 1) {
        throw std::invalid_argument("spectral_conv: truncation frequency exceeds resolution");
    }
    HalfSpectrum<T> spec = forward_rfft2(x);
    HalfSpectrum<T> y(c_out, x.height, x.width);
    kernels::spectral_apply(spec.data.data(), y.data.data(), w, x.channels, c_out, x.height,
                            y.half_width(), k);
    return inverse_rfft2(y, x.height, x.width);
}

}  // namespace specb
