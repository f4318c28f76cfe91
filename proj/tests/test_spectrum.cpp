#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "specb/darcy.hpp"
#include "specb/loss.hpp"
#include "specb/augment.hpp"
#include "specb/rng.hpp"
#include "specb/spectrum.hpp"

using namespace specb;

namespace {

template <typename T>
Field<T> random_field(int C, int H, int W, uint64_t seed) {
    Field<T> f(C, H, W);
    Rng rng(seed);
    for (auto& v : f.data) v = static_cast<T>(rng.normal());
    return f;
}

}  // namespace

TEST_CASE("nmse_spectrum: perfect prediction gives the zero profile") {
    std::vector<Field<double>> t = {random_field<double>(1, 8, 8, 1)};
    auto prof = nmse_spectrum(t, t);
    for (double v : prof.ring_energy) CHECK(v == 0.0);
}

TEST_CASE("nmse_spectrum: zero prediction reproduces the target profile, sum 1") {
    std::vector<Field<double>> t = {random_field<double>(1, 16, 16, 2)};
    std::vector<Field<double>> z = {Field<double>(1, 16, 16, 0.0)};
    auto prof = nmse_spectrum(z, t);
    auto ref = target_energy_spectrum(t);
    CHECK(prof.sum() == doctest::Approx(1.0).epsilon(1e-10));
    for (size_t r = 0; r < prof.ring_energy.size(); ++r) {
        CHECK(prof.ring_energy[r] == doctest::Approx(ref.ring_energy[r]).epsilon(1e-12));
    }
}

TEST_CASE("Parseval closure: profile sum equals nmse") {
    std::vector<Field<double>> preds, targets;
    for (int s = 0; s < 4; ++s) {
        preds.push_back(random_field<double>(1, 8, 8, 100 + s));
        targets.push_back(random_field<double>(1, 8, 8, 200 + s));
    }
    auto prof = nmse_spectrum(preds, targets);
    CHECK(std::abs(prof.sum() - nmse(preds, targets)) / nmse(preds, targets) < 1e-10);
}

TEST_CASE("Parseval closure holds in 32-bit within 1e-6") {
    std::vector<Field<float>> preds, targets;
    for (int s = 0; s < 4; ++s) {
        preds.push_back(random_field<float>(1, 64, 64, 300 + s));
        targets.push_back(random_field<float>(1, 64, 64, 400 + s));
    }
    auto prof = nmse_spectrum(preds, targets);
    CHECK(std::abs(prof.sum() - nmse(preds, targets)) / nmse(preds, targets) < 1e-6);
}

TEST_CASE("target spectrum of simple signals") {
    SUBCASE("constant field: everything in ring 0") {
        std::vector<Field<double>> t = {Field<double>(1, 16, 16, 2.5)};
        auto prof = target_energy_spectrum(t);
        CHECK(prof.ring_energy[0] == doctest::Approx(1.0).epsilon(1e-12));
        for (size_t r = 1; r < prof.ring_energy.size(); ++r) CHECK(prof.ring_energy[r] < 1e-15);
    }
    SUBCASE("pure mode-(0,3) sinusoid: everything in ring 3") {
        Field<double> f(1, 16, 16);
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 16; ++j) {
                f.at(0, i, j) = std::cos(2.0 * fft::kPi * 3.0 * j / 16.0);
            }
        }
        auto prof = target_energy_spectrum(std::vector<Field<double>>{f});
        CHECK(prof.ring_energy[3] == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("generated Darcy targets peak at ring 0 or 1") {
        auto samples = generate_darcy(4, 32, 21);
        std::vector<Field<double>> ys;
        for (auto& s : samples) ys.push_back(s.u);
        auto prof = target_energy_spectrum(ys);
        size_t argmax = 0;
        for (size_t r = 1; r < prof.ring_energy.size(); ++r) {
            if (prof.ring_energy[r] > prof.ring_energy[argmax]) argmax = r;
        }
        CHECK(argmax <= 1);
    }
}

TEST_CASE("profile invariances") {
    std::vector<Field<double>> preds = {random_field<double>(1, 16, 16, 31)};
    std::vector<Field<double>> targets = {random_field<double>(1, 16, 16, 32)};
    auto base = nmse_spectrum(preds, targets);

    SUBCASE("rotation invariance") {
        for (GridTransform tr :
             {GridTransform::Rot90, GridTransform::Rot180, GridTransform::Rot270}) {
            std::vector<Field<double>> rp = {apply_transform(preds[0], tr)};
            std::vector<Field<double>> rt = {apply_transform(targets[0], tr)};
            auto prof = nmse_spectrum(rp, rt);
            for (size_t r = 0; r < prof.ring_energy.size(); ++r) {
                CHECK(prof.ring_energy[r] == doctest::Approx(base.ring_energy[r]).epsilon(1e-10));
            }
        }
    }
    SUBCASE("scale invariance") {
        std::vector<Field<double>> sp = preds, st = targets;
        for (auto& v : sp[0].data) v *= -3.7;
        for (auto& v : st[0].data) v *= -3.7;
        auto prof = nmse_spectrum(sp, st);
        for (size_t r = 0; r < prof.ring_energy.size(); ++r) {
            CHECK(prof.ring_energy[r] == doctest::Approx(base.ring_energy[r]).epsilon(1e-10));
        }
    }
    SUBCASE("channel averaging") {
        Field<double> p2(2, 16, 16), t2(2, 16, 16);
        Field<double> pb = random_field<double>(1, 16, 16, 41);
        Field<double> tb = random_field<double>(1, 16, 16, 42);
        std::copy(preds[0].data.begin(), preds[0].data.end(), p2.chan(0));
        std::copy(pb.data.begin(), pb.data.end(), p2.chan(1));
        std::copy(targets[0].data.begin(), targets[0].data.end(), t2.chan(0));
        std::copy(tb.data.begin(), tb.data.end(), t2.chan(1));
        auto prof2 = nmse_spectrum(std::vector<Field<double>>{p2},
                                   std::vector<Field<double>>{t2});
        auto profb = nmse_spectrum(std::vector<Field<double>>{pb},
                                   std::vector<Field<double>>{tb});
        for (size_t r = 0; r < prof2.ring_energy.size(); ++r) {
            CHECK(prof2.ring_energy[r] ==
                  doctest::Approx(0.5 * (base.ring_energy[r] + profb.ring_energy[r]))
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("nmse_spectrum error paths") {
    std::vector<Field<double>> nonsq = {Field<double>(1, 8, 16, 1.0)};
    CHECK_THROWS_AS((void)nmse_spectrum(nonsq, nonsq), std::invalid_argument);
    std::vector<Field<double>> z = {Field<double>(1, 8, 8, 0.0)};
    std::vector<Field<double>> p = {random_field<double>(1, 8, 8, 4)};
    CHECK_THROWS_AS((void)nmse_spectrum(p, z), std::runtime_error);
}

TEST_CASE("energy_cdf basics") {
    SUBCASE("constant field reaches 100% at one Fourier pixel") {
        std::vector<Field<double>> f = {Field<double>(1, 16, 16, 1.0)};
        auto curve = energy_cdf(f, EnergyDomain::Fourier);
        CHECK(curve[0].second == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cdf_fraction_at(curve, 0.99) == doctest::Approx(1.0 / 256.0));
    }
    SUBCASE("equal-magnitude noise gives the diagonal in spatial domain") {
        Field<double> f(1, 64, 64);
        Rng rng(5);
        for (auto& v : f.data) v = rng.next_u64() % 2 ? 1.0 : -1.0;
        auto curve = energy_cdf(std::vector<Field<double>>{f}, EnergyDomain::Spatial);
        const size_t half = curve.size() / 2;
        CHECK(curve[half - 1].second == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("monotone non-decreasing cumulative column") {
        auto curve = energy_cdf(std::vector<Field<double>>{random_field<double>(1, 16, 16, 6)}, EnergyDomain::Fourier);
        for (size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second >= curve[i - 1].second);
        CHECK(curve.back().second == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("improvement_profile") {
    SpectrumProfile a, b;
    a.ring_energy = {1.0, 0.5, 0.25};
    b.ring_energy = {1.0, 0.5, 0.25};
    auto same = improvement_profile(a, b);
    for (double v : same) CHECK(v == doctest::Approx(1.0));

    for (auto& v : b.ring_energy) v /= 10.0;
    auto ten = improvement_profile(a, b);
    for (double v : ten) CHECK(v == doctest::Approx(10.0));

    b.ring_energy[1] = 0.0;
    auto inf = improvement_profile(a, b);
    CHECK(std::isinf(inf[1]));

    SpectrumProfile c;
    c.ring_energy = {1.0};
    CHECK_THROWS_AS((void)improvement_profile(a, c), std::invalid_argument);
}
