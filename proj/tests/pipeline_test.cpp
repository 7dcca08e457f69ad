#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <random>

#include "test_support.hpp"

using namespace vplume;
using testing_support::darken;

namespace {

struct Case {
    std::string name;
    RgbImage image;
};

const std::vector<Case>& darkened_corpus() {
    static const std::vector<Case> corpus = [] {
        std::vector<Case> out;
        for (const auto& path : testing_support::natural_fixtures()) {
            const RgbImage img = load_image(path);
            for (double g : {2.0, 3.0, 4.0}) {
                out.push_back({path.stem().string() + "_g" + std::to_string(static_cast<int>(g)), darken(img, g)});
            }
        }
        return out;
    }();
    return corpus;
}

}  // namespace

TEST(Preprocess, ConstantImageHasNoDetail) {
    const ChannelImage ic(6, 4, 0.37);
    const auto pre = preprocess(ic, KernelSize(3));
    for (double d : pre.detail) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(pre.base, ic);
}

TEST(Preprocess, IdentityKernel) {
    std::mt19937_64 rng(21);
    const auto ic = testing_support::random_channel(rng, 7, 7);
    const auto pre = preprocess(ic, KernelSize(1));
    for (double d : pre.detail) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(pre.base, ic);
}

TEST(Preprocess, SpikeMatchesPythonOracle) {
    ChannelImage ic(3, 3, 0.0);
    ic(1, 1) = 1.0;
    const auto pre = preprocess(ic, KernelSize(3));
    EXPECT_NEAR(pre.detail(1, 1), 0.8888888888888888, 1e-15);
    EXPECT_EQ(pre.base(1, 1), 0.0);
    for (std::size_t k = 0; k < ic.size(); ++k) {
        if (k == 4) continue;
        EXPECT_EQ(pre.detail[k], 0.0);
        EXPECT_NEAR(pre.base[k], 1.0 / 9.0, 1e-15);
    }
}

TEST(Preprocess, ProseModeTakesPointwiseMinimum) {
    std::mt19937_64 rng(22);
    const auto ic = testing_support::random_channel(rng, 12, 9);
    const auto smooth = box_filter(ic, 3);
    const auto pre = preprocess(ic, KernelSize(3), BaseMode::Prose);
    for (std::size_t k = 0; k < ic.size(); ++k) EXPECT_NEAR(pre.base[k], std::min(ic[k], smooth[k]), 1e-15);
}

TEST(EnhanceOnce, AllBlackIsDegenerate) {
    try {
        enhance_once(RgbImage(4, 4), EnhanceConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
    }
}

TEST(EnhanceOnce, RejectsOutOfRangeInput) {
    RgbImage img(2, 2, Rgb{0.2, 0.2, 0.2});
    img[1].g = 1.5;
    EXPECT_THROW(enhance_once(img, EnhanceConfig{}), Error);
}

TEST(EnhanceOnce, WhitePixelIsAFixedPoint) {
    // base 1 => P2 = Q2 = 1, beta = 1, gamma = 1, theta = 0, M_e = 1, U = 2
    const auto [out, rec] = enhance_once(RgbImage(1, 1, Rgb{1, 1, 1}), EnhanceConfig{});
    EXPECT_EQ(rec.beta, 1.0);
    EXPECT_EQ(rec.gamma, 1.0);
    EXPECT_EQ(rec.theta, 0.0);
    EXPECT_NEAR(rec.u, 2.0, 1e-15);
    EXPECT_EQ(rec.t, 1);
    EXPECT_EQ(out[0], (Rgb{1, 1, 1}));
}

TEST(EnhanceOnce, SinglePixelMatchesHandComposedChain) {
    const double v = 0.3;
    const auto [out, rec] = enhance_once(RgbImage(1, 1, Rgb{v, v, v}), EnhanceConfig{});

    // Scalar chain written out directly: one dark pixel, tau = v.
    const double beta = std::sqrt(std::exp(std::sqrt(std::log(1.0 / v)) - std::log(1.0)));
    const double gamma = v;
    const double a = std::pow(1.0 + std::log(2.0), 4) * v;
    const double theta = std::fabs(a - std::pow(a, beta));
    const double m = 2.0 - std::pow(std::fabs(std::log10(10.0)), beta * beta) + theta;
    const double u = std::max(1.0, std::pow(std::pow(std::pow(v, beta) + 1.0, gamma), 1.0 / beta));
    const double ie = std::clamp(std::pow(v, u) * m, 0.0, 1.0);

    EXPECT_NEAR(rec.beta, beta, 1e-12);
    EXPECT_NEAR(rec.gamma, gamma, 1e-15);
    EXPECT_NEAR(rec.theta, theta, 1e-12);
    EXPECT_NEAR(rec.u, u, 1e-12);
    EXPECT_NEAR(rec.ie.mean, ie, 1e-12);
    EXPECT_NEAR(out[0].r, ie, 1e-12);
    EXPECT_NEAR(out[0].b, ie, 1e-12);
}

TEST(EnhanceOnceProperty, DarkInputsBrighten) {
    for (const auto& c : darkened_corpus()) {
        const CycleResult r = enhance_cycle(c.image, EnhanceConfig{});
        if (r.record.ic.mean < 0.3) EXPECT_GE(r.record.ie.mean, r.record.ic.mean - 1e-9) << c.name;
    }
}

TEST(EnhanceOnceProperty, HueAndSaturationPassThrough) {
    for (const auto& c : darkened_corpus()) {
        const HsiImage before = rgb_to_hsi(c.image);
        const auto [out, rec] = enhance_once(c.image, EnhanceConfig{});
        const HsiImage after = rgb_to_hsi(out);
        std::size_t checked = 0;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const Rgb& p = out[k];
            const bool clipped = std::max({p.r, p.g, p.b}) >= 1.0 || std::min({p.r, p.g, p.b}) <= 0.0;
            if (before[k].s <= 0.01 || clipped || after[k].i < 1e-3) continue;
            ASSERT_NEAR(after[k].s, before[k].s, 1e-6) << c.name;
            const double dh = std::fabs(after[k].h - before[k].h);
            ASSERT_LT(std::min(dh, 360.0 - dh), 1e-4) << c.name;
            ++checked;
        }
        (void)checked;
    }
}

// The illumination map itself favours dark pixels: within every image, pixels
// at or below tau receive a larger mean M_e than those above it.
TEST(EnhanceOnceProperty, DarkRegionsGetLargerIllumination) {
    for (const auto& c : darkened_corpus()) {
        const CycleResult r = enhance_cycle(c.image, EnhanceConfig{});
        const double tau = r.record.tau;
        double dark = 0, bright = 0;
        std::size_t nd = 0, nb = 0;
        for (std::size_t k = 0; k < r.ib.size(); ++k) {
            if (r.ib[k] <= tau) {
                dark += r.illumination.illumination[k];
                ++nd;
            } else {
                bright += r.illumination.illumination[k];
                ++nb;
            }
        }
        if (nd == 0 || nb == 0) continue;
        EXPECT_GE(dark / nd, bright / nb) << c.name;
    }
}

TEST(Enhance, ForcedCycleCountIsExact) {
    EnhanceConfig cfg;
    cfg.force_k = 3;
    const auto res = enhance(darkened_corpus().front().image, cfg);
    ASSERT_EQ(res.trace.cycles.size(), 3u);
    EXPECT_EQ(res.trace.stop_reason, StopReason::Forced);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(res.trace.cycles[k].k, k + 1);
}

TEST(Enhance, BetaAtMostOneStopsAfterOneCycle) {
    const auto res = enhance(RgbImage(8, 8, Rgb{1, 1, 1}), EnhanceConfig{});
    ASSERT_EQ(res.trace.cycles.size(), 1u);
    EXPECT_EQ(res.trace.cycles[0].t, 1);
    EXPECT_EQ(res.trace.stop_reason, StopReason::Comparator);
}

TEST(Enhance, ThresholdRecomputedFromEachCyclesInput) {
    EnhanceConfig cfg;
    cfg.force_k = 4;
    for (const auto& c : darkened_corpus()) {
        const auto res = enhance(c.image, cfg);
        RgbImage current = c.image;
        for (const auto& rec : res.trace.cycles) {
            const auto [next, expected] = enhance_once(current, cfg);
            ASSERT_EQ(rec.beta, expected.beta);
            ASSERT_EQ(rec.t, adaptive_threshold(rec.beta));
            current = next;
        }
        ASSERT_EQ(current, res.output);
    }
}

TEST(Enhance, StopsWhenCycleCountReachesThreshold) {
    for (const auto& c : darkened_corpus()) {
        const auto res = enhance(c.image, EnhanceConfig{});
        const auto& cycles = res.trace.cycles;
        ASSERT_LE(cycles.size(), 8u);
        for (std::size_t k = 0; k + 1 < cycles.size(); ++k) ASSERT_LT(cycles[k].k, cycles[k].t) << c.name;
        if (res.trace.stop_reason == StopReason::Comparator) {
            ASSERT_GE(cycles.back().k, cycles.back().t);
        } else {
            ASSERT_EQ(res.trace.stop_reason, StopReason::Cap);
            ASSERT_EQ(cycles.size(), 8u);
        }
    }
}

TEST(Enhance, CapStopsTheLoop) {
    EnhanceConfig cfg;
    cfg.k_max = 1;
    for (const auto& c : darkened_corpus()) {
        const auto res = enhance(c.image, cfg);
        ASSERT_EQ(res.trace.cycles.size(), 1u);
        const auto expected = res.trace.cycles[0].t > 1 ? StopReason::Cap : StopReason::Comparator;
        EXPECT_EQ(res.trace.stop_reason, expected);
    }
}

TEST(Enhance, RejectsInvalidConfig) {
    const RgbImage img(2, 2, Rgb{0.1, 0.1, 0.1});
    EnhanceConfig cfg;
    cfg.force_k = 9;
    EXPECT_THROW(enhance(img, cfg), Error);
    cfg = {};
    cfg.k_max = 0;
    EXPECT_THROW(enhance(img, cfg), Error);
    cfg = {};
    cfg.epsilon = 0.5;
    EXPECT_THROW(enhance(img, cfg), Error);
}

TEST(EnhanceProperty, DeterministicAndInRange) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const RgbImage img = testing_support::random_rgb(rng, 20 + trial, 17, 0.3);
        const auto a = enhance(img, EnhanceConfig{});
        const auto b = enhance(img, EnhanceConfig{});
        ASSERT_EQ(a.output, b.output);
        ASSERT_EQ(trace_to_string(a.trace, EnhanceConfig{}), trace_to_string(b.trace, EnhanceConfig{}));
        for (const Rgb& p : a.output) {
            for (double v : {p.r, p.g, p.b}) {
                ASSERT_TRUE(std::isfinite(v));
                ASSERT_GE(v, 0.0);
                ASSERT_LE(v, 1.0);
            }
        }
    }
}

// Corpus-level trend: enhancement should lower the dark imbalance from one
// cycle to the next. Individual counterexamples are reported, not failed.
TEST(EnhanceProperty, BetaTrendsDownAcrossCycles) {
    EnhanceConfig cfg;
    cfg.force_k = 2;
    int down = 0, total = 0;
    for (const auto& c : darkened_corpus()) {
        const auto res = enhance(c.image, cfg);
        const double b1 = res.trace.cycles[0].beta;
        const double b2 = res.trace.cycles[1].beta;
        ++total;
        if (b2 <= b1) {
            ++down;
        } else {
            std::cout << "  beta rose on " << c.name << ": " << b1 << " -> " << b2 << "\n";
        }
    }
    std::cout << "  beta non-increasing on " << down << "/" << total << " cases\n";
    EXPECT_GT(total, 0);
}

TEST(TraceJson, HasStableKeys) {
    EnhanceConfig cfg;
    cfg.force_k = 2;
    const auto res = enhance(darkened_corpus().front().image, cfg);
    const auto j = to_json(res.trace, cfg);
    EXPECT_EQ(j.at("stop_reason"), "forced");
    ASSERT_EQ(j.at("cycles").size(), 2u);
    const auto& c0 = j.at("cycles").at(0);
    for (const char* key : {"k", "t", "beta", "gamma", "theta", "u", "tau", "stats"}) {
        EXPECT_TRUE(c0.contains(key)) << key;
    }
    for (const char* key : {"i_c", "i_b", "m_e", "n_e", "i_e", "vp"}) EXPECT_TRUE(c0.at("stats").contains(key)) << key;
    EXPECT_EQ(c0.at("k"), 1);
    EXPECT_EQ(j.at("conventions").at("beta_log"), "natural");
    EXPECT_EQ(j.at("conventions").at("illumination_log"), "base10");
    EXPECT_EQ(j.at("config").at("force_k"), 2);
}
