#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace vplume;

namespace {

ChannelImage texture(std::size_t w, std::size_t h) {
    ChannelImage img(w, h, 0.0);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double fx = static_cast<double>(x), fy = static_cast<double>(y);
            img(x, y) = 0.5 + 0.25 * std::sin(0.7 * fy) * std::cos(0.45 * fx) + 0.1 * std::sin(0.13 * fx * fy);
        }
    }
    return img;
}

RgbImage gray_rgb(const ChannelImage& c) {
    return map_pixels(c, [](double v) { return Rgb{v, v, v}; });
}

}  // namespace

TEST(Psnr, IdenticalImagesHitTheCap) {
    const RgbImage img(4, 4, Rgb{0.3, 0.2, 0.1});
    EXPECT_EQ(psnr(img, img), 99.0);
}

TEST(Psnr, KnownValues) {
    EXPECT_NEAR(psnr(RgbImage(3, 3, Rgb{0, 0, 0}), RgbImage(3, 3, Rgb{1, 1, 1})), 0.0, 1e-12);
    EXPECT_NEAR(psnr(RgbImage(3, 3, Rgb{0, 0, 0}), RgbImage(3, 3, Rgb{0.5, 0.5, 0.5})), 6.020599913279624, 1e-9);
}

TEST(Psnr, SymmetricAndShapeChecked) {
    std::mt19937_64 rng(1);
    const auto a = testing_support::random_rgb(rng, 9, 7);
    const auto b = testing_support::random_rgb(rng, 9, 7);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    try {
        psnr(a, RgbImage(7, 9));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(Ssim, PythonOracleValues) {
    const auto t = texture(32, 32);
    const auto inv = map_pixels(t, [](double v) { return 1.0 - v; });
    const auto sq = map_pixels(t, [](double v) { return v * v; });
    EXPECT_NEAR(ssim(t, inv), -0.923114934134263, 1e-9);
    EXPECT_NEAR(ssim(t, sq), 0.8153829885097652, 1e-9);
    EXPECT_NEAR(ssim(ChannelImage(16, 16, 0.3), ChannelImage(16, 16, 0.4)), 0.960015993602559, 1e-12);
}

TEST(Ssim, RejectsSmallOrMismatchedInputs) {
    EXPECT_THROW(ssim(ChannelImage(10, 20, 0.5), ChannelImage(10, 20, 0.5)), Error);
    EXPECT_THROW(ssim(ChannelImage(20, 20, 0.5), ChannelImage(20, 21, 0.5)), Error);
}

TEST(Ssim, RgbComparesIntensity) {
    const auto t = texture(20, 20);
    const auto sq = map_pixels(t, [](double v) { return v * v; });
    EXPECT_NEAR(ssim(gray_rgb(t), gray_rgb(sq)), ssim(t, sq), 1e-12);
}

TEST(SsimProperty, SelfSymmetricBoundedAndMatchesNaive) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> dim(11, 30);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t w = dim(rng), h = dim(rng);
        const auto a = testing_support::random_channel(rng, w, h, 0.1);
        const auto b = testing_support::random_channel(rng, w, h, 0.1);
        EXPECT_NEAR(ssim(a, a), 1.0, 1e-9);
        const double ab = ssim(a, b);
        EXPECT_LE(std::fabs(ab - ssim(b, a)), 1e-12);
        EXPECT_LE(ab, 1.0 + 1e-12);
        EXPECT_NEAR(ab, oracle::naive_ssim(testing_support::to_plane(a), testing_support::to_plane(b)), 1e-4);
    }
}

// A common offset changes the luminance term, so only the contrast-structure
// part is invariant.
TEST(SsimProperty, ContrastStructureIgnoresCommonShift) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testing_support::random_channel(rng, 24, 19, 0.0, 0.5);
        const auto b = testing_support::random_channel(rng, 24, 19, 0.0, 0.5);
        const double shift = 0.1 + 0.04 * trial;
        const auto as = map_pixels(a, [shift](double v) { return v + shift; });
        const auto bs = map_pixels(b, [shift](double v) { return v + shift; });
        EXPECT_NEAR(ssim_detailed(a, b).contrast_structure, ssim_detailed(as, bs).contrast_structure, 1e-6);
    }
}

TEST(Exposure, BlackWhiteAndCheckerboard) {
    const auto black = exposure_stats(RgbImage(4, 4));
    EXPECT_EQ(black.mean_brightness, 0.0);
    EXPECT_EQ(black.saturated_fraction, 0.0);
    EXPECT_EQ(black.dark_fraction, 1.0);

    const auto white = exposure_stats(RgbImage(4, 4, Rgb{1, 1, 1}));
    EXPECT_EQ(white.mean_brightness, 1.0);
    EXPECT_EQ(white.saturated_fraction, 1.0);

    RgbImage board(4, 4);
    for (std::size_t y = 0; y < 4; ++y) {
        for (std::size_t x = 0; x < 4; ++x) board(x, y) = (x + y) % 2 ? Rgb{1, 1, 1} : Rgb{0, 0, 0};
    }
    const auto e = exposure_stats(board);
    EXPECT_EQ(e.mean_brightness, 0.5);
    EXPECT_EQ(e.saturated_fraction, 0.5);
    EXPECT_EQ(e.dark_fraction, 1.0);  // black pixels plus white ones at tau = 1
}

TEST(Report, CsvRowFormatting) {
    MetricReport m{31.25, 0.875, 0.5, 0.0, 0.125};
    EXPECT_EQ(to_csv_row("a.png", m), "a.png,31.250000,0.875000,0.500000,0.000000,0.125000");
    EXPECT_EQ(csv_field("we,ird\"name.png"), "\"we,ird\"\"name.png\"");
    EXPECT_EQ(std::string(kReportCsvHeader), "file,psnr,ssim,mean_brightness,saturated_fraction,dark_fraction");
    const auto j = to_json(m);
    EXPECT_EQ(j.at("psnr"), 31.25);
}
