#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "vplume/color.hpp"
#include "vplume/image.hpp"
#include "vplume/vp_model.hpp"

namespace vplume {

inline constexpr double kPsnrCap = 99.0;

/// PSNR over all three channels with unit peak; identical images report 99 dB.
inline double psnr(const RgbImage& a, const RgbImage& b) {
    if (!a.same_shape(b)) throw Error(ErrorKind::DimensionMismatch, "psnr inputs differ in size");
    std::vector<double> sq;
    sq.reserve(a.size() * 3);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double dr = a[k].r - b[k].r;
        const double dg = a[k].g - b[k].g;
        const double db = a[k].b - b[k].b;
        sq.push_back(dr * dr);
        sq.push_back(dg * dg);
        sq.push_back(db * db);
    }
    const double mse = pairwise_sum(sq) / static_cast<double>(sq.size());
    if (mse <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

namespace ssim_detail {

inline constexpr int kWindow = 11;
inline constexpr double kSigma = 1.5;
inline constexpr double kC1 = 0.01 * 0.01;
inline constexpr double kC2 = 0.03 * 0.03;

inline std::array<double, kWindow> gaussian_taps() {
    std::array<double, kWindow> taps{};
    double total = 0.0;
    for (int k = 0; k < kWindow; ++k) {
        const double d = k - kWindow / 2;
        taps[k] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
        total += taps[k];
    }
    for (double& t : taps) t /= total;
    return taps;
}

/// Separable Gaussian filter, valid region only: output is (w-10) x (h-10).
inline std::vector<double> filter_valid(const std::vector<double>& src, std::size_t w, std::size_t h) {
    static const auto taps = gaussian_taps();
    const std::size_t ow = w - kWindow + 1;
    const std::size_t oh = h - kWindow + 1;
    std::vector<double> horiz(ow * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += taps[k] * src[y * w + x + k];
            horiz[y * ow + x] = acc;
        }
    }
    std::vector<double> out(ow * oh);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += taps[k] * horiz[(y + k) * ow + x];
            out[y * ow + x] = acc;
        }
    }
    return out;
}

}  // namespace ssim_detail

struct SsimResult {
    double ssim = 1.0;
    double contrast_structure = 1.0;  // mean of the luminance-free cs map
};

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, unit dynamic range, averaged over the valid window positions.
inline SsimResult ssim_detailed(const ChannelImage& a, const ChannelImage& b) {
    using namespace ssim_detail;
    if (!a.same_shape(b)) throw Error(ErrorKind::DimensionMismatch, "ssim inputs differ in size");
    if (a.width() < kWindow || a.height() < kWindow) {
        throw Error(ErrorKind::InvalidArgument, "ssim needs images of at least 11x11");
    }
    const std::size_t w = a.width();
    const std::size_t h = a.height();
    std::vector<double> va(a.begin(), a.end());
    std::vector<double> vb(b.begin(), b.end());
    std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        aa[k] = va[k] * va[k];
        bb[k] = vb[k] * vb[k];
        ab[k] = va[k] * vb[k];
    }
    const auto mu_a = filter_valid(va, w, h);
    const auto mu_b = filter_valid(vb, w, h);
    const auto e_aa = filter_valid(aa, w, h);
    const auto e_bb = filter_valid(bb, w, h);
    const auto e_ab = filter_valid(ab, w, h);

    std::vector<double> full(mu_a.size()), cs(mu_a.size());
    for (std::size_t k = 0; k < mu_a.size(); ++k) {
        const double ma = mu_a[k];
        const double mb = mu_b[k];
        const double var_a = e_aa[k] - ma * ma;
        const double var_b = e_bb[k] - mb * mb;
        const double cov = e_ab[k] - ma * mb;
        const double lum = (2.0 * ma * mb + kC1) / (ma * ma + mb * mb + kC1);
        cs[k] = (2.0 * cov + kC2) / (var_a + var_b + kC2);
        full[k] = lum * cs[k];
    }
    const double n = static_cast<double>(full.size());
    return {pairwise_sum(full) / n, pairwise_sum(cs) / n};
}

inline double ssim(const ChannelImage& a, const ChannelImage& b) { return ssim_detailed(a, b).ssim; }

/// RGB inputs are compared on their HSI intensity channel.
inline double ssim(const RgbImage& a, const RgbImage& b) {
    return ssim(intensity_channel(a), intensity_channel(b));
}

struct ExposureStats {
    double mean_brightness = 0.0;
    double saturated_fraction = 0.0;
    double dark_fraction = 0.0;
};

/// Brightness summary of an image. A pixel is saturated when any channel
/// reaches 254/255 and dark when its intensity is <= tau. With the mean policy
/// an all-black image uses tau = 0.
inline ExposureStats exposure_stats(const RgbImage& img, const TauPolicy& policy = TauPolicy::mean_of_nonzero()) {
    const ChannelImage intensity = intensity_channel(img);
    double tau = 0.0;
    if (policy.kind() == TauPolicy::Kind::Fixed) {
        tau = policy.fixed_value();
    } else {
        std::vector<double> nonzero;
        for (double v : intensity) {
            if (v > 0.0) nonzero.push_back(v);
        }
        if (!nonzero.empty()) {
            const auto [lo, hi] = std::minmax_element(nonzero.begin(), nonzero.end());
            tau = std::clamp(pairwise_sum(nonzero) / static_cast<double>(nonzero.size()), *lo, *hi);
        }
    }
    constexpr double kSaturated = 254.0 / 255.0;
    std::size_t saturated = 0, dark = 0;
    for (std::size_t k = 0; k < img.size(); ++k) {
        const Rgb& p = img[k];
        if (p.r >= kSaturated || p.g >= kSaturated || p.b >= kSaturated) ++saturated;
        if (intensity[k] <= tau) ++dark;
    }
    const double n = static_cast<double>(img.size());
    return {mean_value(intensity), static_cast<double>(saturated) / n, static_cast<double>(dark) / n};
}

struct MetricReport {
    double psnr = kPsnrCap;
    double ssim = 1.0;
    double mean_brightness = 0.0;
    double saturated_fraction = 0.0;
    double dark_fraction = 0.0;
};

/// Full-reference comparison of `output` against `reference` plus exposure
/// statistics of `output`.
inline MetricReport evaluate(const RgbImage& output, const RgbImage& reference,
                             const TauPolicy& policy = TauPolicy::mean_of_nonzero()) {
    const ExposureStats e = exposure_stats(output, policy);
    return {psnr(output, reference), ssim(output, reference), e.mean_brightness, e.saturated_fraction,
            e.dark_fraction};
}

inline constexpr const char* kReportCsvHeader = "file,psnr,ssim,mean_brightness,saturated_fraction,dark_fraction";

/// RFC 4180 quoting, applied only when the field needs it.
inline std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_csv_row(const std::string& file, const MetricReport& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f,%.6f", m.psnr, m.ssim, m.mean_brightness,
                  m.saturated_fraction, m.dark_fraction);
    return csv_field(file) + buf;
}

inline nlohmann::ordered_json to_json(const MetricReport& m) {
    return {{"psnr", m.psnr},
            {"ssim", m.ssim},
            {"mean_brightness", m.mean_brightness},
            {"saturated_fraction", m.saturated_fraction},
            {"dark_fraction", m.dark_fraction}};
}

}  // namespace vplume
