#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vplume/image.hpp"

namespace vplume {

namespace detail {
constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kRadPerDeg = std::numbers::pi / 180.0;
}  // namespace detail

/// Geometric (arccos) HSI. Intensity is the plain channel mean; hue is 0 for
/// achromatic pixels.
inline Hsi rgb_to_hsi(const Rgb& p) noexcept {
    const double total = p.r + p.g + p.b;
    Hsi out;
    out.i = total / 3.0;
    if (total <= 0.0) return out;

    const double lo = std::min({p.r, p.g, p.b});
    out.s = std::clamp(1.0 - 3.0 * lo / total, 0.0, 1.0);

    const double num = 0.5 * ((p.r - p.g) + (p.r - p.b));
    const double den = std::sqrt((p.r - p.g) * (p.r - p.g) + (p.r - p.b) * (p.g - p.b));
    if (den == 0.0) {
        // r == g == b; rounding in the saturation formula can leave a residue
        out.s = 0.0;
        return out;
    }
    if (out.s == 0.0) return out;
    const double theta = std::acos(std::clamp(num / den, -1.0, 1.0)) * detail::kDegPerRad;
    double h = p.b <= p.g ? theta : 360.0 - theta;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

/// Three-sector inverse. Channels are clipped to [0, 1] because a raised
/// intensity with unchanged saturation can leave the RGB cube.
inline Rgb hsi_to_rgb(const Hsi& p) noexcept {
    const double i = p.i;
    const double s = p.s;
    double h = std::fmod(p.h, 360.0);
    if (h < 0.0) h += 360.0;

    auto lifted = [&](double sector_h) {
        return i * (1.0 + s * std::cos(sector_h * detail::kRadPerDeg) /
                              std::cos((60.0 - sector_h) * detail::kRadPerDeg));
    };

    Rgb out;
    if (h < 120.0) {
        out.b = i * (1.0 - s);
        out.r = lifted(h);
        out.g = 3.0 * i - (out.r + out.b);
    } else if (h < 240.0) {
        out.r = i * (1.0 - s);
        out.g = lifted(h - 120.0);
        out.b = 3.0 * i - (out.r + out.g);
    } else {
        out.g = i * (1.0 - s);
        out.b = lifted(h - 240.0);
        out.r = 3.0 * i - (out.g + out.b);
    }
    out.r = std::clamp(out.r, 0.0, 1.0);
    out.g = std::clamp(out.g, 0.0, 1.0);
    out.b = std::clamp(out.b, 0.0, 1.0);
    return out;
}

inline HsiImage rgb_to_hsi(const RgbImage& img) {
    return map_pixels(img, [](const Rgb& p) { return rgb_to_hsi(p); });
}

inline RgbImage hsi_to_rgb(const HsiImage& img) {
    return map_pixels(img, [](const Hsi& p) { return hsi_to_rgb(p); });
}

inline ChannelImage intensity_channel(const HsiImage& img) {
    return map_pixels(img, [](const Hsi& p) { return p.i; });
}

inline ChannelImage intensity_channel(const RgbImage& img) {
    return map_pixels(img, [](const Rgb& p) { return (p.r + p.g + p.b) / 3.0; });
}

/// Keeps hue and saturation of `hsi`, takes intensity from `intensity`.
inline HsiImage with_intensity(const HsiImage& hsi, const ChannelImage& intensity) {
    if (!hsi.same_shape(intensity)) {
        throw Error(ErrorKind::DimensionMismatch, "intensity plane does not match hsi image");
    }
    HsiImage out = hsi;
    for (std::size_t k = 0; k < out.size(); ++k) out[k].i = intensity[k];
    return out;
}

}  // namespace vplume
