#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "vplume/image.hpp"

namespace vplume {

/// Side length of a square averaging window. Always odd and positive.
class KernelSize {
public:
    explicit KernelSize(int side) : side_(side) {
        if (side < 1 || side % 2 == 0) {
            throw Error(ErrorKind::InvalidArgument,
                        "kernel side must be odd and >= 1, got " + std::to_string(side));
        }
    }

    int side() const noexcept { return side_; }
    int radius() const noexcept { return side_ / 2; }

    friend bool operator==(const KernelSize&, const KernelSize&) = default;

private:
    int side_;
};

/// Mean filter over a `kernel`x`kernel` window with replicated borders.
///
/// Evaluated as two separable passes of plain window sums. The result is
/// clamped into the input's [min, max] so rounding in the window sum can never
/// push a sample outside the range of its neighbourhood (a constant image maps
/// to itself bit-for-bit).
inline ChannelImage box_filter(const ChannelImage& img, KernelSize kernel) {
    if (kernel.side() == 1) return img;

    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const long r = kernel.radius();
    const auto clamp_index = [](long v, std::size_t n) {
        return static_cast<std::size_t>(std::clamp<long>(v, 0, static_cast<long>(n) - 1));
    };

    std::vector<double> horiz(img.size());
    for (std::size_t y = 0; y < h; ++y) {
        const auto src = img.row(y);
        double* dst = horiz.data() + y * w;
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (long d = -r; d <= r; ++d) acc += src[clamp_index(static_cast<long>(x) + d, w)];
            dst[x] = acc;
        }
    }

    const double norm = 1.0 / (static_cast<double>(kernel.side()) * kernel.side());
    const auto [lo, hi] = std::minmax_element(img.begin(), img.end());
    const double vmin = *lo;
    const double vmax = *hi;

    std::vector<double> out(img.size());
    for (std::size_t y = 0; y < h; ++y) {
        double* dst = out.data() + y * w;
        std::fill(dst, dst + w, 0.0);
        for (long d = -r; d <= r; ++d) {
            const double* src = horiz.data() + clamp_index(static_cast<long>(y) + d, h) * w;
            for (std::size_t x = 0; x < w; ++x) dst[x] += src[x];
        }
        for (std::size_t x = 0; x < w; ++x) dst[x] = std::clamp(dst[x] * norm, vmin, vmax);
    }
    return ChannelImage(w, h, std::move(out));
}

inline ChannelImage box_filter(const ChannelImage& img, int kernel) {
    return box_filter(img, KernelSize(kernel));
}

}  // namespace vplume
