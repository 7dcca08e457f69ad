#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "vplume/error.hpp"

namespace vplume {

/// Dense row-major 2-D grid. All image types in the library are instances of
/// this template; the pixel type carries the colour model.
template <typename Pixel>
class Grid {
public:
    using value_type = Pixel;

    Grid() = default;

    Grid(std::size_t width, std::size_t height, Pixel fill = Pixel{})
        : width_(width), height_(height), data_(checked_area(width, height), fill) {}

    Grid(std::size_t width, std::size_t height, std::vector<Pixel> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != checked_area(width, height)) {
            throw Error(ErrorKind::InvalidArgument,
                        "grid data length " + std::to_string(data_.size()) + " does not match " +
                            std::to_string(width) + "x" + std::to_string(height));
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    Pixel& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
    const Pixel& operator()(std::size_t x, std::size_t y) const noexcept {
        return data_[y * width_ + x];
    }
    Pixel& operator[](std::size_t i) noexcept { return data_[i]; }
    const Pixel& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<Pixel> pixels() noexcept { return data_; }
    std::span<const Pixel> pixels() const noexcept { return data_; }

    std::span<const Pixel> row(std::size_t y) const noexcept {
        return std::span<const Pixel>(data_).subspan(y * width_, width_);
    }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    template <typename Other>
    bool same_shape(const Grid<Other>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static std::size_t checked_area(std::size_t width, std::size_t height) {
        if (width == 0 || height == 0) {
            throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive");
        }
        return width * height;
    }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<Pixel> data_;
};

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Hue in degrees [0, 360), saturation and intensity in [0, 1].
struct Hsi {
    double h = 0.0;
    double s = 0.0;
    double i = 0.0;
    friend bool operator==(const Hsi&, const Hsi&) = default;
};

/// Single-channel luminance plane. Nominal range is [0, 1] but intermediate
/// maps (regulator output, illumination) may exceed 1.
using ChannelImage = Grid<double>;
using RgbImage = Grid<Rgb>;
using HsiImage = Grid<Hsi>;

template <typename Pixel, typename F>
auto map_pixels(const Grid<Pixel>& src, F&& fn) {
    using Out = std::invoke_result_t<F&, const Pixel&>;
    std::vector<Out> out;
    out.reserve(src.size());
    for (const auto& p : src) out.push_back(fn(p));
    return Grid<Out>(src.width(), src.height(), std::move(out));
}

template <typename F>
ChannelImage zip_channels(const ChannelImage& a, const ChannelImage& b, F&& fn) {
    if (!a.same_shape(b)) {
        throw Error(ErrorKind::DimensionMismatch, "channel images differ in size");
    }
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i], b[i]);
    return ChannelImage(a.width(), a.height(), std::move(out));
}

/// Throws unless every sample is finite.
inline void require_finite(const ChannelImage& img, const char* what = "channel image") {
    for (double v : img) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidArgument, std::string(what) + " contains NaN or Inf");
        }
    }
}

/// Throws unless every channel lies in [0, 1].
inline void require_unit_range(const RgbImage& img) {
    for (const Rgb& p : img) {
        for (double v : {p.r, p.g, p.b}) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw Error(ErrorKind::InvalidArgument, "rgb sample outside [0,1] or NaN");
            }
        }
    }
}

inline ChannelImage clamp_unit(const ChannelImage& img) {
    return map_pixels(img, [](double v) { return std::clamp(v, 0.0, 1.0); });
}

/// Pairwise summation; error grows with log(n) and the result depends only on
/// the sample order, never on scheduling.
inline double pairwise_sum(std::span<const double> values) noexcept {
    constexpr std::size_t kBlock = 64;
    if (values.size() <= kBlock) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct ChannelSummary {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline ChannelSummary summarize(const ChannelImage& img) {
    const auto px = img.pixels();
    const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
    return {pairwise_sum(px) / static_cast<double>(px.size()), *lo, *hi};
}

inline double max_value(const ChannelImage& img) {
    return *std::max_element(img.begin(), img.end());
}

inline double mean_value(const ChannelImage& img) {
    return pairwise_sum(img.pixels()) / static_cast<double>(img.size());
}

}  // namespace vplume
