#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vplume/filter.hpp"
#include "vplume/image.hpp"

namespace vplume {

struct IlluminationResult {
    ChannelImage regulated;     // first-regulator output, >= 0, unnormalised
    ChannelImage illumination;  // in [1 + theta, 2 + theta]
    double theta = 0.0;         // bright-area correction factor
};

struct ReflectanceResult {
    ChannelImage reflectance;  // ic^exponent, never above ic
    double exponent = 1.0;
};

/// Weight applied to a pixel by the first regulator: (1 + ln(1 + e^(max - v)))^4.
/// Darker pixels get larger weights.
inline double enhancement_weight(double max_ib, double v) noexcept {
    const double t = 1.0 + std::log1p(std::exp(max_ib - v));
    const double t2 = t * t;
    return t2 * t2;
}

/// First regulator: weight each sample, multiply by the sample, then average
/// over the kernel window.
inline ChannelImage regulator_one(const ChannelImage& ib, KernelSize kernel) {
    require_finite(ib, "brightness channel");
    const double top = max_value(ib);
    return box_filter(map_pixels(ib, [top](double v) { return enhancement_weight(top, v) * v; }), kernel);
}

/// |max(A) - max(A)^beta|. Equal to |max(A) - max(A^beta)| for A >= 0 since
/// x^beta is monotone.
inline double correction_factor(double max_a, double beta) noexcept {
    return std::abs(max_a - std::pow(max_a, beta));
}

/// Second regulator. The log term is base 10 so that its magnitude spans
/// [0, 1] as the relative darkness goes from 0 (brightest) to 1 (black).
inline IlluminationResult regulator_two(ChannelImage regulated, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::InvalidArgument, "regulator needs a finite beta > 0");
    }
    require_finite(regulated, "regulator input");
    const double top = max_value(regulated);
    if (!(top > 0.0)) throw Error(ErrorKind::DegenerateInput, "first-regulator output is identically zero");

    const double theta = correction_factor(top, beta);
    const double power = beta * beta;
    auto illumination = map_pixels(regulated, [&](double a) {
        const double darkness = std::clamp((top - a) / top, 0.0, 1.0);
        const double bracket = std::abs(std::log10(10.0 - 9.0 * darkness));
        return 2.0 - std::pow(bracket, power) + theta;
    });
    return {std::move(regulated), std::move(illumination), theta};
}

inline IlluminationResult estimate_illumination(const ChannelImage& ib, double beta, KernelSize kernel) {
    return regulator_two(regulator_one(ib, kernel), beta);
}

/// U = [mean((ib^beta + 1)^gamma)]^(1/beta), floored at 1.
inline double reflectance_exponent(const ChannelImage& ib, double beta, double gamma) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::InvalidArgument, "reflectance needs a finite beta > 0");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "reflectance needs gamma in (0, 1]");
    }
    std::vector<double> terms(ib.size());
    for (std::size_t k = 0; k < ib.size(); ++k) {
        terms[k] = std::pow(std::pow(std::max(ib[k], 0.0), beta) + 1.0, gamma);
    }
    const double mean = pairwise_sum(terms) / static_cast<double>(terms.size());
    return std::max(1.0, std::pow(mean, 1.0 / beta));
}

inline ReflectanceResult estimate_reflectance(const ChannelImage& ic, const ChannelImage& ib, double beta,
                                              double gamma) {
    if (!ic.same_shape(ib)) throw Error(ErrorKind::DimensionMismatch, "ic and ib differ in size");
    require_finite(ic, "brightness channel");
    const double u = reflectance_exponent(ib, beta, gamma);
    auto reflectance = map_pixels(ic, [u](double v) {
        const double base = std::clamp(v, 0.0, 1.0);
        return u == 1.0 ? base : std::pow(base, u);
    });
    return {std::move(reflectance), u};
}

}  // namespace vplume
