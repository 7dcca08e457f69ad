#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vplume/color.hpp"
#include "vplume/estimation.hpp"
#include "vplume/filter.hpp"
#include "vplume/image.hpp"
#include "vplume/vp_model.hpp"

namespace vplume {

/// How the smooth base image is derived from the brightness channel and its
/// mean-filtered version.
enum class BaseMode {
    Literal,  // base = clamp(smooth - detail, 0, 1)
    Prose,    // base = ic - detail = min(ic, smooth)
};

inline const char* to_string(BaseMode mode) noexcept {
    return mode == BaseMode::Literal ? "literal" : "prose";
}

struct EnhanceConfig {
    KernelSize kernel{3};
    double epsilon = kDefaultEpsilon;
    int k_max = 8;
    TauPolicy tau = TauPolicy::mean_of_nonzero();
    std::optional<int> force_k;
    BaseMode base_mode = BaseMode::Literal;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon <= 1e-2)) {
            throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1e-2]");
        }
        if (k_max < 1) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 1");
        if (force_k && (*force_k < 1 || *force_k > k_max)) {
            throw Error(ErrorKind::InvalidArgument,
                        "forced cycle count must lie in [1, k_max=" + std::to_string(k_max) + "]");
        }
    }
};

struct Preprocessed {
    ChannelImage base;    // I_b, smooth image fed to the perception model
    ChannelImage detail;  // I_d, positive part of ic - smooth
};

inline Preprocessed preprocess(const ChannelImage& ic, KernelSize kernel, BaseMode mode = BaseMode::Literal) {
    require_finite(ic, "brightness channel");
    const ChannelImage smooth = box_filter(ic, kernel);
    ChannelImage detail = zip_channels(ic, smooth, [](double c, double s) { return std::max(c - s, 0.0); });
    ChannelImage base = mode == BaseMode::Literal
                            ? zip_channels(smooth, detail,
                                           [](double s, double d) { return std::clamp(s - d, 0.0, 1.0); })
                            : zip_channels(ic, detail,
                                           [](double c, double d) { return std::clamp(c - d, 0.0, 1.0); });
    return {std::move(base), std::move(detail)};
}

enum class StopReason { Comparator, Cap, Forced };

inline const char* to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Comparator: return "comparator";
        case StopReason::Cap: return "cap";
        case StopReason::Forced: return "forced";
    }
    return "unknown";
}

/// Diagnostics for one pass through the model.
struct CycleRecord {
    int k = 1;
    int t = 1;
    double beta = 1.0;
    double gamma = 1.0;
    double theta = 0.0;
    double u = 1.0;
    double tau = 0.0;
    VpStats stats;
    ChannelSummary ic;
    ChannelSummary ib;
    ChannelSummary me;
    ChannelSummary ne;
    ChannelSummary ie;
};

struct CycleTrace {
    std::vector<CycleRecord> cycles;
    StopReason stop_reason = StopReason::Comparator;
};

/// Every intermediate plane of one cycle, kept for inspection and testing.
struct CycleResult {
    RgbImage enhanced;
    CycleRecord record;
    ChannelImage ic;
    ChannelImage ib;
    ChannelImage detail;
    IlluminationResult illumination;
    ReflectanceResult reflectance;
    ChannelImage ie;
};

inline CycleResult enhance_cycle(const RgbImage& img, const EnhanceConfig& cfg) {
    cfg.validate();
    require_unit_range(img);

    const HsiImage hsi = rgb_to_hsi(img);
    ChannelImage ic = intensity_channel(hsi);
    Preprocessed pre = preprocess(ic, cfg.kernel, cfg.base_mode);

    const VpStats stats = vp_stats(pre.base, cfg.tau, cfg.epsilon);
    const Gains gains = compute_gains(stats);

    IlluminationResult illum = estimate_illumination(pre.base, gains.beta, cfg.kernel);
    ReflectanceResult refl = estimate_reflectance(ic, pre.base, gains.beta, gains.gamma);

    ChannelImage ie = zip_channels(refl.reflectance, illum.illumination,
                                   [](double n, double m) { return std::clamp(n * m, 0.0, 1.0); });
    RgbImage enhanced = hsi_to_rgb(with_intensity(hsi, ie));

    CycleRecord rec;
    rec.t = gains.threshold;
    rec.beta = gains.beta;
    rec.gamma = gains.gamma;
    rec.theta = illum.theta;
    rec.u = refl.exponent;
    rec.tau = stats.tau;
    rec.stats = stats;
    rec.ic = summarize(ic);
    rec.ib = summarize(pre.base);
    rec.me = summarize(illum.illumination);
    rec.ne = summarize(refl.reflectance);
    rec.ie = summarize(ie);

    return {std::move(enhanced), rec,          std::move(ic),   std::move(pre.base),
            std::move(pre.detail), std::move(illum), std::move(refl), std::move(ie)};
}

/// One pass: returns the intermediate image and its diagnostic record.
inline std::pair<RgbImage, CycleRecord> enhance_once(const RgbImage& img, const EnhanceConfig& cfg) {
    CycleResult r = enhance_cycle(img, cfg);
    return {std::move(r.enhanced), r.record};
}

struct EnhanceResult {
    RgbImage output;
    CycleTrace trace;
};

/// Repeats the cycle on its own output until the cycle count K reaches the
/// threshold T computed from that cycle's statistics, the cap k_max, or the
/// forced count.
inline EnhanceResult enhance(const RgbImage& img, const EnhanceConfig& cfg) {
    cfg.validate();
    EnhanceResult result{img, {}};
    for (int k = 1;; ++k) {
        auto [enhanced, record] = enhance_once(result.output, cfg);
        record.k = k;
        result.output = std::move(enhanced);
        result.trace.cycles.push_back(record);

        if (cfg.force_k) {
            if (k == *cfg.force_k) {
                result.trace.stop_reason = StopReason::Forced;
                break;
            }
            continue;
        }
        if (k >= record.t) {
            result.trace.stop_reason = StopReason::Comparator;
            break;
        }
        if (k == cfg.k_max) {
            result.trace.stop_reason = StopReason::Cap;
            break;
        }
    }
    return result;
}

}  // namespace vplume
