#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vplume/image.hpp"

namespace vplume {

/// How the bright/dark split value tau is chosen.
class TauPolicy {
public:
    enum class Kind { MeanOfNonzero, Fixed };

    static TauPolicy mean_of_nonzero() noexcept { return TauPolicy(Kind::MeanOfNonzero, 0.0); }

    static TauPolicy fixed(double tau) {
        if (!std::isfinite(tau) || tau < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "fixed tau must be finite and >= 0");
        }
        return TauPolicy(Kind::Fixed, tau);
    }

    Kind kind() const noexcept { return kind_; }
    double fixed_value() const noexcept { return value_; }

    friend bool operator==(const TauPolicy&, const TauPolicy&) = default;

private:
    TauPolicy(Kind kind, double value) : kind_(kind), value_(value) {}

    Kind kind_;
    double value_;
};

inline constexpr double kDefaultEpsilon = 1e-6;

struct BrightDarkSplit {
    ChannelImage bright;  // samples strictly above tau, zero elsewhere
    ChannelImage dark;    // samples in (0, tau], zero elsewhere
    double tau = 0.0;
};

/// Perception statistics of a brightness channel. Counts are exact integers;
/// the normalised energies and area ratios are floored at epsilon.
struct VpStats {
    double bright_sum = 0.0;
    double dark_sum = 0.0;
    std::size_t bright_count = 0;
    std::size_t dark_count = 0;
    std::size_t zero_count = 0;
    double p1 = 0.0;  // bright energy
    double p2 = 0.0;  // dark energy
    double q1 = 0.0;  // bright area ratio
    double q2 = 0.0;  // dark area ratio
    double tau = 0.0;
};

struct Gains {
    double beta = 1.0;
    double gamma = 1.0;
    int threshold = 1;
};

namespace vp_detail {

inline bool is_zero(double v) noexcept { return v <= 0.0; }

inline double resolve_tau(const ChannelImage& ib, const TauPolicy& policy) {
    std::vector<double> nonzero;
    nonzero.reserve(ib.size());
    for (double v : ib) {
        if (!is_zero(v)) nonzero.push_back(v);
    }
    if (nonzero.empty()) {
        throw Error(ErrorKind::DegenerateInput, "brightness channel has no nonzero samples");
    }
    if (policy.kind() == TauPolicy::Kind::Fixed) return policy.fixed_value();

    const double mean = pairwise_sum(nonzero) / static_cast<double>(nonzero.size());
    // The true mean lies inside [min, max]; clamp away rounding so a uniform
    // image always lands entirely on the dark side.
    const auto [lo, hi] = std::minmax_element(nonzero.begin(), nonzero.end());
    return std::clamp(mean, *lo, *hi);
}

}  // namespace vp_detail

/// Partitions `ib` into bright (> tau) and dark (0 < v <= tau) planes.
/// Samples <= 0 belong to neither and are counted as zero pixels.
inline BrightDarkSplit split_bright_dark(const ChannelImage& ib, const TauPolicy& policy) {
    require_finite(ib, "brightness channel");
    const double tau = vp_detail::resolve_tau(ib, policy);
    BrightDarkSplit out{ChannelImage(ib.width(), ib.height(), 0.0),
                        ChannelImage(ib.width(), ib.height(), 0.0), tau};
    for (std::size_t k = 0; k < ib.size(); ++k) {
        const double v = ib[k];
        if (vp_detail::is_zero(v)) continue;
        if (v > tau) {
            out.bright[k] = v;
        } else {
            out.dark[k] = v;
        }
    }
    return out;
}

inline VpStats vp_stats(const ChannelImage& ib, const TauPolicy& policy,
                        double epsilon = kDefaultEpsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "epsilon floor must lie in (0, 1)");
    }
    const BrightDarkSplit split = split_bright_dark(ib, policy);

    VpStats s;
    s.tau = split.tau;
    s.bright_sum = pairwise_sum(split.bright.pixels());
    s.dark_sum = pairwise_sum(split.dark.pixels());
    for (std::size_t k = 0; k < ib.size(); ++k) {
        if (split.bright[k] > 0.0) {
            ++s.bright_count;
        } else if (split.dark[k] > 0.0) {
            ++s.dark_count;
        } else {
            ++s.zero_count;
        }
    }

    const std::size_t support = ib.size() - s.zero_count;
    if (support == 0) throw Error(ErrorKind::DegenerateInput, "every pixel of the brightness channel is zero");
    const double denom = static_cast<double>(support);
    const auto floor_unit = [epsilon](double v) { return std::clamp(v, epsilon, 1.0); };
    s.p1 = floor_unit(s.bright_sum / denom);
    s.p2 = floor_unit(s.dark_sum / denom);
    s.q1 = floor_unit(static_cast<double>(s.bright_count) / denom);
    s.q2 = floor_unit(static_cast<double>(s.dark_count) / denom);
    return s;
}

/// Dark-imbalance gain from the dark energy and area ratio (natural log).
inline double beta_gain(double p2, double q2) {
    if (!(p2 > 0.0 && p2 <= 1.0 && q2 > 0.0 && q2 <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "beta needs p2, q2 in (0, 1]");
    }
    return std::sqrt(std::exp(std::sqrt(std::log(1.0 / p2)) - std::log(1.0 / q2)));
}

inline double beta_gain(const VpStats& s) { return beta_gain(s.p2, s.q2); }

/// Bright energy when bright pixels dominate by area, dark energy otherwise
/// (ties go dark).
inline double gamma_gain(const VpStats& s) noexcept { return s.q1 > s.q2 ? s.p1 : s.p2; }

/// floor((beta^2)^sqrt(beta)), never below one cycle.
inline int adaptive_threshold(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::InvalidArgument, "adaptive threshold needs a finite beta > 0");
    }
    const double raw = std::floor(std::pow(beta * beta, std::sqrt(beta)));
    if (raw >= 1e9) return 1'000'000'000;
    return std::max(1, static_cast<int>(raw));
}

inline Gains compute_gains(const VpStats& s) {
    Gains g;
    g.beta = beta_gain(s);
    g.gamma = gamma_gain(s);
    g.threshold = adaptive_threshold(g.beta);
    return g;
}

}  // namespace vplume
