#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "vplume/pipeline.hpp"

namespace vplume {

inline nlohmann::ordered_json to_json(const ChannelSummary& s) {
    return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

inline nlohmann::ordered_json to_json(const CycleRecord& r) {
    nlohmann::ordered_json vp = {
        {"p1", r.stats.p1},
        {"p2", r.stats.p2},
        {"q1", r.stats.q1},
        {"q2", r.stats.q2},
        {"bright_count", r.stats.bright_count},
        {"dark_count", r.stats.dark_count},
        {"zero_count", r.stats.zero_count},
    };
    return {
        {"k", r.k},
        {"t", r.t},
        {"beta", r.beta},
        {"gamma", r.gamma},
        {"theta", r.theta},
        {"u", r.u},
        {"tau", r.tau},
        {"stats",
         {{"vp", vp},
          {"i_c", to_json(r.ic)},
          {"i_b", to_json(r.ib)},
          {"m_e", to_json(r.me)},
          {"n_e", to_json(r.ne)},
          {"i_e", to_json(r.ie)}}},
    };
}

/// Trace document. Key names are stable; `conventions` records the log bases
/// and interpretation switches so a trace can be read without the config.
inline nlohmann::ordered_json to_json(const CycleTrace& trace, const EnhanceConfig& cfg) {
    nlohmann::ordered_json cycles = nlohmann::ordered_json::array();
    for (const auto& c : trace.cycles) cycles.push_back(to_json(c));

    nlohmann::ordered_json config = {
        {"kernel", cfg.kernel.side()},
        {"epsilon", cfg.epsilon},
        {"k_max", cfg.k_max},
        {"tau_policy", cfg.tau.kind() == TauPolicy::Kind::Fixed ? "fixed" : "mean"},
        {"base_mode", to_string(cfg.base_mode)},
    };
    if (cfg.tau.kind() == TauPolicy::Kind::Fixed) config["tau"] = cfg.tau.fixed_value();
    if (cfg.force_k) config["force_k"] = *cfg.force_k;

    return {
        {"stop_reason", to_string(trace.stop_reason)},
        {"cycle_count", trace.cycles.size()},
        {"conventions",
         {{"beta_log", "natural"}, {"illumination_log", "base10"}, {"regulator_normalized", false}}},
        {"config", config},
        {"cycles", cycles},
    };
}

inline std::string trace_to_string(const CycleTrace& trace, const EnhanceConfig& cfg) {
    return to_json(trace, cfg).dump(2) + "\n";
}

}  // namespace vplume
