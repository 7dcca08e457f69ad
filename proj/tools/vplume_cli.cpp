// Batch front-end: vplume -i '<glob>' -o <dir> [options]

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "vplume/vplume.hpp"

namespace {

vplume::TauPolicy parse_tau(const std::string& text) {
    if (text == "mean") return vplume::TauPolicy::mean_of_nonzero();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) {
        throw vplume::Error(vplume::ErrorKind::InvalidArgument, "--tau expects 'mean' or a number, got '" + text + "'");
    }
    return vplume::TauPolicy::fixed(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-light image enhancement driven by bright/dark perception statistics"};

    std::vector<std::string> patterns;
    std::string out_dir;
    int kernel = 3;
    int k_max = 8;
    int force_cycles = 0;
    double epsilon = vplume::kDefaultEpsilon;
    std::string tau = "mean";
    std::string base_mode = "literal";
    bool trace = false;
    bool timing = false;
    std::string ref_dir;

    app.add_option("-i,--input", patterns, "Input file, directory or glob (repeatable)")->required();
    app.add_option("-o,--out", out_dir, "Output directory")->required();
    app.add_option("--kernel", kernel, "Odd side of the averaging window")->capture_default_str();
    app.add_option("--k-max", k_max, "Upper bound on enhancement cycles")->capture_default_str();
    app.add_option("--force-cycles", force_cycles, "Run exactly this many cycles, ignoring the comparator");
    app.add_option("--epsilon", epsilon, "Floor applied to energies and area ratios")->capture_default_str();
    app.add_option("--tau", tau, "Bright/dark split: 'mean' of nonzero samples or a fixed value")
        ->capture_default_str();
    app.add_option("--eq2-mode", base_mode, "Smooth-image construction")
        ->check(CLI::IsMember({"literal", "prose"}))
        ->capture_default_str();
    app.add_flag("--trace", trace, "Write <stem>_trace.json per image");
    app.add_option("--ref", ref_dir, "Directory of same-named references; writes report.csv");
    app.add_flag("--timing", timing, "Write timing.csv with per-image enhancement time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? vplume::kExitOk : vplume::kExitUsage;
    }

    try {
        vplume::RunManifest manifest;
        manifest.inputs = vplume::expand_inputs(patterns);
        manifest.output_dir = out_dir;
        manifest.config.kernel = vplume::KernelSize(kernel);
        manifest.config.k_max = k_max;
        manifest.config.epsilon = epsilon;
        manifest.config.tau = parse_tau(tau);
        manifest.config.base_mode = base_mode == "prose" ? vplume::BaseMode::Prose : vplume::BaseMode::Literal;
        if (force_cycles > 0 || app.count("--force-cycles") > 0) manifest.config.force_k = force_cycles;
        manifest.emit_trace = trace;
        manifest.emit_timing = timing;
        if (!ref_dir.empty()) manifest.reference_dir = ref_dir;

        const auto summary = vplume::run(manifest, std::cout);
        return summary.exit_code;
    } catch (const vplume::Error& e) {
        std::cerr << "vplume: " << e.what() << "\n";
        return vplume::kExitUsage;
    }
}
