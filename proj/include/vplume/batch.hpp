#pragma once

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "vplume/image_io.hpp"
#include "vplume/metrics.hpp"
#include "vplume/pipeline.hpp"
#include "vplume/trace_json.hpp"

namespace vplume {

namespace fs = std::filesystem;

/// Everything a batch run needs. Inputs are processed and reported in order.
struct RunManifest {
    std::vector<fs::path> inputs;
    fs::path output_dir;
    EnhanceConfig config;
    bool emit_trace = false;
    bool emit_timing = false;
    std::optional<fs::path> reference_dir;
    unsigned workers = 0;  // 0: VPLUME_THREADS, else hardware concurrency
};

struct FileOutcome {
    fs::path input;
    fs::path output;
    bool ok = false;
    std::string error;
    int cycles = 0;
    std::string stop_reason;
    double seconds = 0.0;  // enhancement only, file I/O excluded
    std::optional<MetricReport> metrics;
};

struct RunSummary {
    int exit_code = 0;
    std::vector<FileOutcome> files;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;

inline bool is_supported_image(const fs::path& p) {
    try {
        format_from_extension(p);
        return true;
    } catch (const Error&) {
        return false;
    }
}

/// Expands shell-style patterns in order. A directory contributes its
/// supported image files, sorted by name. Duplicates keep their first slot.
inline std::vector<fs::path> expand_inputs(const std::vector<std::string>& patterns) {
    std::vector<fs::path> out;
    std::set<fs::path> seen;
    const auto add = [&](const fs::path& p) {
        const fs::path norm = p.lexically_normal();
        if (seen.insert(norm).second) out.push_back(norm);
    };
    for (const auto& pattern : patterns) {
        glob_t g{};
        const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
        std::vector<fs::path> matches;
        if (rc == 0) {
            for (std::size_t k = 0; k < g.gl_pathc; ++k) matches.emplace_back(g.gl_pathv[k]);
        }
        globfree(&g);
        for (const auto& m : matches) {
            std::error_code ec;
            if (fs::is_directory(m, ec)) {
                std::vector<fs::path> entries;
                for (const auto& e : fs::directory_iterator(m, ec)) {
                    if (e.is_regular_file() && is_supported_image(e.path())) entries.push_back(e.path());
                }
                std::sort(entries.begin(), entries.end());
                for (const auto& e : entries) add(e);
            } else {
                add(m);
            }
        }
    }
    return out;
}

inline fs::path enhanced_name(const fs::path& input) {
    return input.stem().string() + "_vp" + input.extension().string();
}

inline fs::path trace_name(const fs::path& input) { return input.stem().string() + "_trace.json"; }

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("VPLUME_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace batch_detail {

inline void ensure_writable_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::Io, "output directory " + dir.string() + " cannot be created");
    }
    const fs::path probe = dir / ".vplume_write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw Error(ErrorKind::Io, "output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

inline FileOutcome process_one(const fs::path& input, const RunManifest& m) {
    FileOutcome r;
    r.input = input;
    try {
        const RgbImage img = load_image(input);
        const FileFormat format = format_from_extension(input);

        const auto start = std::chrono::steady_clock::now();
        EnhanceResult res = enhance(img, m.config);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.cycles = static_cast<int>(res.trace.cycles.size());
        r.stop_reason = to_string(res.trace.stop_reason);

        r.output = m.output_dir / enhanced_name(input);
        io_detail::write_file(r.output, encode_image(res.output, format));
        if (m.emit_trace) {
            write_text(m.output_dir / trace_name(input), trace_to_string(res.trace, m.config));
        }
        if (m.reference_dir) {
            const fs::path ref = *m.reference_dir / input.filename();
            if (fs::exists(ref)) {
                // Compare what was written, after 8-bit quantisation.
                r.metrics = evaluate(decode_image(encode_image(res.output, format)), load_image(ref),
                                     m.config.tau);
            }
        }
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

}  // namespace batch_detail

/// Enhances every input, writing `<stem>_vp.<ext>` (and `<stem>_trace.json`
/// when requested) into the output directory. Per-file failures are logged
/// and do not stop the batch. Throws for manifest-level problems.
inline RunSummary run(const RunManifest& m, std::ostream& log) {
    if (m.inputs.empty()) throw Error(ErrorKind::InvalidArgument, "no inputs matched");
    m.config.validate();
    batch_detail::ensure_writable_dir(m.output_dir);
    if (m.reference_dir && !fs::is_directory(*m.reference_dir)) {
        throw Error(ErrorKind::InvalidArgument, "reference directory " + m.reference_dir->string() + " not found");
    }

    RunSummary summary;
    summary.files.resize(m.inputs.size());
    const unsigned workers =
        std::min<unsigned>(resolve_workers(m.workers), static_cast<unsigned>(m.inputs.size()));
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < m.inputs.size(); k = next++) {
            summary.files[k] = batch_detail::process_one(m.inputs[k], m);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    std::string report;
    std::string timing = "file,cycles,stop_reason,seconds\n";
    bool any_failed = false;
    for (const auto& f : summary.files) {
        if (f.ok) {
            log << "ok    " << f.input.string() << " -> " << f.output.string() << " (" << f.cycles << " cycle"
                << (f.cycles == 1 ? "" : "s") << ", " << f.stop_reason << ")\n";
            char secs[64];
            std::snprintf(secs, sizeof secs, "%.6f", f.seconds);
            timing += csv_field(f.input.filename().string()) + "," + std::to_string(f.cycles) + "," +
                      f.stop_reason + "," + secs + "\n";
        } else {
            any_failed = true;
            log << "error " << f.input.string() << ": " << f.error << "\n";
        }
        if (f.metrics) report += to_csv_row(f.input.filename().string(), *f.metrics) + "\n";
    }
    if (m.reference_dir) {
        batch_detail::write_text(m.output_dir / "report.csv", std::string(kReportCsvHeader) + "\n" + report);
    }
    if (m.emit_timing) batch_detail::write_text(m.output_dir / "timing.csv", timing);

    summary.exit_code = any_failed ? kExitPartialFailure : kExitOk;
    return summary;
}

}  // namespace vplume
