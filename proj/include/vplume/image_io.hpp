#pragma once

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vplume/image.hpp"

namespace vplume {

enum class FileFormat { Png, Ppm, Pgm };

namespace io_detail {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::array<std::uint8_t, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                              '\r', '\n', 0x1A, '\n'};

inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string());
    return bytes;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

inline std::uint8_t quantize(double v) noexcept {
    return static_cast<std::uint8_t>(std::clamp(std::round(v * 255.0), 0.0, 255.0));
}

inline std::uint32_t load_be32(const std::uint8_t* p) noexcept {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
}

inline void store_be32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

// ---------------------------------------------------------------- PNG ----

inline Bytes inflate_all(std::span<const std::uint8_t> compressed, std::size_t expected) {
    Bytes out(expected);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw Error(ErrorKind::Io, "zlib inflateInit failed");
    zs.next_in = const_cast<Bytef*>(compressed.data());
    zs.avail_in = static_cast<uInt>(compressed.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const std::size_t produced = expected - zs.avail_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected) {
        throw Error(ErrorKind::MalformedData, "png image data does not inflate to the expected size");
    }
    return out;
}

inline std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) noexcept {
    const int p = int{a} + int{b} - int{c};
    const int pa = std::abs(p - int{a});
    const int pb = std::abs(p - int{b});
    const int pc = std::abs(p - int{c});
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

/// Reverses per-scanline filtering; returns the packed scanline bytes.
/// `bpp` is the filter byte distance (at least 1).
inline Bytes unfilter(const Bytes& raw, std::size_t stride, std::size_t height, std::size_t bpp) {
    Bytes out(stride * height);
    for (std::size_t y = 0; y < height; ++y) {
        const std::uint8_t filter = raw[y * (stride + 1)];
        const std::uint8_t* src = raw.data() + y * (stride + 1) + 1;
        std::uint8_t* cur = out.data() + y * stride;
        const std::uint8_t* prev = y > 0 ? cur - stride : nullptr;
        for (std::size_t x = 0; x < stride; ++x) {
            const std::uint8_t a = x >= bpp ? cur[x - bpp] : 0;
            const std::uint8_t b = prev ? prev[x] : 0;
            const std::uint8_t c = (prev && x >= bpp) ? prev[x - bpp] : 0;
            std::uint8_t pred = 0;
            switch (filter) {
                case 0: pred = 0; break;
                case 1: pred = a; break;
                case 2: pred = b; break;
                case 3: pred = static_cast<std::uint8_t>((int{a} + int{b}) / 2); break;
                case 4: pred = paeth(a, b, c); break;
                default:
                    throw Error(ErrorKind::MalformedData,
                                "png filter type " + std::to_string(filter) + " is invalid");
            }
            cur[x] = static_cast<std::uint8_t>(src[x] + pred);
        }
    }
    return out;
}

/// Expands 1, 2 or 4-bit samples to one byte each. Gray samples are rescaled
/// to 0..255, palette indices are kept.
inline Bytes unpack_samples(const Bytes& packed, std::size_t width, std::size_t height, std::size_t row_bytes,
                            unsigned depth, bool gray) {
    const unsigned mask = (1u << depth) - 1;
    const unsigned scale = gray ? 255 / mask : 1;
    Bytes out(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        const std::uint8_t* row = packed.data() + y * row_bytes;
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t bit = x * depth;
            const unsigned v = (row[bit / 8] >> (8 - depth - bit % 8)) & mask;
            out[y * width + x] = static_cast<std::uint8_t>(v * scale);
        }
    }
    return out;
}

inline RgbImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kPngSignature.size() ||
        !std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
        throw Error(ErrorKind::UnsupportedFormat, "missing png signature");
    }
    std::size_t pos = kPngSignature.size();
    std::uint32_t width = 0, height = 0;
    std::uint8_t color_type = 0;
    unsigned depth = 8;
    bool have_header = false, have_end = false;
    Bytes idat;
    std::vector<Rgb> palette;

    while (pos + 12 <= bytes.size() && !have_end) {
        const std::uint32_t length = load_be32(&bytes[pos]);
        if (length > bytes.size() - pos - 12) {
            throw Error(ErrorKind::MalformedData, "png chunk overruns file");
        }
        const std::uint8_t* type = &bytes[pos + 4];
        const std::uint8_t* data = type + 4;
        const std::uint32_t stored_crc = load_be32(data + length);
        const auto crc = static_cast<std::uint32_t>(crc32(0L, type, length + 4));
        if (crc != stored_crc) throw Error(ErrorKind::MalformedData, "png chunk crc mismatch");
        const std::string_view tag(reinterpret_cast<const char*>(type), 4);

        if (tag == "IHDR") {
            if (length != 13) throw Error(ErrorKind::MalformedData, "png IHDR has wrong length");
            width = load_be32(data);
            height = load_be32(data + 4);
            depth = data[8];
            color_type = data[9];
            if (width == 0 || height == 0) {
                throw Error(ErrorKind::MalformedData, "png header declares a zero dimension");
            }
            const bool packed = (color_type == 0 || color_type == 3) && (depth == 1 || depth == 2 || depth == 4);
            if (depth != 8 && !packed) {
                throw Error(ErrorKind::UnsupportedFormat,
                            "png bit depth " + std::to_string(depth) + " not supported");
            }
            if (color_type != 0 && color_type != 2 && color_type != 3) {
                throw Error(ErrorKind::UnsupportedFormat,
                            "png color type " + std::to_string(color_type) +
                                " not supported (gray, rgb, palette only)");
            }
            if (data[12] != 0) throw Error(ErrorKind::UnsupportedFormat, "interlaced png not supported");
            have_header = true;
        } else if (tag == "PLTE") {
            for (std::uint32_t k = 0; k + 2 < length; k += 3) {
                palette.push_back({data[k] / 255.0, data[k + 1] / 255.0, data[k + 2] / 255.0});
            }
        } else if (tag == "IDAT") {
            idat.insert(idat.end(), data, data + length);
        } else if (tag == "IEND") {
            have_end = true;
        } else if ((type[0] & 0x20) == 0) {
            throw Error(ErrorKind::UnsupportedFormat, "unknown critical png chunk " + std::string(tag));
        }
        pos += 12 + length;
    }
    if (!have_header) throw Error(ErrorKind::MalformedData, "png has no IHDR chunk");
    if (idat.empty()) throw Error(ErrorKind::MalformedData, "png has no image data");
    if (color_type == 3 && palette.empty()) throw Error(ErrorKind::MalformedData, "png palette missing");

    const std::size_t bpp = color_type == 2 ? 3 : 1;
    const std::size_t row_bytes = (std::size_t{width} * bpp * depth + 7) / 8;
    const Bytes raw = inflate_all(idat, std::size_t{height} * (row_bytes + 1));
    Bytes px = unfilter(raw, row_bytes, height, bpp);
    if (depth < 8) px = unpack_samples(px, width, height, row_bytes, depth, color_type == 0);

    std::vector<Rgb> out(std::size_t{width} * height);
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (color_type == 2) {
            out[k] = {px[3 * k] / 255.0, px[3 * k + 1] / 255.0, px[3 * k + 2] / 255.0};
        } else if (color_type == 0) {
            const double v = px[k] / 255.0;
            out[k] = {v, v, v};
        } else {
            if (px[k] >= palette.size()) throw Error(ErrorKind::MalformedData, "png palette index out of range");
            out[k] = palette[px[k]];
        }
    }
    return RgbImage(width, height, std::move(out));
}

inline void append_chunk(Bytes& out, std::string_view tag, std::span<const std::uint8_t> data) {
    store_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), tag.begin(), tag.end());
    out.insert(out.end(), data.begin(), data.end());
    store_be32(out, static_cast<std::uint32_t>(
                        crc32(0L, out.data() + type_at, static_cast<uInt>(data.size() + 4))));
}

/// Writes gray (color type 0) when every pixel is achromatic after
/// quantisation, RGB otherwise. Rows are unfiltered; output is deterministic.
inline Bytes encode_png(const RgbImage& img) {
    const bool gray = std::all_of(img.begin(), img.end(), [](const Rgb& p) {
        return quantize(p.r) == quantize(p.g) && quantize(p.g) == quantize(p.b);
    });
    const std::size_t bpp = gray ? 1 : 3;
    const std::size_t stride = img.width() * bpp;
    Bytes raw;
    raw.reserve(img.height() * (stride + 1));
    for (std::size_t y = 0; y < img.height(); ++y) {
        raw.push_back(0);
        for (const Rgb& p : img.row(y)) {
            if (gray) {
                raw.push_back(quantize(p.r));
            } else {
                raw.push_back(quantize(p.r));
                raw.push_back(quantize(p.g));
                raw.push_back(quantize(p.b));
            }
        }
    }

    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    Bytes packed(packed_size);
    if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw Error(ErrorKind::Io, "zlib compression failed");
    }
    packed.resize(packed_size);

    Bytes out(kPngSignature.begin(), kPngSignature.end());
    Bytes ihdr;
    store_be32(ihdr, static_cast<std::uint32_t>(img.width()));
    store_be32(ihdr, static_cast<std::uint32_t>(img.height()));
    ihdr.insert(ihdr.end(), {8, static_cast<std::uint8_t>(gray ? 0 : 2), 0, 0, 0});
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", packed);
    append_chunk(out, "IEND", {});
    return out;
}

// ---------------------------------------------------------------- PNM ----

class PnmHeaderReader {
public:
    explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes), pos_(2) {}

    std::size_t next_uint() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw Error(ErrorKind::MalformedData, "pnm header is truncated or not numeric");
        }
        std::size_t v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_++] - '0');
            if (v > (1u << 24)) throw Error(ErrorKind::UnsupportedFormat, "pnm header value too large");
        }
        return v;
    }

    /// Position of the first raster byte: exactly one whitespace after maxval.
    std::size_t raster_offset() const {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw Error(ErrorKind::MalformedData, "pnm header not terminated by whitespace");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_;
};

inline RgbImage decode_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw Error(ErrorKind::UnsupportedFormat, "not a binary PPM (P6) or PGM (P5) file");
    }
    const bool color = bytes[1] == '6';
    PnmHeaderReader header(bytes);
    const std::size_t width = header.next_uint();
    const std::size_t height = header.next_uint();
    const std::size_t maxval = header.next_uint();
    if (width == 0 || height == 0) throw Error(ErrorKind::MalformedData, "pnm header declares a zero dimension");
    if (maxval == 0 || maxval > 255) {
        throw Error(ErrorKind::UnsupportedFormat, "only 8-bit pnm (maxval 1..255) is supported");
    }
    const std::size_t offset = header.raster_offset();
    const std::size_t channels = color ? 3 : 1;
    if (bytes.size() - std::min(offset, bytes.size()) < width * height * channels) {
        throw Error(ErrorKind::MalformedData, "pnm raster is truncated");
    }
    const double scale = static_cast<double>(maxval);
    const std::uint8_t* px = bytes.data() + offset;
    std::vector<Rgb> out(width * height);
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (color) {
            out[k] = {px[3 * k] / scale, px[3 * k + 1] / scale, px[3 * k + 2] / scale};
        } else {
            const double v = px[k] / scale;
            out[k] = {v, v, v};
        }
    }
    return RgbImage(width, height, std::move(out));
}

inline Bytes encode_pnm(const RgbImage& img, bool color) {
    const std::string header = std::string(color ? "P6" : "P5") + "\n" + std::to_string(img.width()) +
                               " " + std::to_string(img.height()) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.reserve(out.size() + img.size() * (color ? 3 : 1));
    for (const Rgb& p : img) {
        if (color) {
            out.push_back(quantize(p.r));
            out.push_back(quantize(p.g));
            out.push_back(quantize(p.b));
        } else {
            out.push_back(quantize((p.r + p.g + p.b) / 3.0));
        }
    }
    return out;
}

}  // namespace io_detail

/// Chooses the output encoding from the file extension (case-insensitive).
inline FileFormat format_from_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") return FileFormat::Png;
    if (ext == ".ppm") return FileFormat::Ppm;
    if (ext == ".pgm") return FileFormat::Pgm;
    throw Error(ErrorKind::UnsupportedFormat, "unsupported image extension '" + ext + "'");
}

/// Decodes from memory; the format is sniffed from the magic bytes.
inline RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
        return io_detail::decode_pnm(bytes);
    }
    return io_detail::decode_png(bytes);
}

inline std::vector<std::uint8_t> encode_image(const RgbImage& img, FileFormat format) {
    switch (format) {
        case FileFormat::Png: return io_detail::encode_png(img);
        case FileFormat::Ppm: return io_detail::encode_pnm(img, true);
        case FileFormat::Pgm: return io_detail::encode_pnm(img, false);
    }
    throw Error(ErrorKind::UnsupportedFormat, "unknown format");
}

/// PNG (8-bit gray or RGB, 1 to 8-bit gray or palette), PPM P6 or PGM P5.
/// Samples map to v/maxval.
inline RgbImage load_image(const std::filesystem::path& path) {
    return decode_image(io_detail::read_file(path));
}

/// Samples are written as round(v * 255) clamped to [0, 255]. PGM output
/// stores the channel mean.
inline void save_image(const RgbImage& img, const std::filesystem::path& path) {
    io_detail::write_file(path, encode_image(img, format_from_extension(path)));
}

}  // namespace vplume
