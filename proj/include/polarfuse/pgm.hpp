#ifndef POLARFUSE_PGM_HPP
#define POLARFUSE_PGM_HPP

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "polarfuse/error.hpp"
#include "polarfuse/image.hpp"

namespace polarfuse {

struct PgmHeader {
    bool binary = true;  // P5 when true, P2 otherwise
    std::size_t width = 0;
    std::size_t height = 0;
    std::uint32_t maxval = 0;
    std::size_t data_offset = 0;  // first byte after the header
};

namespace detail {

class PgmCursor {
public:
    explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Returns false when no digits are present at the cursor.
    bool read_uint(std::uint64_t& value) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
            if (value > (1ULL << 40)) return false;
            ++pos_;
        }
        return pos_ > start;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }
    bool at_end() const noexcept { return pos_ >= bytes_.size(); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace detail

inline PgmHeader parse_pgm_header(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
        throw Error(ErrorCode::MalformedHeader, "not a P2/P5 graymap");
    }
    PgmHeader h;
    h.binary = bytes[1] == '5';
    detail::PgmCursor cur(bytes);
    cur.advance(2);

    std::uint64_t w = 0, ht = 0, maxval = 0;
    if (!cur.read_uint(w) || !cur.read_uint(ht)) {
        throw Error(ErrorCode::MalformedHeader, "missing width/height");
    }
    if (w == 0 || ht == 0) {
        throw Error(ErrorCode::MalformedHeader, "nonpositive dimensions");
    }
    if (!cur.read_uint(maxval)) {
        throw Error(ErrorCode::MalformedHeader, "missing maxval");
    }
    if (maxval == 0 || maxval > 65535) {
        throw Error(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(maxval));
    }
    h.width = static_cast<std::size_t>(w);
    h.height = static_cast<std::size_t>(ht);
    h.maxval = static_cast<std::uint32_t>(maxval);

    // Exactly one whitespace byte separates the header from binary data.
    if (cur.at_end()) {
        if (h.binary) throw Error(ErrorCode::TruncatedData, "no sample data");
    } else if (!std::isspace(static_cast<unsigned char>(bytes[cur.pos()]))) {
        throw Error(ErrorCode::MalformedHeader, "missing separator after maxval");
    } else {
        cur.advance(1);
    }
    h.data_offset = cur.pos();
    return h;
}

/// Decodes an in-memory P2/P5 graymap; samples are scaled by 1/maxval.
inline GrayImage decode_pgm(std::string_view bytes) {
    const PgmHeader h = parse_pgm_header(bytes);
    const std::size_t count = h.width * h.height;
    const double maxval = static_cast<double>(h.maxval);
    std::vector<double> pixels;
    pixels.reserve(count);

    auto check = [&](std::uint64_t s) {
        if (s > h.maxval) {
            throw Error(ErrorCode::MalformedHeader, "sample exceeds maxval");
        }
        pixels.push_back(static_cast<double>(s) / maxval);
    };

    if (h.binary) {
        const std::size_t bps = h.maxval > 255 ? 2 : 1;
        if (bytes.size() - h.data_offset < count * bps) {
            throw Error(ErrorCode::TruncatedData,
                        "expected " + std::to_string(count * bps) + " data bytes, found " +
                            std::to_string(bytes.size() - h.data_offset));
        }
        const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + h.data_offset);
        for (std::size_t i = 0; i < count; ++i) {
            // 16-bit samples are big-endian.
            const std::uint64_t s =
                bps == 1 ? data[i] : (std::uint64_t{data[2 * i]} << 8) | data[2 * i + 1];
            check(s);
        }
    } else {
        detail::PgmCursor cur(bytes);
        cur.advance(h.data_offset);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t s = 0;
            if (!cur.read_uint(s)) {
                throw Error(ErrorCode::TruncatedData, "expected " + std::to_string(count) +
                                                          " samples, found " + std::to_string(i));
            }
            check(s);
        }
    }
    // Values are exact multiples of 1/maxval, so the invariant check cannot fail.
    return GrayImage(h.width, h.height, std::move(pixels));
}

/// Header-only read, used to validate manifests without decoding pixels.
inline PgmHeader read_pgm_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
    }
    std::string head(512, '\0');
    in.read(head.data(), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    return parse_pgm_header(head);
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
    const std::string bytes = detail::read_file(path);
    try {
        return decode_pgm(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

/// Quantises p to round(p*255), halves away from zero, clamped to [0,255].
inline unsigned char quantize8(double p) {
    const double s = std::round(p * 255.0);
    if (s <= 0.0) return 0;
    if (s >= 255.0) return 255;
    return static_cast<unsigned char>(s);
}

/// Encodes as binary P5 with maxval 255.
inline std::string encode_pgm(const GrayImage& img) {
    std::ostringstream header;
    header << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    std::string out = header.str();
    out.reserve(out.size() + img.size());
    for (double p : img.pixels()) {
        out.push_back(static_cast<char>(quantize8(p)));
    }
    return out;
}

inline void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    const std::string bytes = encode_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
    }
}

}  // namespace polarfuse

#endif
