#ifndef POLARFUSE_BINARY_IO_HPP
#define POLARFUSE_BINARY_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "polarfuse/error.hpp"

namespace polarfuse::binio {

// Little-endian writers/readers for the model containers.

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void put_bytes(std::string& out, std::string_view s) { out.append(s); }

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    void expect_magic(std::string_view magic) {
        if (bytes_.substr(pos_, magic.size()) != magic) {
            throw Error(ErrorCode::BadModelFile, "bad magic, expected " + std::string(magic));
        }
        pos_ += magic.size();
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string bytes(std::size_t n) {
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    /// Guards element counts read from a file before allocating for them.
    std::size_t count(std::size_t element_size) {
        const std::uint64_t n = u64();
        if (element_size != 0 && n > (bytes_.size() - pos_) / element_size) {
            throw Error(ErrorCode::BadModelFile, "element count exceeds file size");
        }
        return static_cast<std::size_t>(n);
    }

    bool done() const noexcept { return pos_ == bytes_.size(); }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw Error(ErrorCode::BadModelFile, "unexpected end of data");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace polarfuse::binio

#endif
