#pragma once

// Binary sample file format: 16-byte header {magic "CEVM", version u32 LE,
// count u64 LE} followed by count little-endian float64 (x, y) pairs.
// A CSV writer is provided for interoperability.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cevm::io {

inline constexpr char kMagic[4] = {'C', 'E', 'V', 'M'};
inline constexpr std::uint32_t kVersion = 1;

namespace detail {

inline void put_u32le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64le(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f64le(std::ostream& os, double d) {
    put_u64le(os, std::bit_cast<std::uint64_t>(d));
}

inline std::uint32_t get_u32le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64le(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline double get_f64le(std::istream& is) { return std::bit_cast<double>(get_u64le(is)); }

}  // namespace detail

inline void write_samples(const std::filesystem::path& path,
                          const std::vector<std::pair<double, double>>& pairs) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_samples: cannot open " + path.string());
    os.write(kMagic, 4);
    detail::put_u32le(os, kVersion);
    detail::put_u64le(os, pairs.size());
    for (const auto& [x, y] : pairs) {
        detail::put_f64le(os, x);
        detail::put_f64le(os, y);
    }
    if (!os) throw std::runtime_error("write_samples: write failed for " + path.string());
}

inline std::vector<std::pair<double, double>> read_samples(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_samples: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_samples: bad magic in " + path.string());
    const std::uint32_t version = detail::get_u32le(is);
    if (version != kVersion)
        throw std::runtime_error("read_samples: unsupported version " + std::to_string(version));
    const std::uint64_t count = detail::get_u64le(is);
    std::vector<std::pair<double, double>> pairs(count);
    for (auto& [x, y] : pairs) {
        x = detail::get_f64le(is);
        y = detail::get_f64le(is);
    }
    if (!is) throw std::runtime_error("read_samples: truncated file " + path.string());
    return pairs;
}

inline void write_samples_csv(const std::filesystem::path& path,
                              const std::vector<std::pair<double, double>>& pairs) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_samples_csv: cannot open " + path.string());
    os << "x,y\n";
    char buf[64];
    for (const auto& [x, y] : pairs) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
        os << buf;
    }
}

}  // namespace cevm::io
