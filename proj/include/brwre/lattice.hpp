#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "brwre/rng.hpp"

namespace brwre {

// Compile-time cap on the lattice dimension. All worked models live in
// d <= 2; the fixed-width representation keeps sites hashable and cheap.
inline constexpr int kMaxDim = 8;

/// A lattice point of Z^d, padded with zeros beyond the model dimension.
struct Site {
    std::array<std::int32_t, kMaxDim> c{};

    std::int32_t operator[](int i) const { return c[static_cast<size_t>(i)]; }
    std::int32_t& operator[](int i) { return c[static_cast<size_t>(i)]; }

    friend bool operator==(const Site& a, const Site& b) { return a.c == b.c; }
    friend bool operator!=(const Site& a, const Site& b) { return !(a == b); }
    friend bool operator<(const Site& a, const Site& b) { return a.c < b.c; }
};

inline Site make_site(std::initializer_list<std::int32_t> coords) {
    Site s;
    int i = 0;
    for (auto v : coords) s[i++] = v;
    return s;
}

inline Site site_add(const Site& a, const Site& b) {
    Site r;
    for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Site site_sub(const Site& a, const Site& b) {
    Site r;
    for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] - b[i];
    return r;
}

inline int linf_norm(const Site& s) {
    int m = 0;
    for (int i = 0; i < kMaxDim; ++i) m = std::max(m, std::abs(s[i]));
    return m;
}

inline long l1_norm(const Site& s) {
    long m = 0;
    for (int i = 0; i < kMaxDim; ++i) m += std::abs(s[i]);
    return m;
}

inline double dot(const Site& s, const std::vector<double>& r) {
    double acc = 0.0;
    for (size_t i = 0; i < r.size(); ++i) acc += r[i] * s[static_cast<int>(i)];
    return acc;
}

inline std::uint64_t site_key(const Site& s) {
    std::uint64_t h = 0x2545F4914F6CDD1DULL;
    for (int i = 0; i < kMaxDim; i += 2) {
        std::uint64_t w = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s[i])) << 32) |
                          static_cast<std::uint64_t>(static_cast<std::uint32_t>(s[i + 1]));
        h = key_combine(h, w);
    }
    return h;
}

struct SiteHash {
    size_t operator()(const Site& s) const { return static_cast<size_t>(site_key(s)); }
};

inline std::string site_str(const Site& s, int dim) {
    std::string out = "(";
    for (int i = 0; i < dim; ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    out += ")";
    return out;
}

} // namespace brwre
