#include "gaurast/sorter.hpp"

#include <cassert>
#include <cmath>
#include <cstring>

namespace gaurast {

uint64_t make_sort_key(uint32_t tile_id, float depth) {
    assert(depth > 0.f && std::isfinite(depth));
    uint32_t bits;
    std::memcpy(&bits, &depth, sizeof bits);  // monotone for positive floats
    return (uint64_t(tile_id) << 32) | bits;
}

std::vector<SortKeyPair> build_keys(const std::vector<Splat2D>& splats, int tiles_x) {
    std::vector<SortKeyPair> pairs;
    for (uint32_t i = 0; i < splats.size(); ++i) {
        const Splat2D& s = splats[i];
        for (int ty = s.tile_min_y; ty <= s.tile_max_y; ++ty)
            for (int tx = s.tile_min_x; tx <= s.tile_max_x; ++tx) {
                uint32_t tile_id = uint32_t(ty) * uint32_t(tiles_x) + uint32_t(tx);
                pairs.push_back({make_sort_key(tile_id, s.depth), i});
            }
    }
    return pairs;
}

// LSD radix, 8 bits per pass; counting sort per digit keeps it stable.
void radix_sort_pairs(std::vector<SortKeyPair>& pairs) {
    const size_t n = pairs.size();
    if (n < 2) return;
    std::vector<SortKeyPair> scratch(n);
    SortKeyPair* src = pairs.data();
    SortKeyPair* dst = scratch.data();
    for (int shift = 0; shift < 64; shift += 8) {
        size_t count[256] = {};
        for (size_t i = 0; i < n; ++i) ++count[(src[i].key >> shift) & 0xff];
        if (count[(src[0].key >> shift) & 0xff] == n) continue;  // all one digit
        size_t offset[256];
        size_t sum = 0;
        for (int d = 0; d < 256; ++d) {
            offset[d] = sum;
            sum += count[d];
        }
        for (size_t i = 0; i < n; ++i) dst[offset[(src[i].key >> shift) & 0xff]++] = src[i];
        std::swap(src, dst);
    }
    if (src != pairs.data()) std::memcpy(pairs.data(), src, n * sizeof(SortKeyPair));
}

SortedTiles sort_and_range(std::vector<SortKeyPair> pairs) {
    radix_sort_pairs(pairs);
    SortedTiles out;
    out.ranges.reserve(64);
    for (uint32_t i = 0; i < pairs.size(); ++i) {
        uint32_t tile = uint32_t(pairs[i].key >> 32);
        auto [it, inserted] = out.ranges.try_emplace(tile, TileRange{i, i + 1});
        if (!inserted) it->second.end = i + 1;
    }
    out.pairs = std::move(pairs);
    return out;
}

}  // namespace gaurast
