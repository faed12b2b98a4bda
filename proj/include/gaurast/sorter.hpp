#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gaurast/preprocess.hpp"

namespace gaurast {

// 64-bit composite key: tile_id in the high 32 bits, the raw bit pattern of
// the FP32 depth in the low 32 bits (monotone for positive finite depths).
struct SortKeyPair {
    uint64_t key = 0;
    uint32_t splat_index = 0;
};

struct TileRange {
    uint32_t begin = 0, end = 0;  // [begin, end) into the sorted pair sequence
};

uint64_t make_sort_key(uint32_t tile_id, float depth);

// One pair per (splat, covered tile).
std::vector<SortKeyPair> build_keys(const std::vector<Splat2D>& splats, int tiles_x);

// Stable LSD radix sort by key ascending; ties keep input order.
void radix_sort_pairs(std::vector<SortKeyPair>& pairs);

// Sorted pairs plus the per-tile contiguous ranges.
struct SortedTiles {
    std::vector<SortKeyPair> pairs;
    std::unordered_map<uint32_t, TileRange> ranges;  // tile_id -> range
};
SortedTiles sort_and_range(std::vector<SortKeyPair> pairs);

}  // namespace gaurast
