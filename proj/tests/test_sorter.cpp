#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "gaurast/sorter.hpp"

using namespace gaurast;

namespace {

Splat2D splat_at(float depth, int tx0, int ty0, int tx1, int ty1) {
    Splat2D s;
    s.depth = depth;
    s.tile_min_x = tx0;
    s.tile_min_y = ty0;
    s.tile_max_x = tx1;
    s.tile_max_y = ty1;
    return s;
}

}  // namespace

TEST_CASE("build_keys emits one pair per covered tile") {
    std::vector<Splat2D> splats = {splat_at(1.5f, 2, 3, 3, 4)};
    auto pairs = build_keys(splats, 8);
    REQUIRE(pairs.size() == 4);
    std::vector<uint32_t> tiles;
    for (const auto& p : pairs) tiles.push_back(uint32_t(p.key >> 32));
    std::sort(tiles.begin(), tiles.end());
    CHECK(tiles == std::vector<uint32_t>{3 * 8 + 2, 3 * 8 + 3, 4 * 8 + 2, 4 * 8 + 3});
}

TEST_CASE("key ordering follows depth for a fixed tile") {
    CHECK(make_sort_key(7, 1.0f) < make_sort_key(7, 2.0f));
    CHECK(make_sort_key(7, 0.001f) < make_sort_key(7, 1000.f));
    CHECK(make_sort_key(6, 1000.f) < make_sort_key(7, 0.001f));  // tile dominates
}

TEST_CASE("1000 random depths: key order equals numeric order") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<float> d(1e-6f, 1e6f);
    std::vector<float> depths(1000);
    for (auto& v : depths) v = d(rng);

    std::vector<size_t> by_key(depths.size()), by_value(depths.size());
    for (size_t i = 0; i < depths.size(); ++i) by_key[i] = by_value[i] = i;
    std::stable_sort(by_key.begin(), by_key.end(), [&](size_t a, size_t b) {
        return make_sort_key(0, depths[a]) < make_sort_key(0, depths[b]);
    });
    std::stable_sort(by_value.begin(), by_value.end(),
                     [&](size_t a, size_t b) { return depths[a] < depths[b]; });
    CHECK(by_key == by_value);
}

TEST_CASE("sort_and_range: depth order and tie stability") {
    std::vector<Splat2D> splats = {splat_at(3.f, 0, 0, 0, 0), splat_at(1.f, 0, 0, 0, 0),
                                   splat_at(2.f, 0, 0, 0, 0)};
    auto sorted = sort_and_range(build_keys(splats, 4));
    REQUIRE(sorted.pairs.size() == 3);
    CHECK(sorted.pairs[0].splat_index == 1);
    CHECK(sorted.pairs[1].splat_index == 2);
    CHECK(sorted.pairs[2].splat_index == 0);
    auto range = sorted.ranges.at(0);
    CHECK(range.begin == 0);
    CHECK(range.end == 3);

    // Identical depths keep input order.
    std::vector<Splat2D> ties = {splat_at(2.f, 1, 1, 1, 1), splat_at(2.f, 1, 1, 1, 1),
                                 splat_at(2.f, 1, 1, 1, 1)};
    auto tied = sort_and_range(build_keys(ties, 4));
    CHECK(tied.pairs[0].splat_index == 0);
    CHECK(tied.pairs[1].splat_index == 1);
    CHECK(tied.pairs[2].splat_index == 2);
}

TEST_CASE("random 10k pairs: permutation plus per-tile monotone depth") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<float> d(0.01f, 50.f);
    std::uniform_int_distribution<int> tile(0, 5);
    std::vector<Splat2D> splats;
    for (int i = 0; i < 4000; ++i) {
        int tx = tile(rng), ty = tile(rng);
        int tx1 = std::min(5, tx + tile(rng) % 2);
        int ty1 = std::min(5, ty + tile(rng) % 2);
        splats.push_back(splat_at(d(rng), tx, ty, tx1, ty1));
    }
    auto pairs = build_keys(splats, 6);
    REQUIRE(pairs.size() >= 4000);
    auto sorted = sort_and_range(pairs);

    // Permutation property.
    std::map<uint64_t, int> before, after;
    for (const auto& p : pairs) ++before[(p.key << 8) ^ p.splat_index];
    for (const auto& p : sorted.pairs) ++after[(p.key << 8) ^ p.splat_index];
    CHECK(before == after);

    // Per-tile ranges: non-decreasing depth, ties in input order, full cover.
    size_t covered = 0;
    for (const auto& [tile_id, range] : sorted.ranges) {
        covered += range.end - range.begin;
        for (uint32_t i = range.begin + 1; i < range.end; ++i) {
            const auto& a = sorted.pairs[i - 1];
            const auto& b = sorted.pairs[i];
            CHECK(uint32_t(a.key >> 32) == tile_id);
            float da = splats[a.splat_index].depth;
            float db = splats[b.splat_index].depth;
            CHECK(da <= db);
            if (a.key == b.key) CHECK(a.splat_index < b.splat_index);
        }
    }
    CHECK(covered == sorted.pairs.size());
}
