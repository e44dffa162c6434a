#include <doctest.h>

#include <algorithm>
#include <queue>
#include <random>
#include <set>

#include "tabweave/errors.hpp"
#include "tabweave/relation.hpp"

using namespace tabweave;

namespace {

// Independent BFS component oracle.
std::vector<std::vector<std::size_t>> bfs_components(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [i, j] : pairs) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<bool> visited(n, false);
    std::vector<std::vector<std::size_t>> comps;
    for (std::size_t s = 0; s < n; ++s) {
        if (visited[s]) continue;
        std::vector<std::size_t> comp;
        std::queue<std::size_t> q;
        q.push(s);
        visited[s] = true;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            comp.push_back(u);
            for (std::size_t v : adj[u])
                if (!visited[v]) {
                    visited[v] = true;
                    q.push(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace

TEST_CASE("build_relation_instances examples") {
    SUBCASE("transitive closure") {
        RelationSet rel;
        rel.n = 4;
        rel.boxes.resize(4);
        rel.row_pairs = {{0, 1}, {1, 2}};
        const RelationInstances inst = build_relation_instances(rel);
        REQUIRE(inst.row_instances.size() == 2);
        CHECK(inst.row_instances[0] == std::vector<std::size_t>{0, 1, 2});
        CHECK(inst.row_instances[1] == std::vector<std::size_t>{3});
    }
    SUBCASE("no pairs gives singletons") {
        RelationSet rel;
        rel.n = 3;
        rel.boxes.resize(3);
        const RelationInstances inst = build_relation_instances(rel);
        CHECK(inst.row_instances.size() == 3);
        CHECK(inst.col_instances.size() == 3);
    }
    SUBCASE("out-of-range pair rejected") {
        RelationSet rel;
        rel.n = 2;
        rel.row_pairs = {{0, 5}};
        CHECK_THROWS_AS(build_relation_instances(rel), DomainError);
    }
}

TEST_CASE("build_relation_instances matches BFS components on random graphs") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        RelationSet rel;
        rel.n = 2 + rng() % 49;
        rel.boxes.resize(rel.n);
        const std::size_t n_pairs = rng() % (2 * rel.n);
        for (std::size_t k = 0; k < n_pairs; ++k) {
            std::size_t i = rng() % rel.n, j = rng() % rel.n;
            if (i == j) continue;
            if (i > j) std::swap(i, j);
            rel.row_pairs.emplace_back(i, j);
        }
        const RelationInstances inst = build_relation_instances(rel);
        const auto expected = bfs_components(rel.n, rel.row_pairs);
        REQUIRE(inst.row_instances.size() == expected.size());
        for (std::size_t k = 0; k < expected.size(); ++k)
            CHECK(inst.row_instances[k] == expected[k]);

        // Partition property: union covers all n elements exactly once.
        std::set<std::size_t> all;
        std::size_t total = 0;
        for (const auto& comp : inst.row_instances) {
            total += comp.size();
            all.insert(comp.begin(), comp.end());
        }
        CHECK(total == rel.n);
        CHECK(all.size() == rel.n);
    }
}

TEST_CASE("instance numbering is deterministic under pair permutation") {
    std::mt19937_64 rng(9);
    RelationSet rel;
    rel.n = 20;
    rel.boxes.resize(20);
    rel.row_pairs = {{3, 7}, {1, 2}, {7, 9}, {10, 11}, {0, 15}};
    const RelationInstances base = build_relation_instances(rel);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(rel.row_pairs.begin(), rel.row_pairs.end(), rng);
        const RelationInstances again = build_relation_instances(rel);
        REQUIRE(again.row_instances.size() == base.row_instances.size());
        for (std::size_t k = 0; k < base.row_instances.size(); ++k)
            CHECK(again.row_instances[k] == base.row_instances[k]);
    }
}

TEST_CASE("rasterize_relation_mask examples") {
    SUBCASE("single box paints its instance index") {
        const std::vector<Box> boxes = {{10, 10, 20, 20}};
        const IntImage img = rasterize_relation_mask(boxes, {{0}}, 32, 32);
        CHECK(img.at(15, 15) == 1);
        CHECK(img.at(10, 10) == 1);
        CHECK(img.at(20, 20) == 0);
        CHECK(img.at(5, 5) == 0);
        std::size_t painted = 0;
        for (int32_t v : img.pixels) painted += v != 0;
        CHECK(painted == 100);
    }
    SUBCASE("overlap: higher element index wins") {
        const std::vector<Box> boxes = {{0, 0, 1, 1}, {0, 0, 1, 1}, {10, 10, 20, 20},
                                        {0, 0, 1, 1}, {0, 0, 1, 1}, {15, 15, 25, 25}};
        // Element 2 in instance 1, element 5 in instance 3.
        const std::vector<std::vector<std::size_t>> inst = {{2}, {0, 1}, {3, 4}, {5}};
        const IntImage img = rasterize_relation_mask(boxes, inst, 32, 32);
        CHECK(img.at(17, 17) == 4);  // overlap, element 5 wins, instance index 3+1
        CHECK(img.at(12, 12) == 1);
        CHECK(img.at(22, 22) == 4);
    }
    SUBCASE("bad dimensions rejected") {
        CHECK_THROWS_AS(rasterize_relation_mask({}, {}, 0, 10), DomainError);
    }
    SUBCASE("idempotent re-rasterization") {
        const std::vector<Box> boxes = {{2, 3, 9, 8}, {5, 5, 12, 14}};
        const std::vector<std::vector<std::size_t>> inst = {{0, 1}};
        const IntImage a = rasterize_relation_mask(boxes, inst, 16, 16);
        const IntImage b = rasterize_relation_mask(boxes, inst, 16, 16);
        CHECK(a.pixels == b.pixels);
    }
}

TEST_CASE("build_mask_pyramid examples") {
    SUBCASE("uniform mask stays uniform at every level") {
        IntImage mask;
        mask.width = mask.height = 64;
        mask.pixels.assign(64 * 64, 3);
        const MaskPyramid pyr = build_mask_pyramid(mask);
        REQUIRE(pyr.levels.size() == 4);
        CHECK(pyr.levels[0].first == 8);
        CHECK(pyr.levels[1].first == 16);
        CHECK(pyr.levels[2].first == 32);
        CHECK(pyr.levels[3].first == 64);
        for (const auto& [stride, level] : pyr.levels)
            for (int32_t v : level.pixels) CHECK(v == 3);
    }
    SUBCASE("half-and-half 16x16 mask at stride 8") {
        IntImage mask;
        mask.width = mask.height = 16;
        mask.pixels.resize(16 * 16);
        for (std::size_t y = 0; y < 16; ++y)
            for (std::size_t x = 0; x < 16; ++x) mask.at(x, y) = x < 8 ? 1 : 2;
        const MaskPyramid pyr = build_mask_pyramid(mask);
        const IntImage& level = pyr.levels[0].second;
        REQUIRE(level.width == 2);
        REQUIRE(level.height == 2);
        CHECK(level.at(0, 0) == 1);
        CHECK(level.at(1, 0) == 2);
        CHECK(level.at(0, 1) == 1);
        CHECK(level.at(1, 1) == 2);
    }
}

TEST_CASE("pyramid values are a subset of base values on random masks") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 50; ++trial) {
        IntImage mask;
        mask.width = 10 + rng() % 120;
        mask.height = 10 + rng() % 120;
        mask.pixels.resize(mask.width * mask.height);
        for (int32_t& v : mask.pixels) v = int32_t(rng() % 6);
        std::set<int32_t> base_values(mask.pixels.begin(), mask.pixels.end());
        const MaskPyramid pyr = build_mask_pyramid(mask);
        for (const auto& [stride, level] : pyr.levels) {
            CHECK(level.width == (mask.width + stride - 1) / std::size_t(stride));
            CHECK(level.height == (mask.height + stride - 1) / std::size_t(stride));
            for (int32_t v : level.pixels) CHECK(base_values.count(v));
            for (std::size_t v = 0; v < level.height; ++v)
                for (std::size_t u = 0; u < level.width; ++u)
                    CHECK(level.at(u, v) == mask.at(u * stride, v * stride));
        }
    }
}
