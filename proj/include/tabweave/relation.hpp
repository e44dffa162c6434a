#pragma once
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace tabweave {

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

/// N element boxes with undirected pairwise same-row / same-column relations.
struct RelationSet {
    std::size_t n = 0;
    std::vector<Box> boxes;
    std::vector<std::pair<std::size_t, std::size_t>> row_pairs;
    std::vector<std::pair<std::size_t, std::size_t>> col_pairs;
};

/// Connected components of the pair graph, numbered 1..M in order of
/// smallest member index. Isolated elements form singleton instances.
struct RelationInstances {
    std::vector<std::vector<std::size_t>> row_instances;
    std::vector<std::vector<std::size_t>> col_instances;
};

struct IntImage {
    std::size_t width = 0, height = 0;
    std::vector<int32_t> pixels;  // row-major

    int32_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    int32_t& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
};

struct MaskPyramid {
    IntImage base;
    std::vector<std::pair<int, IntImage>> levels;  // (stride, image)
};

inline constexpr int kPyramidStrides[4] = {8, 16, 32, 64};

RelationInstances build_relation_instances(const RelationSet& rel);

/// instance_of[i] gives element i's instance index (1-based).
IntImage rasterize_relation_mask(const std::vector<Box>& boxes,
                                 const std::vector<std::vector<std::size_t>>& instances,
                                 std::size_t width, std::size_t height);

/// Nearest-neighbor downsampling (top-left anchor) at strides {8,16,32,64}.
MaskPyramid build_mask_pyramid(const IntImage& mask);

}  // namespace tabweave
