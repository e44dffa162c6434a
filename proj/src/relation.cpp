#include "tabweave/relation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabweave/errors.hpp"

namespace tabweave {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t(0));
    }
    std::size_t find(std::size_t u) {
        while (parent_[u] != u) {
            parent_[u] = parent_[parent_[u]];
            u = parent_[u];
        }
        return u;
    }
    void unite(std::size_t u, std::size_t v) { parent_[find(u)] = find(v); }

private:
    std::vector<std::size_t> parent_;
};

std::vector<std::vector<std::size_t>> components(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    UnionFind uf(n);
    for (const auto& [i, j] : pairs) {
        if (i >= n || j >= n) throw DomainError("build_relation_instances: pair index out of range");
        uf.unite(i, j);
    }
    // Group by root; instance order is by smallest member index, which is
    // simply the first element whose root has not been seen yet.
    std::vector<int> root_to_instance(n, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = uf.find(i);
        if (root_to_instance[r] < 0) {
            root_to_instance[r] = int(out.size());
            out.emplace_back();
        }
        out[root_to_instance[r]].push_back(i);
    }
    return out;
}

}  // namespace

RelationInstances build_relation_instances(const RelationSet& rel) {
    RelationInstances out;
    out.row_instances = components(rel.n, rel.row_pairs);
    out.col_instances = components(rel.n, rel.col_pairs);
    return out;
}

IntImage rasterize_relation_mask(const std::vector<Box>& boxes,
                                 const std::vector<std::vector<std::size_t>>& instances,
                                 std::size_t width, std::size_t height) {
    if (width == 0 || height == 0)
        throw DomainError("rasterize_relation_mask: non-positive dimensions");
    std::vector<int32_t> instance_of(boxes.size(), 0);
    for (std::size_t k = 0; k < instances.size(); ++k)
        for (std::size_t e : instances[k]) {
            if (e >= boxes.size()) throw DomainError("rasterize_relation_mask: element out of range");
            instance_of[e] = int32_t(k + 1);
        }

    IntImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(width * height, 0);
    // Higher element index wins on overlap: paint in element order.
    for (std::size_t e = 0; e < boxes.size(); ++e) {
        const Box& b = boxes[e];
        const auto x_lo = std::size_t(std::max(0.0, std::ceil(b.x0)));
        const auto y_lo = std::size_t(std::max(0.0, std::ceil(b.y0)));
        const auto x_hi = std::min(width, std::size_t(std::max(0.0, std::ceil(b.x1))));
        const auto y_hi = std::min(height, std::size_t(std::max(0.0, std::ceil(b.y1))));
        for (std::size_t y = y_lo; y < y_hi; ++y)
            for (std::size_t x = x_lo; x < x_hi; ++x) img.at(x, y) = instance_of[e];
    }
    return img;
}

MaskPyramid build_mask_pyramid(const IntImage& mask) {
    if (mask.width == 0 || mask.height == 0) throw DomainError("build_mask_pyramid: empty mask");
    MaskPyramid pyr;
    pyr.base = mask;
    for (int stride : kPyramidStrides) {
        IntImage level;
        level.width = (mask.width + stride - 1) / stride;
        level.height = (mask.height + stride - 1) / stride;
        level.pixels.resize(level.width * level.height);
        for (std::size_t v = 0; v < level.height; ++v)
            for (std::size_t u = 0; u < level.width; ++u)
                level.at(u, v) = mask.at(u * stride, v * stride);
        pyr.levels.emplace_back(stride, std::move(level));
    }
    return pyr;
}

}  // namespace tabweave
