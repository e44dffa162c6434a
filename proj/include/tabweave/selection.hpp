#pragma once
#include <cstddef>
#include <vector>

#include "tabweave/geometry.hpp"

namespace tabweave {

/// Canonical indexed sequence: horizontals sorted by mean y first,
/// then verticals sorted by mean x. Indexes 0..n_h-1 are horizontal.
struct OrderedSeparatorSet {
    std::vector<Separator> separators;
    std::size_t n_h = 0;

    bool is_horizontal(std::size_t idx) const { return idx < n_h; }
    std::size_t size() const { return separators.size(); }
};

double mean_x(const SamplePoints& pts);
double mean_y(const SamplePoints& pts);

/// Chord-based orientation: horizontal iff |dy| <= |dx| of start->end.
bool chord_is_horizontal(const Separator& sep);

/// Greedy suppression by score under separator_distance < sigma.
/// Background candidates are dropped before suppression.
std::vector<Separator> separator_nms(const std::vector<Separator>& candidates, double sigma = 5.0);

OrderedSeparatorSet order_regularize(const std::vector<Separator>& selected);

}  // namespace tabweave
