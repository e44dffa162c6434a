#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "tabweave/composition.hpp"
#include "tabweave/relation.hpp"
#include "tabweave/selection.hpp"

namespace tabweave {

/// Everything a pipeline stage can be checked against: separators, element
/// boxes, pairwise relations, the composition sequence, the composed
/// structure and its HTML, all mutually consistent.
struct GroundTruth {
    double width = 0.0, height = 0.0;
    std::uint64_t seed = 0;
    OrderedSeparatorSet separators;
    std::vector<Box> elements;
    RelationSet relations;
    std::vector<Token> sequence;
    TableStructure structure;
    std::string html;
};

/// Smooth separable sinusoidal displacement:
/// d(x,y) = (A sin(2*pi*y/ly + phi1), A sin(2*pi*x/lx + phi2)).
struct WarpField {
    double amplitude = 0.0;
    double x_period = 500.0, y_period = 500.0;
    double phase1 = 0.0, phase2 = 0.0;

    Point displace(Point p) const;
};

struct GridSpec {
    std::size_t rows = 2, cols = 2;
    double merge_fraction = 0.0;
    std::pair<double, double> cell_size_range = {30.0, 80.0};
    std::size_t t_count = 15;
    std::uint64_t seed = 0;
};

GroundTruth generate_grid(const GridSpec& spec);

/// Maps all geometry through the displacement field; separators are refit
/// and resampled, the structure is recomposed, logical content is unchanged.
GroundTruth apply_warp(const GroundTruth& gt, const WarpField& warp);

/// Jittered, scored copies of the ground-truth separators, optionally with
/// lower-scored near-duplicates. Stress input for NMS and assignment.
std::vector<Separator> perturb(const GroundTruth& gt, double jitter_sigma, double duplicate_prob,
                               std::uint64_t seed);

}  // namespace tabweave
