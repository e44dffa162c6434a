#pragma once
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "tabweave/geometry.hpp"

namespace tabweave {

/// One-to-one bipartite match between predicted and ground-truth separators.
struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (pred, gt)
    std::vector<std::size_t> unmatched_preds;
    std::vector<std::size_t> unmatched_gts;
    double total_cost = 0.0;
};

/// One-to-many grouping: each matched gt owns its anchor pred plus neighbors.
struct GroupAssignment {
    std::map<std::size_t, std::vector<std::size_t>> groups;  // gt -> pred indexes
};

/// Minimum-cost matching with cost
/// w_cls * (1 - class score credited to the gt) + w_reg * separator_distance.
Assignment match_one_to_one(const std::vector<Separator>& preds,
                            const std::vector<Separator>& gts, double w_cls = 1.0,
                            double w_reg = 1.0);

/// Adds every unclaimed pred within `threshold` of an anchor to that anchor's
/// group; conflicts resolve to the nearer anchor, ties to the lower gt index.
GroupAssignment expand_one_to_many(const Assignment& assign, const std::vector<Separator>& preds,
                                   double threshold = 5.0);

}  // namespace tabweave
