#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tabweave/composition.hpp"
#include "tabweave/markup.hpp"

namespace tabweave {

struct EvalReport {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    std::size_t true_positive = 0, false_positive = 0, false_negative = 0;
    std::optional<double> teds;
    std::optional<double> bleu;
};

/// Precision/recall/F1 over neighboring-cell relation tuples after greedy
/// one-to-one cell matching by rasterized-polygon IoU.
EvalReport adjacency_f1(const TableStructure& pred, const TableStructure& gt,
                        double iou_thresh = 0.6);

/// Tree-Edit-Distance-based Similarity:
/// 1 - TED(pred, gt) / max(|pred|, |gt|), unit insert/delete cost.
double teds(const MarkupTree& pred, const MarkupTree& gt, bool structure_only = true);

/// Ordered tree edit distance with the toolkit's node costs (exposed so the
/// similarity can be cross-checked against independent oracles).
double tree_edit_distance(const MarkupTree& a, const MarkupTree& b, bool structure_only = true);

double bleu(const std::vector<std::string>& pred_tokens, const std::vector<std::string>& gt_tokens,
            std::size_t max_n = 4);

/// Mean KL divergence of each attention row against all rows, in nats.
/// Rows are floored at epsilon and renormalized before the log-ratio.
std::vector<double> kl_profile(const std::vector<std::vector<double>>& attention,
                               double epsilon = 1e-12);

}  // namespace tabweave
