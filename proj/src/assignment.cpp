#include "tabweave/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tabweave/errors.hpp"

namespace tabweave {

namespace {

// Kuhn-Munkres on a square cost matrix, O(n^3). Returns row -> column.
std::vector<int> hungarian_square(const std::vector<std::vector<double>>& cost) {
    const int n = int(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

double class_score(const Separator& pred, const Separator& /*gt*/) {
    // Preds carry a scalar confidence; it is credited regardless of gt class.
    return pred.score;
}

}  // namespace

Assignment match_one_to_one(const std::vector<Separator>& preds,
                            const std::vector<Separator>& gts, double w_cls, double w_reg) {
    if (w_cls < 0.0 || w_reg < 0.0) throw DomainError("match_one_to_one: negative weight");
    const std::size_t np = preds.size(), ng = gts.size();
    for (const Separator& p : preds)
        for (const Separator& g : gts)
            if (p.samples.size() != g.samples.size())
                throw DomainError("match_one_to_one: sample count mismatch");

    Assignment out;
    if (np == 0 || ng == 0) {
        for (std::size_t i = 0; i < np; ++i) out.unmatched_preds.push_back(i);
        for (std::size_t j = 0; j < ng; ++j) out.unmatched_gts.push_back(j);
        return out;
    }

    // Pad to a square matrix with zero-cost dummies: every assignment then
    // carries exactly min(np, ng) real pairs, so minimizing the padded sum
    // minimizes the real matched cost.
    const std::size_t n = std::max(np, ng);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < ng; ++j)
            cost[i][j] = w_cls * (1.0 - class_score(preds[i], gts[j])) +
                         w_reg * separator_distance(preds[i].samples, gts[j].samples);

    const std::vector<int> row_to_col = hungarian_square(cost);
    std::vector<bool> gt_used(ng, false);
    for (std::size_t i = 0; i < np; ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && std::size_t(j) < ng) {
            out.pairs.emplace_back(i, std::size_t(j));
            out.total_cost += cost[i][j];
            gt_used[j] = true;
        } else {
            out.unmatched_preds.push_back(i);
        }
    }
    for (std::size_t j = 0; j < ng; ++j)
        if (!gt_used[j]) out.unmatched_gts.push_back(j);
    return out;
}

GroupAssignment expand_one_to_many(const Assignment& assign, const std::vector<Separator>& preds,
                                   double threshold) {
    GroupAssignment out;
    std::vector<bool> is_anchor(preds.size(), false);
    for (const auto& [p, g] : assign.pairs) {
        if (p >= preds.size()) throw DomainError("expand_one_to_many: pred index out of range");
        out.groups[g] = {p};
        is_anchor[p] = true;
    }
    for (std::size_t q = 0; q < preds.size(); ++q) {
        if (is_anchor[q]) continue;
        double best = threshold;
        std::size_t best_gt = 0;
        bool found = false;
        for (const auto& [p, g] : assign.pairs) {
            const double d = separator_distance(preds[p].samples, preds[q].samples);
            if (d < best || (found && d == best && g < best_gt)) {
                best = d;
                best_gt = g;
                found = true;
            }
        }
        if (found) out.groups[best_gt].push_back(q);
    }
    return out;
}

}  // namespace tabweave
