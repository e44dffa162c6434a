#include "tabweave/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>

#include "tabweave/errors.hpp"

namespace tabweave {

namespace {

// ---- polygon rasterization at 1 px over the polygon's bounding box ----

struct Raster {
    long x0 = 0, y0 = 0;
    std::size_t width = 0, height = 0;
    std::vector<uint8_t> bits;
    std::size_t count = 0;

    bool at(long x, long y) const {
        if (x < x0 || y < y0 || x >= x0 + long(width) || y >= y0 + long(height)) return false;
        return bits[std::size_t(y - y0) * width + std::size_t(x - x0)] != 0;
    }
};

Raster rasterize_polygon(const std::vector<Point>& poly) {
    Raster r;
    if (poly.empty()) return r;
    double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
    for (const Point& p : poly) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    r.x0 = long(std::floor(min_x));
    r.y0 = long(std::floor(min_y));
    r.width = std::size_t(std::max(0L, long(std::ceil(max_x)) - r.x0));
    r.height = std::size_t(std::max(0L, long(std::ceil(max_y)) - r.y0));
    r.bits.assign(r.width * r.height, 0);

    // Even-odd scanline fill sampled at pixel centers.
    std::vector<double> xs;
    for (std::size_t iy = 0; iy < r.height; ++iy) {
        const double yc = double(r.y0) + double(iy) + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point a = poly[i];
            const Point b = poly[(i + 1) % poly.size()];
            if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc))
                xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const long lo = long(std::ceil(xs[k] - 0.5));
            const long hi = long(std::floor(xs[k + 1] - 0.5));
            for (long x = std::max(lo, r.x0); x <= std::min(hi, r.x0 + long(r.width) - 1); ++x) {
                uint8_t& bit = r.bits[iy * r.width + std::size_t(x - r.x0)];
                if (!bit) {
                    bit = 1;
                    ++r.count;
                }
            }
        }
    }
    return r;
}

double raster_iou(const Raster& a, const Raster& b) {
    const long x_lo = std::max(a.x0, b.x0), y_lo = std::max(a.y0, b.y0);
    const long x_hi = std::min(a.x0 + long(a.width), b.x0 + long(b.width));
    const long y_hi = std::min(a.y0 + long(a.height), b.y0 + long(b.height));
    std::size_t inter = 0;
    for (long y = y_lo; y < y_hi; ++y)
        for (long x = x_lo; x < x_hi; ++x)
            if (a.at(x, y) && b.at(x, y)) ++inter;
    const std::size_t uni = a.count + b.count - inter;
    return uni == 0 ? 0.0 : double(inter) / double(uni);
}

// (cell index a < cell index b, 0 = row-direction neighbor, 1 = column)
using Relation = std::tuple<std::size_t, std::size_t, int>;

bool spans_overlap(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    return a0 < b1 && b0 < a1;
}

std::set<Relation> adjacency_relations(const TableStructure& s) {
    std::set<Relation> rel;
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
        for (std::size_t j = i + 1; j < s.cells.size(); ++j) {
            const TableCell& a = s.cells[i];
            const TableCell& b = s.cells[j];
            const bool row_overlap =
                spans_overlap(a.row, a.row + a.rowspan, b.row, b.row + b.rowspan);
            const bool col_overlap =
                spans_overlap(a.col, a.col + a.colspan, b.col, b.col + b.colspan);
            // Row-direction neighbors share a vertical border; column-direction
            // neighbors share a horizontal one.
            if (row_overlap &&
                (a.col + a.colspan == b.col || b.col + b.colspan == a.col))
                rel.insert({i, j, 0});
            if (col_overlap &&
                (a.row + a.rowspan == b.row || b.row + b.rowspan == a.row))
                rel.insert({i, j, 1});
        }
    }
    return rel;
}

// ---- Zhang-Shasha ordered tree edit distance ----

struct FlatTree {
    std::vector<const MarkupNode*> post;  // postorder
    std::vector<int> lld;                 // leftmost leaf descendant, postorder index
    std::vector<int> keyroots;
};

int flatten(const MarkupNode& node, FlatTree& t) {
    int first_leaf = -1;
    for (const MarkupNode& c : node.children) {
        const int child_lld = flatten(c, t);
        if (first_leaf < 0) first_leaf = child_lld;
    }
    t.post.push_back(&node);
    const int idx = int(t.post.size()) - 1;
    t.lld.push_back(first_leaf < 0 ? idx : first_leaf);
    return t.lld.back();
}

FlatTree flatten_tree(const MarkupTree& tree) {
    FlatTree t;
    flatten(tree.root, t);
    for (int i = 0; i < int(t.post.size()); ++i) {
        bool is_keyroot = true;
        for (int j = i + 1; j < int(t.post.size()); ++j)
            if (t.lld[j] == t.lld[i]) { is_keyroot = false; break; }
        if (is_keyroot) t.keyroots.push_back(i);
    }
    return t;
}

double levenshtein_normalized(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0 && m == 0) return 0.0;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return double(prev[m]) / double(std::max(n, m));
}

double rename_cost(const MarkupNode& a, const MarkupNode& b, bool structure_only) {
    if (a.tag != b.tag || a.rowspan != b.rowspan || a.colspan != b.colspan) return 1.0;
    if (!structure_only && a.tag == "td") return levenshtein_normalized(a.content, b.content);
    return 0.0;
}

}  // namespace

double tree_edit_distance(const MarkupTree& tree_a, const MarkupTree& tree_b,
                          bool structure_only) {
    const FlatTree a = flatten_tree(tree_a);
    const FlatTree b = flatten_tree(tree_b);
    const int na = int(a.post.size()), nb = int(b.post.size());
    std::vector<std::vector<double>> td(na, std::vector<double>(nb, 0.0));
    std::vector<std::vector<double>> fd(na + 1, std::vector<double>(nb + 1, 0.0));

    for (int ki : a.keyroots) {
        for (int kj : b.keyroots) {
            const int li = a.lld[ki], lj = b.lld[kj];
            fd[li][lj] = 0.0;
            for (int i = li; i <= ki; ++i) fd[i + 1][lj] = fd[i][lj] + 1.0;
            for (int j = lj; j <= kj; ++j) fd[li][j + 1] = fd[li][j] + 1.0;
            for (int i = li; i <= ki; ++i) {
                for (int j = lj; j <= kj; ++j) {
                    if (a.lld[i] == li && b.lld[j] == lj) {
                        const double sub =
                            fd[i][j] + rename_cost(*a.post[i], *b.post[j], structure_only);
                        fd[i + 1][j + 1] =
                            std::min({fd[i][j + 1] + 1.0, fd[i + 1][j] + 1.0, sub});
                        td[i][j] = fd[i + 1][j + 1];
                    } else {
                        fd[i + 1][j + 1] =
                            std::min({fd[i][j + 1] + 1.0, fd[i + 1][j] + 1.0,
                                      fd[a.lld[i]][b.lld[j]] + td[i][j]});
                    }
                }
            }
        }
    }
    return td[na - 1][nb - 1];
}

double teds(const MarkupTree& pred, const MarkupTree& gt, bool structure_only) {
    if (pred.root.tag.empty() || gt.root.tag.empty()) throw DomainError("teds: empty tree");
    const double dist = tree_edit_distance(pred, gt, structure_only);
    const double denom = double(std::max(tree_size(pred.root), tree_size(gt.root)));
    // The distance can exceed the larger tree size when little structure is
    // shared; the similarity is clamped to stay in [0, 1].
    return std::max(0.0, 1.0 - dist / denom);
}

EvalReport adjacency_f1(const TableStructure& pred, const TableStructure& gt, double iou_thresh) {
    std::vector<Raster> pred_r, gt_r;
    pred_r.reserve(pred.cells.size());
    gt_r.reserve(gt.cells.size());
    for (const TableCell& c : pred.cells) pred_r.push_back(rasterize_polygon(c.polygon));
    for (const TableCell& c : gt.cells) gt_r.push_back(rasterize_polygon(c.polygon));

    // Greedy one-to-one cell matching by descending IoU.
    std::vector<std::tuple<double, std::size_t, std::size_t>> ious;
    for (std::size_t i = 0; i < pred_r.size(); ++i)
        for (std::size_t j = 0; j < gt_r.size(); ++j) {
            const double iou = raster_iou(pred_r[i], gt_r[j]);
            if (iou >= iou_thresh) ious.emplace_back(iou, i, j);
        }
    std::sort(ious.begin(), ious.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });
    std::map<std::size_t, std::size_t> pred_to_gt;
    std::set<std::size_t> gt_taken;
    for (const auto& [iou, i, j] : ious) {
        if (pred_to_gt.count(i) || gt_taken.count(j)) continue;
        pred_to_gt[i] = j;
        gt_taken.insert(j);
    }

    const std::set<Relation> pred_rel = adjacency_relations(pred);
    const std::set<Relation> gt_rel = adjacency_relations(gt);
    std::size_t tp = 0;
    for (const auto& [i, j, dir] : pred_rel) {
        const auto it_i = pred_to_gt.find(i);
        const auto it_j = pred_to_gt.find(j);
        if (it_i == pred_to_gt.end() || it_j == pred_to_gt.end()) continue;
        std::size_t gi = it_i->second, gj = it_j->second;
        if (gi > gj) std::swap(gi, gj);
        if (gt_rel.count({gi, gj, dir})) ++tp;
    }

    EvalReport rep;
    rep.true_positive = tp;
    rep.false_positive = pred_rel.size() - tp;
    rep.false_negative = gt_rel.size() - tp;
    if (pred_rel.empty() && gt_rel.empty()) {
        // Tables too small to have neighbor relations agree vacuously.
        rep.precision = rep.recall = rep.f1 = 1.0;
        return rep;
    }
    rep.precision = pred_rel.empty() ? 0.0 : double(tp) / double(pred_rel.size());
    rep.recall = gt_rel.empty() ? 0.0 : double(tp) / double(gt_rel.size());
    rep.f1 = (rep.precision + rep.recall) > 0.0
                 ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
                 : 0.0;
    return rep;
}

double bleu(const std::vector<std::string>& pred_tokens, const std::vector<std::string>& gt_tokens,
            std::size_t max_n) {
    if (max_n < 1) throw DomainError("bleu: max_n must be >= 1");
    if (pred_tokens.empty()) return 0.0;

    double log_sum = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::map<std::vector<std::string>, std::size_t> gt_counts;
        for (std::size_t i = 0; i + n <= gt_tokens.size(); ++i)
            ++gt_counts[{gt_tokens.begin() + i, gt_tokens.begin() + i + n}];
        std::size_t clipped = 0, total = 0;
        std::map<std::vector<std::string>, std::size_t> used;
        for (std::size_t i = 0; i + n <= pred_tokens.size(); ++i) {
            std::vector<std::string> gram(pred_tokens.begin() + i, pred_tokens.begin() + i + n);
            ++total;
            auto it = gt_counts.find(gram);
            if (it != gt_counts.end() && used[gram] < it->second) {
                ++used[gram];
                ++clipped;
            }
        }
        if (total == 0 || clipped == 0) return 0.0;
        log_sum += std::log(double(clipped) / double(total));
    }
    const double bp =
        std::exp(std::min(0.0, 1.0 - double(gt_tokens.size()) / double(pred_tokens.size())));
    return bp * std::exp(log_sum / double(max_n));
}

std::vector<double> kl_profile(const std::vector<std::vector<double>>& attention, double epsilon) {
    const std::size_t n = attention.size();
    std::vector<std::vector<double>> rows = attention;
    for (std::vector<double>& row : rows) {
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0) throw DomainError("kl_profile: negative attention entry");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-6) throw DomainError("kl_profile: row is not stochastic");
        double floored = 0.0;
        for (double& v : row) {
            v = std::max(v, epsilon);
            floored += v;
        }
        for (double& v : row) v /= floored;
    }

    std::vector<double> profile(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                acc += rows[i][k] * std::log(rows[i][k] / rows[j][k]);
        }
        profile[i] = acc / double(n);
    }
    return profile;
}

}  // namespace tabweave
