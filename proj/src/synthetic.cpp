#include "tabweave/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include "tabweave/errors.hpp"
#include "tabweave/geometry.hpp"

namespace tabweave {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-entity stream: inserting one entity never shifts another's draws.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t entity = 0) {
    return std::mt19937_64(splitmix64(splitmix64(seed ^ tag) ^ entity));
}

constexpr std::uint64_t kTagSizes = 0x5349ULL;       // grid line spacing
constexpr std::uint64_t kTagMerges = 0x4d47ULL;      // merge placement
constexpr std::uint64_t kTagVisibility = 0x5649ULL;  // explicit/implicit flags
constexpr std::uint64_t kTagJitter = 0x4a54ULL;      // perturb jitter
constexpr std::uint64_t kTagScore = 0x5343ULL;       // perturb scores

SamplePoints straight_line(Point a, Point b, std::size_t t_count) {
    SamplePoints pts;
    pts.reserve(t_count);
    for (std::size_t i = 0; i < t_count; ++i) {
        const double t = double(i) / double(t_count - 1);
        pts.push_back(a + t * (b - a));
    }
    return pts;
}

struct CellSpan {
    std::size_t r0, c0, r1, c1;  // half-open grid spans
};

double min_cell_dimension(const OrderedSeparatorSet& seps) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < seps.n_h; ++i)
        gap = std::min(gap, mean_y(seps.separators[i].samples) -
                                mean_y(seps.separators[i - 1].samples));
    for (std::size_t i = seps.n_h + 1; i < seps.size(); ++i)
        gap = std::min(gap, mean_x(seps.separators[i].samples) -
                                mean_x(seps.separators[i - 1].samples));
    return gap;
}

}  // namespace

Point WarpField::displace(Point p) const {
    constexpr double tau = 2.0 * std::numbers::pi;
    return {p.x + amplitude * std::sin(tau * p.y / y_period + phase1),
            p.y + amplitude * std::sin(tau * p.x / x_period + phase2)};
}

GroundTruth generate_grid(const GridSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1)
        throw ValidationError("generate_grid: rows and cols must be >= 1");
    if (spec.merge_fraction < 0.0 || spec.merge_fraction > 0.5)
        throw ValidationError("generate_grid: infeasible merge fraction");
    if (spec.cell_size_range.first <= 0.0 ||
        spec.cell_size_range.second < spec.cell_size_range.first)
        throw ValidationError("generate_grid: bad cell size range");
    if (spec.t_count < 2) throw ValidationError("generate_grid: t_count must be >= 2");

    constexpr double kMargin = 10.0;
    auto size_rng = stream(spec.seed, kTagSizes);
    std::uniform_real_distribution<double> size_dist(spec.cell_size_range.first,
                                                     spec.cell_size_range.second);
    std::vector<double> ys{kMargin}, xs{kMargin};
    for (std::size_t r = 0; r < spec.rows; ++r) ys.push_back(ys.back() + size_dist(size_rng));
    for (std::size_t c = 0; c < spec.cols; ++c) xs.push_back(xs.back() + size_dist(size_rng));

    GroundTruth gt;
    gt.seed = spec.seed;
    gt.width = xs.back() + kMargin;
    gt.height = ys.back() + kMargin;

    // Separators: horizontals 0..rows, verticals rows+1..rows+cols+1.
    auto vis_rng = stream(spec.seed, kTagVisibility);
    std::bernoulli_distribution vis_dist(0.5);
    gt.separators.n_h = spec.rows + 1;
    for (std::size_t i = 0; i <= spec.rows; ++i) {
        Separator s;
        s.samples = straight_line({xs.front(), ys[i]}, {xs.back(), ys[i]}, spec.t_count);
        const bool border = i == 0 || i == spec.rows;
        s.cls = (border || vis_dist(vis_rng)) ? SeparatorClass::Explicit
                                              : SeparatorClass::Implicit;
        s.score = 1.0;
        gt.separators.separators.push_back(std::move(s));
    }
    for (std::size_t j = 0; j <= spec.cols; ++j) {
        Separator s;
        s.samples = straight_line({xs[j], ys.front()}, {xs[j], ys.back()}, spec.t_count);
        const bool border = j == 0 || j == spec.cols;
        s.cls = (border || vis_dist(vis_rng)) ? SeparatorClass::Explicit
                                              : SeparatorClass::Implicit;
        s.score = 1.0;
        gt.separators.separators.push_back(std::move(s));
    }

    // Random rectangular merges, best effort under the slot budget.
    auto merge_rng = stream(spec.seed, kTagMerges);
    const std::size_t slot_budget =
        std::size_t(spec.merge_fraction * double(spec.rows * spec.cols));
    std::vector<bool> merged(spec.rows * spec.cols, false);
    std::vector<CellSpan> merges;
    std::size_t merged_slots = 0;
    if (slot_budget >= 2) {
        std::uniform_int_distribution<std::size_t> row_dist(0, spec.rows - 1);
        std::uniform_int_distribution<std::size_t> col_dist(0, spec.cols - 1);
        for (int attempt = 0; attempt < 64 && merged_slots < slot_budget; ++attempt) {
            const std::size_t r0 = row_dist(merge_rng), c0 = col_dist(merge_rng);
            const std::size_t h =
                1 + std::uniform_int_distribution<std::size_t>(
                        0, std::min<std::size_t>(2, spec.rows - 1 - r0))(merge_rng);
            const std::size_t w =
                1 + std::uniform_int_distribution<std::size_t>(
                        0, std::min<std::size_t>(2, spec.cols - 1 - c0))(merge_rng);
            if (h * w < 2 || merged_slots + h * w > slot_budget) continue;
            bool free = true;
            for (std::size_t r = r0; r < r0 + h && free; ++r)
                for (std::size_t c = c0; c < c0 + w && free; ++c)
                    if (merged[r * spec.cols + c]) free = false;
            if (!free) continue;
            for (std::size_t r = r0; r < r0 + h; ++r)
                for (std::size_t c = c0; c < c0 + w; ++c) merged[r * spec.cols + c] = true;
            merges.push_back({r0, c0, r0 + h, c0 + w});
            merged_slots += h * w;
        }
    }

    std::vector<CellSpan> cells;
    for (std::size_t r = 0; r < spec.rows; ++r)
        for (std::size_t c = 0; c < spec.cols; ++c)
            if (!merged[r * spec.cols + c]) cells.push_back({r, c, r + 1, c + 1});
    cells.insert(cells.end(), merges.begin(), merges.end());
    std::sort(cells.begin(), cells.end(), [](const CellSpan& a, const CellSpan& b) {
        return std::tie(a.r0, a.c0) < std::tie(b.r0, b.c0);
    });

    std::vector<CellQuadruple> quads;
    for (const CellSpan& cell : cells) {
        quads.push_back({cell.r0, gt.separators.n_h + cell.c0, cell.r1,
                         gt.separators.n_h + cell.c1});
        const double w = xs[cell.c1] - xs[cell.c0];
        const double h = ys[cell.r1] - ys[cell.r0];
        gt.elements.push_back({xs[cell.c0] + 0.2 * w, ys[cell.r0] + 0.2 * h,
                               xs[cell.c1] - 0.2 * w, ys[cell.r1] - 0.2 * h});
    }

    gt.relations.n = cells.size();
    gt.relations.boxes = gt.elements;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            if (cells[i].r0 < cells[j].r1 && cells[j].r0 < cells[i].r1)
                gt.relations.row_pairs.emplace_back(i, j);
            if (cells[i].c0 < cells[j].c1 && cells[j].c0 < cells[i].c1)
                gt.relations.col_pairs.emplace_back(i, j);
        }

    gt.sequence = serialize_sequence(quads);
    gt.structure = compose_structure(quads, gt.separators);
    gt.html = to_html(gt.structure);
    return gt;
}

GroundTruth apply_warp(const GroundTruth& gt, const WarpField& warp) {
    if (warp.amplitude < 0.0 || warp.x_period <= 0.0 || warp.y_period <= 0.0)
        throw DomainError("apply_warp: invalid warp field");
    if (warp.amplitude == 0.0) return gt;
    if (warp.amplitude >= 0.25 * min_cell_dimension(gt.separators))
        throw DomainError("apply_warp: amplitude exceeds invertibility bound");

    GroundTruth out = gt;
    for (Separator& s : out.separators.separators) {
        for (Point& p : s.samples) p = warp.displace(p);
        const FitResult fit = fit_least_squares(s.samples);
        s.control = fit.control;
        s.samples = sample_uniform(fit.control, s.samples.size());
    }
    auto warp_box = [&](const Box& b) {
        const Point c0 = warp.displace({b.x0, b.y0});
        const Point c1 = warp.displace({b.x1, b.y0});
        const Point c2 = warp.displace({b.x0, b.y1});
        const Point c3 = warp.displace({b.x1, b.y1});
        return Box{std::min({c0.x, c1.x, c2.x, c3.x}), std::min({c0.y, c1.y, c2.y, c3.y}),
                   std::max({c0.x, c1.x, c2.x, c3.x}), std::max({c0.y, c1.y, c2.y, c3.y})};
    };
    for (Box& b : out.elements) b = warp_box(b);
    out.relations.boxes = out.elements;

    const std::vector<CellQuadruple> quads =
        parse_sequence(out.sequence, out.separators.size());
    out.structure = compose_structure(quads, out.separators);
    out.html = to_html(out.structure);
    return out;
}

std::vector<Separator> perturb(const GroundTruth& gt, double jitter_sigma, double duplicate_prob,
                               std::uint64_t seed) {
    if (jitter_sigma < 0.0) throw DomainError("perturb: negative jitter");
    if (duplicate_prob < 0.0 || duplicate_prob > 1.0)
        throw DomainError("perturb: duplicate_prob outside [0,1]");

    std::vector<Separator> out;
    for (std::size_t k = 0; k < gt.separators.size(); ++k) {
        auto jitter_rng = stream(seed, kTagJitter, k);
        auto score_rng = stream(seed, kTagScore, k);
        std::normal_distribution<double> dist(0.0, jitter_sigma > 0.0 ? jitter_sigma : 1.0);
        auto noise = [&](std::mt19937_64& rng) { return jitter_sigma > 0.0 ? dist(rng) : 0.0; };
        Separator s = gt.separators.separators[k];
        for (Point& p : s.samples) p = {p.x + noise(jitter_rng), p.y + noise(jitter_rng)};
        s.score = std::uniform_real_distribution<double>(0.5, 1.0)(score_rng);
        s.control.reset();
        out.push_back(s);

        if (std::uniform_real_distribution<double>(0.0, 1.0)(score_rng) < duplicate_prob) {
            Separator dup = s;
            for (Point& p : dup.samples)
                p = {p.x + noise(jitter_rng), p.y + noise(jitter_rng)};
            dup.score = std::uniform_real_distribution<double>(0.25, 0.5)(score_rng);
            out.push_back(std::move(dup));
        }
    }
    return out;
}

}  // namespace tabweave
