#include "tabweave/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabweave/errors.hpp"

namespace tabweave {

double mean_x(const SamplePoints& pts) {
    double s = 0.0;
    for (const Point& p : pts) s += p.x;
    return s / double(pts.size());
}

double mean_y(const SamplePoints& pts) {
    double s = 0.0;
    for (const Point& p : pts) s += p.y;
    return s / double(pts.size());
}

bool chord_is_horizontal(const Separator& sep) {
    const Point d = sep.samples.back() - sep.samples.front();
    return std::fabs(d.y) <= std::fabs(d.x);
}

std::vector<Separator> separator_nms(const std::vector<Separator>& candidates, double sigma) {
    if (sigma <= 0.0) throw DomainError("separator_nms: sigma must be positive");

    std::vector<const Separator*> pool;
    for (const Separator& c : candidates)
        if (c.cls != SeparatorClass::Background) pool.push_back(&c);
    for (std::size_t i = 1; i < pool.size(); ++i)
        if (pool[i]->samples.size() != pool[0]->samples.size())
            throw DomainError("separator_nms: mixed sample counts");

    // Stable sort keeps input order on score ties.
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Separator* a, const Separator* b) { return a->score > b->score; });

    std::vector<Separator> kept;
    std::vector<bool> removed(pool.size(), false);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (removed[i]) continue;
        kept.push_back(*pool[i]);
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            if (removed[j]) continue;
            if (separator_distance(pool[i]->samples, pool[j]->samples) < sigma) removed[j] = true;
        }
    }
    return kept;
}

OrderedSeparatorSet order_regularize(const std::vector<Separator>& selected) {
    std::vector<std::size_t> horiz, vert;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const Separator& s = selected[i];
        if (s.cls == SeparatorClass::Background)
            throw DomainError("order_regularize: background separator present");
        if (s.samples.size() < 2 || s.samples.front() == s.samples.back())
            throw DomainError("order_regularize: degenerate separator chord");
        (chord_is_horizontal(s) ? horiz : vert).push_back(i);
    }
    std::stable_sort(horiz.begin(), horiz.end(), [&](std::size_t a, std::size_t b) {
        return mean_y(selected[a].samples) < mean_y(selected[b].samples);
    });
    std::stable_sort(vert.begin(), vert.end(), [&](std::size_t a, std::size_t b) {
        return mean_x(selected[a].samples) < mean_x(selected[b].samples);
    });

    OrderedSeparatorSet out;
    out.n_h = horiz.size();
    out.separators.reserve(selected.size());
    for (std::size_t i : horiz) out.separators.push_back(selected[i]);
    for (std::size_t i : vert) out.separators.push_back(selected[i]);
    return out;
}

}  // namespace tabweave
