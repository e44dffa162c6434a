#include "tabweave/composition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "tabweave/errors.hpp"

namespace tabweave {

namespace {

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

// A polyline with parameter values attached to its vertices. Extension
// vertices carry params outside [0, n-1] so slicing stays monotone.
struct ParamPolyline {
    std::vector<Point> pts;
    std::vector<double> params;
};

ParamPolyline extend_polyline(const SamplePoints& samples, double eps_ext) {
    ParamPolyline pl;
    const std::size_t n = samples.size();
    const Point d0 = samples[1] - samples[0];
    const Point dn = samples[n - 1] - samples[n - 2];
    const double l0 = norm(d0), ln = norm(dn);

    if (eps_ext > 0.0 && l0 > 0.0) {
        pl.pts.push_back(samples[0] - (eps_ext / l0) * d0);
        pl.params.push_back(-1.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        pl.pts.push_back(samples[i]);
        pl.params.push_back(double(i));
    }
    if (eps_ext > 0.0 && ln > 0.0) {
        pl.pts.push_back(samples[n - 1] + (eps_ext / ln) * dn);
        pl.params.push_back(double(n));
    }
    return pl;
}

struct Crossing {
    Point at;
    double param_a = 0.0;
    double param_b = 0.0;
};

// First crossing between the two polylines in scan order.
std::optional<Crossing> intersect_polylines(const ParamPolyline& a, const ParamPolyline& b) {
    constexpr double kTol = 1e-9;
    for (std::size_t i = 0; i + 1 < a.pts.size(); ++i) {
        const Point p = a.pts[i];
        const Point r = a.pts[i + 1] - p;
        for (std::size_t j = 0; j + 1 < b.pts.size(); ++j) {
            const Point q = b.pts[j];
            const Point s = b.pts[j + 1] - q;
            const double denom = cross(r, s);
            if (std::fabs(denom) < 1e-12) continue;
            const double t = cross(q - p, s) / denom;
            const double u = cross(q - p, r) / denom;
            if (t < -kTol || t > 1.0 + kTol || u < -kTol || u > 1.0 + kTol) continue;
            Crossing c;
            c.at = p + t * r;
            c.param_a = a.params[i] + t * (a.params[i + 1] - a.params[i]);
            c.param_b = b.params[j] + u * (b.params[j + 1] - b.params[j]);
            return c;
        }
    }
    return std::nullopt;
}

Crossing required_crossing(const SamplePoints& a, const SamplePoints& b, double eps_ext,
                           const char* what) {
    // Prefer an intersection of the raw polylines; fall back to extension.
    if (auto c = intersect_polylines(extend_polyline(a, 0.0), extend_polyline(b, 0.0))) return *c;
    if (auto c = intersect_polylines(extend_polyline(a, eps_ext), extend_polyline(b, eps_ext)))
        return *c;
    throw DomainError(std::string("compose_cell: no closure at ") + what +
                      " intersection within eps_ext");
}

// Interior sample points of `samples` with param strictly between `from` and
// `to`, ordered in the direction of travel.
void append_slice(std::vector<Point>& out, const SamplePoints& samples, double from, double to) {
    constexpr double kTol = 1e-9;
    if (from <= to) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double p = double(i);
            if (p > from + kTol && p < to - kTol) out.push_back(samples[i]);
        }
    } else {
        for (std::size_t i = samples.size(); i-- > 0;) {
            const double p = double(i);
            if (p < from - kTol && p > to + kTol) out.push_back(samples[i]);
        }
    }
}

std::string position_msg(const char* what, std::size_t pos) {
    std::ostringstream os;
    os << "parse_sequence: " << what << " at token " << pos;
    return os.str();
}

}  // namespace

std::vector<CellQuadruple> parse_sequence(const std::vector<Token>& tokens,
                                          std::size_t separator_count) {
    if (tokens.empty()) throw ValidationError("parse_sequence: empty token list");
    if (tokens.front().kind != Token::Kind::Start)
        throw ValidationError(position_msg("missing start token", 0));
    if (tokens.back().kind != Token::Kind::End)
        throw ValidationError(position_msg("missing end token", tokens.size() - 1));

    std::vector<CellQuadruple> quads;
    std::size_t pos = 1;
    bool expect_quad = tokens.size() > 2;  // [Start, End] is the empty table
    while (pos + 1 < tokens.size() || expect_quad) {
        if (!quads.empty()) {
            if (pos >= tokens.size() - 1 || tokens[pos].kind != Token::Kind::Sep)
                throw ValidationError(position_msg("missing separator token", pos));
            ++pos;
        }
        std::size_t idx[4];
        for (int k = 0; k < 4; ++k, ++pos) {
            if (pos >= tokens.size() - 1 || tokens[pos].kind != Token::Kind::Index)
                throw ValidationError(position_msg("quadruple of wrong arity", pos));
            if (tokens[pos].index >= separator_count)
                throw ValidationError(position_msg("separator index out of range", pos));
            idx[k] = tokens[pos].index;
        }
        quads.push_back({idx[0], idx[1], idx[2], idx[3]});
        expect_quad = false;
    }
    return quads;
}

std::vector<Token> serialize_sequence(const std::vector<CellQuadruple>& quads) {
    std::vector<Token> out;
    out.push_back(Token::start());
    for (std::size_t i = 0; i < quads.size(); ++i) {
        if (i > 0) out.push_back(Token::sep());
        out.push_back(Token::idx(quads[i].top));
        out.push_back(Token::idx(quads[i].left));
        out.push_back(Token::idx(quads[i].bottom));
        out.push_back(Token::idx(quads[i].right));
    }
    out.push_back(Token::end());
    return out;
}

TableCell compose_cell(const CellQuadruple& quad, const OrderedSeparatorSet& separators,
                       double eps_ext) {
    const std::size_t n = separators.size();
    for (std::size_t idx : {quad.top, quad.left, quad.bottom, quad.right})
        if (idx >= n) throw DomainError("compose_cell: separator index out of range");
    if (!separators.is_horizontal(quad.top) || !separators.is_horizontal(quad.bottom))
        throw DomainError("compose_cell: top/bottom must index horizontal separators");
    if (separators.is_horizontal(quad.left) || separators.is_horizontal(quad.right))
        throw DomainError("compose_cell: left/right must index vertical separators");
    if (quad.left == quad.right || quad.top == quad.bottom)
        throw DomainError("compose_cell: degenerate quadruple");

    const SamplePoints& top = separators.separators[quad.top].samples;
    const SamplePoints& bottom = separators.separators[quad.bottom].samples;
    const SamplePoints& left = separators.separators[quad.left].samples;
    const SamplePoints& right = separators.separators[quad.right].samples;

    if (mean_y(top) >= mean_y(bottom))
        throw DomainError("compose_cell: top separator not above bottom");
    if (mean_x(left) >= mean_x(right))
        throw DomainError("compose_cell: left separator not left of right");

    const Crossing tl = required_crossing(top, left, eps_ext, "top-left");
    const Crossing tr = required_crossing(top, right, eps_ext, "top-right");
    const Crossing bl = required_crossing(bottom, left, eps_ext, "bottom-left");
    const Crossing br = required_crossing(bottom, right, eps_ext, "bottom-right");

    TableCell cell;
    cell.quad = quad;
    // Clockwise loop from the top-left corner.
    cell.polygon.push_back(tl.at);
    append_slice(cell.polygon, top, tl.param_a, tr.param_a);
    cell.polygon.push_back(tr.at);
    append_slice(cell.polygon, right, tr.param_b, br.param_b);
    cell.polygon.push_back(br.at);
    append_slice(cell.polygon, bottom, br.param_a, bl.param_a);
    cell.polygon.push_back(bl.at);
    append_slice(cell.polygon, left, bl.param_b, tl.param_b);

    cell.sr = quad.top;
    cell.er = quad.bottom;
    cell.sc = quad.left;
    cell.ec = quad.right;
    cell.row = quad.top;
    cell.rowspan = quad.bottom - quad.top;
    cell.col = quad.left - separators.n_h;
    cell.colspan = quad.right - quad.left;
    return cell;
}

TableStructure compose_structure(const std::vector<CellQuadruple>& quads,
                                 const OrderedSeparatorSet& separators, double eps_ext) {
    TableStructure structure;
    std::set<std::size_t> used_h, used_v;
    for (std::size_t i = 0; i < quads.size(); ++i) {
        try {
            structure.cells.push_back(compose_cell(quads[i], separators, eps_ext));
        } catch (const DomainError& e) {
            throw DomainError("compose_structure: cell " + std::to_string(i) + ": " + e.what());
        }
        used_h.insert(quads[i].top);
        used_h.insert(quads[i].bottom);
        used_v.insert(quads[i].left);
        used_v.insert(quads[i].right);
    }
    if (structure.cells.empty()) return structure;

    // Rows/cols come from the ranks of separators actually used; an unused
    // separator does not create an empty row.
    std::map<std::size_t, std::size_t> h_rank, v_rank;
    for (std::size_t idx : used_h) h_rank.emplace(idx, h_rank.size());
    for (std::size_t idx : used_v) v_rank.emplace(idx, v_rank.size());
    structure.n_rows = h_rank.size() - 1;
    structure.n_cols = v_rank.size() - 1;

    std::vector<bool> occupied(structure.n_rows * structure.n_cols, false);
    for (std::size_t i = 0; i < structure.cells.size(); ++i) {
        TableCell& cell = structure.cells[i];
        cell.row = h_rank.at(cell.sr);
        cell.rowspan = h_rank.at(cell.er) - cell.row;
        cell.col = v_rank.at(cell.sc);
        cell.colspan = v_rank.at(cell.ec) - cell.col;
        for (std::size_t r = cell.row; r < cell.row + cell.rowspan; ++r)
            for (std::size_t c = cell.col; c < cell.col + cell.colspan; ++c) {
                if (occupied[r * structure.n_cols + c])
                    throw DomainError("compose_structure: cell " + std::to_string(i) +
                                      " overlaps grid slot (" + std::to_string(r) + "," +
                                      std::to_string(c) + ")");
                occupied[r * structure.n_cols + c] = true;
            }
    }
    return structure;
}

std::vector<CellQuadruple> remap_quadruples(const std::vector<CellQuadruple>& quads,
                                            const OrderedSeparatorSet& old_set,
                                            const OrderedSeparatorSet& new_set,
                                            double max_dist) {
    if (old_set.size() == 0 || new_set.size() == 0)
        throw DomainError("remap_quadruples: empty separator set");

    std::map<std::size_t, std::size_t> mapping;
    auto remap_index = [&](std::size_t old_idx) {
        if (auto it = mapping.find(old_idx); it != mapping.end()) return it->second;
        if (old_idx >= old_set.size())
            throw DomainError("remap_quadruples: index " + std::to_string(old_idx) +
                              " out of range");
        const bool horizontal = old_set.is_horizontal(old_idx);
        const SamplePoints& ref = old_set.separators[old_idx].samples;
        double best = max_dist;
        std::optional<std::size_t> best_idx;
        for (std::size_t j = 0; j < new_set.size(); ++j) {
            if (new_set.is_horizontal(j) != horizontal) continue;
            const double d = separator_distance(ref, new_set.separators[j].samples);
            if (d < best) {
                best = d;
                best_idx = j;
            }
        }
        if (!best_idx)
            throw DomainError("remap_quadruples: no candidate within max_dist for index " +
                              std::to_string(old_idx));
        mapping.emplace(old_idx, *best_idx);
        return *best_idx;
    };

    std::vector<CellQuadruple> out;
    out.reserve(quads.size());
    for (const CellQuadruple& q : quads)
        out.push_back({remap_index(q.top), remap_index(q.left), remap_index(q.bottom),
                       remap_index(q.right)});
    return out;
}

std::string to_html(const TableStructure& structure) {
    std::map<std::pair<std::size_t, std::size_t>, const TableCell*> anchors;
    for (const TableCell& c : structure.cells) anchors[{c.row, c.col}] = &c;

    std::string html = "<table>";
    for (std::size_t r = 0; r < structure.n_rows; ++r) {
        html += "<tr>";
        for (std::size_t c = 0; c < structure.n_cols; ++c) {
            auto it = anchors.find({r, c});
            if (it == anchors.end()) continue;
            const TableCell& cell = *it->second;
            html += "<td";
            if (cell.rowspan > 1) html += " rowspan=\"" + std::to_string(cell.rowspan) + "\"";
            if (cell.colspan > 1) html += " colspan=\"" + std::to_string(cell.colspan) + "\"";
            html += "></td>";
        }
        html += "</tr>";
    }
    html += "</table>";
    return html;
}

std::string to_logical_text(const TableStructure& structure) {
    std::vector<const TableCell*> cells;
    for (const TableCell& c : structure.cells) cells.push_back(&c);
    std::sort(cells.begin(), cells.end(), [](const TableCell* a, const TableCell* b) {
        return std::tie(a->row, a->col) < std::tie(b->row, b->col);
    });
    std::string out;
    for (const TableCell* c : cells) {
        out += "SR" + std::to_string(c->sr) + "|SC" + std::to_string(c->sc) + "|ER" +
               std::to_string(c->er) + "|EC" + std::to_string(c->ec) + "\n";
    }
    return out;
}

}  // namespace tabweave
