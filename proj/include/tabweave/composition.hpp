#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "tabweave/selection.hpp"

namespace tabweave {

struct Token {
    enum class Kind { Start, Sep, End, Index };
    Kind kind = Kind::Index;
    std::size_t index = 0;

    static Token start() { return {Kind::Start, 0}; }
    static Token sep() { return {Kind::Sep, 0}; }
    static Token end() { return {Kind::End, 0}; }
    static Token idx(std::size_t k) { return {Kind::Index, k}; }
};

inline bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && (a.kind != Token::Kind::Index || a.index == b.index);
}

/// Anticlockwise-arranged separator indexes wrapping one cell.
struct CellQuadruple {
    std::size_t top = 0, left = 0, bottom = 0, right = 0;
};

inline bool operator==(const CellQuadruple& a, const CellQuadruple& b) {
    return a.top == b.top && a.left == b.left && a.bottom == b.bottom && a.right == b.right;
}

struct TableCell {
    CellQuadruple quad;
    std::vector<Point> polygon;  // closed loop, last vertex distinct from first
    std::size_t sr = 0, er = 0, sc = 0, ec = 0;  // logical separator indexes
    std::size_t row = 0, col = 0, rowspan = 1, colspan = 1;
};

struct TableStructure {
    std::vector<TableCell> cells;
    std::size_t n_rows = 0, n_cols = 0;
};

/// Grammar: Start, then quadruples of four Index tokens separated by single
/// Sep tokens, then End. Throws ValidationError naming the token position.
std::vector<CellQuadruple> parse_sequence(const std::vector<Token>& tokens,
                                          std::size_t separator_count);

std::vector<Token> serialize_sequence(const std::vector<CellQuadruple>& quads);

/// Builds one cell's boundary polygon from the four separator polylines,
/// clipped at their pairwise intersections. Terminal segments are extended
/// linearly by up to eps_ext pixels when polylines fall short.
TableCell compose_cell(const CellQuadruple& quad, const OrderedSeparatorSet& separators,
                       double eps_ext = 20.0);

TableStructure compose_structure(const std::vector<CellQuadruple>& quads,
                                 const OrderedSeparatorSet& separators, double eps_ext = 20.0);

/// Maps quadruple indexes from one separator set onto another by nearest
/// separator under separator_distance, direction-consistent, within max_dist.
std::vector<CellQuadruple> remap_quadruples(const std::vector<CellQuadruple>& quads,
                                            const OrderedSeparatorSet& old_set,
                                            const OrderedSeparatorSet& new_set,
                                            double max_dist = 5.0);

std::string to_html(const TableStructure& structure);
std::string to_logical_text(const TableStructure& structure);

}  // namespace tabweave
