#include "tabweave/markup.hpp"

#include <cctype>
#include <map>

#include "tabweave/errors.hpp"

namespace tabweave {

MarkupTree markup_from_structure(const TableStructure& structure) {
    std::map<std::pair<std::size_t, std::size_t>, const TableCell*> anchors;
    for (const TableCell& c : structure.cells) anchors[{c.row, c.col}] = &c;

    MarkupTree tree;
    tree.root.tag = "table";
    for (std::size_t r = 0; r < structure.n_rows; ++r) {
        MarkupNode row;
        row.tag = "tr";
        for (std::size_t c = 0; c < structure.n_cols; ++c) {
            auto it = anchors.find({r, c});
            if (it == anchors.end()) continue;
            MarkupNode cell;
            cell.tag = "td";
            cell.rowspan = it->second->rowspan;
            cell.colspan = it->second->colspan;
            row.children.push_back(std::move(cell));
        }
        tree.root.children.push_back(std::move(row));
    }
    return tree;
}

namespace {

struct HtmlCursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool accept(const std::string& literal) {
        if (text.compare(pos, literal.size(), literal) == 0) {
            pos += literal.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& literal) {
        if (!accept(literal))
            throw ValidationError("parse_table_html: expected '" + literal + "' at offset " +
                                  std::to_string(pos));
    }
};

MarkupNode parse_td(HtmlCursor& cur) {
    MarkupNode td;
    td.tag = "td";
    cur.expect("<td");
    cur.skip_ws();
    while (!cur.accept(">")) {
        std::string name;
        while (cur.pos < cur.text.size() && cur.text[cur.pos] != '=')
            name += cur.text[cur.pos++];
        cur.expect("=\"");
        std::string value;
        while (cur.pos < cur.text.size() && cur.text[cur.pos] != '"')
            value += cur.text[cur.pos++];
        cur.expect("\"");
        cur.skip_ws();
        if (name == "rowspan") td.rowspan = std::stoul(value);
        else if (name == "colspan") td.colspan = std::stoul(value);
        else throw ValidationError("parse_table_html: unknown attribute '" + name + "'");
    }
    while (cur.pos < cur.text.size() && cur.text[cur.pos] != '<') td.content += cur.text[cur.pos++];
    cur.expect("</td>");
    return td;
}

}  // namespace

MarkupTree parse_table_html(const std::string& html) {
    HtmlCursor cur{html};
    cur.skip_ws();
    cur.expect("<table>");
    MarkupTree tree;
    tree.root.tag = "table";
    while (true) {
        cur.skip_ws();
        if (cur.accept("</table>")) break;
        cur.expect("<tr>");
        MarkupNode row;
        row.tag = "tr";
        while (true) {
            cur.skip_ws();
            if (cur.accept("</tr>")) break;
            row.children.push_back(parse_td(cur));
        }
        tree.root.children.push_back(std::move(row));
    }
    cur.skip_ws();
    if (cur.pos != html.size())
        throw ValidationError("parse_table_html: trailing content at offset " +
                              std::to_string(cur.pos));
    return tree;
}

std::size_t tree_size(const MarkupNode& node) {
    std::size_t n = 1;
    for (const MarkupNode& c : node.children) n += tree_size(c);
    return n;
}

}  // namespace tabweave
