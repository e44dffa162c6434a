#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "tabweave/composition.hpp"

namespace tabweave {

/// Rooted ordered tree over HTML table markup. The root tag is "table";
/// cell nodes carry rowspan/colspan and optional content text.
struct MarkupNode {
    std::string tag;
    std::size_t rowspan = 1, colspan = 1;
    std::string content;
    std::vector<MarkupNode> children;
};

struct MarkupTree {
    MarkupNode root;
};

MarkupTree markup_from_structure(const TableStructure& structure);

/// Parses the table-markup subset this toolkit emits:
/// <table>, <tr>, <td rowspan=".." colspan="..">text</td>.
MarkupTree parse_table_html(const std::string& html);

std::size_t tree_size(const MarkupNode& node);

}  // namespace tabweave
