#include "tabweave/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tabweave/errors.hpp"

namespace tabweave {

namespace {

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ValidationError("expected object at " + path);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& required,
                const std::set<std::string>& optional = {}) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        if (!required.count(key) && !optional.count(key))
            throw ValidationError("unknown field at " + path + "/" + key);
    }
    for (const std::string& key : required)
        if (!j.contains(key)) throw ValidationError("missing field at " + path + "/" + key);
}

void check_schema(const json& doc, const std::string& path) {
    if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
        doc["schema"].get<int>() != kSchemaVersion)
        throw ValidationError("unsupported schema version at " + path + "/schema");
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError("expected number at " + path);
    return j.get<double>();
}

std::size_t get_index(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) throw ValidationError("expected non-negative integer at " + path);
    return j.get<std::size_t>();
}

Point point_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("expected [x,y] at " + path);
    return {get_number(j[0], path + "/0"), get_number(j[1], path + "/1")};
}

json point_to_json(Point p) { return json::array({p.x, p.y}); }

json box_to_json(const Box& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

Box box_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4)
        throw ValidationError("expected [x0,y0,x1,y1] at " + path);
    return {get_number(j[0], path), get_number(j[1], path), get_number(j[2], path),
            get_number(j[3], path)};
}

std::string class_name(SeparatorClass cls) {
    switch (cls) {
        case SeparatorClass::Explicit: return "explicit";
        case SeparatorClass::Implicit: return "implicit";
        case SeparatorClass::Background: return "background";
    }
    return "explicit";
}

SeparatorClass class_from_name(const std::string& name, const std::string& path) {
    if (name == "explicit") return SeparatorClass::Explicit;
    if (name == "implicit") return SeparatorClass::Implicit;
    if (name == "background") return SeparatorClass::Background;
    throw ValidationError("unknown separator class at " + path);
}

json separator_to_json(const Separator& s) {
    json j;
    j["cls"] = class_name(s.cls);
    j["score"] = s.score;
    json samples = json::array();
    for (const Point& p : s.samples) samples.push_back(point_to_json(p));
    j["samples"] = std::move(samples);
    if (s.control) {
        json ctrl = json::array();
        for (const Point& p : s.control->p) ctrl.push_back(point_to_json(p));
        j["control"] = std::move(ctrl);
    }
    return j;
}

Separator separator_from_json(const json& j, const std::string& path,
                              std::optional<std::size_t> expected_t) {
    check_keys(j, path, {"cls", "score", "samples"}, {"control"});
    Separator s;
    s.cls = class_from_name(j["cls"].get<std::string>(), path + "/cls");
    s.score = get_number(j["score"], path + "/score");
    if (s.score < 0.0 || s.score > 1.0)
        throw ValidationError("score outside [0,1] at " + path + "/score");
    if (!j["samples"].is_array() || j["samples"].size() < 2)
        throw ValidationError("expected at least 2 sample points at " + path + "/samples");
    if (expected_t && j["samples"].size() != *expected_t)
        throw ValidationError("expected " + std::to_string(*expected_t) + " sample points at " +
                              path + "/samples");
    for (std::size_t i = 0; i < j["samples"].size(); ++i)
        s.samples.push_back(
            point_from_json(j["samples"][i], path + "/samples/" + std::to_string(i)));
    if (j.contains("control")) {
        if (!j["control"].is_array() || j["control"].size() != 4)
            throw ValidationError("expected 4 control points at " + path + "/control");
        ControlQuad ctrl;
        for (std::size_t i = 0; i < 4; ++i)
            ctrl.p[i] = point_from_json(j["control"][i], path + "/control/" + std::to_string(i));
        s.control = ctrl;
    }
    return s;
}

json separators_array(const std::vector<Separator>& separators) {
    json arr = json::array();
    for (const Separator& s : separators) arr.push_back(separator_to_json(s));
    return arr;
}

std::vector<Separator> separators_from_array(const json& arr, const std::string& path,
                                             std::optional<std::size_t> expected_t) {
    if (!arr.is_array()) throw ValidationError("expected array at " + path);
    std::vector<Separator> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(separator_from_json(arr[i], path + "/" + std::to_string(i), expected_t));
    return out;
}

}  // namespace

PipelineConfig config_from_json(const json& doc) {
    check_keys(doc, "", {"schema"},
               {"t", "sigma", "eps_ext", "iou_thresh", "strides", "seed"});
    check_schema(doc, "");
    PipelineConfig cfg;
    if (doc.contains("t")) cfg.t_count = get_index(doc["t"], "/t");
    if (doc.contains("sigma")) cfg.sigma = get_number(doc["sigma"], "/sigma");
    if (doc.contains("eps_ext")) cfg.eps_ext = get_number(doc["eps_ext"], "/eps_ext");
    if (doc.contains("iou_thresh")) cfg.iou_thresh = get_number(doc["iou_thresh"], "/iou_thresh");
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("strides")) {
        cfg.strides.clear();
        for (std::size_t i = 0; i < doc["strides"].size(); ++i) {
            const json& s = doc["strides"][i];
            if (!s.is_number_integer() || s.get<int>() <= 0)
                throw ValidationError("expected positive integer at /strides/" +
                                      std::to_string(i));
            cfg.strides.push_back(s.get<int>());
        }
    }
    return cfg;
}

json config_to_json(const PipelineConfig& cfg) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["t"] = cfg.t_count;
    doc["sigma"] = cfg.sigma;
    doc["eps_ext"] = cfg.eps_ext;
    doc["iou_thresh"] = cfg.iou_thresh;
    doc["strides"] = cfg.strides;
    doc["seed"] = cfg.seed;
    return doc;
}

json separator_list_to_json(const std::vector<Separator>& separators, double width,
                            double height) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["width"] = width;
    doc["height"] = height;
    doc["separators"] = separators_array(separators);
    return doc;
}

std::vector<Separator> separator_list_from_json(const json& doc,
                                                std::optional<std::size_t> expected_t) {
    check_keys(doc, "", {"schema", "width", "height", "separators"});
    check_schema(doc, "");
    return separators_from_array(doc["separators"], "/separators", expected_t);
}

void canvas_from_json(const json& doc, double& width, double& height) {
    width = get_number(doc.at("width"), "/width");
    height = get_number(doc.at("height"), "/height");
}

json ordered_set_to_json(const OrderedSeparatorSet& set, double width, double height) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["width"] = width;
    doc["height"] = height;
    doc["n_h"] = set.n_h;
    doc["separators"] = separators_array(set.separators);
    return doc;
}

OrderedSeparatorSet ordered_set_from_json(const json& doc,
                                          std::optional<std::size_t> expected_t) {
    check_keys(doc, "", {"schema", "width", "height", "n_h", "separators"});
    check_schema(doc, "");
    OrderedSeparatorSet set;
    set.n_h = get_index(doc["n_h"], "/n_h");
    set.separators = separators_from_array(doc["separators"], "/separators", expected_t);
    if (set.n_h > set.separators.size())
        throw ValidationError("n_h exceeds separator count at /n_h");
    return set;
}

json relation_set_to_json(const RelationSet& rel, double width, double height) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["width"] = width;
    doc["height"] = height;
    doc["n"] = rel.n;
    json boxes = json::array();
    for (const Box& b : rel.boxes) boxes.push_back(box_to_json(b));
    doc["boxes"] = std::move(boxes);
    json rows = json::array(), cols = json::array();
    for (const auto& [i, j] : rel.row_pairs) rows.push_back(json::array({i, j}));
    for (const auto& [i, j] : rel.col_pairs) cols.push_back(json::array({i, j}));
    doc["row_pairs"] = std::move(rows);
    doc["col_pairs"] = std::move(cols);
    return doc;
}

RelationSet relation_set_from_json(const json& doc) {
    check_keys(doc, "", {"schema", "width", "height", "n", "boxes", "row_pairs", "col_pairs"});
    check_schema(doc, "");
    RelationSet rel;
    rel.n = get_index(doc["n"], "/n");
    for (std::size_t i = 0; i < doc["boxes"].size(); ++i)
        rel.boxes.push_back(box_from_json(doc["boxes"][i], "/boxes/" + std::to_string(i)));
    if (rel.boxes.size() != rel.n) throw ValidationError("box count differs from n at /boxes");
    auto read_pairs = [&](const char* key) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        const json& arr = doc[key];
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string path = std::string("/") + key + "/" + std::to_string(k);
            if (!arr[k].is_array() || arr[k].size() != 2)
                throw ValidationError("expected [i,j] at " + path);
            std::size_t i = get_index(arr[k][0], path), j = get_index(arr[k][1], path);
            if (i >= rel.n || j >= rel.n)
                throw ValidationError("pair index out of range at " + path);
            if (i > j) std::swap(i, j);
            pairs.emplace_back(i, j);
        }
        return pairs;
    };
    rel.row_pairs = read_pairs("row_pairs");
    rel.col_pairs = read_pairs("col_pairs");
    return rel;
}

json structure_to_json(const TableStructure& structure) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["n_rows"] = structure.n_rows;
    doc["n_cols"] = structure.n_cols;
    json cells = json::array();
    for (const TableCell& c : structure.cells) {
        json cell;
        cell["quad"] = json::array({c.quad.top, c.quad.left, c.quad.bottom, c.quad.right});
        json poly = json::array();
        for (const Point& p : c.polygon) poly.push_back(point_to_json(p));
        cell["polygon"] = std::move(poly);
        cell["logical"] = json::array({c.sr, c.er, c.sc, c.ec});
        cell["grid"] = json::array({c.row, c.col, c.rowspan, c.colspan});
        cells.push_back(std::move(cell));
    }
    doc["cells"] = std::move(cells);
    return doc;
}

TableStructure structure_from_json(const json& doc) {
    check_keys(doc, "", {"schema", "n_rows", "n_cols", "cells"});
    check_schema(doc, "");
    TableStructure structure;
    structure.n_rows = get_index(doc["n_rows"], "/n_rows");
    structure.n_cols = get_index(doc["n_cols"], "/n_cols");
    for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
        const std::string path = "/cells/" + std::to_string(i);
        const json& j = doc["cells"][i];
        check_keys(j, path, {"quad", "polygon", "logical", "grid"});
        TableCell cell;
        if (!j["quad"].is_array() || j["quad"].size() != 4)
            throw ValidationError("expected 4 indexes at " + path + "/quad");
        cell.quad = {get_index(j["quad"][0], path), get_index(j["quad"][1], path),
                     get_index(j["quad"][2], path), get_index(j["quad"][3], path)};
        for (std::size_t k = 0; k < j["polygon"].size(); ++k)
            cell.polygon.push_back(
                point_from_json(j["polygon"][k], path + "/polygon/" + std::to_string(k)));
        if (!j["logical"].is_array() || j["logical"].size() != 4)
            throw ValidationError("expected 4 indexes at " + path + "/logical");
        cell.sr = get_index(j["logical"][0], path);
        cell.er = get_index(j["logical"][1], path);
        cell.sc = get_index(j["logical"][2], path);
        cell.ec = get_index(j["logical"][3], path);
        if (!j["grid"].is_array() || j["grid"].size() != 4)
            throw ValidationError("expected 4 integers at " + path + "/grid");
        cell.row = get_index(j["grid"][0], path);
        cell.col = get_index(j["grid"][1], path);
        cell.rowspan = get_index(j["grid"][2], path);
        cell.colspan = get_index(j["grid"][3], path);
        structure.cells.push_back(std::move(cell));
    }
    return structure;
}

json tokens_to_json(const std::vector<Token>& tokens) {
    json arr = json::array();
    for (const Token& t : tokens) {
        switch (t.kind) {
            case Token::Kind::Start: arr.push_back("<s>"); break;
            case Token::Kind::Sep: arr.push_back("<sep>"); break;
            case Token::Kind::End: arr.push_back("<e>"); break;
            case Token::Kind::Index: arr.push_back(t.index); break;
        }
    }
    return arr;
}

std::vector<Token> tokens_from_json(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ValidationError("expected array at " + path);
    std::vector<Token> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& j = arr[i];
        const std::string item_path = path + "/" + std::to_string(i);
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "<s>") out.push_back(Token::start());
            else if (s == "<sep>") out.push_back(Token::sep());
            else if (s == "<e>") out.push_back(Token::end());
            else throw ValidationError("unknown token at " + item_path);
        } else {
            out.push_back(Token::idx(get_index(j, item_path)));
        }
    }
    return out;
}

json ground_truth_to_json(const GroundTruth& gt) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["width"] = gt.width;
    doc["height"] = gt.height;
    doc["seed"] = gt.seed;
    json seps;
    seps["n_h"] = gt.separators.n_h;
    seps["separators"] = separators_array(gt.separators.separators);
    doc["separators"] = std::move(seps);
    json elements = json::array();
    for (const Box& b : gt.elements) elements.push_back(box_to_json(b));
    doc["elements"] = std::move(elements);
    json rows = json::array(), cols = json::array();
    for (const auto& [i, j] : gt.relations.row_pairs) rows.push_back(json::array({i, j}));
    for (const auto& [i, j] : gt.relations.col_pairs) cols.push_back(json::array({i, j}));
    doc["row_pairs"] = std::move(rows);
    doc["col_pairs"] = std::move(cols);
    doc["sequence"] = tokens_to_json(gt.sequence);
    doc["structure"] = structure_to_json(gt.structure);
    doc["html"] = gt.html;
    return doc;
}

GroundTruth ground_truth_from_json(const json& doc) {
    check_keys(doc, "",
               {"schema", "width", "height", "seed", "separators", "elements", "row_pairs",
                "col_pairs", "sequence", "structure", "html"});
    check_schema(doc, "");
    GroundTruth gt;
    gt.width = get_number(doc["width"], "/width");
    gt.height = get_number(doc["height"], "/height");
    gt.seed = doc["seed"].get<std::uint64_t>();
    check_keys(doc["separators"], "/separators", {"n_h", "separators"});
    gt.separators.n_h = get_index(doc["separators"]["n_h"], "/separators/n_h");
    gt.separators.separators =
        separators_from_array(doc["separators"]["separators"], "/separators/separators", {});
    for (std::size_t i = 0; i < doc["elements"].size(); ++i)
        gt.elements.push_back(box_from_json(doc["elements"][i], "/elements/" + std::to_string(i)));
    gt.relations.n = gt.elements.size();
    gt.relations.boxes = gt.elements;
    auto read_pairs = [&](const char* key) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        const json& arr = doc.at(key);
        for (std::size_t k = 0; k < arr.size(); ++k)
            pairs.emplace_back(get_index(arr[k][0], key), get_index(arr[k][1], key));
        return pairs;
    };
    gt.relations.row_pairs = read_pairs("row_pairs");
    gt.relations.col_pairs = read_pairs("col_pairs");
    gt.sequence = tokens_from_json(doc["sequence"]);
    gt.structure = structure_from_json(doc["structure"]);
    gt.html = doc["html"].get<std::string>();
    return gt;
}

json assignment_to_json(const Assignment& assign, const GroupAssignment* groups) {
    json doc;
    doc["schema"] = kSchemaVersion;
    json pairs = json::array();
    for (const auto& [p, g] : assign.pairs) pairs.push_back(json::array({p, g}));
    doc["pairs"] = std::move(pairs);
    doc["unmatched_preds"] = assign.unmatched_preds;
    doc["unmatched_gts"] = assign.unmatched_gts;
    doc["total_cost"] = assign.total_cost;
    if (groups) {
        json g = json::array();
        for (const auto& [gt_idx, members] : groups->groups)
            g.push_back(json::array({gt_idx, members}));
        doc["groups"] = std::move(g);
    }
    return doc;
}

json report_to_json(const EvalReport& report) {
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["precision"] = report.precision;
    doc["recall"] = report.recall;
    doc["f1"] = report.f1;
    doc["true_positive"] = report.true_positive;
    doc["false_positive"] = report.false_positive;
    doc["false_negative"] = report.false_negative;
    if (report.teds) doc["teds"] = *report.teds;
    if (report.bleu) doc["bleu"] = *report.bleu;
    return doc;
}

std::string to_pgm(const IntImage& image) {
    int32_t max_val = 1;
    for (int32_t v : image.pixels) max_val = std::max(max_val, v);
    std::ostringstream os;
    os << "P2\n" << image.width << " " << image.height << "\n" << max_val << "\n";
    for (std::size_t y = 0; y < image.height; ++y) {
        for (std::size_t x = 0; x < image.width; ++x) {
            if (x) os << " ";
            os << image.at(x, y);
        }
        os << "\n";
    }
    return os.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

std::string dump_document(const json& doc) { return doc.dump() + "\n"; }

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace tabweave
