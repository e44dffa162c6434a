#pragma once
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabweave/assignment.hpp"
#include "tabweave/evaluation.hpp"
#include "tabweave/relation.hpp"
#include "tabweave/synthetic.hpp"

namespace tabweave {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Toolkit-wide knobs; defaults follow the pipeline's canonical constants.
struct PipelineConfig {
    std::size_t t_count = 15;
    double sigma = 5.0;
    double eps_ext = 20.0;
    double iou_thresh = 0.6;
    std::vector<int> strides = {8, 16, 32, 64};
    std::uint64_t seed = 0;
};

PipelineConfig config_from_json(const json& doc);
json config_to_json(const PipelineConfig& cfg);

// Separator lists share a document header: schema, canvas width/height.
json separator_list_to_json(const std::vector<Separator>& separators, double width,
                            double height);
std::vector<Separator> separator_list_from_json(const json& doc,
                                                std::optional<std::size_t> expected_t = {});
void canvas_from_json(const json& doc, double& width, double& height);

json ordered_set_to_json(const OrderedSeparatorSet& set, double width, double height);
OrderedSeparatorSet ordered_set_from_json(const json& doc,
                                          std::optional<std::size_t> expected_t = {});

json relation_set_to_json(const RelationSet& rel, double width, double height);
RelationSet relation_set_from_json(const json& doc);

json structure_to_json(const TableStructure& structure);
TableStructure structure_from_json(const json& doc);

json tokens_to_json(const std::vector<Token>& tokens);
std::vector<Token> tokens_from_json(const json& arr, const std::string& path = "/sequence");

json ground_truth_to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const json& doc);

json assignment_to_json(const Assignment& assign, const GroupAssignment* groups = nullptr);

json report_to_json(const EvalReport& report);

std::string to_pgm(const IntImage& image);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Canonical byte serialization of any document: compact JSON plus LF.
std::string dump_document(const json& doc);
json parse_document(const std::string& text);

}  // namespace tabweave
