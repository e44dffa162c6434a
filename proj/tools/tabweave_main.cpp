#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tabweave/errors.hpp"
#include "tabweave/io.hpp"

namespace tw = tabweave;
namespace fs = std::filesystem;

namespace {

tw::PipelineConfig load_config(const std::string& config_flag) {
    std::string path = config_flag;
    if (path.empty()) {
        if (const char* env = std::getenv("TABWEAVE_CONFIG")) path = env;
    }
    if (path.empty()) return {};
    return tw::config_from_json(tw::parse_document(tw::read_text_file(path)));
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> tokens;
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    return tokens;
}

tw::TableStructure load_structure_like(const std::string& path) {
    const tw::json doc = tw::parse_document(tw::read_text_file(path));
    if (doc.is_object() && doc.contains("html"))
        return tw::ground_truth_from_json(doc).structure;
    return tw::structure_from_json(doc);
}

tw::MarkupTree load_markup_like(const std::string& path) {
    const std::string text = tw::read_text_file(path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".html") == 0)
        return tw::parse_table_html(text);
    const tw::json doc = tw::parse_document(text);
    if (doc.is_object() && doc.contains("html"))
        return tw::parse_table_html(doc["html"].get<std::string>());
    return tw::markup_from_structure(tw::structure_from_json(doc));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tabweave: curved-separator table structure toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "pipeline config JSON");

    // fit
    auto* fit = app.add_subcommand("fit", "fit cubic Bezier control points to sample points");
    std::string fit_in, fit_out;
    fit->add_option("-i,--input", fit_in)->required();
    fit->add_option("-o,--output", fit_out)->required();

    // sample
    auto* sample = app.add_subcommand("sample", "resample separators from control points");
    std::string sample_in, sample_out;
    std::size_t sample_t = 0;
    sample->add_option("-i,--input", sample_in)->required();
    sample->add_option("-o,--output", sample_out)->required();
    sample->add_option("--t", sample_t, "sample count override");

    // nms
    auto* nms = app.add_subcommand("nms", "separator non-maximum suppression");
    std::string nms_in, nms_out;
    double nms_sigma = -1.0;
    nms->add_option("-i,--input", nms_in)->required();
    nms->add_option("-o,--output", nms_out)->required();
    nms->add_option("--sigma", nms_sigma, "suppression threshold in pixels");

    // order
    auto* order = app.add_subcommand("order", "order regularization into an indexed set");
    std::string order_in, order_out;
    order->add_option("-i,--input", order_in)->required();
    order->add_option("-o,--output", order_out)->required();

    // assign
    auto* assign = app.add_subcommand("assign", "Hungarian matching plus one-to-many groups");
    std::string assign_preds, assign_gts, assign_out;
    double w_cls = 1.0, w_reg = 1.0, assign_threshold = -1.0;
    assign->add_option("--preds", assign_preds)->required();
    assign->add_option("--gts", assign_gts)->required();
    assign->add_option("-o,--output", assign_out)->required();
    assign->add_option("--w-cls", w_cls);
    assign->add_option("--w-reg", w_reg);
    assign->add_option("--threshold", assign_threshold, "one-to-many neighbor threshold");

    // compose
    auto* compose = app.add_subcommand("compose", "compose structure, HTML and logical text");
    std::string compose_in, compose_out, compose_seps, compose_seq;
    compose->add_option("-i,--input", compose_in, "ground-truth document")->required();
    compose->add_option("-o,--output", compose_out, "output directory")->required();
    compose->add_option("--separators", compose_seps, "ordered separator set override");
    compose->add_option("--sequence", compose_seq, "sequence document override");

    // remap
    auto* remap = app.add_subcommand("remap", "remap a sequence onto another separator set");
    std::string remap_in, remap_new, remap_out;
    double remap_max_dist = -1.0;
    remap->add_option("-i,--input", remap_in, "ground-truth document")->required();
    remap->add_option("--new-separators", remap_new)->required();
    remap->add_option("-o,--output", remap_out)->required();
    remap->add_option("--max-dist", remap_max_dist);

    // relmask
    auto* relmask = app.add_subcommand("relmask", "rasterize relation masks and pyramids");
    std::string relmask_in, relmask_out;
    relmask->add_option("-i,--input", relmask_in, "relation set document")->required();
    relmask->add_option("-o,--output", relmask_out, "output directory")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic ground-truth table");
    std::string synth_out;
    std::size_t synth_rows = 2, synth_cols = 2, synth_t = 0;
    double merge_fraction = 0.0, cell_min = 30.0, cell_max = 80.0;
    double warp_amplitude = 0.0, warp_x_period = 500.0, warp_y_period = 500.0;
    double warp_phase1 = 0.0, warp_phase2 = 0.0;
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    synth->add_option("--rows", synth_rows);
    synth->add_option("--cols", synth_cols);
    synth->add_option("--merge-fraction", merge_fraction);
    synth->add_option("--cell-min", cell_min);
    synth->add_option("--cell-max", cell_max);
    synth->add_option("--t", synth_t);
    synth->add_option("--seed", synth_seed)->each([&](const std::string&) { synth_seed_set = true; });
    synth->add_option("--warp-amplitude", warp_amplitude);
    synth->add_option("--warp-x-period", warp_x_period);
    synth->add_option("--warp-y-period", warp_y_period);
    synth->add_option("--warp-phase1", warp_phase1);
    synth->add_option("--warp-phase2", warp_phase2);
    synth->add_option("-o,--output", synth_out)->required();

    // perturb
    auto* perturb = app.add_subcommand("perturb", "jittered scored separators from ground truth");
    std::string perturb_in, perturb_out;
    double jitter = 0.0, duplicate_prob = 0.0;
    std::uint64_t perturb_seed = 0;
    bool perturb_seed_set = false;
    perturb->add_option("-i,--input", perturb_in)->required();
    perturb->add_option("-o,--output", perturb_out)->required();
    perturb->add_option("--jitter", jitter);
    perturb->add_option("--duplicate-prob", duplicate_prob);
    perturb->add_option("--seed", perturb_seed)->each([&](const std::string&) {
        perturb_seed_set = true;
    });

    // eval-f1
    auto* eval_f1 = app.add_subcommand("eval-f1", "adjacency precision/recall/F1");
    std::string f1_pred, f1_gt, f1_out;
    double f1_iou = -1.0;
    eval_f1->add_option("--pred", f1_pred)->required();
    eval_f1->add_option("--gt", f1_gt)->required();
    eval_f1->add_option("-o,--output", f1_out);
    eval_f1->add_option("--iou-thresh", f1_iou);

    // eval-teds
    auto* eval_teds = app.add_subcommand("eval-teds", "tree-edit-distance similarity");
    std::string teds_pred, teds_gt, teds_out;
    bool teds_content = false;
    eval_teds->add_option("--pred", teds_pred)->required();
    eval_teds->add_option("--gt", teds_gt)->required();
    eval_teds->add_option("-o,--output", teds_out);
    eval_teds->add_flag("--content", teds_content, "compare cell contents as well");

    // eval-bleu
    auto* eval_bleu = app.add_subcommand("eval-bleu", "BLEU over whitespace token files");
    std::string bleu_pred, bleu_gt, bleu_out;
    std::size_t bleu_max_n = 4;
    eval_bleu->add_option("--pred", bleu_pred)->required();
    eval_bleu->add_option("--gt", bleu_gt)->required();
    eval_bleu->add_option("-o,--output", bleu_out);
    eval_bleu->add_option("--max-n", bleu_max_n);

    // kl
    auto* kl = app.add_subcommand("kl", "KL-divergence attention diversity profile");
    std::string kl_in, kl_out;
    kl->add_option("-i,--input", kl_in, "JSON row-stochastic matrix")->required();
    kl->add_option("-o,--output", kl_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 64;
    }

    try {
        const tw::PipelineConfig cfg = load_config(config_path);
        const double sigma = nms_sigma > 0.0 ? nms_sigma : cfg.sigma;

        if (*fit) {
            const tw::json doc = tw::parse_document(tw::read_text_file(fit_in));
            std::vector<tw::Separator> seps = tw::separator_list_from_json(doc);
            for (std::size_t i = 0; i < seps.size(); ++i) {
                if (seps[i].samples.size() < 4)
                    throw tw::ValidationError("fit needs at least 4 points at /separators/" +
                                              std::to_string(i) + "/samples");
                seps[i].control = tw::fit_least_squares(seps[i].samples).control;
            }
            double w = 0, h = 0;
            tw::canvas_from_json(doc, w, h);
            tw::write_text_file(fit_out, tw::dump_document(tw::separator_list_to_json(seps, w, h)));
        } else if (*sample) {
            const tw::json doc = tw::parse_document(tw::read_text_file(sample_in));
            std::vector<tw::Separator> seps = tw::separator_list_from_json(doc);
            const std::size_t t_count = sample_t ? sample_t : cfg.t_count;
            for (std::size_t i = 0; i < seps.size(); ++i) {
                if (!seps[i].control)
                    throw tw::ValidationError("missing control points at /separators/" +
                                              std::to_string(i) + "/control");
                seps[i].samples = tw::sample_uniform(*seps[i].control, t_count);
            }
            double w = 0, h = 0;
            tw::canvas_from_json(doc, w, h);
            tw::write_text_file(sample_out,
                                tw::dump_document(tw::separator_list_to_json(seps, w, h)));
        } else if (*nms) {
            const tw::json doc = tw::parse_document(tw::read_text_file(nms_in));
            const std::vector<tw::Separator> seps =
                tw::separator_list_from_json(doc, cfg.t_count);
            double w = 0, h = 0;
            tw::canvas_from_json(doc, w, h);
            tw::write_text_file(
                nms_out,
                tw::dump_document(tw::separator_list_to_json(tw::separator_nms(seps, sigma), w, h)));
        } else if (*order) {
            const tw::json doc = tw::parse_document(tw::read_text_file(order_in));
            const std::vector<tw::Separator> seps = tw::separator_list_from_json(doc);
            double w = 0, h = 0;
            tw::canvas_from_json(doc, w, h);
            tw::write_text_file(
                order_out, tw::dump_document(tw::ordered_set_to_json(tw::order_regularize(seps), w, h)));
        } else if (*assign) {
            const std::vector<tw::Separator> preds = tw::separator_list_from_json(
                tw::parse_document(tw::read_text_file(assign_preds)));
            const std::vector<tw::Separator> gts =
                tw::separator_list_from_json(tw::parse_document(tw::read_text_file(assign_gts)));
            const tw::Assignment matched = tw::match_one_to_one(preds, gts, w_cls, w_reg);
            const double threshold = assign_threshold > 0.0 ? assign_threshold : cfg.sigma;
            const tw::GroupAssignment groups = tw::expand_one_to_many(matched, preds, threshold);
            tw::write_text_file(assign_out,
                                tw::dump_document(tw::assignment_to_json(matched, &groups)));
        } else if (*compose) {
            const tw::GroundTruth gt =
                tw::ground_truth_from_json(tw::parse_document(tw::read_text_file(compose_in)));
            tw::OrderedSeparatorSet seps = gt.separators;
            if (!compose_seps.empty())
                seps = tw::ordered_set_from_json(
                    tw::parse_document(tw::read_text_file(compose_seps)));
            std::vector<tw::Token> tokens = gt.sequence;
            if (!compose_seq.empty()) {
                const tw::json seq_doc = tw::parse_document(tw::read_text_file(compose_seq));
                tokens = tw::tokens_from_json(seq_doc.is_object() ? seq_doc.at("sequence") : seq_doc);
            }
            const std::vector<tw::CellQuadruple> quads = tw::parse_sequence(tokens, seps.size());
            const tw::TableStructure structure = tw::compose_structure(quads, seps, cfg.eps_ext);
            fs::create_directories(compose_out);
            tw::write_text_file((fs::path(compose_out) / "structure.json").string(),
                                tw::dump_document(tw::structure_to_json(structure)));
            tw::write_text_file((fs::path(compose_out) / "table.html").string(),
                                tw::to_html(structure) + "\n");
            tw::write_text_file((fs::path(compose_out) / "logical.txt").string(),
                                tw::to_logical_text(structure));
        } else if (*remap) {
            const tw::GroundTruth gt =
                tw::ground_truth_from_json(tw::parse_document(tw::read_text_file(remap_in)));
            const tw::OrderedSeparatorSet new_set =
                tw::ordered_set_from_json(tw::parse_document(tw::read_text_file(remap_new)));
            const std::vector<tw::CellQuadruple> quads =
                tw::parse_sequence(gt.sequence, gt.separators.size());
            const double max_dist = remap_max_dist > 0.0 ? remap_max_dist : cfg.sigma;
            const std::vector<tw::CellQuadruple> remapped =
                tw::remap_quadruples(quads, gt.separators, new_set, max_dist);
            tw::json out;
            out["schema"] = tw::kSchemaVersion;
            out["sequence"] = tw::tokens_to_json(tw::serialize_sequence(remapped));
            tw::write_text_file(remap_out, tw::dump_document(out));
        } else if (*relmask) {
            const tw::json doc = tw::parse_document(tw::read_text_file(relmask_in));
            const tw::RelationSet rel = tw::relation_set_from_json(doc);
            double w = 0, h = 0;
            tw::canvas_from_json(doc, w, h);
            const tw::RelationInstances inst = tw::build_relation_instances(rel);
            fs::create_directories(relmask_out);
            auto emit = [&](const char* name,
                            const std::vector<std::vector<std::size_t>>& instances) {
                const tw::IntImage base = tw::rasterize_relation_mask(
                    rel.boxes, instances, std::size_t(w), std::size_t(h));
                const tw::MaskPyramid pyr = tw::build_mask_pyramid(base);
                tw::write_text_file((fs::path(relmask_out) / (std::string(name) + ".pgm")).string(),
                                    tw::to_pgm(pyr.base));
                for (const auto& [stride, level] : pyr.levels)
                    tw::write_text_file((fs::path(relmask_out) /
                                         (std::string(name) + "_s" + std::to_string(stride) + ".pgm"))
                                            .string(),
                                        tw::to_pgm(level));
            };
            emit("row", inst.row_instances);
            emit("col", inst.col_instances);
        } else if (*synth) {
            tw::GridSpec spec;
            spec.rows = synth_rows;
            spec.cols = synth_cols;
            spec.merge_fraction = merge_fraction;
            spec.cell_size_range = {cell_min, cell_max};
            spec.t_count = synth_t ? synth_t : cfg.t_count;
            spec.seed = synth_seed_set ? synth_seed : cfg.seed;
            tw::GroundTruth gt = tw::generate_grid(spec);
            if (warp_amplitude > 0.0) {
                tw::WarpField warp{warp_amplitude, warp_x_period, warp_y_period, warp_phase1,
                                   warp_phase2};
                gt = tw::apply_warp(gt, warp);
            }
            tw::write_text_file(synth_out, tw::dump_document(tw::ground_truth_to_json(gt)));
        } else if (*perturb) {
            const tw::GroundTruth gt =
                tw::ground_truth_from_json(tw::parse_document(tw::read_text_file(perturb_in)));
            const std::uint64_t seed = perturb_seed_set ? perturb_seed : cfg.seed;
            const std::vector<tw::Separator> out = tw::perturb(gt, jitter, duplicate_prob, seed);
            tw::write_text_file(
                perturb_out,
                tw::dump_document(tw::separator_list_to_json(out, gt.width, gt.height)));
        } else if (*eval_f1) {
            const tw::TableStructure pred = load_structure_like(f1_pred);
            const tw::TableStructure gt = load_structure_like(f1_gt);
            const double iou = f1_iou > 0.0 ? f1_iou : cfg.iou_thresh;
            const tw::EvalReport report = tw::adjacency_f1(pred, gt, iou);
            std::cout << "precision=" << report.precision << " recall=" << report.recall
                      << " f1=" << report.f1 << "\n";
            if (!f1_out.empty())
                tw::write_text_file(f1_out, tw::dump_document(tw::report_to_json(report)));
        } else if (*eval_teds) {
            const tw::MarkupTree pred = load_markup_like(teds_pred);
            const tw::MarkupTree gt = load_markup_like(teds_gt);
            tw::EvalReport report;
            report.teds = tw::teds(pred, gt, !teds_content);
            std::cout << "teds=" << *report.teds << "\n";
            if (!teds_out.empty())
                tw::write_text_file(teds_out, tw::dump_document(tw::report_to_json(report)));
        } else if (*eval_bleu) {
            tw::EvalReport report;
            report.bleu = tw::bleu(split_tokens(tw::read_text_file(bleu_pred)),
                                   split_tokens(tw::read_text_file(bleu_gt)), bleu_max_n);
            std::cout << "bleu=" << *report.bleu << "\n";
            if (!bleu_out.empty())
                tw::write_text_file(bleu_out, tw::dump_document(tw::report_to_json(report)));
        } else if (*kl) {
            const tw::json doc = tw::parse_document(tw::read_text_file(kl_in));
            const tw::json& matrix = doc.is_object() ? doc.at("rows") : doc;
            std::vector<std::vector<double>> rows;
            for (const auto& row : matrix) rows.push_back(row.get<std::vector<double>>());
            const std::vector<double> profile = tw::kl_profile(rows);
            tw::json out;
            out["schema"] = tw::kSchemaVersion;
            out["profile"] = profile;
            std::cout << out["profile"].dump() << "\n";
            if (!kl_out.empty()) tw::write_text_file(kl_out, tw::dump_document(out));
        }
    } catch (const tw::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 2;
    } catch (const tw::DomainError& e) {
        std::cerr << "error: domain: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
