#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tabweave/errors.hpp"
#include "tabweave/evaluation.hpp"
#include "tabweave/markup.hpp"
#include "tabweave/selection.hpp"

using namespace tabweave;

namespace {

Separator line(Point a, Point b, std::size_t t = 2) {
    Separator s;
    for (std::size_t i = 0; i < t; ++i)
        s.samples.push_back(a + (double(i) / double(t - 1)) * (b - a));
    return s;
}

OrderedSeparatorSet grid_3x3() {
    OrderedSeparatorSet set;
    set.n_h = 3;
    set.separators = {line({0, 0}, {100, 0}),     line({0, 50}, {100, 50}),
                      line({0, 100}, {100, 100}), line({0, 0}, {0, 100}),
                      line({50, 0}, {50, 100}),   line({100, 0}, {100, 100})};
    return set;
}

std::size_t forest_size(const std::vector<MarkupNode>& forest) {
    std::size_t n = 0;
    for (const MarkupNode& t : forest) n += tree_size(t);
    return n;
}

double rename_cost(const MarkupNode& a, const MarkupNode& b) {
    return (a.tag == b.tag && a.rowspan == b.rowspan && a.colspan == b.colspan) ? 0.0 : 1.0;
}

// Exponential-time ordered forest edit distance, fine for tiny trees.
double oracle_forest_dist(const std::vector<MarkupNode>& f1, const std::vector<MarkupNode>& f2) {
    if (f1.empty()) return double(forest_size(f2));
    if (f2.empty()) return double(forest_size(f1));

    const MarkupNode& v = f1.back();
    const MarkupNode& w = f2.back();

    std::vector<MarkupNode> f1_open(f1.begin(), f1.end() - 1);
    f1_open.insert(f1_open.end(), v.children.begin(), v.children.end());
    std::vector<MarkupNode> f2_open(f2.begin(), f2.end() - 1);
    f2_open.insert(f2_open.end(), w.children.begin(), w.children.end());

    const double del = oracle_forest_dist(f1_open, f2) + 1.0;
    const double ins = oracle_forest_dist(f1, f2_open) + 1.0;
    const double sub = oracle_forest_dist(std::vector<MarkupNode>(f1.begin(), f1.end() - 1),
                                          std::vector<MarkupNode>(f2.begin(), f2.end() - 1)) +
                       oracle_forest_dist(v.children, w.children) + rename_cost(v, w);
    return std::min({del, ins, sub});
}

double oracle_tree_dist(const MarkupTree& a, const MarkupTree& b) {
    return oracle_forest_dist({a.root}, {b.root});
}

MarkupTree random_tree(std::mt19937_64& rng, std::size_t n_nodes) {
    static const std::vector<std::string> tags = {"table", "tr", "td"};
    MarkupTree tree;
    tree.root.tag = "table";
    std::vector<MarkupNode*> nodes = {&tree.root};
    for (std::size_t i = 1; i < n_nodes; ++i) {
        MarkupNode child;
        child.tag = tags[rng() % tags.size()];
        child.rowspan = 1 + rng() % 3;
        child.colspan = 1 + rng() % 3;
        MarkupNode* parent = nodes[rng() % nodes.size()];
        parent->children.push_back(child);
        // Pointers into earlier siblings may dangle after push_back, so
        // rebuild the node list by walking the tree.
        nodes.clear();
        std::vector<MarkupNode*> stack = {&tree.root};
        while (!stack.empty()) {
            MarkupNode* cur = stack.back();
            stack.pop_back();
            nodes.push_back(cur);
            for (MarkupNode& c : cur->children) stack.push_back(&c);
        }
    }
    return tree;
}

}  // namespace

TEST_CASE("teds examples") {
    MarkupTree single;
    single.root.tag = "table";
    SUBCASE("identical trees") {
        CHECK(teds(single, single) == doctest::Approx(1.0));
    }
    SUBCASE("single nodes with different tags") {
        MarkupTree other;
        other.root.tag = "tr";
        CHECK(teds(single, other) == doctest::Approx(0.0));
    }
    SUBCASE("extra leaf costs one insertion") {
        MarkupTree a;
        a.root.tag = "table";
        a.root.children.push_back({"tr", 1, 1, "", {}});
        a.root.children[0].children.push_back({"td", 1, 1, "", {}});
        MarkupTree b = a;
        b.root.children[0].children.push_back({"td", 1, 1, "", {}});
        CHECK(tree_edit_distance(a, b) == doctest::Approx(1.0));
        CHECK(teds(a, b) == doctest::Approx(0.75));
    }
    SUBCASE("span mismatch is a substitution") {
        MarkupTree a;
        a.root.tag = "table";
        a.root.children.push_back({"td", 1, 1, "", {}});
        MarkupTree b = a;
        b.root.children[0].rowspan = 2;
        CHECK(tree_edit_distance(a, b) == doctest::Approx(1.0));
        CHECK(teds(a, b) == doctest::Approx(0.5));
    }
    SUBCASE("content mode adds normalized string distance") {
        MarkupTree a;
        a.root.tag = "table";
        a.root.children.push_back({"td", 1, 1, "ab", {}});
        MarkupTree b = a;
        b.root.children[0].content = "ad";
        CHECK(teds(a, b, true) == doctest::Approx(1.0));
        CHECK(teds(a, b, false) == doctest::Approx(1.0 - 0.5 / 2.0));
    }
}

TEST_CASE("tree_edit_distance matches the brute-force oracle on small trees") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const MarkupTree a = random_tree(rng, 1 + rng() % 8);
        const MarkupTree b = random_tree(rng, 1 + rng() % 8);
        const double expected = oracle_tree_dist(a, b);
        CHECK(std::fabs(tree_edit_distance(a, b) - expected) < 1e-9);
    }
}

TEST_CASE("teds axioms on random tree pairs") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 500; ++trial) {
        const MarkupTree a = random_tree(rng, 1 + rng() % 20);
        const MarkupTree b = random_tree(rng, 1 + rng() % 20);
        CHECK(teds(a, a) == doctest::Approx(1.0));
        const double ab = teds(a, b);
        CHECK(ab == doctest::Approx(teds(b, a)));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("adjacency_f1 examples") {
    const OrderedSeparatorSet set = grid_3x3();
    const TableStructure gt = compose_structure(
        {{0, 3, 1, 4}, {0, 4, 1, 5}, {1, 3, 2, 4}, {1, 4, 2, 5}}, set);

    SUBCASE("identical structures") {
        const EvalReport r = adjacency_f1(gt, gt);
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(1.0));
        CHECK(r.f1 == doctest::Approx(1.0));
        CHECK(r.true_positive == 4);
        CHECK(r.false_positive == 0);
        CHECK(r.false_negative == 0);
    }
    SUBCASE("missing corner cell loses its two relations") {
        const TableStructure pred =
            compose_structure({{0, 3, 1, 4}, {0, 4, 1, 5}, {1, 3, 2, 4}}, set);
        const EvalReport r = adjacency_f1(pred, gt);
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(0.5));
        CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("empty pred against nonempty gt") {
        const TableStructure empty = compose_structure({}, set);
        const EvalReport r = adjacency_f1(empty, gt);
        CHECK(r.precision == 0.0);
        CHECK(r.recall == 0.0);
        CHECK(r.f1 == 0.0);
    }
    SUBCASE("swapping pred and gt swaps precision and recall") {
        const TableStructure pred =
            compose_structure({{0, 3, 1, 4}, {0, 4, 1, 5}, {1, 3, 2, 5}}, set);
        const EvalReport ab = adjacency_f1(pred, gt);
        const EvalReport ba = adjacency_f1(gt, pred);
        CHECK(ab.precision == doctest::Approx(ba.recall));
        CHECK(ab.recall == doctest::Approx(ba.precision));
        CHECK(ab.f1 == doctest::Approx(ba.f1));
    }
}

TEST_CASE("bleu examples and properties") {
    const std::vector<std::string> abcd = {"a", "b", "c", "d"};
    SUBCASE("identity") {
        CHECK(bleu(abcd, abcd) == doctest::Approx(1.0));
    }
    SUBCASE("disjoint token sets") {
        CHECK(bleu({"x", "y", "z", "w"}, abcd) == 0.0);
    }
    SUBCASE("empty prediction") {
        CHECK(bleu({}, abcd) == 0.0);
    }
    SUBCASE("superset prediction spot value") {
        const std::vector<std::string> pred = {"a", "b", "c", "d", "e"};
        CHECK(std::fabs(bleu(pred, abcd) - std::pow(0.2, 0.25)) < 1e-9);
    }
    SUBCASE("brevity penalty for short predictions") {
        const std::vector<std::string> gt = {"a", "b", "c", "d", "e"};
        CHECK(bleu(abcd, gt) == doctest::Approx(std::exp(1.0 - 5.0 / 4.0)));
    }
    SUBCASE("invariant to global token renaming") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::string> pred, gt;
            for (int i = 0; i < 4 + int(rng() % 8); ++i)
                pred.push_back(std::string(1, char('a' + rng() % 4)));
            for (int i = 0; i < 4 + int(rng() % 8); ++i)
                gt.push_back(std::string(1, char('a' + rng() % 4)));
            auto renamed = [](std::vector<std::string> v) {
                for (std::string& s : v) s = "tok_" + s;
                return v;
            };
            CHECK(bleu(pred, gt) == doctest::Approx(bleu(renamed(pred), renamed(gt))));
        }
    }
}

TEST_CASE("kl_profile examples") {
    SUBCASE("identical rows give zeros") {
        const auto m = kl_profile({{0.25, 0.75}, {0.25, 0.75}, {0.25, 0.75}});
        for (double v : m) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("hand-computed two-row value") {
        const auto m = kl_profile({{0.9, 0.1}, {0.5, 0.5}});
        const double expected = 0.5 * (0.9 * std::log(1.8) + 0.1 * std::log(0.2));
        CHECK(m[0] == doctest::Approx(expected).epsilon(1e-9));
        const double expected2 = 0.5 * (0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1));
        CHECK(m[1] == doctest::Approx(expected2).epsilon(1e-9));
    }
    SUBCASE("zero entries stay finite under flooring") {
        const auto m = kl_profile({{1.0, 0.0}, {0.5, 0.5}});
        CHECK(std::isfinite(m[0]));
        CHECK(std::isfinite(m[1]));
        CHECK(m[0] >= 0.0);
    }
    SUBCASE("non-stochastic row rejected") {
        CHECK_THROWS_AS(kl_profile({{0.9, 0.3}}), DomainError);
    }
    SUBCASE("non-negative on random stochastic matrices") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + rng() % 6, m_cols = 2 + rng() % 10;
            std::vector<std::vector<double>> att(n, std::vector<double>(m_cols));
            for (auto& row : att) {
                double sum = 0.0;
                for (double& v : row) sum += v = d(rng) + 1e-3;
                for (double& v : row) v /= sum;
            }
            for (double v : kl_profile(att)) CHECK(v >= 0.0);
        }
    }
}
