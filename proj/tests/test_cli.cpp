#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "tabweave/io.hpp"

namespace fs = std::filesystem;
using namespace tabweave;

namespace {

std::string binary_path() {
    const char* env = std::getenv("TABWEAVE_BIN");
    REQUIRE_MESSAGE(env != nullptr, "TABWEAVE_BIN must point at the CLI binary");
    return env;
}

int run(const std::string& args) {
    const std::string cmd = binary_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tabweave-cli-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("synth, compose and eval close the loop at TEDS 1.0") {
    TempDir dir;
    const std::string gt = dir.file("gt.json");
    CHECK(run("synth --rows 3 --cols 3 --merge-fraction 0.2 --seed 7 -o " + gt) == 0);
    CHECK(run("compose -i " + gt + " -o " + dir.file("out")) == 0);

    const std::string report = dir.file("teds.json");
    CHECK(run("eval-teds --pred " + dir.file("out/table.html") + " --gt " + gt + " -o " +
              report) == 0);
    const json doc = parse_document(read_text_file(report));
    CHECK(doc.at("teds").get<double>() == doctest::Approx(1.0));

    const std::string f1 = dir.file("f1.json");
    CHECK(run("eval-f1 --pred " + dir.file("out/structure.json") + " --gt " + gt + " -o " + f1) ==
          0);
    const json f1_doc = parse_document(read_text_file(f1));
    CHECK(f1_doc.at("f1").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("fit rejects underdetermined input with exit code 2") {
    TempDir dir;
    Separator s;
    s.samples = {{0, 0}, {1, 1}, {2, 2}};
    s.score = 1.0;
    const std::string in = dir.file("three.json");
    write_text_file(in, dump_document(separator_list_to_json({s}, 10, 10)));
    CHECK(run("fit -i " + in + " -o " + dir.file("out.json")) == 2);
}

TEST_CASE("nms collapses duplicate separators") {
    TempDir dir;
    Separator a;
    for (int i = 0; i < 15; ++i) a.samples.push_back({double(i) * 10.0, 50.0});
    a.score = 0.9;
    Separator b = a;
    b.score = 0.4;
    const std::string in = dir.file("dups.json");
    const std::string out = dir.file("kept.json");
    write_text_file(in, dump_document(separator_list_to_json({a, b}, 150, 100)));
    CHECK(run("nms --sigma 5 -i " + in + " -o " + out) == 0);
    const auto kept = separator_list_from_json(parse_document(read_text_file(out)));
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].score == 0.9);
}

TEST_CASE("perturbed pipeline remaps back onto the ground-truth structure") {
    TempDir dir;
    const std::string gt = dir.file("gt.json");
    CHECK(run("synth --rows 3 --cols 4 --seed 11 -o " + gt) == 0);
    CHECK(run("perturb -i " + gt + " --jitter 0.5 --duplicate-prob 1 --seed 3 -o " +
              dir.file("noisy.json")) == 0);
    CHECK(run("nms -i " + dir.file("noisy.json") + " -o " + dir.file("clean.json")) == 0);
    CHECK(run("order -i " + dir.file("clean.json") + " -o " + dir.file("ordered.json")) == 0);
    CHECK(run("remap -i " + gt + " --new-separators " + dir.file("ordered.json") + " -o " +
              dir.file("seq.json")) == 0);
    CHECK(run("compose -i " + gt + " --separators " + dir.file("ordered.json") + " --sequence " +
              dir.file("seq.json") + " -o " + dir.file("out")) == 0);
    CHECK(run("eval-teds --pred " + dir.file("out/table.html") + " --gt " + gt + " -o " +
              dir.file("teds.json")) == 0);
    const json doc = parse_document(read_text_file(dir.file("teds.json")));
    CHECK(doc.at("teds").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    TempDir dir;
    const std::string a = dir.file("a.json"), b = dir.file("b.json");
    const std::string flags = "synth --rows 4 --cols 4 --merge-fraction 0.3 --seed 42 "
                              "--warp-amplitude 3 -o ";
    CHECK(run(flags + a) == 0);
    CHECK(run(flags + b) == 0);
    CHECK(read_text_file(a) == read_text_file(b));

    CHECK(run("perturb -i " + a + " --jitter 1 --duplicate-prob 0.5 --seed 8 -o " +
              dir.file("p1.json")) == 0);
    CHECK(run("perturb -i " + a + " --jitter 1 --duplicate-prob 0.5 --seed 8 -o " +
              dir.file("p2.json")) == 0);
    CHECK(read_text_file(dir.file("p1.json")) == read_text_file(dir.file("p2.json")));
}

TEST_CASE("relmask writes the base mask and all pyramid levels") {
    TempDir dir;
    RelationSet rel;
    rel.n = 2;
    rel.boxes = {{5, 5, 40, 25}, {50, 5, 90, 25}};
    rel.row_pairs = {{0, 1}};
    const std::string in = dir.file("rel.json");
    write_text_file(in, dump_document(relation_set_to_json(rel, 100, 40)));
    CHECK(run("relmask -i " + in + " -o " + dir.file("masks")) == 0);
    for (const char* name : {"row.pgm", "row_s8.pgm", "row_s16.pgm", "row_s32.pgm", "row_s64.pgm",
                             "col.pgm", "col_s8.pgm", "col_s16.pgm", "col_s32.pgm", "col_s64.pgm"})
        CHECK(fs::exists(dir.path / "masks" / name));
    const std::string header = read_text_file(dir.file("masks/row.pgm")).substr(0, 9);
    CHECK(header == "P2\n100 40");
}

TEST_CASE("usage errors exit with code 64") {
    TempDir dir;
    CHECK(run("synth --rows 2 --cols 2 --bogus-flag 1 -o " + dir.file("x.json")) == 64);
    CHECK(run("no-such-subcommand") == 64);
}

TEST_CASE("kl prints and writes the profile") {
    TempDir dir;
    const std::string in = dir.file("att.json");
    write_text_file(in, "[[0.5,0.5],[0.5,0.5]]\n");
    const std::string out = dir.file("profile.json");
    CHECK(run("kl -i " + in + " -o " + out) == 0);
    const json doc = parse_document(read_text_file(out));
    for (const auto& v : doc.at("profile")) CHECK(v.get<double>() == doctest::Approx(0.0));

    write_text_file(in, "[[0.9,0.3]]\n");
    CHECK(run("kl -i " + in + " -o " + out) == 3);
}
