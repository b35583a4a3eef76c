#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schema_check.hpp"
#include "vlc/cli.hpp"
#include "vlc/csv.hpp"
#include "vlc/simulate.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("vlc_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter() {
        static int n = 0;
        return ++n;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

json load_json(const std::string& path) { return json::parse(vlc::read_file(path)); }

json load_schema(const std::string& name) {
    return json::parse(vlc::read_file(std::string(VLC_SCHEMA_DIR) + "/" + name));
}

void expect_schema(const json& schema, const json& value) {
    std::string why;
    const bool ok = schema_check::validate(schema, value, schema, &why);
    INFO(why);
    CHECK(ok);
}

}  // namespace

TEST_CASE("simulate writes a deterministic two-column csv") {
    TempDir tmp;
    const std::string out = tmp.file("pair.csv");
    const int code = vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "42",
                                    "--output", out});
    REQUIRE(code == 0);

    const vlc::CsvTable table = vlc::read_csv(out);
    REQUIRE(table.header == std::vector<std::string>{"X", "Y"});
    REQUIRE(table.rows() == 200);

    // Bit-identical with the in-memory generator.
    vlc::PairwiseScenario scenario;
    scenario.seed = 42;
    const auto [x, y] = vlc::gen_pairwise(scenario);
    CHECK(table.columns[0] == x.data());
    CHECK(table.columns[1] == y.data());

    // Frozen bytes: regenerating with the same seed and version must
    // reproduce the committed golden file exactly.
    const std::string golden_path = std::string(VLC_TEST_DATA_DIR) + "/golden_pairwise_seed42.csv";
    if (fs::exists(golden_path)) {
        CHECK(vlc::read_file(out) == vlc::read_file(golden_path));
    }

    // manifest sidecar accompanies the csv
    const json manifest = load_json(out + ".manifest.json");
    expect_schema(load_schema("manifest.schema.json"), manifest);
}

TEST_CASE("infer --auto finds the variable-lag coupling and validates its schema") {
    TempDir tmp;
    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "7", "--output", pair}) ==
            0);

    const std::string out = tmp.file("verdict.json");
    const int code = vlc::cli::run({"infer", "--input", pair, "--x", "X", "--y", "Y", "--method",
                                    "granger", "--auto", "--output", out, "--seed", "7"});
    REQUIRE(code == 0);

    const json result = load_json(out);
    expect_schema(load_schema("infer.schema.json"), result);
    CHECK(result["verdict"] == "TRUE-VARIABLE");
    CHECK(result["variable_report"]["cause"] == true);
    CHECK(result["variable_report"]["bic_diff_ratio"].get<double>() >= 0.5);
}

TEST_CASE("infer --method te flags the coupling with a significant bootstrap") {
    TempDir tmp;
    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "8", "--output", pair}) ==
            0);

    const std::string out = tmp.file("te.json");
    const int code = vlc::cli::run({"infer", "--input", pair, "--x", "X", "--y", "Y", "--method",
                                    "te", "--auto", "--nboot", "50", "--output", out, "--seed",
                                    "8"});
    REQUIRE(code == 0);

    const json result = load_json(out);
    expect_schema(load_schema("infer.schema.json"), result);
    CHECK(result["variable_report"]["cause"] == true);
    CHECK(result["variable_report"]["ratio"].get<double>() > 1.0);
    CHECK(result["variable_report"]["pvalue_xy"].get<double>() <= 0.05);
}

TEST_CASE("missing columns exit 2 and write nothing") {
    TempDir tmp;
    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "9", "--output", pair}) ==
            0);
    const std::string out = tmp.file("never.json");
    CHECK(vlc::cli::run({"infer", "--input", pair, "--x", "NOPE", "--y", "Y", "--output", out}) ==
          2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("unreadable input exits 2") {
    TempDir tmp;
    CHECK(vlc::cli::run({"infer", "--input", tmp.file("absent.csv"), "--x", "X", "--y", "Y",
                         "--output", tmp.file("o.json")}) == 2);
}

TEST_CASE("validation failures exit 3") {
    TempDir tmp;
    const std::string bad = tmp.file("bad.csv");
    vlc::write_file(bad, "X,Y\n1,2\nnan,3\n4,5\n6,7\n");
    CHECK(vlc::cli::run({"infer", "--input", bad, "--x", "X", "--y", "Y", "--output",
                         tmp.file("o.json")}) == 3);

    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "3", "--output", pair}) ==
            0);
    CHECK(vlc::cli::run({"dtw", "--input", pair, "--x", "X", "--y", "Y", "--delta-max", "0",
                         "--output", tmp.file("a.json")}) == 3);
}

TEST_CASE("dtw dump on identical columns shows a zero-cost diagonal") {
    TempDir tmp;
    const std::string csv = tmp.file("same.csv");
    vlc::write_file(csv, "A,B\n1,1\n2,2\n3,3\n4,4\n5,5\n6,6\n");
    const std::string out = tmp.file("align.json");
    REQUIRE(vlc::cli::run({"dtw", "--input", csv, "--x", "A", "--y", "B", "--delta-max", "2",
                           "--output", out}) == 0);
    const json result = load_json(out);
    expect_schema(load_schema("dtw.schema.json"), result);
    CHECK(result["distance"].get<double>() == 0.0);
    CHECK(result["sim_value"].get<double>() == 0.0);
    CHECK(result["path"].size() == 6);
}

TEST_CASE("dtw dump of a generated positive points forward") {
    TempDir tmp;
    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "21", "--output", pair}) ==
            0);
    const std::string out = tmp.file("align.json");
    REQUIRE(vlc::cli::run({"dtw", "--input", pair, "--x", "X", "--y", "Y", "--delta-max", "40",
                           "--output", out}) == 0);
    const json result = load_json(out);
    CHECK(result["sim_value"].get<double>() > 0.0);
    CHECK(result["delta0"].get<int>() == 5);
}

TEST_CASE("group simulation writes ten named columns") {
    TempDir tmp;
    const std::string out = tmp.file("group.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "group", "--seed", "5", "--output", out}) == 0);
    const vlc::CsvTable table = vlc::read_csv(out);
    CHECK(table.header == std::vector<std::string>{"X1", "X2", "X3", "Y1", "Y2", "Y3", "Y12",
                                                   "Y13", "Y23", "Y123"});
    CHECK(table.rows() == 200);
}

TEST_CASE("suite simulation writes 75 instances plus labels") {
    TempDir tmp;
    const std::string dir = tmp.file("suite");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "suite", "--seed", "2020", "--output", dir}) ==
            0);

    std::size_t csv_count = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".csv" && entry.path().filename() != "labels.csv")
            ++csv_count;
    }
    CHECK(csv_count == 75);

    const std::string labels = vlc::read_file((fs::path(dir) / "labels.csv").string());
    std::size_t positives = 0, negatives = 0;
    std::istringstream stream(labels);
    std::string line;
    std::getline(stream, line);  // header
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        if (line.back() == '1') ++positives;
        else ++negatives;
    }
    CHECK(positives == 30);
    CHECK(negatives == 45);
}

TEST_CASE("bench emits one row per method and fraction") {
    TempDir tmp;
    const std::string dir = tmp.file("mini");
    fs::create_directories(dir);

    // A miniature suite: two positives, two negatives.
    std::string labels = "file,causal\n";
    for (int i = 0; i < 4; ++i) {
        vlc::PairwiseScenario s;
        s.causal = i < 2;
        s.seed = 9000 + static_cast<std::uint64_t>(i);
        const auto [x, y] = vlc::gen_pairwise(s);
        const std::string name = "pair_" + std::to_string(i) + ".csv";
        vlc::write_csv((fs::path(dir) / name).string(), {"X", "Y"}, {x.data(), y.data()});
        labels += name + "," + (s.causal ? "1" : "0") + "\n";
    }
    vlc::write_file((fs::path(dir) / "labels.csv").string(), labels);

    const std::string out = tmp.file("metrics.csv");
    REQUIRE(vlc::cli::run({"bench", "--suite", dir, "--methods", "g", "--delta-max-fracs",
                           "0.1,0.2", "--nboot", "0", "--output", out}) == 0);

    std::istringstream stream(vlc::read_file(out));
    std::string line;
    std::getline(stream, line);
    CHECK(line ==
          "method,delta_max_frac,accuracy,tpr,fpr,auc,precision,recall,f1,wall_ms");
    std::size_t rows = 0;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.substr(0, 2) == "g,");
    }
    CHECK(rows == 2);  // one per fraction
    CHECK(fs::exists(out + ".manifest.json"));
}

TEST_CASE("bench refuses an empty suite directory") {
    TempDir tmp;
    const std::string dir = tmp.file("empty");
    fs::create_directories(dir);
    CHECK(vlc::cli::run({"bench", "--suite", dir, "--output", tmp.file("m.csv")}) == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(vlc::cli::run({"infer"}) == 2);                    // missing required flags
    CHECK(vlc::cli::run({"simulate", "--kind", "nope", "--output", "x"}) == 2);
}

TEST_CASE("csv values round-trip through 17 significant digits") {
    vlc::RngStream rng(4242, "roundtrip");
    std::vector<double> values(200);
    for (double& v : values) v = rng.next_gaussian() * std::pow(10.0, (int)rng.next_below(7) - 3);
    const std::string text = vlc::format_csv({"V"}, {values});
    const vlc::CsvTable parsed = vlc::parse_csv(text);
    CHECK(parsed.columns[0] == values);
}

TEST_CASE("the f-test criterion is selectable from the command line") {
    TempDir tmp;
    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "11", "--output", pair}) ==
            0);
    const std::string out = tmp.file("ftest.json");
    REQUIRE(vlc::cli::run({"infer", "--input", pair, "--x", "X", "--y", "Y", "--criterion",
                           "ftest", "--fixed-lag", "--output", out}) == 0);
    const json result = load_json(out);
    CHECK(result["manifest"]["config"]["criterion"] == "ftest");
    CHECK(result["fixed_report"]["f_pvalue"].get<double>() <= 0.05);  // strong coupling
}

TEST_CASE("the environment variable supplies the default seed") {
    TempDir tmp;
    const std::string via_env = tmp.file("env.csv");
    const std::string via_flag = tmp.file("flag.csv");
    ::setenv("VLCAUSAL_SEED", "777", 1);
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--output", via_env}) == 0);
    ::unsetenv("VLCAUSAL_SEED");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "777", "--output",
                           via_flag}) == 0);
    CHECK(vlc::read_file(via_env) == vlc::read_file(via_flag));
}

TEST_CASE("single-branch modes run only the requested branch") {
    TempDir tmp;
    const std::string pair = tmp.file("pair.csv");
    REQUIRE(vlc::cli::run({"simulate", "--kind", "pairwise", "--seed", "13", "--output", pair}) ==
            0);

    const std::string fixed_out = tmp.file("fixed.json");
    REQUIRE(vlc::cli::run({"infer", "--input", pair, "--x", "X", "--y", "Y", "--fixed-lag",
                           "--output", fixed_out}) == 0);
    const json fixed = load_json(fixed_out);
    expect_schema(load_schema("infer.schema.json"), fixed);
    CHECK(fixed["mode"] == "fixed");
    CHECK(fixed.contains("fixed_report"));
    CHECK_FALSE(fixed.contains("variable_report"));

    const std::string vl_out = tmp.file("vl.json");
    REQUIRE(vlc::cli::run({"infer", "--input", pair, "--x", "X", "--y", "Y", "--variable-lag",
                           "--output", vl_out}) == 0);
    const json vl = load_json(vl_out);
    expect_schema(load_schema("infer.schema.json"), vl);
    CHECK(vl["mode"] == "variable");
    CHECK(vl.contains("variable_report"));
    CHECK_FALSE(vl.contains("fixed_report"));
    CHECK(vl["verdict"] != "TRUE-FIXED");

    // the two branch flags cannot be combined
    CHECK(vlc::cli::run({"infer", "--input", pair, "--x", "X", "--y", "Y", "--fixed-lag",
                         "--variable-lag", "--output", tmp.file("no.json")}) == 2);
}
