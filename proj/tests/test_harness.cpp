#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <map>
#include <sstream>

#include "lmphnn/harness.hpp"
#include "test_util.hpp"

using namespace lmphnn;
using testutil::TempDir;

namespace {

// parse a csv written by the harness into header + string cells
struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            out.header = cells;
            first = false;
        } else {
            out.rows.push_back(cells);
        }
    }
    return out;
}

double to_double(const std::string& s) {
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

ExperimentConfig blob_config(const TempDir& out, int seeds = 2) {
    ExperimentConfig config;
    config.data_paths = {testutil::data_file("blobs.csv")};
    config.seeds.clear();
    for (int i = 1; i <= seeds; ++i) config.seeds.push_back(static_cast<std::uint64_t>(i));
    config.k_min = 2;
    config.k_max = 4;
    config.out_dir = out.file("report");
    return config;
}

}  // namespace

TEST_CASE("config validation catches usage errors") {
    ExperimentConfig config;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // no data

    config.data_paths = {"x.csv"};
    config.ratio = 1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.ratio = 0.5;
    config.k_min = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.k_min = 2;
    config.k_max = 99;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.k_max = 10;
    config.format_csv = false;
    config.format_md = false;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.format_csv = true;
    CHECK_NOTHROW(config.validate());

    CHECK(config.resolved_seeds().size() == 9);
    CHECK(config.resolved_kinds().size() == 8);
}

TEST_CASE("seed, k and kind specs parse") {
    CHECK(detail::parse_seed_spec("5", 10) ==
          std::vector<std::uint64_t>{10, 11, 12, 13, 14});
    CHECK(detail::parse_seed_spec("3,7,9", 1) == std::vector<std::uint64_t>{3, 7, 9});
    CHECK_THROWS_AS(detail::parse_seed_spec("zero", 1), std::invalid_argument);
    CHECK_THROWS_AS(detail::parse_seed_spec("0", 1), std::invalid_argument);

    CHECK(detail::parse_k_range("2..10") == std::pair<std::size_t, std::size_t>{2, 10});
    CHECK(detail::parse_k_range("3") == std::pair<std::size_t, std::size_t>{3, 3});
    CHECK_THROWS_AS(detail::parse_k_range("a..b"), std::invalid_argument);

    CHECK(detail::parse_kind_list("all").size() == 8);
    auto kinds = detail::parse_kind_list("LMPHNN,PNN");
    REQUIRE(kinds.size() == 2);
    CHECK(kinds[0] == ClassifierKind::LMPHNN);
    CHECK_THROWS_AS(detail::parse_kind_list("LMPHNN,bogus"), std::invalid_argument);
}

TEST_CASE("cmd_bench on the separated blobs: every kind is perfect at k=3") {
    TempDir dir;
    auto config = blob_config(dir);
    std::ostringstream diag;
    REQUIRE(cmd_bench(config, diag) == 0);

    auto raw = parse_csv(testutil::read_file(config.out_dir + "/raw.csv"));
    REQUIRE(raw.header == std::vector<std::string>{"dataset", "kind", "k", "seed", "accuracy",
                                                   "precision", "recall", "f1", "n_test",
                                                   "runtime_ms"});
    // 1 dataset x 2 seeds x 8 kinds x 3 ks
    CHECK(raw.rows.size() == 2 * 8 * 3);
    for (const auto& row : raw.rows) {
        CHECK(row[0] == "blobs");
        if (row[2] == "3") CHECK(to_double(row[4]) == 1.0);
        CHECK(row[9] == "");  // timing off by default
    }
}

TEST_CASE("cmd_bench reports are byte-identical across runs") {
    TempDir dir;
    auto config = blob_config(dir);
    std::ostringstream diag;
    REQUIRE(cmd_bench(config, diag) == 0);
    std::map<std::string, std::string> first;
    for (const auto& entry : std::filesystem::directory_iterator(config.out_dir))
        first[entry.path().filename().string()] = testutil::read_file(entry.path().string());
    REQUIRE(!first.empty());

    auto config2 = config;
    config2.out_dir = dir.file("report2");
    REQUIRE(cmd_bench(config2, diag) == 0);
    for (const auto& [name, content] : first) {
        CAPTURE(name);
        CHECK(content == testutil::read_file(config2.out_dir + "/" + name));
    }
}

TEST_CASE("summary cells are recomputable from the raw csv") {
    TempDir dir;
    auto config = blob_config(dir);
    config.format_md = true;
    std::ostringstream diag;
    REQUIRE(cmd_bench(config, diag) == 0);

    auto raw = parse_csv(testutil::read_file(config.out_dir + "/raw.csv"));
    auto summary = parse_csv(testutil::read_file(config.out_dir + "/summary_accuracy.csv"));
    REQUIRE(summary.rows.size() == 1);
    REQUIRE(summary.header.size() == 9);  // dataset + 8 kinds

    for (std::size_t col = 1; col < summary.header.size(); ++col) {
        const std::string& kind = summary.header[col];
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : raw.rows)
            if (row[1] == kind) {
                sum += to_double(row[4]);
                ++n;
            }
        REQUIRE(n > 0);
        char expect[32];
        std::snprintf(expect, sizeof expect, "%.4f", sum / static_cast<double>(n));
        CHECK(summary.rows[0][col] == expect);
    }
    CHECK(std::filesystem::exists(config.out_dir + "/summary.md"));
    CHECK(std::filesystem::exists(config.out_dir + "/curves_blobs.csv"));
}

TEST_CASE("curve files carry one row per kind, metric and k") {
    TempDir dir;
    auto config = blob_config(dir, 1);
    std::ostringstream diag;
    REQUIRE(cmd_bench(config, diag) == 0);
    auto curves = parse_csv(testutil::read_file(config.out_dir + "/curves_blobs.csv"));
    CHECK(curves.header == std::vector<std::string>{"kind", "metric", "k", "mean", "std"});
    CHECK(curves.rows.size() == 8 * 4 * 3);
    for (const auto& row : curves.rows)
        if (row[1] == "accuracy" && row[2] == "3") CHECK(to_double(row[3]) == 1.0);
}

TEST_CASE("cmd_sensitivity: separated blobs have zero sensitivity") {
    TempDir dir;
    auto config = blob_config(dir);
    config.format_md = true;
    std::ostringstream diag;
    REQUIRE(cmd_sensitivity(config, diag) == 0);

    auto raw = parse_csv(testutil::read_file(config.out_dir + "/sensitivity_raw.csv"));
    REQUIRE(raw.header ==
            std::vector<std::string>{"dataset", "kind", "metric", "seed", "sigma"});
    CHECK(raw.rows.size() == 8 * 4 * 2);  // kinds x metrics x seeds
    for (const auto& row : raw.rows) CHECK(to_double(row[4]) == 0.0);

    auto table = parse_csv(testutil::read_file(config.out_dir + "/sensitivity_accuracy.csv"));
    REQUIRE(table.rows.size() == 1);
    for (std::size_t col = 1; col < table.header.size(); ++col)
        CHECK(table.rows[0][col] == "0.0000");
    CHECK(std::filesystem::exists(config.out_dir + "/sensitivity.md"));

    auto single_k = blob_config(dir);
    single_k.k_min = single_k.k_max = 3;
    single_k.out_dir = dir.file("nope");
    CHECK(cmd_sensitivity(single_k, diag) == 1);
    CHECK(!std::filesystem::exists(single_k.out_dir));
}

TEST_CASE("cmd_bench with a single k=1 equals the 1-NN run for every kind") {
    TempDir dir;
    auto config = blob_config(dir, 1);
    config.k_min = config.k_max = 1;
    std::ostringstream diag;
    REQUIRE(cmd_bench(config, diag) == 0);
    auto raw = parse_csv(testutil::read_file(config.out_dir + "/raw.csv"));
    REQUIRE(raw.rows.size() == 8);
    for (const auto& row : raw.rows) {
        CHECK(row[4] == raw.rows[0][4]);  // same accuracy as the KNN row
        CHECK(row[7] == raw.rows[0][7]);  // same f1
    }
}

TEST_CASE("cmd_bench error paths map to exit codes") {
    TempDir dir;
    std::ostringstream diag;

    ExperimentConfig missing;
    missing.data_paths = {dir.file("does_not_exist.csv")};
    missing.out_dir = dir.file("o1");
    CHECK(cmd_bench(missing, diag) == 2);
    CHECK(diag.str().find("cannot open") != std::string::npos);

    ExperimentConfig bad;
    bad.data_paths = {testutil::data_file("blobs.csv")};
    bad.ratio = -1.0;
    bad.out_dir = dir.file("o2");
    CHECK(cmd_bench(bad, diag) == 1);
}

TEST_CASE("cmd_inspect prints the dataset summary") {
    std::ostringstream out, diag;
    int rc = cmd_inspect(testutil::data_file("wine.csv"), LabelColumn::last(),
                         EncodingPolicy::Ordinal, out, diag);
    CHECK(rc == 0);
    CHECK(out.str().find("N=178 d=13 classes=3") == 0);
    CHECK(out.str().find("dropped_rows=0") != std::string::npos);
    CHECK(out.str().find("class 1: 59") != std::string::npos);
    CHECK(out.str().find("categorical columns: none") != std::string::npos);

    TempDir dir;
    auto dropped = testutil::write_temp_csv(dir, "dropme.csv",
                                            "1,2,A\n3,,A\n,4,B\n5,6,B\n7,8,A\n9,10,B\n");
    std::ostringstream out2, diag2;
    CHECK(cmd_inspect(dropped, LabelColumn::last(), EncodingPolicy::Ordinal, out2, diag2) == 0);
    CHECK(out2.str().find("dropped_rows=2") != std::string::npos);

    std::ostringstream out3, diag3;
    auto empty = testutil::write_temp_csv(dir, "empty.csv", "");
    CHECK(cmd_inspect(empty, LabelColumn::last(), EncodingPolicy::Ordinal, out3, diag3) == 2);
    CHECK(diag3.str().find("empty file") != std::string::npos);
}

TEST_CASE("timing flag fills the runtime column") {
    TempDir dir;
    auto config = blob_config(dir, 1);
    config.k_min = config.k_max = 2;
    config.timing = true;
    std::ostringstream diag;
    REQUIRE(cmd_bench(config, diag) == 0);
    auto raw = parse_csv(testutil::read_file(config.out_dir + "/raw.csv"));
    for (const auto& row : raw.rows) {
        CHECK(!row[9].empty());
        CHECK(to_double(row[9]) >= 0.0);
    }
}
