#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "gdrc/data_io.hpp"
#include "gdrc/rng.hpp"

using namespace gdrc;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "gdrc_io_test_" + std::to_string(counter++) + ".tmp";
        std::ofstream(path) << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv label mapping") {
    TempFile f("a,b,class\n1,2,2\n3,4,4\n5,6,4\n");
    Dataset d = parse_csv(f.path, "class", "2");
    REQUIRE(d.size() == 3);
    CHECK(d.labels == std::vector<int>{1, -1, -1});
    CHECK(d.dim() == 2);
    CHECK(d.features(2, 1) == 6.0);
}

TEST_CASE("csv parse error carries row and column") {
    TempFile f("x,y,class\na,b,1\n");
    try {
        parse_csv(f.path, "class", "1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row == 1);
        CHECK(e.col == 1);
    }
}

TEST_CASE("csv rows with missing cells are dropped and counted") {
    TempFile f("x,y,class\n1,2,1\n?,3,1\n4,,0\n5,6,0\n");
    Dataset d = parse_csv(f.path, "class", "1");
    CHECK(d.size() == 2);
    CHECK(d.dropped_rows == 2);
}

TEST_CASE("csv single-class file is degenerate") {
    TempFile f("x,class\n1,1\n2,1\n");
    CHECK_THROWS_AS(parse_csv(f.path, "class", "1"), DegenerateDataset);
}

TEST_CASE("svmlight basic line with implicit zeros") {
    TempFile f("+1 1:0.5 3:2\n-1 2:1\n");
    Dataset d = parse_svmlight(f.path);
    REQUIRE(d.size() == 2);
    CHECK(d.dim() == 3);
    CHECK(d.features(0, 0) == 0.5);
    CHECK(d.features(0, 1) == 0.0);
    CHECK(d.features(0, 2) == 2.0);
    CHECK(d.labels[0] == 1);
    CHECK(d.labels[1] == -1);
}

TEST_CASE("svmlight rejects non-ascending indices and unknown labels") {
    TempFile f("+1 2:1 1:1\n");
    CHECK_THROWS_AS(parse_svmlight(f.path), ParseError);
    TempFile g("+7 1:1\n");
    CHECK_THROWS_AS(parse_svmlight(g.path), LabelError);
}

TEST_CASE("svmlight round-trip reproduces features and labels exactly") {
    Rng rng(3);
    Dataset d;
    d.features = Matrix(17, 5);
    for (std::size_t i = 0; i < 17; ++i) {
        for (std::size_t j = 0; j < 5; ++j)
            d.features(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.normal() * 3.7;
        d.labels.push_back(rng.uniform() < 0.5 ? 1 : -1);
    }
    d.labels[0] = 1;
    d.labels[1] = -1;
    d.rebuild_class_index();

    const std::string path = "gdrc_io_roundtrip.tmp";
    write_svmlight(d, path);
    Dataset back = parse_svmlight(path);
    std::remove(path.c_str());

    REQUIRE(back.size() == d.size());
    REQUIRE(back.dim() == d.dim());
    CHECK(back.labels == d.labels);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.dim(); ++j)
            CHECK(back.features(i, j) == d.features(i, j));
}

TEST_CASE("split is a deterministic stratified partition") {
    Rng rng(9);
    Dataset d;
    d.features = Matrix(100, 2);
    for (std::size_t i = 0; i < 100; ++i) {
        d.features(i, 0) = rng.normal();
        d.features(i, 1) = rng.normal();
        d.labels.push_back(i < 50 ? 1 : -1);
    }
    d.rebuild_class_index();

    auto [train, test] = split(d, SplitSpec{0.2, 7, true});
    CHECK(train.count_positive() == 10);
    CHECK(train.count_negative() == 10);
    CHECK(test.count_positive() == 40);
    CHECK(test.count_negative() == 40);
    CHECK(train.size() + test.size() == d.size());

    // Partition: every original row appears exactly once across both sides.
    auto key = [](const Dataset& ds, std::size_t i) {
        return std::to_string(ds.features(i, 0)) + "/" + std::to_string(ds.features(i, 1));
    };
    std::vector<std::string> seen;
    for (std::size_t i = 0; i < train.size(); ++i) seen.push_back(key(train, i));
    for (std::size_t i = 0; i < test.size(); ++i) seen.push_back(key(test, i));
    std::sort(seen.begin(), seen.end());
    std::vector<std::string> orig;
    for (std::size_t i = 0; i < d.size(); ++i) orig.push_back(key(d, i));
    std::sort(orig.begin(), orig.end());
    CHECK(seen == orig);

    // Same seed, same split; different seed, different split (with high
    // probability on 100 rows).
    auto [train2, test2] = split(d, SplitSpec{0.2, 7, true});
    CHECK(train2.features.data()[0] == train.features.data()[0]);
    CHECK(train2.labels == train.labels);
}

TEST_CASE("split proportions on a 600-point balanced set") {
    Rng rng(2);
    Dataset d;
    d.features = Matrix(600, 3);
    for (std::size_t i = 0; i < 600; ++i) {
        for (std::size_t j = 0; j < 3; ++j) d.features(i, j) = rng.normal();
        d.labels.push_back(i < 300 ? 1 : -1);
    }
    d.rebuild_class_index();
    auto [train, test] = split(d, SplitSpec{0.2, 11, true});
    CHECK(train.count_positive() == 60);
    CHECK(train.count_negative() == 60);
    CHECK(test.size() == 480);
}

TEST_CASE("split failure modes") {
    Dataset d;
    d.features = Matrix(6, 1);
    d.labels = {1, 1, 1, -1, -1, -1};
    for (std::size_t i = 0; i < 6; ++i) d.features(i, 0) = static_cast<double>(i);
    d.rebuild_class_index();
    CHECK_THROWS_AS(split(d, SplitSpec{0.1, 0, true}), DegenerateSplit);
    CHECK_THROWS_AS(split(d, SplitSpec{1.5, 0, true}), ConfigError);
}

TEST_CASE("min-max scaler maps train range to unit box") {
    Dataset d;
    d.features = Matrix::from_rows({{0.0, 10.0}, {5.0, 20.0}, {10.0, 30.0}, {2.0, 10.0}});
    d.labels = {1, 1, -1, -1};
    d.rebuild_class_index();
    MinMaxScaler sc;
    sc.fit(d);
    sc.apply(d);
    CHECK(d.features(0, 0) == 0.0);
    CHECK(d.features(2, 0) == 1.0);
    CHECK(d.features(0, 1) == 0.0);
    CHECK(d.features(2, 1) == 1.0);
}

TEST_CASE("dataset summary json") {
    Dataset d;
    d.features = Matrix(3, 2);
    d.labels = {1, -1, -1};
    d.name = "demo";
    d.rebuild_class_index();
    CHECK(d.summary_json() == R"({"n":2,"n_neg":2,"n_pos":1,"name":"demo"})");
}

TEST_CASE("bundled dataset shapes match the documented corpus") {
    const std::string dir = GDRC_DATA_DIR;
    {
        Dataset d = parse_csv(dir + "/wisconsin.csv", "class", "4");
        CHECK(d.count_positive() == 239);
        CHECK(d.count_negative() == 444);
        CHECK(d.dim() == 9);
        CHECK(d.dropped_rows == 16);
    }
    {
        Dataset d = parse_csv(dir + "/balance_scale.csv", "class", "L");
        CHECK(d.count_positive() == 288);
        CHECK(d.count_negative() == 288);
        CHECK(d.dim() == 4);
    }
    {
        Dataset d = parse_csv(dir + "/ionosphere.csv", "class", "g");
        CHECK(d.count_positive() == 225);
        CHECK(d.count_negative() == 126);
        CHECK(d.dim() == 34);
    }
    {
        Dataset d = parse_svmlight(dir + "/mushrooms.svmlight");
        CHECK(d.count_positive() == 3916);
        CHECK(d.count_negative() == 4208);
        CHECK(d.dim() == 112);
    }
    {
        Dataset d = parse_svmlight(dir + "/codrna.svmlight");
        CHECK(d.count_positive() == 19845);
        CHECK(d.count_negative() == 39690);
        CHECK(d.dim() == 8);
    }
}
