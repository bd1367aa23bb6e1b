#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "rulelift/dataset.hpp"
#include "support/fixtures.hpp"

using namespace rulelift;

TEST_CASE("csv loader splits features and labels") {
    Dataset ds = parse_csv_dataset("a,b,l1,l2\n1,x,0,1\n2,y,1,0\n", 2);
    CHECK(ds.attribute_count() == 2);
    CHECK(ds.label_count() == 2);
    CHECK(ds.instance_count() == 2);
    CHECK(ds.schema[0].kind == Attribute::Kind::Numeric);
    CHECK(ds.schema[1].kind == Attribute::Kind::Nominal);
    CHECK(ds.labels[0] == LabelVector{0, 1});
    CHECK(ds.labels[1] == LabelVector{1, 0});
}

TEST_CASE("csv nominal value list keeps observation order") {
    Dataset ds = parse_csv_dataset("c,l\na,0\nb,1\na,0\n", 1);
    CHECK(ds.schema[0].values == std::vector<std::string>{"a", "b"});
    CHECK(ds.instances[2][0] == 0.0);
}

TEST_CASE("csv toy table loads with zero features") {
    Dataset ds = testing::toy_dataset();
    CHECK(ds.instance_count() == 6);
    CHECK(ds.label_count() == 4);
    CHECK(ds.attribute_count() == 0);
    CHECK(ds.labels[0] == LabelVector{0, 1, 1, 0});
    CHECK(ds.labels[1] == LabelVector{1, 1, 1, 1});
    CHECK(ds.labels[2] == LabelVector{0, 0, 1, 0});
    CHECK(ds.labels[3] == LabelVector{0, 1, 1, 0});
    CHECK(ds.labels[4] == LabelVector{1, 1, 0, 0});
    CHECK(ds.labels[5] == LabelVector{1, 0, 0, 0});
}

TEST_CASE("csv loader rejects bad configurations and values") {
    CHECK_THROWS_AS(parse_csv_dataset("a,l\n1,0\n", 3), ConfigError);
    CHECK_THROWS_AS(parse_csv_dataset("a,l\n1,0\n", 0), ConfigError);
    CHECK_THROWS_AS(parse_csv_dataset("a,l\n1,2\n", 1), ValueError);
    CHECK_THROWS_AS(parse_csv_dataset("a,l\n1,yes\n", 1), ValueError);
    CHECK_THROWS_AS(parse_csv_dataset("", 1), ParseError);
    CHECK_THROWS_AS(parse_csv_dataset("a,l\n1\n", 1), ParseError);
}

TEST_CASE("csv quoting handles commas, quotes and newlines") {
    Dataset ds = parse_csv_dataset("\"a,x\",l\n\"v,1\",0\n\"say \"\"hi\"\"\",1\n\"two\nlines\",0\n", 1);
    CHECK(ds.schema[0].name == "a,x");
    CHECK(ds.schema[0].values ==
          std::vector<std::string>{"v,1", "say \"hi\"", "two\nlines"});
}

TEST_CASE("csv round-trip preserves instances and labels") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 25; ++round) {
        Dataset ds = testing::random_dataset(rng, 1 + rng() % 20, 1 + rng() % 5);
        // Mix in a nominal column by rebuilding through CSV once.
        Dataset back = parse_csv_dataset(to_csv(ds), ds.label_count());
        REQUIRE(back.instance_count() == ds.instance_count());
        REQUIRE(back.attribute_count() == ds.attribute_count());
        CHECK(back.labels == ds.labels);
        for (std::size_t r = 0; r < ds.instance_count(); ++r)
            for (std::size_t a = 0; a < ds.attribute_count(); ++a)
                CHECK(back.cell_text(r, a) == ds.cell_text(r, a));
        Dataset again = parse_csv_dataset(to_csv(back), back.label_count());
        CHECK(again.instances == back.instances);
        CHECK(again.labels == back.labels);
    }
}

TEST_CASE("csv round-trip keeps nominal columns") {
    std::string text = "color,size,l1\nred,small,1\nblue,big,0\nred,big,1\n";
    Dataset ds = parse_csv_dataset(text, 1);
    Dataset back = parse_csv_dataset(to_csv(ds), 1);
    CHECK(back.schema == ds.schema);
    CHECK(back.instances == ds.instances);
    CHECK(back.labels == ds.labels);
}

namespace {

const char* kToyArff =
    "% toy file\n"
    "@RELATION toy\n"
    "\n"
    "@ATTRIBUTE temp NUMERIC\n"
    "@attribute 'wind speed' real\n"
    "@attribute outlook {sunny, rainy}\n"
    "@attribute lab1 {0,1}\n"
    "@attribute lab2 {1,0}\n"
    "@data\n"
    "20.5, 3, sunny, 1, 0\n"
    "18, 5, rainy, 0, 1\n";

const char* kToyXml =
    "<?xml version=\"1.0\"?>\n"
    "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n"
    "  <label name=\"lab1\"></label>\n"
    "  <label name=\"lab2\"></label>\n"
    "</labels>\n";

}  // namespace

TEST_CASE("mulan loader splits labels by xml name") {
    Dataset ds = parse_mulan(kToyArff, kToyXml);
    CHECK(ds.attribute_count() == 3);
    CHECK(ds.label_count() == 2);
    CHECK(ds.schema[1].name == "wind speed");
    CHECK(ds.schema[2].values == std::vector<std::string>{"sunny", "rainy"});
    CHECK(ds.instances[0] == std::vector<double>{20.5, 3.0, 0.0});
    CHECK(ds.labels[0] == LabelVector{1, 0});
    CHECK(ds.labels[1] == LabelVector{0, 1});
}

TEST_CASE("mulan loader maps reversed nominal label lists by value") {
    // lab2 declares {1,0}; the cell text decides, not the value index.
    Dataset ds = parse_mulan(kToyArff, kToyXml);
    CHECK(ds.labels[0][1] == 0);
    CHECK(ds.labels[1][1] == 1);
}

TEST_CASE("mulan loader accepts an empty data section") {
    Dataset ds = parse_mulan("@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\n",
                             "<label name=\"l\"/>");
    CHECK(ds.instance_count() == 0);
    CHECK(ds.attribute_count() == 1);
    CHECK(ds.label_count() == 1);
}

TEST_CASE("mulan loader error cases") {
    CHECK_THROWS_AS(parse_mulan(kToyArff, "<label name=\"nope\"/>"), SchemaError);
    CHECK_THROWS_AS(parse_mulan(kToyArff, "<labels></labels>"), SchemaError);
    CHECK_THROWS_AS(
        parse_mulan("@relation r\n@attribute l {0,1,2}\n@data\n", "<label name=\"l\"/>"),
        ValueError);
    CHECK_THROWS_AS(
        parse_mulan("@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\n?,1\n",
                    "<label name=\"l\"/>"),
        ValueError);
    CHECK_THROWS_AS(
        parse_mulan("@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\n{0 1}\n",
                    "<label name=\"l\"/>"),
        ParseError);
    try {
        parse_mulan("@relation r\n@attribute a numeric\n@attribute l {0,1}\n@data\nx,1\n",
                    "<label name=\"l\"/>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
    try {
        parse_mulan("@relation r\n@attribute a numeric\n@nonsense\n@data\n",
                    "<label name=\"a\"/>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("coverage state tracks pairs and open labels") {
    CoverageState cov(6, 4);
    Dataset ds = testing::toy_dataset();
    CHECK(uncovered_pairs(ds, cov) == 24);
    CHECK(cov.mark(0, 0));
    CHECK_FALSE(cov.mark(0, 0));
    CHECK(cov.covered(0, 0));
    CHECK(cov.covered_pairs() == 1);
    CHECK(cov.open_labels(0) == 3);
    // one rule covering 3 instances on 2 labels
    CoverageState cov2(6, 4);
    for (std::size_t j : {0, 1, 2})
        for (std::size_t i : {0, 1}) cov2.mark(j, i);
    CHECK(uncovered_pairs(ds, cov2) == 18);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < 4; ++i) cov2.mark(j, i);
    CHECK(uncovered_pairs(ds, cov2) == 0);
    CoverageState wrong(5, 4);
    CHECK_THROWS_AS(uncovered_pairs(ds, wrong), SchemaError);
}

TEST_CASE("stratified folds give balanced sizes") {
    std::mt19937_64 rng(11);
    Dataset ds = testing::random_dataset(rng, 10, 3);
    auto folds = stratified_folds(ds, 5, 42);
    REQUIRE(folds.size() == 5);
    for (const auto& f : folds) CHECK(f.size() == 2);

    Dataset ds7 = testing::random_dataset(rng, 7, 3);
    auto folds7 = stratified_folds(ds7, 5, 42);
    std::multiset<std::size_t> sizes;
    for (const auto& f : folds7) sizes.insert(f.size());
    CHECK(sizes == std::multiset<std::size_t>{1, 1, 1, 2, 2});
}

TEST_CASE("stratified folds are deterministic and partition the indices") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 100; ++round) {
        std::size_t m = 2 + rng() % 30;
        Dataset ds = testing::random_dataset(rng, m, 1 + rng() % 4);
        std::size_t k = 1 + rng() % m;
        std::uint64_t seed = rng();
        auto a = stratified_folds(ds, k, seed);
        auto b = stratified_folds(ds, k, seed);
        CHECK(a == b);
        std::set<std::size_t> all;
        std::size_t min_size = m, max_size = 0;
        for (const auto& fold : a) {
            min_size = std::min(min_size, fold.size());
            max_size = std::max(max_size, fold.size());
            for (std::size_t j : fold) CHECK(all.insert(j).second);
        }
        CHECK(all.size() == m);
        CHECK(max_size - min_size <= 1);
    }
    Dataset small = testing::random_dataset(rng, 3, 2);
    CHECK_THROWS_AS(stratified_folds(small, 4, 1), ConfigError);
}

TEST_CASE("schema fingerprint reacts to schema changes only") {
    Dataset ds = parse_csv_dataset("a,b,l\n1,x,0\n", 1);
    Dataset same = parse_csv_dataset("a,b,l\n2,x,1\n", 1);
    CHECK(ds.schema_fingerprint() == same.schema_fingerprint());
    Dataset renamed = parse_csv_dataset("a,c,l\n1,x,0\n", 1);
    CHECK(ds.schema_fingerprint() != renamed.schema_fingerprint());
}

TEST_CASE("subset keeps schema and selected rows") {
    Dataset ds = testing::toy_dataset();
    Dataset sub = subset(ds, {1, 4});
    CHECK(sub.instance_count() == 2);
    CHECK(sub.labels[0] == ds.labels[1]);
    CHECK(sub.labels[1] == ds.labels[4]);
    CHECK(sub.schema_fingerprint() == ds.schema_fingerprint());
}
