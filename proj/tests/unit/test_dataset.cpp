#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lsp/dataset.hpp"
#include "lsp/error.hpp"

using namespace lsp;

namespace {

const std::vector<std::string> kLabelA{"A"};

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("lsp_dataset_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("label header in document order") {
    auto names = parse_label_header(R"(<labels><label name="beach"/><label name="urban"/></labels>)");
    CHECK(names == std::vector<std::string>{"beach", "urban"});
}

TEST_CASE("MULAN header with declaration, namespace and nested labels") {
    const char* xml = R"(<?xml version="1.0" encoding="utf-8"?>
<!-- comment -->
<labels xmlns="http://mulan.sourceforge.net/labels">
  <label name="a"></label>
  <label name="b">
    <label name="b.1"/>
  </label>
</labels>
)";
    CHECK(parse_label_header(xml) == std::vector<std::string>{"a", "b", "b.1"});
}

TEST_CASE("label header errors") {
    CHECK_THROWS_AS(parse_label_header("<labels/>"), SchemaError);
    CHECK_THROWS_AS(parse_label_header(R"(<labels><label name="a"/><label name="a"/></labels>)"), SchemaError);
    try {
        parse_label_header("<labels>\n<label name=\"a\"/>\n<label name=\"b\">\n</labels>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 3);
    }
    CHECK_THROWS_AS(parse_label_header("<labels><label/></labels>"), ParseError);
}

TEST_CASE("dense ARFF read-off") {
    const char* arff = "@relation t\n@attribute f1 numeric\n@attribute A {0,1}\n@data\n1.5,1\n2.0,0\n";
    auto d = parse_arff(arff, kLabelA);
    CHECK(d.features() == FeatureMatrix::from_rows({{1.5}, {2.0}}));
    CHECK(d.labels() == LabelMatrix::from_rows({{1}, {0}}));
    CHECK(d.label_names() == kLabelA);
    CHECK(d.feature_count() == 1);
}

TEST_CASE("sparse row defaults omitted entries to zero") {
    const char* arff =
        "@relation t\n@attribute f1 numeric\n@attribute f2 numeric\n@attribute A {0,1}\n@data\n{0 2.5, 2 1}\n{}\n";
    auto d = parse_arff(arff, kLabelA);
    CHECK(d.features() == FeatureMatrix::from_rows({{2.5, 0.0}, {0.0, 0.0}}));
    CHECK(d.labels() == LabelMatrix::from_rows({{1}, {0}}));
}

TEST_CASE("label value outside {0,1} is rejected") {
    const char* arff = "@relation t\n@attribute f1 numeric\n@attribute A numeric\n@data\n1.5,2\n";
    CHECK_THROWS_WITH_AS(parse_arff(arff, kLabelA), doctest::Contains("label value outside {0,1}"), ParseError);
}

TEST_CASE("row errors") {
    const std::string head = "@relation t\n@attribute f1 numeric\n@attribute A {0,1}\n@data\n";
    CHECK_THROWS_AS(parse_arff(head + "abc,1\n", kLabelA), ParseError);
    CHECK_THROWS_AS(parse_arff(head + "1,1,3\n", kLabelA), ParseError);
    CHECK_THROWS_AS(parse_arff(head + "{5 1}\n", kLabelA), ParseError);
    CHECK_THROWS_AS(parse_arff(head + "?,1\n", kLabelA), ParseError);
    CHECK_THROWS_AS(parse_arff(head + "1\n", kLabelA), ParseError);
    CHECK_THROWS_AS(parse_arff(head + "1,1\n", {std::vector<std::string>{"B"}}), SchemaError);
    try {
        parse_arff(head + "1,0\n2,0\nx,1\n", kLabelA);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
    }
}

TEST_CASE("labels located by name anywhere, nominal features coded in declaration order") {
    const char* arff =
        "% comment\n@RELATION 'x: y'\n@attribute B {0,1}\n@attribute colour {red,green,blue}\n"
        "@attribute A {0,1}\n@attribute 'f x' real\n@DATA\n1,blue,0,0.25\n0,red,1,-3e2\n";
    auto d = parse_arff(arff, std::vector<std::string>{"A", "B"});
    CHECK(d.labels() == LabelMatrix::from_rows({{0, 1}, {1, 0}}));
    CHECK(d.features() == FeatureMatrix::from_rows({{2.0, 0.25}, {0.0, -300.0}}));
    REQUIRE(d.attribute_meta().size() == 2);
    CHECK(d.attribute_meta()[0].kind == AttributeMeta::Kind::nominal);
    CHECK(d.attribute_meta()[0].categories == std::vector<std::string>{"red", "green", "blue"});
    CHECK(d.attribute_meta()[1].name == "f x");
}

TEST_CASE("sparse and dense encodings of the same data are identical") {
    const std::string head = "@relation t\n@attribute f1 numeric\n@attribute f2 numeric\n@attribute A {0,1}\n"
                             "@attribute B {0,1}\n@data\n";
    std::vector<std::string> names{"A", "B"};
    auto dense = parse_arff(head + "0,3,1,0\n0,0,0,0\n1.5,0,1,1\n", names);
    auto sparse = parse_arff(head + "{1 3,2 1}\n{}\n{0 1.5, 2 1, 3 1}\n", names);
    CHECK(dense == sparse);
}

TEST_CASE("write_arff round-trip on random datasets") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t rows = rng() % 10, features = 1 + rng() % 4, labels = 1 + rng() % 4;
        FeatureMatrix x(rows, features);
        LabelMatrix y(rows, labels);
        std::normal_distribution<double> normal(0, 1e3);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t f = 0; f < features; ++f) x(r, f) = normal(rng);
            for (std::size_t l = 0; l < labels; ++l) y(r, l) = rng() % 2;
        }
        std::vector<AttributeMeta> meta;
        for (std::size_t f = 0; f < features; ++f) meta.push_back({"f" + std::to_string(f), AttributeMeta::Kind::numeric, {}});
        std::vector<std::string> names;
        for (std::size_t l = 0; l < labels; ++l) names.push_back("L" + std::to_string(l));
        Dataset d(x, y, names, meta);
        std::ostringstream out;
        write_arff(out, d, "round trip");
        CHECK(parse_arff(out.str(), names) == d);
    }
}

TEST_CASE("label header round-trip") {
    std::vector<std::string> names{"a", "b c", "d&e"};
    std::ostringstream out;
    write_label_header(out, names);
    CHECK(parse_label_header(out.str()) == names);
}

TEST_CASE("load_pair checks schema equality") {
    auto dir = temp_dir("pair");
    write(dir / "l.xml", R"(<labels><label name="A"/></labels>)");
    write(dir / "train.arff", "@relation t\n@attribute f1 numeric\n@attribute f2 numeric\n@attribute A {0,1}\n@data\n1,2,1\n");
    write(dir / "test.arff", "@relation t\n@attribute f1 numeric\n@attribute f2 numeric\n@attribute A {0,1}\n@data\n3,4,0\n");
    write(dir / "bad.arff", "@relation t\n@attribute f1 numeric\n@attribute A {0,1}\n@data\n3,0\n");
    write(dir / "other.xml", R"(<labels><label name="Z"/></labels>)");

    auto pair = load_pair(dir / "train.arff", dir / "test.arff", dir / "l.xml");
    CHECK(pair.train.instance_count() == 1);
    CHECK(pair.test.features() == FeatureMatrix::from_rows({{3.0, 4.0}}));

    CHECK_THROWS_WITH_AS(load_pair(dir / "train.arff", dir / "bad.arff", dir / "l.xml"),
                         doctest::Contains("feature count"), SchemaError);
    CHECK_THROWS_AS(load_pair(dir / "train.arff", dir / "test.arff", dir / "other.xml"), SchemaError);
    CHECK_THROWS_AS(load_pair(dir / "missing.arff", dir / "test.arff", dir / "l.xml"), Error);
}

TEST_CASE("dataset constructor invariants") {
    std::vector<AttributeMeta> meta{{"f", AttributeMeta::Kind::numeric, {}}};
    CHECK_THROWS_AS(Dataset(FeatureMatrix(1, 1), LabelMatrix(1, 2), {"a"}, meta), SchemaError);
    CHECK_THROWS_AS(Dataset(FeatureMatrix(2, 1), LabelMatrix(1, 1), {"a"}, meta), SchemaError);
    CHECK_THROWS_AS(Dataset(FeatureMatrix(1, 1), LabelMatrix(1, 1, 2), {"a"}, meta), SchemaError);
}
