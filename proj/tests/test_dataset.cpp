#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ctgboost/dataset.hpp"
#include "ctgboost/error.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace ctgboost;

namespace {

std::string header_line(const FeatureSchema& schema) {
    std::string out;
    for (const auto& p : schema.predictors) out += p + ",";
    return out + schema.target + "\n";
}

std::string row_line(double base, const std::string& label) {
    std::string out;
    for (std::size_t f = 0; f < kNumPredictors; ++f) out += std::to_string(base + static_cast<double>(f)) + ",";
    return out + label + "\n";
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("canonical schema has 21 unique predictors") {
    const auto schema = FeatureSchema::canonical();
    CHECK(schema.predictors.size() == kNumPredictors);
    CHECK(std::set(schema.predictors.begin(), schema.predictors.end()).size() == kNumPredictors);
    CHECK(schema.target == "fetal_health");
    CHECK_NOTHROW(schema.validate());
}

TEST_CASE("column names normalize case, spaces and the prolonged spelling") {
    CHECK(normalize_column_name("  Baseline Value ") == "baseline_value");
    CHECK(normalize_column_name("prolonged_decelerations") == "prolongued_decelerations");
    CHECK(normalize_column_name("HISTOGRAM__MIN") == "histogram_min");
}

TEST_CASE("parse maps labels 1/2/3 to 0/1/2 and assigns row ids in file order") {
    const auto schema = FeatureSchema::canonical();
    const std::string text = header_line(schema) + row_line(1, "1.0") + row_line(2, "2") + row_line(3, "3.0");
    const auto ds = parse_csv(text);
    REQUIRE(ds.size() == 3);
    CHECK(ds.label(0) == 0);
    CHECK(ds.label(1) == 1);
    CHECK(ds.label(2) == 2);
    CHECK(ds.row_id(2) == 2);
    CHECK(ds.row(1)[4] == doctest::Approx(6.0));
}

TEST_CASE("columns may appear in any order, with extra columns ignored") {
    auto schema = FeatureSchema::canonical();
    std::string text = "extra," + schema.target;
    for (auto it = schema.predictors.rbegin(); it != schema.predictors.rend(); ++it) text += "," + *it;
    text += "\nzzz,2.0";
    for (std::size_t f = 0; f < kNumPredictors; ++f) text += "," + std::to_string(kNumPredictors - 1 - f);
    text += "\n";
    const auto ds = parse_csv(text);
    REQUIRE(ds.size() == 1);
    CHECK(ds.label(0) == 1);
    for (std::size_t f = 0; f < kNumPredictors; ++f) CHECK(ds.row(0)[f] == static_cast<double>(f));
}

TEST_CASE("parse errors carry their kind") {
    const auto schema = FeatureSchema::canonical();
    const std::string good = header_line(schema);

    SUBCASE("missing column") {
        std::string text = good;
        text.replace(text.find("histogram_mode"), 14, "histogram_moda");
        CHECK(kind_of([&] { parse_csv(text + row_line(1, "1")); }) == ErrorKind::MissingColumn);
    }
    SUBCASE("label outside 1..3") {
        CHECK(kind_of([&] { parse_csv(good + row_line(1, "4.0")); }) == ErrorKind::InvalidLabel);
        CHECK(kind_of([&] { parse_csv(good + row_line(1, "1.5")); }) == ErrorKind::InvalidLabel);
    }
    SUBCASE("unparsable cell") {
        std::string row = row_line(1, "1");
        row.replace(0, row.find(','), "abc");
        CHECK(kind_of([&] { parse_csv(good + row); }) == ErrorKind::UnparsableCell);
    }
    SUBCASE("ragged row") {
        CHECK(kind_of([&] { parse_csv(good + "1,2,3\n"); }) == ErrorKind::UnparsableCell);
    }
    SUBCASE("non-finite value") {
        std::string row = row_line(1, "1");
        row.replace(0, row.find(','), "inf");
        const auto k = kind_of([&] { parse_csv(good + row); });
        CHECK((k == ErrorKind::NonFiniteValue || k == ErrorKind::UnparsableCell));
    }
    SUBCASE("missing file") {
        CHECK(kind_of([&] { load_csv("/nonexistent/fetal_health.csv"); }) == ErrorKind::Io);
    }
}

TEST_CASE("quoted fields, CRLF and a BOM parse") {
    const auto schema = FeatureSchema::canonical();
    std::string text = "\xEF\xBB\xBF" + header_line(schema) + row_line(1, "\"3.0\"");
    std::string crlf;
    for (char c : text) crlf += c == '\n' ? std::string("\r\n") : std::string(1, c);
    text = crlf;
    const auto ds = parse_csv(text);
    REQUIRE(ds.size() == 1);
    CHECK(ds.label(0) == 2);
}

TEST_CASE("write then load round-trips exactly") {
    const auto ds = testing::make_ctg_like(11, {40, 9, 7});
    const auto dir = testing::fresh_temp_dir("dataset_rt");
    write_csv(ds, dir / "t.csv");
    const auto back = load_csv(dir / "t.csv");
    CHECK(back == ds);
}

TEST_CASE("dataset constructor validates its inputs") {
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, 2, {0, 1}, {0, 1}), Error);
    CHECK(kind_of([] { Dataset({1.0, 2.0}, 1, {0, 5}, {0, 1}); }) == ErrorKind::InvalidLabel);
    CHECK(kind_of([] { Dataset({1.0, NAN}, 1, {0, 1}, {0, 1}); }) == ErrorKind::NonFiniteValue);
}

TEST_CASE("stratified split on the canonical class counts keeps 426 rows out") {
    const ClassCounts counts{1655, 295, 176};
    const auto quota = stratified_test_quota(counts, 0.2);
    CHECK(quota[0] + quota[1] + quota[2] == 426);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(static_cast<double>(quota[k]) - 0.2 * counts[k]) <= 1.0);
}

TEST_CASE("stratified split partitions rows and keeps per-class proportions within one row") {
    for (std::uint64_t seed : {1u, 2u, 3u, 123u}) {
        const auto ds = testing::make_ctg_like(seed, {300 + seed, 47 + seed, 29});
        for (double fraction : {0.0, 0.1, 0.2, 0.33, 0.5, 1.0}) {
            const auto split = stratified_split(ds, fraction, seed);
            CHECK(split.train.size() + split.test.size() == ds.size());
            std::set<std::uint64_t> ids;
            for (auto id : split.train.row_ids()) ids.insert(id);
            for (auto id : split.test.row_ids()) ids.insert(id);
            CHECK(ids.size() == ds.size());
            const auto full = class_counts(ds);
            const auto test = class_counts(split.test);
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(std::abs(static_cast<double>(test[k]) - fraction * full[k]) <= 1.0);
            }
        }
    }
}

TEST_CASE("30-row toy splits 24/6 with per-class counts within one") {
    const auto ds = testing::make_blobs(5, {20, 6, 4}, 3, 2.0);
    const auto split = stratified_split(ds, 0.2, 123);
    CHECK(split.test.size() == 6);
    CHECK(split.train.size() == 24);
    const auto test = class_counts(split.test);
    CHECK(test[0] == 4);
    CHECK(test[1] + test[2] == 2);
}

TEST_CASE("split is a pure function of data and seed") {
    const auto ds = testing::make_ctg_like(3, {100, 30, 20});
    CHECK(stratified_split(ds, 0.2, 9).test == stratified_split(ds, 0.2, 9).test);
    CHECK_FALSE(stratified_split(ds, 0.2, 9).test == stratified_split(ds, 0.2, 10).test);
}

TEST_CASE("test fraction outside [0, 1] is rejected") {
    const auto ds = testing::make_blobs(5, {5, 5, 5}, 2, 2.0);
    CHECK(kind_of([&] { stratified_split(ds, 1.5, 1); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { stratified_split(ds, -0.1, 1); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { stratified_split(Dataset(2), 0.2, 1); }) == ErrorKind::EmptyDataset);
}
