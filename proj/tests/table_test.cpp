#include <doctest.h>

#include <cmath>

#include "iris/table.hpp"

using namespace iris;

namespace {

Variable binary(const std::string& name) {
    return Variable(name, "", {"True", "False"});
}

ObservationTable small_table() {
    return ObservationTable({binary("a"), binary("b")}, {"d1", "d2", "d3"});
}

}  // namespace

TEST_CASE("fresh table is all Missing; set_cell round-trips") {
    ObservationTable t = small_table();
    for (const auto& d : t.doc_ids())
        for (const auto& v : t.variables()) CHECK_FALSE(t.cell(d, v.name).has_value());

    t.set_cell("d1", "a", std::string("True"));
    CHECK(t.cell("d1", "a") == std::string("True"));
    // canonicalizes case
    t.set_cell("d1", "b", std::string("false"));
    CHECK(t.cell("d1", "b") == std::string("False"));
}

TEST_CASE("out-of-domain and unknown row/column rejected") {
    ObservationTable t = small_table();
    CHECK_THROWS_AS(t.set_cell("d1", "a", std::string("Maybe")), InvalidArgument);
    CHECK_THROWS_AS(t.set_cell("nope", "a", std::string("True")), InvalidArgument);
    CHECK_THROWS_AS(t.set_cell("d1", "nope", std::string("True")), InvalidArgument);
}

TEST_CASE("complete_rows filters rows with Missing in the subset") {
    ObservationTable t = small_table();
    t.set_cell("d1", "a", std::string("True"));
    t.set_cell("d1", "b", std::string("True"));
    // d2 missing in a
    t.set_cell("d2", "b", std::string("False"));
    t.set_cell("d3", "a", std::string("False"));
    t.set_cell("d3", "b", std::string("True"));

    CHECK(t.complete_rows({"a", "b"}) == std::vector<std::string>{"d1", "d3"});
    CHECK(t.complete_rows({"b"}) == std::vector<std::string>{"d1", "d2", "d3"});
    // empty subset: vacuous condition, all rows
    CHECK(t.complete_rows({}) == std::vector<std::string>{"d1", "d2", "d3"});

    // partition property: complete rows + rows-with-missing = all rows
    const auto complete = t.complete_rows({"a", "b"});
    size_t missing_rows = 0;
    for (const auto& d : t.doc_ids()) {
        bool has_missing = !t.cell(d, "a") || !t.cell(d, "b");
        if (has_missing) ++missing_rows;
    }
    CHECK(complete.size() + missing_rows == t.n_rows());
}

TEST_CASE("encode_numeric conventions") {
    Variable ternary("t", "", {"-1", "0", "1"});
    ObservationTable t({ternary, binary("b")}, {"d1", "d2", "d3", "d4"});
    const char* tvals[] = {"-1", "0", "1", "0"};
    const char* bvals[] = {"True", "False", "True", "False"};
    for (int i = 0; i < 4; ++i) {
        t.set_cell(t.doc_ids()[i], "t", std::string(tvals[i]));
        t.set_cell(t.doc_ids()[i], "b", std::string(bvals[i]));
    }
    NumericMatrix m = encode_numeric(t);
    REQUIRE(m.rows == 4);
    REQUIRE(m.cols == 2);
    for (size_t c = 0; c < m.cols; ++c) {
        double mean = 0, var = 0;
        for (size_t r = 0; r < m.rows; ++r) mean += m.at(r, c);
        mean /= 4;
        CHECK(std::fabs(mean) < 1e-9);
        for (size_t r = 0; r < m.rows; ++r) var += (m.at(r, c) - mean) * (m.at(r, c) - mean);
        var /= 4;
        CHECK(std::fabs(var - 1.0) < 1e-9);
        for (size_t r = 0; r < m.rows; ++r) CHECK(std::isfinite(m.at(r, c)));
    }
    // ordering preserved: numeric parse means -1 < 0 < 1 stays ordered after scaling
    CHECK(m.at(0, 0) < m.at(1, 0));
    CHECK(m.at(1, 0) < m.at(2, 0));
    // binary: True maps above False
    CHECK(m.at(0, 1) > m.at(1, 1));
}

TEST_CASE("encode_numeric drops incomplete rows and zeroes constant columns") {
    ObservationTable t = small_table();
    t.set_cell("d1", "a", std::string("True"));
    t.set_cell("d1", "b", std::string("True"));
    t.set_cell("d3", "a", std::string("False"));
    t.set_cell("d3", "b", std::string("True"));  // b constant over complete rows
    NumericMatrix m = encode_numeric(t);
    CHECK(m.rows == 2);
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(1, 1) == 0.0);
}

TEST_CASE("encode_numeric with zero complete rows is an error") {
    ObservationTable t = small_table();
    t.set_cell("d1", "a", std::string("True"));
    CHECK_THROWS_AS(encode_numeric(t), InvalidArgument);
}

TEST_CASE("CSV round-trip with NA for Missing") {
    ObservationTable t = small_table();
    t.set_cell("d1", "a", std::string("True"));
    t.set_cell("d2", "b", std::string("False"));
    const std::string csv = t.to_csv();
    CHECK(csv.find("NA") != std::string::npos);
    ObservationTable back =
        ObservationTable::from_csv(csv, {binary("a"), binary("b")});
    CHECK(back.to_csv() == csv);
    CHECK_FALSE(back.cell("d3", "a").has_value());
    CHECK(back.cell("d1", "a") == std::string("True"));
}
