#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dicke/records.hpp"

using namespace dicke;

namespace {

bool same_bits(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_CASE("column names and indices agree") {
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) CHECK(column_index(kRecordColumns[i]) == i);
    CHECK_THROWS_AS(column_index("entropy"), std::invalid_argument);
    RecordRow r;
    column(r, column_index("schmidt_gap")) = 0.25;
    CHECK(r.schmidt_gap == 0.25);
    CHECK_THROWS_AS(column(r, kRecordColumns.size()), std::out_of_range);
}

TEST_CASE("numbers round-trip exactly") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 2000; ++i) {
        const double v = std::bit_cast<double>(bits(rng));
        if (std::isnan(v)) continue;
        CHECK(parse_number(format_number(v)) == v);
    }
    CHECK(std::isnan(parse_number(format_number(std::nan("")))));
    CHECK(parse_number(format_number(std::numeric_limits<double>::infinity())) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_number("1.5x"), std::runtime_error);
    CHECK_THROWS_AS(parse_number(""), std::runtime_error);
}

TEST_CASE("record files round-trip bit for bit") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1e3);
    RecordFile f;
    f.metadata = {{"version", "x"}, {"model.n_qubits", "21"}};
    for (int i = 0; i < 50; ++i) {
        RecordRow r;
        for (std::size_t c = 0; c < kRecordColumns.size(); ++c) column(r, c) = g(rng) * std::pow(10.0, i % 7 - 3);
        f.rows.push_back(r);
    }
    column(f.rows[3], 5) = std::nan("");
    column(f.rows[4], 6) = -std::numeric_limits<double>::infinity();
    std::stringstream ss;
    write_records(ss, f);
    const RecordFile back = read_records(ss);
    CHECK(back.metadata == f.metadata);
    REQUIRE(back.rows.size() == f.rows.size());
    for (std::size_t i = 0; i < f.rows.size(); ++i) {
        for (std::size_t c = 0; c < kRecordColumns.size(); ++c) CHECK(same_bits(column(back.rows[i], c), column(f.rows[i], c)));
    }
}

TEST_CASE("malformed record files are rejected") {
    std::string header;
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) header += (i ? "," : "") + std::string(kRecordColumns[i]);
    auto read = [](const std::string& text) {
        std::istringstream is(text);
        return read_records(is);
    };
    CHECK_THROWS_AS(read("# a: b\n"), std::runtime_error);
    CHECK_THROWS_AS(read("t,lambda\n"), std::runtime_error);
    CHECK_THROWS_AS(read(header + "\n1,2,3\n"), std::runtime_error);
    std::string renamed = header;
    renamed.replace(0, 1, "T");
    CHECK_THROWS_AS(read(renamed + "\n"), std::runtime_error);
    std::string row(kRecordColumns.size() - 1, ',');
    row.insert(0, "abc");
    CHECK_THROWS(read(header + "\n" + row + "\n"));
    CHECK(read(header + "\n").rows.empty());
}

TEST_CASE("make_row copies the measurement and derives the spin columns") {
    ObservableRecord o;
    o.photons = 2.0;
    o.xi_b2 = 0.75;
    o.c_w = 0.1;
    o.xi_q2 = 0.5;
    const RecordRow r = make_row(1.0, 0.2, -6.0, 6, o);
    CHECK(r.t == 1.0);
    CHECK(r.lambda == 0.2);
    CHECK(r.gamma == -6.0);
    CHECK(r.photons == 2.0);
    CHECK(r.one_minus_xi_b2 == doctest::Approx(0.25));
    CHECK(r.spin_concurrence == doctest::Approx(0.5));
}

TEST_CASE("sidecar rows carry t, lambda and the vector") {
    std::ostringstream os;
    write_vector_rows(os, "p", {0.0, 1.0}, {0.0, 0.5}, {{1.0, 0.0}, {0.5, 0.5}});
    const std::string s = os.str();
    CHECK(s.find("t,lambda,p0,p1") == 0);
    CHECK(s.find("1,0.5,0.5,0.5") != std::string::npos);
}
