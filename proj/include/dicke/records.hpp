#pragma once
// CSV record files: '#'-prefixed metadata lines, one header line, one row per
// sample. Numbers are written in shortest round-trip form so parsing a written
// file reproduces every value bit for bit.

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dicke/observables.hpp"

namespace dicke {

struct RecordRow {
    double t = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double photons = 0.0;
    double jz = 0.0;
    double order_parameter = 0.0;
    double xi_b2 = 1.0;
    double one_minus_xi_b2 = 0.0;
    double c_w = 0.0;
    double xi_q2 = 1.0;
    double spin_concurrence = 0.0;  // (N-1) c_w = 1 - xi_q2
    double schmidt_gap = 1.0;
    double s1_sq = 1.0;
    double s2_sq = 0.0;
    double norm = 1.0;
    double parity = 1.0;
    double j_squared = 0.0;
    double boundary_population = 0.0;

    bool operator==(const RecordRow&) const = default;
};

inline constexpr std::array<std::string_view, 18> kRecordColumns{
    "t",           "lambda",           "gamma", "photons", "jz",    "order_parameter",
    "xi_b2",       "one_minus_xi_b2",  "c_w",   "xi_q2",   "spin_concurrence",
    "schmidt_gap", "s1_sq",            "s2_sq", "norm",    "parity", "j_squared", "boundary_population",
};

// Column access by schema index, in kRecordColumns order.
double column(const RecordRow& row, std::size_t index);
double& column(RecordRow& row, std::size_t index);
std::size_t column_index(std::string_view name);

RecordRow make_row(double t, double lambda, double gamma, int n_qubits, const ObservableRecord& obs);

struct RecordFile {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<RecordRow> rows;
};

std::string format_number(double v);
double parse_number(std::string_view s);

void write_records(std::ostream& os, const RecordFile& file);
// Throws std::runtime_error on malformed input.
RecordFile read_records(std::istream& is);

// Sidecar files: one row per sample, leading t and lambda columns followed by
// a vector (populations or Schmidt coefficients).
void write_vector_rows(std::ostream& os, std::string_view prefix, const std::vector<double>& times,
                       const std::vector<double>& lambdas, const std::vector<std::vector<double>>& values);

}  // namespace dicke
