#include "dicke/records.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dicke {

namespace {

template <typename Row, typename Ret>
Ret column_impl(Row& r, std::size_t index) {
    switch (index) {
        case 0: return r.t;
        case 1: return r.lambda;
        case 2: return r.gamma;
        case 3: return r.photons;
        case 4: return r.jz;
        case 5: return r.order_parameter;
        case 6: return r.xi_b2;
        case 7: return r.one_minus_xi_b2;
        case 8: return r.c_w;
        case 9: return r.xi_q2;
        case 10: return r.spin_concurrence;
        case 11: return r.schmidt_gap;
        case 12: return r.s1_sq;
        case 13: return r.s2_sq;
        case 14: return r.norm;
        case 15: return r.parity;
        case 16: return r.j_squared;
        case 17: return r.boundary_population;
        default: throw std::out_of_range("record column index " + std::to_string(index));
    }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

double column(const RecordRow& row, std::size_t index) { return column_impl<const RecordRow, double>(row, index); }
double& column(RecordRow& row, std::size_t index) { return column_impl<RecordRow, double&>(row, index); }

std::size_t column_index(std::string_view name) {
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
        if (kRecordColumns[i] == name) return i;
    }
    throw std::invalid_argument("unknown record column '" + std::string(name) + "'");
}

RecordRow make_row(double t, double lambda, double gamma, int n_qubits, const ObservableRecord& obs) {
    RecordRow r;
    r.t = t;
    r.lambda = lambda;
    r.gamma = gamma;
    r.photons = obs.photons;
    r.jz = obs.jz;
    r.order_parameter = obs.order_parameter;
    r.xi_b2 = obs.xi_b2;
    r.one_minus_xi_b2 = 1.0 - obs.xi_b2;
    r.c_w = obs.c_w;
    r.xi_q2 = obs.xi_q2;
    r.spin_concurrence = (n_qubits - 1) * obs.c_w;
    r.schmidt_gap = obs.schmidt_gap;
    r.s1_sq = obs.s1_sq;
    r.s2_sq = obs.s2_sq;
    r.norm = obs.norm;
    r.parity = obs.parity;
    r.j_squared = obs.j_squared;
    r.boundary_population = obs.boundary_population;
    return r;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("malformed number '" + std::string(s) + "'");
    }
    return v;
}

void write_records(std::ostream& os, const RecordFile& file) {
    for (const auto& [key, value] : file.metadata) os << "# " << key << ": " << value << '\n';
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) os << (i ? "," : "") << kRecordColumns[i];
    os << '\n';
    for (const RecordRow& row : file.rows) {
        for (std::size_t i = 0; i < kRecordColumns.size(); ++i) os << (i ? "," : "") << format_number(column(row, i));
        os << '\n';
    }
}

RecordFile read_records(std::istream& is) {
    RecordFile file;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string_view body = std::string_view(line).substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const std::size_t colon = body.find(": ");
            if (colon == std::string_view::npos) {
                file.metadata.emplace_back(std::string(body), "");
            } else {
                file.metadata.emplace_back(std::string(body.substr(0, colon)), std::string(body.substr(colon + 2)));
            }
            continue;
        }
        const auto fields = split(line, ',');
        if (!header_seen) {
            if (fields.size() != kRecordColumns.size()) throw std::runtime_error("record header has wrong column count");
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] != kRecordColumns[i]) {
                    throw std::runtime_error("unexpected record column '" + std::string(fields[i]) + "'");
                }
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != kRecordColumns.size()) {
            throw std::runtime_error("record line " + std::to_string(line_no) + " has wrong column count");
        }
        RecordRow row;
        for (std::size_t i = 0; i < fields.size(); ++i) column(row, i) = parse_number(fields[i]);
        file.rows.push_back(row);
    }
    if (!header_seen) throw std::runtime_error("record file has no header line");
    return file;
}

void write_vector_rows(std::ostream& os, std::string_view prefix, const std::vector<double>& times,
                       const std::vector<double>& lambdas, const std::vector<std::vector<double>>& values) {
    std::size_t width = 0;
    for (const auto& v : values) width = std::max(width, v.size());
    os << "t,lambda";
    for (std::size_t j = 0; j < width; ++j) os << ',' << prefix << j;
    os << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        os << format_number(times[i]) << ',' << format_number(lambdas[i]);
        for (std::size_t j = 0; j < width; ++j) os << ',' << format_number(j < values[i].size() ? values[i][j] : 0.0);
        os << '\n';
    }
}

}  // namespace dicke
