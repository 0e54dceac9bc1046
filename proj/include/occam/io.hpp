#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "occam/errors.hpp"
#include "occam/types.hpp"

namespace occam {

// File formats: adjacency as a plain-text edge list ("i j" per line,
// 0-based, i < j, sorted), membership matrices as headerless CSV with K
// columns, metadata as flat key=value lines. Doubles are printed with
// %.17g so output is byte-reproducible and round-trips exactly.

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_edge_list(std::ostream& out, const AdjacencyMatrix& a) {
    const int n = a.nodes();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a.entries()(i, j) != 0.0) out << i << ' ' << j << '\n';
}

/// Parses an edge list. Node count is inferred as max id + 1; blank lines
/// and lines starting with '#' are skipped. Malformed lines raise
/// ParseError with their 1-based line number.
inline AdjacencyMatrix read_edge_list(std::istream& in) {
    std::vector<std::pair<long, long>> edges;
    long max_id = -1;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        long i, j;
        std::string extra;
        if (!(ss >> i >> j)) throw ParseError("expected two node ids", line_no);
        if (ss >> extra) throw ParseError("trailing characters after edge", line_no);
        if (i < 0 || j < 0) throw ParseError("negative node id", line_no);
        if (i == j) throw ParseError("self-loops are not allowed", line_no);
        edges.push_back({i, j});
        max_id = std::max({max_id, i, j});
    }
    if (max_id < 0) throw ParseError("edge list is empty", line_no);
    const long n = max_id + 1;
    Matrix a = Matrix::Zero(n, n);
    for (const auto& [i, j] : edges) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
    }
    return AdjacencyMatrix(std::move(a));
}

inline void write_matrix_csv(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

inline void write_binary_csv(std::ostream& out, const BinaryMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

/// Reads a headerless CSV matrix. All rows must have the same width.
inline Matrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("bad numeric cell '" + cell + "'", line_no);
            }
        }
        if (row.empty()) throw ParseError("empty row", line_no);
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row width " + std::to_string(row.size()) +
                                 " differs from first row width " +
                                 std::to_string(rows.front().size()),
                             line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix file is empty", line_no);
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

/// Ordered key=value block (insertion order preserved on write).
using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline void write_key_values(std::ostream& out, const KeyValues& kv) {
    for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
}

inline std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

}  // namespace occam
