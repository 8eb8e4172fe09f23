#include "pairsel/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pairsel {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw std::runtime_error("csv: non-numeric or missing value at row " +
                                 std::to_string(row + 1) + ", column " +
                                 std::to_string(col + 1) + ": \"" + cell + "\"");
    }
    return v;
}

}  // namespace

DataMatrix ingest_csv(const std::string& path,
                      const std::variant<std::string, int>& response_column,
                      bool header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);

    std::string line;
    std::vector<std::string> names;
    std::size_t ncols = 0;
    std::size_t line_no = 0;

    if (header) {
        if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path);
        names = split_fields(line);
        ncols = names.size();
        ++line_no;
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        const std::vector<std::string> fields = split_fields(line);
        if (ncols == 0) {
            ncols = fields.size();
            for (std::size_t j = 0; j < ncols; ++j) names.push_back("x" + std::to_string(j + 1));
        } else if (fields.size() != ncols) {
            throw std::runtime_error("csv: ragged row " + std::to_string(line_no + 1) +
                                     " has " + std::to_string(fields.size()) +
                                     " fields, expected " + std::to_string(ncols));
        }
        std::vector<double> row(ncols);
        for (std::size_t j = 0; j < ncols; ++j)
            row[j] = parse_cell(fields[j], line_no, j);
        rows.push_back(std::move(row));
        ++line_no;
    }
    if (rows.empty()) throw std::runtime_error("csv: no data rows in " + path);

    std::size_t resp = ncols;
    if (std::holds_alternative<int>(response_column)) {
        const int idx = std::get<int>(response_column);
        if (idx < 0 || static_cast<std::size_t>(idx) >= ncols)
            throw std::runtime_error("csv: response column index out of range");
        resp = static_cast<std::size_t>(idx);
    } else {
        const std::string& want = std::get<std::string>(response_column);
        for (std::size_t j = 0; j < ncols; ++j)
            if (names[j] == want) resp = j;
        if (resp == ncols)
            throw std::runtime_error("csv: response column \"" + want + "\" not found");
    }

    DataMatrix d;
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(ncols - 1);
    d.x.resize(n, p);
    d.y.resize(n);
    for (std::size_t j = 0, out = 0; j < ncols; ++j) {
        if (j == resp) continue;
        d.column_names.push_back(names[j]);
        for (Eigen::Index i = 0; i < n; ++i)
            d.x(i, static_cast<Eigen::Index>(out)) = rows[static_cast<std::size_t>(i)][j];
        ++out;
    }
    for (Eigen::Index i = 0; i < n; ++i) d.y[i] = rows[static_cast<std::size_t>(i)][resp];
    return d;
}

void emit_csv(const std::string& path, const DataMatrix& d) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    for (Eigen::Index j = 0; j < d.p(); ++j) {
        out << (static_cast<std::size_t>(j) < d.column_names.size()
                    ? d.column_names[static_cast<std::size_t>(j)]
                    : "x" + std::to_string(j + 1))
            << ',';
    }
    out << "y\n";
    char buf[64];
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        for (Eigen::Index j = 0; j < d.p(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,", d.x(i, j));
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g\n", d.y[i]);
        out << buf;
    }
}

void write_predictions_csv(const std::string& path, const Eigen::VectorXd& values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    out << "prediction\n";
    char buf[64];
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", values[i]);
        out << buf;
    }
}

}  // namespace pairsel
