#include "qscat/io.hpp"

#include <cstdio>

namespace qscat::io {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw validation_error("cannot open output file: " + path.string());
}

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n'; // LF endings
}

void CsvWriter::numeric_row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(fmt17(v));
    row(s);
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open output file: " + path.string());
    out << j.dump(2) << '\n';
}

void write_operator_csv(const std::filesystem::path& path,
                        const std::vector<double>& nodes, const Eigen::MatrixXcd& m) {
    if (static_cast<long>(nodes.size()) != m.rows() || m.rows() != m.cols())
        throw validation_error("write_operator_csv: node/matrix size mismatch");
    CsvWriter csv(path);
    csv.header({"i", "j", "x_i", "x_j", "re", "im"});
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j)
            csv.row({std::to_string(i), std::to_string(j), fmt17(nodes[i]),
                     fmt17(nodes[j]), fmt17(m(i, j).real()), fmt17(m(i, j).imag())});
}

} // namespace qscat::io
