#ifndef QSCAT_IO_HPP
#define QSCAT_IO_HPP

// Plot-ready artifact emission: CSV with 17 significant digits and LF line
// endings, JSON with stable key order. All output is deterministic for a
// fixed configuration.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qscat/errors.hpp"

namespace qscat::io {

using ordered_json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal separator.
std::string fmt17(double v);

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& cells);

  private:
    std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const ordered_json& j);

// Kernel/resolvent dump: header i,j,x_i,x_j,re,im, row-major.
void write_operator_csv(const std::filesystem::path& path,
                        const std::vector<double>& nodes, const Eigen::MatrixXcd& m);

} // namespace qscat::io

#endif
