#ifndef QSCAT_VERIFY_HPP
#define QSCAT_VERIFY_HPP

// Verification suites covering the workbench's analytic identities: the
// commutator closure, the Hilbert-Schmidt relation, the bilinear spectral
// identity, the cylindrical addition theorem, the branch relations, the
// layer/cylinder noise-tail contrast, and the weak delta identity. Shared by
// the `verify` CLI command and the acceptance tests.

#include <string>
#include <vector>

#include "qscat/io.hpp"

namespace qscat::verify {

struct SuiteResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    char comparison = '<'; // pass iff measured < threshold (or > for floors)
    bool pass = false;
    std::string note;
};

struct Options {
    int grid_order = 64;
    std::vector<double> eta_schedule = {0.2, 0.1, 0.05};
    double cutoff_scale = 40.0;      // K = cutoff_scale / eta
    double tolerance_override = 0.0; // > 0 replaces every '<' threshold
};

std::vector<SuiteResult> run_all(const Options& opt = {});

io::ordered_json report_json(const std::vector<SuiteResult>& results);

} // namespace qscat::verify

#endif
