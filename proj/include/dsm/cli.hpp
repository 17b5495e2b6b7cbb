#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "dsm/types.hpp"

namespace dsm::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
    exit_io = 4,
};

// "re,im" or a bare real.
cplx parse_complex(std::string_view text);
// Comma separated reals; throws ConfigError on anything else.
std::vector<double> parse_reals(std::string_view text);
std::vector<int> parse_ints(std::string_view text);
// "a11,a12,a21,a22", row-major.
Mat2 parse_matrix(std::string_view text);

struct ConvergenceSetup {
    double radius = 2.0;
    double a = 3.0;
    cplx eta = 1.0;
    std::vector<double> wavenumbers{2.0, 4.0, 6.0};
    std::vector<int> faces{10, 20, 40, 80, 160};
    int directions = 64;
    double measurement_radius = 3.0;
    int reference_order = 25;
};

// Spectral-norm errors of the boundary element data against the series
// reference: far-field pattern (without the 2 pi / M weight), scattered
// field and its normal derivative on the measurement circle.
struct ConvergenceRow {
    double k;
    int faces;
    double farfield;
    double scattered;
    double derivative;
};

std::vector<ConvergenceRow> convergence_table(const ConvergenceSetup& setup);

// Entry point of the dsm tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dsm::cli
