#pragma once

#include <string>
#include <vector>

namespace ricciglue::app {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      ///< worst residual observed
    double tolerance = 0.0;
    std::string detail;
};

/// Finite-difference chart Ricci against closed forms on 20x20 grids for four metrics.
SuiteResult oracle_suite(double fd_step, int grid = 20);
/// Quintic Hermite windows reproduce random polynomials of degree at most 5.
SuiteResult quintic_suite(int trials = 100);
/// Normalised second-derivative profile of the quintic: +-2 at the ends, -+2/sqrt5 at +-tau/sqrt5.
SuiteResult q_extrema_suite();
/// R(d_t, u, u, d_t) + k'(u) - |S u|^2 = 0 on block curves.
SuiteResult shape_operator_suite();

std::vector<SuiteResult> run_selftest(double fd_step, int grid);

}  // namespace ricciglue::app
