#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ricciglue/block_metric.hpp"

namespace ricciglue {

struct GridInfo {
    std::string name;
    int points = 0;
    double lo = 0.0;
    double hi = 0.0;
};

struct Provenance {
    std::string config_hash;
    std::string tool_version;
};

/// Persisted outcome of a verification run.
struct CurvatureReport {
    std::string kind;
    double lambda_min_ricci = 0.0;
    double lambda_min_ricci_at = 0.0;
    std::optional<double> lambda_min_ii;
    double epsilon = 0.0;
    double tau = 0.0;
    double floor = 0.0;
    std::string smoothness;
    std::vector<GridInfo> grids;
    std::vector<double> margins;
    double sensitivity = 0.0;
    double perturbation_budget = 0.0;
    bool certified = false;
    std::vector<std::pair<std::string, double>> extras;
    std::string scope;
    Provenance provenance;
};

/// Keys are emitted in a fixed order so identical reports serialise to identical bytes.
std::string to_json(const CurvatureReport& report, int indent = 2);
std::string to_json(const std::vector<CurvatureReport>& reports, int indent = 2);

/// Columns t, block_i_w, block_i_dw, block_i_ddw on an evenly spaced grid (endpoints included).
void write_curve_csv(std::ostream& os, const BlockMetricCurve& curve, int samples);

}  // namespace ricciglue
