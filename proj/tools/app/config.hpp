#pragma once

#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ricciglue::app {

struct GlueConfig {
    std::string profile = "cap";  ///< cap | cylinder
    double theta = std::numbers::pi / 3;
    int m = 3;  ///< dimension of the glued boundary sphere; the fiber block has dimension m - 1
    double delta0 = 0.5;
};

struct SearchConfig {
    double floor = 1e-3;
    int grid = 400;
    int max_halvings = 40;
    double c1_fraction = 0.1;
    double fd_step = 1e-3;
};

struct EllipsoidConfig {
    int m = 3;
    int n = 3;
    double a = 0.8;
    double b = 0.8;
    double s1 = 1.2;
    double t1 = 1.2;
    double s0 = 1.0;
    double t0 = 1.0;
    double ii_floor = 1e-4;
    double ric_floor = 1e-3;
    std::optional<double> amplitude;  ///< unset means searched
    double flat_fraction = 0.5;
    double collar = 0.8;
    double margin = 0.25;
};

struct FamilyConfig {
    double theta0 = std::numbers::pi / 3;
    double slope = 0.1;
    std::vector<double> parameters = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

struct RunConfig {
    GlueConfig glue;
    SearchConfig search;
    EllipsoidConfig ellipsoid;
    FamilyConfig family;
    std::string output_dir = "out";
};

/// INI text with [glue], [search], [ellipsoid], [family], [output]. Missing keys keep their defaults;
/// unknown sections or keys and malformed values throw InvalidConfig.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Every key, in a fixed order, with round-trip exact numbers.
std::string serialize(const RunConfig& cfg);

/// Range checks shared by all commands; throws InvalidConfig.
void validate(const RunConfig& cfg);

/// Hex SHA-256 of serialize(cfg).
std::string config_hash(const RunConfig& cfg);

}  // namespace ricciglue::app
