#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ricciglue/block_metric.hpp"
#include "ricciglue/chart_curvature.hpp"

namespace ricciglue {

struct RotsymRicci {
    double radial = 0.0;
    double spherical = 0.0;
};

/// Ricci of dr^2 + phi(r)^2 ds^2_{N-1} on the unit radial vector and a unit spherical vector.
RotsymRicci ricci_closed_form_rotsym(const ScalarProfile& phi, int N, double r);

/// Diagonal Ricci entries of the product metric (unit vectors); cross terms vanish identically.
struct ProductRicci {
    double s = 0.0;
    double sphere_a = 0.0;
    double t = 0.0;
    double sphere_b = 0.0;
};

/// Requires delta == gamma == 1 (with vanishing derivatives) near the query point, else NotAProduct.
ProductRicci ricci_closed_form_product(const DoublyWarpedMetric& metric, double s, double t);

/// Ricci of dt^2 + sum_i w_i ds^2_{k_i}: value on dt and on a unit vector of each block.
struct BlockRicci {
    double radial = 0.0;
    std::vector<double> blocks;
    double min() const;
};

BlockRicci block_ricci_from_coefficients(const std::vector<int>& fiber_dims, const std::vector<Derivs>& w);
BlockRicci ricci_closed_form_block_curve(const BlockMetricCurve& curve, double t);

/// Chart coordinates (s, t, sphere-a angles, sphere-b angles); dimension m + n.
ChartMetricField as_chart_field(const DoublyWarpedMetric& metric, double fd_step = 1e-3);
/// Chart coordinates (t, angles of each block in order); dimension 1 + sum k_i.
ChartMetricField as_chart_field(const BlockMetricCurve& curve, double fd_step = 1e-3);

/// Closed-form Ricci tensor in the coordinates of the matching as_chart_field.
Eigen::MatrixXd closed_form_ricci_matrix(const BlockMetricCurve& curve, const Eigen::VectorXd& x);
Eigen::MatrixXd closed_form_ricci_matrix(const DoublyWarpedMetric& metric, const Eigen::VectorXd& x);

/// Tensor-product lattice; a coordinate with count 1 sits at the midpoint of its range.
struct LatticeGrid {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    std::vector<int> counts;

    std::size_t size() const;
    Eigen::VectorXd point(std::size_t index) const;
};

/// Lattice over the field's box shrunk by `inset` per side, `count` points on the listed
/// coordinates and one point elsewhere.
LatticeGrid interior_grid(const ChartMetricField& field, const std::vector<int>& coords, int count, double inset);

struct GridMin {
    double value = 0.0;
    Eigen::VectorXd argmin;
};

/// Minimum over grid points of the smallest eigenvalue of Ric relative to g.
GridMin min_ricci_on_grid(const ChartMetricField& field, const LatticeGrid& grid);

}  // namespace ricciglue
