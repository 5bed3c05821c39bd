#pragma once

#include <vector>

#include "ricciglue/scalar_profile.hpp"

namespace ricciglue {

/// One factor w(t) ds^2_k of a block metric: a round unit k-sphere scaled by w.
struct MetricBlock {
    int fiber_dim = 1;
    ScalarProfile coeff;
};

/// dt^2 + sum_i w_i(t) ds^2_{k_i} over an interval of t.
class BlockMetricCurve {
public:
    BlockMetricCurve() = default;
    /// Throws DegenerateBlock if some w_i is not positive at 101 interior sample points.
    BlockMetricCurve(std::vector<MetricBlock> blocks, Interval domain);

    const std::vector<MetricBlock>& blocks() const { return blocks_; }
    const MetricBlock& block(std::size_t i) const { return blocks_.at(i); }
    std::size_t size() const { return blocks_.size(); }
    const Interval& domain() const { return domain_; }
    /// 1 + sum of fiber dimensions
    int total_dim() const;

private:
    std::vector<MetricBlock> blocks_;
    Interval domain_;
};

/// delta^2(t) ds^2 + delta^2(t) alpha^2(s) ds^2_{m-1} + gamma^2(s) dt^2 + gamma^2(s) beta^2(t) ds^2_{n-1}
struct DoublyWarpedMetric {
    int m = 2;
    int n = 2;
    ScalarProfile alpha;
    ScalarProfile beta;
    ScalarProfile delta;
    ScalarProfile gamma;
    Interval s_range;
    Interval t_range;
};

/// Residuals of the warp conditions; `ok` is true when every one is within tolerance.
struct WarpCheck {
    bool ok = true;
    double alpha_zero = 0.0, beta_zero = 0.0;
    double alpha_slope = 0.0, beta_slope = 0.0;
    double min_alpha_d1 = 0.0, min_beta_d1 = 0.0;
    /// max of alpha'' over the interior and at the far end; alpha''(0) = 0 is forced by oddness
    double max_alpha_d2 = 0.0, max_beta_d2 = 0.0;
    double min_delta_d1 = 0.0, min_gamma_d1 = 0.0;
};

WarpCheck check_warps(const DoublyWarpedMetric& g, double tol = 1e-8);

/// Throws InvalidInput when the warp conditions fail.
void validate(const DoublyWarpedMetric& g);

}  // namespace ricciglue
