#include "ricciglue/block_metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ricciglue/errors.hpp"

namespace ricciglue {

BlockMetricCurve::BlockMetricCurve(std::vector<MetricBlock> blocks, Interval domain)
    : blocks_(std::move(blocks)), domain_(domain) {
    if (blocks_.empty()) throw Error(ErrorKind::InvalidInput, "block list is empty");
    if (!(domain_.hi > domain_.lo)) throw Error(ErrorKind::InvalidInput, "curve domain is empty");
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].fiber_dim < 1) throw Error(ErrorKind::InvalidInput, "fiber dimension must be >= 1");
        if (!blocks_[b].coeff) throw Error(ErrorKind::InvalidInput, "block coefficient is empty");
        for (int i = 1; i <= 101; ++i) {
            const double t = domain_.lo + domain_.length() * i / 102.0;
            if (!(blocks_[b].coeff.value(t) > 0.0))
                throw Error(ErrorKind::DegenerateBlock,
                            "block " + std::to_string(b) + " coefficient not positive at t=" + std::to_string(t));
        }
    }
}

int BlockMetricCurve::total_dim() const {
    int d = 1;
    for (const auto& b : blocks_) d += b.fiber_dim;
    return d;
}

WarpCheck check_warps(const DoublyWarpedMetric& g, double tol) {
    WarpCheck c;
    c.alpha_zero = std::abs(g.alpha.value(0.0));
    c.beta_zero = std::abs(g.beta.value(0.0));
    c.alpha_slope = std::abs(g.alpha.d1(0.0) - 1.0);
    c.beta_slope = std::abs(g.beta.d1(0.0) - 1.0);
    c.min_alpha_d1 = c.min_beta_d1 = c.min_delta_d1 = c.min_gamma_d1 = INFINITY;
    c.max_alpha_d2 = c.max_beta_d2 = -INFINITY;
    constexpr int N = 200;
    for (int i = 1; i <= N; ++i) {
        const double s = g.s_range.hi * i / N;
        const double t = g.t_range.hi * i / N;
        c.min_alpha_d1 = std::min(c.min_alpha_d1, g.alpha.d1(s));
        c.min_beta_d1 = std::min(c.min_beta_d1, g.beta.d1(t));
        c.max_alpha_d2 = std::max(c.max_alpha_d2, g.alpha.d2(s));
        c.max_beta_d2 = std::max(c.max_beta_d2, g.beta.d2(t));
    }
    for (int i = 0; i <= N; ++i) {
        c.min_delta_d1 = std::min(c.min_delta_d1, g.delta.d1(g.t_range.hi * i / N));
        c.min_gamma_d1 = std::min(c.min_gamma_d1, g.gamma.d1(g.s_range.hi * i / N));
    }
    const bool delta_flat = std::abs(g.delta.value(0.0) - 1.0) < tol && std::abs(g.delta.d1(0.0)) < tol;
    const bool gamma_flat = std::abs(g.gamma.value(0.0) - 1.0) < tol && std::abs(g.gamma.d1(0.0)) < tol;
    c.ok = c.alpha_zero < tol && c.beta_zero < tol && c.alpha_slope < tol && c.beta_slope < tol &&
           c.min_alpha_d1 > 0.0 && c.min_beta_d1 > 0.0 && c.max_alpha_d2 < 0.0 && c.max_beta_d2 < 0.0 &&
           c.min_delta_d1 > -tol && c.min_gamma_d1 > -tol && delta_flat && gamma_flat;
    return c;
}

void validate(const DoublyWarpedMetric& g) {
    if (g.m < 2 || g.n < 2) throw Error(ErrorKind::InvalidInput, "disc dimensions m, n must be >= 2");
    if (!g.alpha || !g.beta || !g.delta || !g.gamma) throw Error(ErrorKind::InvalidInput, "missing warp profile");
    if (!(g.s_range.lo == 0.0 && g.s_range.hi > 0.0 && g.t_range.lo == 0.0 && g.t_range.hi > 0.0))
        throw Error(ErrorKind::InvalidInput, "s and t ranges must be [0, s1] and [0, t1]");
    const WarpCheck c = check_warps(g);
    if (!c.ok) throw Error(ErrorKind::InvalidInput, "warp functions violate the boundary/concavity conditions");
}

}  // namespace ricciglue
