#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ricciglue/block_metric.hpp"
#include "ricciglue/report.hpp"

namespace ricciglue {

/// h1 = left on (-delta0, 0], h2 = right on [0, delta0); the boundary is t = 0.
struct GluePair {
    BlockMetricCurve left;
    BlockMetricCurve right;
    double delta0 = 0.0;
};

/// Throws BoundaryMismatch when the block structures or the boundary values disagree.
void validate(const GluePair& pair);

/// Two caps of the unit (k+1)-sphere of polar radius theta, each with fiber dimension k.
GluePair cap_pair(double theta, int fiber_dim, double delta0);

struct SmoothingParams {
    double epsilon = 0.0;
    double tau = 0.0;  ///< 0 means the cubic join is left unsmoothed
    double ric_floor = 0.0;
};

enum class SmoothnessClass { C1, C2 };

struct GlueOptions {
    int grid_per_unit = 400;
    int max_halvings = 40;
    double c1_fraction = 0.1;  ///< allowed C1 distance as a fraction of the C1 Ricci margin
    int window_samples = 64;
};

struct GlueResult {
    BlockMetricCurve curve;
    SmoothingParams params;
    CurvatureReport report;
    SmoothnessClass smoothness = SmoothnessClass::C1;
    GluePair pair;
};

/// Margins at or below this are treated as zero (the hypothesis is strict).
inline constexpr double kMarginTol = 1e-12;

/// Per block: 1/2 (w1'(0) - w2'(0)) / w(0) = k1(u) + k2(u) for unit u.
std::vector<double> perelman_margin(const GluePair& pair);

/// Cubic on [-eps, eps] matching (a, da) at -eps and (b, db) at +eps.
struct CubicJoin {
    double eps = 0.0;
    double a = 0.0, b = 0.0, B1 = 0.0, B2 = 0.0;

    static CubicJoin fit(double a, double da, double b, double db, double eps);
    Derivs operator()(double t) const;
};

/// Per-block cubic interpolants on [-eps, eps]. Throws EpsilonTooLarge unless 0 < eps < delta0.
BlockMetricCurve cubic_glue(const GluePair& pair, double epsilon);

/// c0..c5 of the quintic p(u) with p^(i)(tau) = a_i and p^(i)(-tau) = b_i for i = 0, 1, 2.
std::array<double, 6> quintic_coefficients(double a0, double a1, double a2, double b0, double b1, double b2, double tau);
Derivs eval_polynomial(const std::array<double, 6>& c, double u);

/// h1 / cubic / h2 on (-delta0, delta0).
BlockMetricCurve c1_join(const GluePair& pair, double epsilon);
/// c1_join with quintic windows of half-width tau centred at -eps and +eps. Throws TauTooLarge if tau > eps/10.
BlockMetricCurve c2_join(const GluePair& pair, double epsilon, double tau);

/// Sample points used for every positivity check: the whole interval at grid_per_unit
/// plus refinements of [-eps, eps] and of each quintic window.
std::vector<double> check_points(const Interval& domain, double epsilon, double tau, const GlueOptions& opts,
                                 int refine = 1);

struct RicciScan {
    double value = 0.0;
    double at = 0.0;
};
RicciScan scan_min_ricci(const BlockMetricCurve& curve, const std::vector<double>& ts);

/// Largest |dw| or |dw'| between two curves over the given points.
double c1_distance(const BlockMetricCurve& a, const BlockMetricCurve& b, const std::vector<double>& ts);

/// Builds the glue with fixed parameters and attaches its certificate; no hypothesis check.
GlueResult glue_with_params(const GluePair& pair, const SmoothingParams& params, const GlueOptions& opts = {});

/// First eps in delta0/2, delta0/4, ... whose C1 join has min Ricci above floor.
std::pair<double, GlueResult> epsilon_search(const GluePair& pair, double floor, const GlueOptions& opts = {});

GlueResult c2_smooth(const GlueResult& c1, double tau, const GlueOptions& opts = {});

/// One tau candidate: the C2 result when it beats floor and stays C1-close, else nothing.
std::optional<GlueResult> try_tau(const GlueResult& c1, double c1_margin, double tau, double floor,
                                  const GlueOptions& opts);

/// First tau in eps/10, eps/20, ... accepted by try_tau.
std::pair<double, GlueResult> tau_search(const GlueResult& c1, double floor, const GlueOptions& opts = {});

CurvatureReport positivity_certificate(const GlueResult& result, const GlueOptions& opts = {});

/// Wrap an unglued curve so it can be certified.
GlueResult unglued(const BlockMetricCurve& curve);

/// epsilon_search, tau_search and certification in one call.
GlueResult perelman_glue(const GluePair& pair, double floor, const GlueOptions& opts = {});

}  // namespace ricciglue
