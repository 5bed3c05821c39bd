#pragma once

#include <string>
#include <vector>

#include "ricciglue/perelman_glue.hpp"

namespace ricciglue {

/// A finite grid of parameter values b, one glue pair per value.
struct MetricFamily {
    std::vector<double> parameters;
    std::vector<GluePair> pairs;
};

/// Throws InvalidInput on an empty or ragged family and BoundaryMismatch when block structures differ.
void validate(const MetricFamily& family);

/// Double caps with polar radius theta0 + slope * b for each b.
MetricFamily cap_family(double theta0, double slope, const std::vector<double>& parameters, int fiber_dim,
                        double delta0);

struct FamilyResult {
    SmoothingParams params;
    std::vector<double> parameters;
    std::vector<GlueResult> fibers;
    std::vector<double> fiber_epsilons;  ///< epsilon_search result per fiber
    double min_fiber_epsilon = 0.0;
};

/// Shared (eps, tau), eps from the smallest per-fiber epsilon downward and tau from eps/10 downward.
/// Throws FiberHypothesisViolated naming b, or SearchExhausted.
FamilyResult uniform_param_search(const MetricFamily& family, double floor, const GlueOptions& opts = {});

struct VariationReport {
    std::vector<double> quotients;        ///< max |dw|, |dw'| over t divided by |db|, per adjacent pair
    std::vector<double> input_quotients;  ///< same for the unglued pairs
    double max_quotient = 0.0;
    double max_input_quotient = 0.0;
    double ratio = 0.0;  ///< max_quotient / max_input_quotient, 0 when the input is constant
    bool spike = false;
    int spike_index = -1;  ///< first j with quotient j above spike_factor times the median
};

VariationReport family_smoothness_probe(const MetricFamily& family, const SmoothingParams& params,
                                        int t_samples = 201, double spike_factor = 5.0);

std::vector<CurvatureReport> family_reports(const FamilyResult& result);

}  // namespace ricciglue
