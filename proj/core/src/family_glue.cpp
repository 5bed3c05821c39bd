#include "ricciglue/family_glue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ricciglue/errors.hpp"

namespace ricciglue {

void validate(const MetricFamily& family) {
    if (family.parameters.empty()) throw Error(ErrorKind::InvalidInput, "family has no fibers");
    if (family.parameters.size() != family.pairs.size())
        throw Error(ErrorKind::InvalidInput, "family needs one pair per parameter value");
    const GluePair& ref = family.pairs.front();
    for (const GluePair& p : family.pairs) {
        validate(p);
        bool same = p.left.size() == ref.left.size() && p.delta0 == ref.delta0;
        for (std::size_t i = 0; same && i < p.left.size(); ++i)
            same = p.left.block(i).fiber_dim == ref.left.block(i).fiber_dim;
        if (!same) throw Error(ErrorKind::BoundaryMismatch, "fibers have different block structures");
    }
}

MetricFamily cap_family(double theta0, double slope, const std::vector<double>& parameters, int fiber_dim,
                        double delta0) {
    MetricFamily f;
    f.parameters = parameters;
    for (double b : parameters) f.pairs.push_back(cap_pair(theta0 + slope * b, fiber_dim, delta0));
    return f;
}

namespace {

std::string fiber_name(double b) {
    std::string s = std::to_string(b);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

GlueResult c1_only(const GluePair& pair, double eps, double floor) {
    GlueResult r;
    r.curve = c1_join(pair, eps);
    r.params = {eps, 0.0, floor};
    r.pair = pair;
    return r;
}

}  // namespace

FamilyResult uniform_param_search(const MetricFamily& family, double floor, const GlueOptions& opts) {
    validate(family);
    FamilyResult out;
    out.parameters = family.parameters;
    out.min_fiber_epsilon = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < family.pairs.size(); ++j) {
        double eps = 0.0;
        try {
            eps = epsilon_search(family.pairs[j], floor, opts).first;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::HypothesisViolated)
                throw Error(ErrorKind::FiberHypothesisViolated, "fiber b=" + fiber_name(family.parameters[j]) + ": " + e.what());
            throw;
        }
        out.fiber_epsilons.push_back(eps);
        out.min_fiber_epsilon = std::min(out.min_fiber_epsilon, eps);
    }

    const double delta0 = family.pairs.front().delta0;
    const Interval dom{-delta0, delta0};
    const int start = static_cast<int>(std::lround(std::log2(delta0 / out.min_fiber_epsilon)));
    double eps = out.min_fiber_epsilon;
    for (int k = start; k <= opts.max_halvings; ++k, eps /= 2) {
        std::vector<GlueResult> c1;
        bool ok = true;
        for (const GluePair& p : family.pairs) {
            c1.push_back(c1_only(p, eps, floor));
            const double v = scan_min_ricci(c1.back().curve, check_points(dom, eps, 0.0, opts)).value;
            ok = ok && v > floor;
            if (!ok) break;
        }
        if (!ok) continue;
        double tau = eps / 10.0;
        for (int i = 0; i < opts.max_halvings; ++i, tau /= 2) {
            std::vector<GlueResult> fibers;
            for (std::size_t j = 0; j < c1.size(); ++j) {
                const double fiber_margin = scan_min_ricci(c1[j].curve, check_points(dom, eps, 0.0, opts)).value;
                auto r = try_tau(c1[j], fiber_margin, tau, floor, opts);
                if (!r) break;
                fibers.push_back(std::move(*r));
            }
            if (fibers.size() != c1.size()) continue;
            out.params = {eps, tau, floor};
            out.fibers = std::move(fibers);
            return out;
        }
    }
    throw Error(ErrorKind::SearchExhausted, "no uniform (epsilon, tau) certifies every fiber");
}

namespace {

Derivs coeff_at(const BlockMetricCurve& c, std::size_t block, double t) { return c.block(block).coeff(t); }

Derivs unglued_at(const GluePair& p, std::size_t block, double t) {
    return t < 0.0 ? coeff_at(p.left, block, t) : coeff_at(p.right, block, t);
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

VariationReport family_smoothness_probe(const MetricFamily& family, const SmoothingParams& params, int t_samples,
                                        double spike_factor) {
    validate(family);
    VariationReport rep;
    std::vector<BlockMetricCurve> curves;
    for (const GluePair& p : family.pairs)
        curves.push_back(params.tau > 0.0 ? c2_join(p, params.epsilon, params.tau) : c1_join(p, params.epsilon));
    const double d0 = family.pairs.front().delta0;
    const std::size_t blocks = family.pairs.front().left.size();
    for (std::size_t j = 0; j + 1 < curves.size(); ++j) {
        const double db = std::abs(family.parameters[j + 1] - family.parameters[j]);
        if (!(db > 0.0)) throw Error(ErrorKind::InvalidInput, "family parameters must be distinct");
        double q = 0.0, qin = 0.0;
        for (int i = 0; i < t_samples; ++i) {
            // open interval: the pieces live on (-delta0, delta0)
            const double t = -d0 + 2 * d0 * (i + 0.5) / t_samples;
            for (std::size_t b = 0; b < blocks; ++b) {
                const Derivs x = coeff_at(curves[j], b, t), y = coeff_at(curves[j + 1], b, t);
                q = std::max({q, std::abs(x.v - y.v), std::abs(x.d1 - y.d1)});
                const Derivs u = unglued_at(family.pairs[j], b, t), w = unglued_at(family.pairs[j + 1], b, t);
                qin = std::max({qin, std::abs(u.v - w.v), std::abs(u.d1 - w.d1)});
            }
        }
        rep.quotients.push_back(q / db);
        rep.input_quotients.push_back(qin / db);
        rep.max_quotient = std::max(rep.max_quotient, q / db);
        rep.max_input_quotient = std::max(rep.max_input_quotient, qin / db);
    }
    rep.ratio = rep.max_input_quotient > 0.0 ? rep.max_quotient / rep.max_input_quotient : 0.0;
    const double med = median(rep.quotients);
    for (std::size_t j = 0; j < rep.quotients.size(); ++j)
        if (rep.quotients[j] > spike_factor * med) {
            rep.spike = true;
            rep.spike_index = static_cast<int>(j);
            break;
        }
    return rep;
}

std::vector<CurvatureReport> family_reports(const FamilyResult& result) {
    std::vector<CurvatureReport> out;
    for (std::size_t j = 0; j < result.fibers.size(); ++j) {
        CurvatureReport r = result.fibers[j].report;
        r.extras.emplace_back("b", result.parameters[j]);
        r.extras.emplace_back("fiber_epsilon", result.fiber_epsilons[j]);
        r.scope += "; family certified on the listed parameter grid only";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace ricciglue
