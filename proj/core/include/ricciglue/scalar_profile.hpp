#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ricciglue/jet.hpp"

namespace ricciglue {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class Parity { none, odd, even };

/// Named family plus parameters, enough to rebuild a profile from a config file.
struct ProfileSpec {
    std::string family;
    std::vector<std::pair<std::string, double>> params;
};

/// Smooth real function of one variable with derivatives up to order three.
class ScalarProfile {
public:
    using Fn = std::function<Derivs(double)>;

    ScalarProfile() = default;
    ScalarProfile(Fn fn, Interval domain, Parity left = Parity::none, Parity right = Parity::none,
                  ProfileSpec spec = {});

    Derivs operator()(double x) const { return fn_(x); }
    double value(double x) const { return fn_(x).v; }
    double d1(double x) const { return fn_(x).d1; }
    double d2(double x) const { return fn_(x).d2; }
    double d3(double x) const { return fn_(x).d3; }

    const Interval& domain() const { return domain_; }
    Parity parity_left() const { return left_; }
    Parity parity_right() const { return right_; }
    const ProfileSpec& spec() const { return spec_; }
    explicit operator bool() const { return static_cast<bool>(fn_); }

private:
    Fn fn_;
    Interval domain_;
    Parity left_ = Parity::none;
    Parity right_ = Parity::none;
    ProfileSpec spec_;
};

/// Build a profile from a generic callable evaluated on Jets.
template <class F>
ScalarProfile from_jet(F f, Interval domain, Parity left = Parity::none, Parity right = Parity::none,
                       ProfileSpec spec = {}) {
    return ScalarProfile([f](double x) { return f(Jet::variable(x)).derivs(); }, domain, left, right,
                         std::move(spec));
}

/// outer(inner(x)); the domain is that of inner.
ScalarProfile compose(const ScalarProfile& outer, const ScalarProfile& inner);
ScalarProfile square(const ScalarProfile& p);

namespace profiles {

/// a*sin(x/a): odd at 0, concave on (0, a*pi).
ScalarProfile sine_warp(double a, Interval domain);
ScalarProfile identity(Interval domain);
ScalarProfile constant(double c, Interval domain);
/// sum_k coeffs[k] x^k
ScalarProfile polynomial(std::vector<double> coeffs, Interval domain);
/// sin^2(theta + sign*t), the squared warp of a unit-sphere cap bounded at t = 0.
ScalarProfile cap_coefficient(double theta, double sign, Interval domain);
/// a^2 exp(2 k t)
ScalarProfile exponential_coefficient(double a, double k, Interval domain);

}  // namespace profiles

/// Largest relative mismatch |fd - exact| / max(|exact|, 1) between d1, d2, d3 and
/// fourth-order central differences of the next lower derivative at `samples` interior points.
double derivative_consistency_error(const ScalarProfile& p, int samples = 50);

/// Largest residual of the declared reflection parity at one endpoint over `offsets` sample offsets.
/// Returns 0 when the endpoint carries Parity::none.
double parity_residual(const ScalarProfile& p, bool right_end, int offsets = 10);

}  // namespace ricciglue
