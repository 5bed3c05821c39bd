#include "ricciglue/scalar_profile.hpp"

#include <algorithm>
#include <cmath>

#include "ricciglue/errors.hpp"

namespace ricciglue {

ScalarProfile::ScalarProfile(Fn fn, Interval domain, Parity left, Parity right, ProfileSpec spec)
    : fn_(std::move(fn)), domain_(domain), left_(left), right_(right), spec_(std::move(spec)) {
    if (!fn_) throw Error(ErrorKind::InvalidInput, "profile function is empty");
    if (!(domain_.hi > domain_.lo)) throw Error(ErrorKind::InvalidInput, "profile domain is empty");
}

ScalarProfile compose(const ScalarProfile& outer, const ScalarProfile& inner) {
    return ScalarProfile(
        [outer, inner](double x) {
            const Jet a = Jet::from_derivs(inner(x));
            return ricciglue::compose(outer(a.c0), a).derivs();
        },
        inner.domain());
}

ScalarProfile square(const ScalarProfile& p) {
    return ScalarProfile(
        [p](double x) {
            const Jet a = Jet::from_derivs(p(x));
            return (a * a).derivs();
        },
        p.domain());
}

namespace profiles {

ScalarProfile sine_warp(double a, Interval domain) {
    if (!(a > 0.0)) throw Error(ErrorKind::InvalidInput, "sine warp radius must be positive");
    return from_jet([a](const Jet& x) { return a * sin(x / a); }, domain, Parity::odd, Parity::none,
                    {"sine", {{"a", a}}});
}

ScalarProfile identity(Interval domain) {
    return ScalarProfile([](double x) { return Derivs{x, 1.0, 0.0, 0.0}; }, domain, Parity::odd,
                         Parity::none, {"identity", {}});
}

ScalarProfile constant(double c, Interval domain) {
    return ScalarProfile([c](double) { return Derivs{c, 0.0, 0.0, 0.0}; }, domain, Parity::even,
                         Parity::even, {"constant", {{"c", c}}});
}

ScalarProfile polynomial(std::vector<double> coeffs, Interval domain) {
    ProfileSpec spec{"polynomial", {}};
    for (std::size_t k = 0; k < coeffs.size(); ++k) spec.params.emplace_back("c" + std::to_string(k), coeffs[k]);
    return ScalarProfile(
        [coeffs](double x) {
            Jet acc;
            const Jet t = Jet::variable(x);
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + Jet(*it);
            return acc.derivs();
        },
        domain, Parity::none, Parity::none, std::move(spec));
}

ScalarProfile cap_coefficient(double theta, double sign, Interval domain) {
    return from_jet(
        [theta, sign](const Jet& t) {
            const Jet s = sin(Jet(theta) + sign * t);
            return s * s;
        },
        domain, Parity::none, Parity::none, {"cap", {{"theta", theta}, {"sign", sign}}});
}

ScalarProfile exponential_coefficient(double a, double k, Interval domain) {
    return from_jet([a, k](const Jet& t) { return a * a * exp(2.0 * k * t); }, domain, Parity::none,
                    Parity::none, {"exponential", {{"a", a}, {"k", k}}});
}

}  // namespace profiles

namespace {

template <class G>
double central_diff(const G& g, double x, double h) {
    return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
}

}  // namespace

double derivative_consistency_error(const ScalarProfile& p, int samples) {
    const Interval d = p.domain();
    const double h = 1e-3 * std::min(1.0, d.length());
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        // keep the stencil inside the open domain
        const double frac = (i + 0.5) / samples;
        const double x = d.lo + 4 * h + frac * (d.length() - 8 * h);
        const Derivs e = p(x);
        const double fd1 = central_diff([&](double y) { return p.value(y); }, x, h);
        const double fd2 = central_diff([&](double y) { return p.d1(y); }, x, h);
        const double fd3 = central_diff([&](double y) { return p.d2(y); }, x, h);
        worst = std::max({worst, std::abs(fd1 - e.d1) / std::max(std::abs(e.d1), 1.0),
                          std::abs(fd2 - e.d2) / std::max(std::abs(e.d2), 1.0),
                          std::abs(fd3 - e.d3) / std::max(std::abs(e.d3), 1.0)});
    }
    return worst;
}

double parity_residual(const ScalarProfile& p, bool right_end, int offsets) {
    const Parity parity = right_end ? p.parity_right() : p.parity_left();
    if (parity == Parity::none) return 0.0;
    const double x0 = right_end ? p.domain().hi : p.domain().lo;
    const double step = 0.1 * p.domain().length() / offsets;
    const double sgn = parity == Parity::odd ? 1.0 : -1.0;
    double worst = 0.0;
    if (parity == Parity::odd) worst = std::abs(p.value(x0));
    for (int i = 1; i <= offsets; ++i) {
        const double h = i * step;
        worst = std::max(worst, std::abs(p.value(x0 - h) + sgn * p.value(x0 + h)));
    }
    return worst;
}

}  // namespace ricciglue
