#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "json.hpp"
#include "ricciglue/ellipsoid.hpp"
#include "ricciglue/family_glue.hpp"
#include "ricciglue/perelman_glue.hpp"
#include "ricciglue/report.hpp"
#include "suites.hpp"

namespace ricciglue::app {

namespace {

namespace fs = std::filesystem;

GlueOptions glue_options(const RunConfig& cfg) {
    GlueOptions o;
    o.grid_per_unit = cfg.search.grid;
    o.max_halvings = cfg.search.max_halvings;
    o.c1_fraction = cfg.search.c1_fraction;
    return o;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    std::ofstream f(fs::path(cfg.output_dir) / name);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + (fs::path(cfg.output_dir) / name).string());
    return f;
}

GluePair make_pair(const GlueConfig& g) {
    if (g.profile == "cap") return cap_pair(g.theta, g.m - 1, g.delta0);
    const Interval l{-g.delta0, 0.0}, r{0.0, g.delta0};
    return {BlockMetricCurve({{g.m - 1, profiles::constant(1.0, l)}}, l),
            BlockMetricCurve({{g.m - 1, profiles::constant(1.0, r)}}, r), g.delta0};
}

void stamp(CurvatureReport& r, const RunConfig& cfg) { r.provenance.config_hash = config_hash(cfg); }

}  // namespace

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput:
        case ErrorKind::InvalidConfig:
            return kConfigError;
        case ErrorKind::HypothesisViolated:
        case ErrorKind::FiberHypothesisViolated:
            return kHypothesis;
        case ErrorKind::SearchExhausted:
            return kExhausted;
        default:
            return kInternal;
    }
}

int cmd_glue(const RunConfig& cfg, std::ostream& out) {
    const GluePair pair = make_pair(cfg.glue);
    GlueResult res = perelman_glue(pair, cfg.search.floor, glue_options(cfg));
    stamp(res.report, cfg);
    open_output(cfg, "glue_report.json") << to_json(res.report) << '\n';
    auto csv = open_output(cfg, "glue_curve.csv");
    write_curve_csv(csv, res.curve, static_cast<int>(2 * cfg.glue.delta0 * cfg.search.grid) + 1);
    out << "glue: epsilon=" << res.params.epsilon << " tau=" << res.params.tau
        << " lambda_min=" << res.report.lambda_min_ricci << " margin=" << res.report.margins.front()
        << (res.report.certified ? " certified" : " NOT certified") << '\n';
    return res.report.certified ? kOk : kExhausted;
}

int cmd_ellipsoid(const RunConfig& cfg, std::ostream& out) {
    const EllipsoidConfig& e = cfg.ellipsoid;
    const Interval S{0.0, e.s1}, T{0.0, e.t1};
    DoublyWarpedMetric metric{e.m, e.n, profiles::sine_warp(e.a, S), profiles::sine_warp(e.b, T),
                              profiles::constant(1.0, T), profiles::constant(1.0, S), S, T};
    const EllipsoidSpec base = make_ellipsoid_spec(std::move(metric), e.s0, e.t0);
    const SphereEndReport ends = sphere_end_check(base);

    AmplitudeOptions ao;
    ao.ii_floor = e.ii_floor;
    ao.ric_floor = e.ric_floor;
    ao.max_halvings = cfg.search.max_halvings;
    ao.flat_fraction = e.flat_fraction;
    ao.box_margin = e.margin;
    ao.forced_amplitude = e.amplitude;
    const AmplitudeResult amp = amplitude_search(base, ao);

    const IIProfile ii = ii_profile(amp.spec, 101, 5);
    {
        auto f = open_output(cfg, "ii_profile.csv");
        write_ii_csv(f, ii);
    }

    CollarOptions co;
    co.delta0 = e.collar;
    co.floor = cfg.search.floor;
    co.glue = glue_options(cfg);
    DoubleResult dbl = double_ellipsoid(amp.spec, co);

    CurvatureReport& rep = dbl.report;
    rep.lambda_min_ii = ii.min_eigenvalue();
    rep.extras.emplace_back("amplitude", amp.amplitude);
    rep.extras.emplace_back("lambda_min_ii_at_r", ii.argmin_r());
    rep.extras.emplace_back("ii_engine_deviation", ii.engine_deviation);
    rep.extras.emplace_back("ambient_min_ricci", amp.ambient.min_ricci);
    rep.extras.emplace_back("sphere_end_residual",
                            std::max({ends.zero_sets, ends.parity_a, ends.parity_b, ends.slope_a, ends.slope_b}));
    stamp(rep, cfg);
    open_output(cfg, "ellipsoid_report.json") << to_json(rep) << '\n';

    auto csv = open_output(cfg, "double_slices.csv");
    csv << "r,t,A,Wa,Wb\n" << std::setprecision(17);
    constexpr int kSlices = 81;
    for (std::size_t k = 0; k < dbl.r_nodes.size(); ++k)
        for (int i = 0; i < kSlices; ++i) {
            const double t = -co.delta0 + 2 * co.delta0 * (i + 0.5) / kSlices;
            const BlockMetricCurve& c = dbl.curves[k];
            csv << dbl.r_nodes[k] << ',' << t << ',' << c.block(0).coeff.value(t) << ',' << c.block(1).coeff.value(t)
                << ',' << c.block(2).coeff.value(t) << '\n';
        }

    out << "ellipsoid: amplitude=" << amp.amplitude << " min_II=" << ii.min_eigenvalue()
        << " epsilon=" << dbl.params.epsilon << " tau=" << dbl.params.tau << " lambda_min=" << rep.lambda_min_ricci
        << (rep.certified ? " certified" : " NOT certified") << '\n';
    return rep.certified ? kOk : kExhausted;
}

int cmd_family(const RunConfig& cfg, std::ostream& out) {
    const FamilyConfig& f = cfg.family;
    if (f.parameters.empty()) throw Error(ErrorKind::InvalidConfig, "family.parameters is empty");
    const MetricFamily fam = cap_family(f.theta0, f.slope, f.parameters, cfg.glue.m - 1, cfg.glue.delta0);
    const FamilyResult res = uniform_param_search(fam, cfg.search.floor, glue_options(cfg));
    const VariationReport var = family_smoothness_probe(fam, res.params);
    std::vector<CurvatureReport> reports = family_reports(res);
    bool all = true;
    for (CurvatureReport& r : reports) {
        stamp(r, cfg);
        all = all && r.certified;
    }

    nlohmann::ordered_json j;
    j["kind"] = "family";
    j["epsilon"] = res.params.epsilon;
    j["tau"] = res.params.tau;
    j["floor"] = res.params.ric_floor;
    j["min_fiber_epsilon"] = res.min_fiber_epsilon;
    j["parameters"] = res.parameters;
    j["variation"] = {{"max_quotient", var.max_quotient},
                      {"max_input_quotient", var.max_input_quotient},
                      {"ratio", var.ratio},
                      {"spike", var.spike},
                      {"quotients", var.quotients}};
    j["certified"] = all;
    j["scope"] = "uniform parameters certified on the listed parameter grid only";
    j["fibers"] = nlohmann::ordered_json::parse(to_json(reports));
    open_output(cfg, "family_report.json") << j.dump(2) << '\n';

    out << "family: fibers=" << reports.size() << " epsilon=" << res.params.epsilon << " tau=" << res.params.tau
        << " variation_ratio=" << var.ratio << (all ? " certified" : " NOT certified") << '\n';
    return all ? kOk : kExhausted;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
    const auto results = run_selftest(cfg.search.fd_step, 20);
    bool all = true;
    out << std::left << std::setw(26) << "suite" << std::setw(6) << "pass" << std::setw(14) << "worst"
        << std::setw(10) << "tol" << "detail\n";
    for (const SuiteResult& r : results) {
        out << std::left << std::setw(26) << r.name << std::setw(6) << (r.pass ? "ok" : "FAIL") << std::setw(14)
            << std::setprecision(4) << r.value << std::setw(10) << r.tolerance << r.detail << '\n';
        all = all && r.pass;
    }
    return all ? kOk : kSelftestFailed;
}

int run_command(const std::function<int(const RunConfig&, std::ostream&)>& cmd, const RunConfig& cfg,
                std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        return cmd(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace ricciglue::app
