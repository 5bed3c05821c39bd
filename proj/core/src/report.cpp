#include "ricciglue/report.hpp"

#include <iomanip>

#include "json.hpp"

namespace ricciglue {

namespace {

using ojson = nlohmann::ordered_json;

ojson report_json(const CurvatureReport& r) {
    ojson j;
    j["kind"] = r.kind;
    j["lambda_min_ricci"] = r.lambda_min_ricci;
    j["lambda_min_ricci_at"] = r.lambda_min_ricci_at;
    j["lambda_min_II"] = r.lambda_min_ii ? ojson(*r.lambda_min_ii) : ojson(nullptr);
    j["epsilon"] = r.epsilon;
    j["tau"] = r.tau;
    j["floor"] = r.floor;
    j["smoothness"] = r.smoothness;
    ojson grids = ojson::array();
    for (const auto& g : r.grids) grids.push_back({{"name", g.name}, {"points", g.points}, {"lo", g.lo}, {"hi", g.hi}});
    j["grids"] = grids;
    j["margins"] = r.margins;
    j["sensitivity"] = r.sensitivity;
    j["perturbation_budget"] = r.perturbation_budget;
    j["certified"] = r.certified;
    ojson extras = ojson::object();
    for (const auto& [k, v] : r.extras) extras[k] = v;
    j["extras"] = extras;
    j["scope"] = r.scope;
    j["provenance"] = {{"config_hash", r.provenance.config_hash}, {"tool_version", r.provenance.tool_version}};
    return j;
}

}  // namespace

std::string to_json(const CurvatureReport& report, int indent) { return report_json(report).dump(indent); }

std::string to_json(const std::vector<CurvatureReport>& reports, int indent) {
    ojson arr = ojson::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(indent);
}

void write_curve_csv(std::ostream& os, const BlockMetricCurve& curve, int samples) {
    os << "t";
    for (std::size_t b = 0; b < curve.size(); ++b) os << ",block_" << b << "_w,block_" << b << "_dw,block_" << b << "_ddw";
    os << '\n' << std::setprecision(17);
    const Interval d = curve.domain();
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? d.lo : d.lo + d.length() * i / (samples - 1);
        os << t;
        for (const auto& blk : curve.blocks()) {
            const Derivs w = blk.coeff(t);
            os << ',' << w.v << ',' << w.d1 << ',' << w.d2;
        }
        os << '\n';
    }
}

}  // namespace ricciglue
