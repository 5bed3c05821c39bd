#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "ricciglue/errors.hpp"

namespace ricciglue::app {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v)) bad(key + ": not a number: '" + text + "'");
    return v;
}

int to_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    int v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) bad(key + ": not an integer: '" + text + "'");
    return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(to_double(key, item));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
    std::string section, name;
    Setter set;
    Getter get;
};

#define RG_DOUBLE(sec, field, member) \
    Key{sec, #field, [](RunConfig& c, const std::string& v) { c.member = to_double(sec "." #field, v); }, \
        [](const RunConfig& c) { return fmt(c.member); }}
#define RG_INT(sec, field, member) \
    Key{sec, #field, [](RunConfig& c, const std::string& v) { c.member = to_int(sec "." #field, v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }}

const std::vector<Key>& keys() {
    static const std::vector<Key> k = {
        Key{"glue", "profile", [](RunConfig& c, const std::string& v) { c.glue.profile = trim(v); },
            [](const RunConfig& c) { return c.glue.profile; }},
        RG_DOUBLE("glue", theta, glue.theta),
        RG_INT("glue", m, glue.m),
        RG_DOUBLE("glue", delta0, glue.delta0),
        RG_DOUBLE("search", floor, search.floor),
        RG_INT("search", grid, search.grid),
        RG_INT("search", max_halvings, search.max_halvings),
        RG_DOUBLE("search", c1_fraction, search.c1_fraction),
        RG_DOUBLE("search", fd_step, search.fd_step),
        RG_INT("ellipsoid", m, ellipsoid.m),
        RG_INT("ellipsoid", n, ellipsoid.n),
        RG_DOUBLE("ellipsoid", a, ellipsoid.a),
        RG_DOUBLE("ellipsoid", b, ellipsoid.b),
        RG_DOUBLE("ellipsoid", s1, ellipsoid.s1),
        RG_DOUBLE("ellipsoid", t1, ellipsoid.t1),
        RG_DOUBLE("ellipsoid", s0, ellipsoid.s0),
        RG_DOUBLE("ellipsoid", t0, ellipsoid.t0),
        RG_DOUBLE("ellipsoid", ii_floor, ellipsoid.ii_floor),
        RG_DOUBLE("ellipsoid", ric_floor, ellipsoid.ric_floor),
        Key{"ellipsoid", "amplitude",
            [](RunConfig& c, const std::string& v) {
                if (trim(v) == "auto")
                    c.ellipsoid.amplitude.reset();
                else
                    c.ellipsoid.amplitude = to_double("ellipsoid.amplitude", v);
            },
            [](const RunConfig& c) { return c.ellipsoid.amplitude ? fmt(*c.ellipsoid.amplitude) : std::string("auto"); }},
        RG_DOUBLE("ellipsoid", flat_fraction, ellipsoid.flat_fraction),
        RG_DOUBLE("ellipsoid", collar, ellipsoid.collar),
        RG_DOUBLE("ellipsoid", margin, ellipsoid.margin),
        RG_DOUBLE("family", theta0, family.theta0),
        RG_DOUBLE("family", slope, family.slope),
        Key{"family", "parameters",
            [](RunConfig& c, const std::string& v) { c.family.parameters = to_list("family.parameters", v); },
            [](const RunConfig& c) {
                std::string s;
                for (std::size_t i = 0; i < c.family.parameters.size(); ++i)
                    s += (i ? ", " : "") + fmt(c.family.parameters[i]);
                return s;
            }},
        Key{"output", "dir", [](RunConfig& c, const std::string& v) { c.output_dir = trim(v); },
            [](const RunConfig& c) { return c.output_dir; }},
    };
    return k;
}

#undef RG_DOUBLE
#undef RG_INT

}  // namespace

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        bad(std::string("malformed config: ") + e.what());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) bad("key outside a section: " + section);
        for (const auto& [name, value] : body) {
            const Key* found = nullptr;
            for (const Key& k : keys())
                if (k.section == section && k.name == name) found = &k;
            if (!found) bad("unknown key " + section + "." + name);
            found->set(cfg, value.data());
        }
        bool known = false;
        for (const Key& k : keys()) known = known || k.section == section;
        if (!known) bad("unknown section [" + section + "]");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read config " + path);
    return parse_config(in);
}

std::string serialize(const RunConfig& cfg) {
    std::string out, section;
    for (const Key& k : keys()) {
        if (k.section != section) {
            out += (section.empty() ? "[" : "\n[") + k.section + "]\n";
            section = k.section;
        }
        out += k.name + " = " + k.get(cfg) + "\n";
    }
    return out;
}

void validate(const RunConfig& c) {
    if (c.glue.profile != "cap" && c.glue.profile != "cylinder") bad("glue.profile must be cap or cylinder");
    if (c.glue.m < 2) bad("glue.m must be at least 2");
    if (!(c.glue.delta0 > 0.0)) bad("glue.delta0 must be positive");
    if (!(c.search.floor >= 0.0)) bad("search.floor must be non-negative");
    if (c.search.grid < 2) bad("search.grid must be at least 2");
    if (c.search.max_halvings < 1) bad("search.max_halvings must be at least 1");
    if (!(c.search.c1_fraction > 0.0 && c.search.c1_fraction <= 1.0)) bad("search.c1_fraction must lie in (0, 1]");
    if (!(c.search.fd_step > 0.0)) bad("search.fd_step must be positive");
    const EllipsoidConfig& e = c.ellipsoid;
    if (e.m < 2 || e.n < 2) bad("ellipsoid.m and ellipsoid.n must be at least 2");
    if (!(e.a > 0.0 && e.b > 0.0)) bad("ellipsoid.a and ellipsoid.b must be positive");
    if (!(e.s1 > 0.0 && e.t1 > 0.0)) bad("ellipsoid.s1 and ellipsoid.t1 must be positive");
    if (!(e.ii_floor >= 0.0 && e.ric_floor >= 0.0)) bad("ellipsoid floors must be non-negative");
    if (e.amplitude && !(*e.amplitude >= 0.0)) bad("ellipsoid.amplitude must be non-negative or auto");
    if (!(e.flat_fraction >= 0.0 && e.flat_fraction < 1.0)) bad("ellipsoid.flat_fraction must lie in [0, 1)");
    if (!(e.collar > 0.0)) bad("ellipsoid.collar must be positive");
    if (!(e.margin >= 0.0)) bad("ellipsoid.margin must be non-negative");
    if (c.output_dir.empty()) bad("output.dir must not be empty");
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = serialize(cfg);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) bad("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace ricciglue::app
