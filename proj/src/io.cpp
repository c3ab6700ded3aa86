#include "stablehcm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace stablehcm::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string theta_csv(const ThetaFunction& th) {
    std::ostringstream os;
    os << "r,theta,modulus\n";
    for (size_t k = 0; k < th.nodes.size(); ++k)
        os << format_double(th.nodes[k]) << ',' << format_double(th.theta[k]) << ','
           << format_double(th.scaled_modulus[k]) << '\n';
    return os.str();
}

json to_json(const ThetaFunction& th) {
    return json{{"schema_version", schema_version},
                {"alpha", th.alpha},
                {"nodes", th.nodes},
                {"theta", th.theta},
                {"modulus", th.scaled_modulus},
                {"noise", th.noise},
                {"limits", {th.left_limit, th.right_limit}},
                {"left_coeffs", th.left_coeffs},
                {"left_power", th.left_power}};
}

ThetaFunction theta_from_json(const json& j) {
    ThetaFunction th;
    th.alpha = j.at("alpha").get<double>();
    th.nodes = j.at("nodes").get<std::vector<double>>();
    th.theta = j.at("theta").get<std::vector<double>>();
    if (j.contains("modulus")) th.scaled_modulus = j.at("modulus").get<std::vector<double>>();
    if (j.contains("noise")) th.noise = j.at("noise").get<std::vector<double>>();
    if (!j.contains("limits")) throw DomainError("theta table needs declared limits");
    auto lim = j.at("limits").get<std::vector<double>>();
    if (lim.size() != 2) throw DomainError("limits must hold two values");
    th.left_limit = lim[0];
    th.right_limit = lim[1];
    if (j.contains("left_coeffs")) th.left_coeffs = j.at("left_coeffs").get<std::array<double, 2>>();
    th.left_power = j.value("left_power", 1 - th.alpha);
    if (th.nodes.size() != th.theta.size()) throw DomainError("nodes and theta differ in length");
    for (size_t k = 0; k + 1 < th.nodes.size(); ++k)
        if (!(th.nodes[k + 1] > th.nodes[k])) throw DomainError("theta nodes must increase");
    th.extrapolated_left = th.left_limit;
    th.extrapolated_right = th.right_limit;
    return th;
}

json to_json(const HcmRepresentation& rep) {
    json t;
    const auto& th = rep.theta;
    switch (th.kind) {
        case ThetaRep::Kind::Table:
            t = to_json(th.table);
            t["kind"] = "table";
            break;
        case ThetaRep::Kind::Constant: t = {{"kind", "constant"}, {"value", th.constant}}; break;
        case ThetaRep::Kind::Step: t = {{"kind", "step"}, {"at", th.step_at}, {"height", th.step_height}}; break;
        case ThetaRep::Kind::Function: throw DomainError("closed-form theta functions are not serializable");
    }
    return json{{"schema_version", schema_version},
                {"c", rep.c},
                {"a", rep.a},
                {"b", rep.b},
                {"theta", t},
                {"limits", {th.left_limit(), th.right_limit()}}};
}

HcmRepresentation hcm_from_json(const json& j) {
    HcmRepresentation rep;
    rep.c = j.at("c").get<double>();
    rep.a = j.value("a", 0.0);
    rep.b = j.value("b", 0.0);
    const auto& t = j.at("theta");
    const auto kind = t.at("kind").get<std::string>();
    if (kind == "constant") rep.theta = ThetaRep::make_constant(t.at("value").get<double>());
    else if (kind == "step") rep.theta = ThetaRep::make_step(t.at("at").get<double>(), t.at("height").get<double>());
    else if (kind == "table") rep.theta = ThetaRep::from_table(theta_from_json(t));
    else throw DomainError("unknown theta kind '" + kind + "'");
    rep.check_integrable();
    return rep;
}

json to_json(const CmProbeReport& rep) {
    json j{{"schema_version", schema_version},
           {"max_order_checked", rep.max_order_checked},
           {"pass", rep.pass},
           {"inconclusive", rep.inconclusive},
           {"margin", rep.margin}};
    if (rep.first_violation) {
        const auto& v = *rep.first_violation;
        j["first_violation"] = {{"order", v.order}, {"location", v.location}, {"u", v.u}, {"margin", v.margin}};
    } else {
        j["first_violation"] = nullptr;
    }
    return j;
}

json to_json(const ClassificationReport& rep) {
    json ext = json::array();
    for (const auto& e : rep.theta_extrema)
        ext.push_back({{"r", e.r}, {"theta", e.theta}, {"kind", e.maximum ? "max" : "min"}, {"prominence", e.prominence}});
    const auto& g = rep.evidence_grid;
    return json{{"schema_version", schema_version},
                {"alpha", rep.alpha},
                {"verdict", to_string(rep.verdict)},
                {"monotonicity_margin", rep.monotonicity_margin},
                {"noise_floor", rep.noise_floor},
                {"run_up", rep.run_up},
                {"drawdown", rep.drawdown},
                {"theta_extrema", ext},
                {"grid", {{"nodes", g.nodes.size()},
                          {"r_min", g.nodes.empty() ? 0.0 : g.nodes.front()},
                          {"r_max", g.nodes.empty() ? 0.0 : g.nodes.back()},
                          {"theta_first", g.theta.empty() ? 0.0 : g.theta.front()},
                          {"theta_last", g.theta.empty() ? 0.0 : g.theta.back()}}}};
}

json to_json(const EnvelopeConstants& c) {
    return json{{"schema_version", schema_version},
                {"alpha", c.alpha},
                {"delta", c.delta},
                {"c0", c.c0},
                {"c_inf", c.c_inf},
                {"G_at_1", c.G_at_1},
                {"A_plus", c.A_plus},
                {"A_minus", c.A_minus},
                {"B_plus", c.B_plus},
                {"B_minus", c.B_minus},
                {"x_max", c.x_max},
                {"grid_density", c.grid_density}};
}

json to_json(const EnvelopeReport& r) {
    return json{{"ok", r.ok},
                {"lower_slack", r.lower_slack},
                {"lower_x", r.lower_x},
                {"upper_slack", r.upper_slack},
                {"upper_x", r.upper_x},
                {"tolerance", r.tolerance}};
}

json to_json(const GgcDiagnostic& d) {
    return json{{"schema_version", schema_version},
                {"alpha", d.alpha},
                {"r", d.r},
                {"neg_arg", d.neg_arg},
                {"argument_monotone_decreasing", d.argument_monotone_decreasing},
                {"margin", d.margin},
                {"conclusion", d.conclusion}};
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) {
            os.close();
            fs::remove(tmp);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path);
}

std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv("STABLEHCM_OUTPUT_DIR"); dir && *dir) return std::filesystem::path(dir) / p;
    return p;
}

}  // namespace stablehcm::io
