#include "cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablehcm/classify.hpp"
#include "stablehcm/envelopes.hpp"
#include "stablehcm/hcm.hpp"
#include "stablehcm/io.hpp"

namespace stablehcm::cli {

using nlohmann::json;

std::vector<double> GridSpec::points() const {
    if (!(min < max)) throw DomainError("grid min must be below max");
    if (count < 2) throw DomainError("grid count must be at least 2");
    if (log && !(min > 0)) throw DomainError("log grids need a positive min");
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        v[i] = log ? min * std::pow(max / min, t) : min + (max - min) * t;
    }
    v.front() = min;
    v.back() = max;
    return v;
}

namespace {

const char* command_name(Command c) {
    switch (c) {
        case Command::Eval: return "eval";
        case Command::Theta: return "theta";
        case Command::Classify: return "classify";
        case Command::Envelope: return "envelope";
        case Command::Verify: return "verify";
        case Command::Sample: return "sample";
    }
    return "?";
}

CLI::Validator open_unit() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            double v;
            try {
                size_t pos;
                v = std::stod(s, &pos);
                if (pos != s.size()) throw std::invalid_argument(s);
            } catch (const std::exception&) {
                return "malformed number '" + s + "'";
            }
            if (!(v > 0 && v < 1)) return "alpha " + s + " outside the range (0,1)";
            return {};
        },
        "in (0,1)");
}

struct Flags {
    double xmin = 0, xmax = 0;
    int count = 0;
    std::string spacing;
};

void add_quad(CLI::App* s, RunConfig& c) {
    s->add_option("--rel-tol", c.quad.rel_tol, "relative quadrature tolerance")->capture_default_str();
    s->add_option("--abs-tol", c.quad.abs_tol, "absolute quadrature tolerance")->capture_default_str();
    s->add_option("--max-subdivisions", c.quad.max_subdivisions, "adaptive subdivision cap")->capture_default_str();
}

void add_output(CLI::App* s, RunConfig& c) {
    s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", c.out, "output file (stdout when omitted; relative to $STABLEHCM_OUTPUT_DIR)");
}

void add_grid(CLI::App* s, Flags& f, RunConfig& c) {
    s->add_option("--x", c.xs, "explicit evaluation points");
    s->add_option("--xmin", f.xmin, "grid minimum");
    s->add_option("--xmax", f.xmax, "grid maximum");
    s->add_option("--count", f.count, "grid point count");
    s->add_option("--spacing", f.spacing, "grid spacing")->check(CLI::IsMember({"log", "linear"}));
}

void write_out(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) out << text;
    else io::atomic_write(io::resolve_output(c.out), text);
}

std::string fmt(double v) { return io::format_double(v); }

std::vector<double> grid_or(const RunConfig& c, GridSpec dflt) {
    if (!c.xs.empty()) return c.xs;
    GridSpec g = dflt;
    if (c.grid.count > 0) g = c.grid;
    return g.points();
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    const double a = c.alpha();
    const auto p = c.gamma ? StableParams::make(a, *c.gamma) : StableParams::one_sided(a);
    if (c.quantity == "G" && !p.one_sided_law()) throw DomainError("G is defined for gamma = alpha");
    auto xs = grid_or(c, GridSpec{0.01, 100, 30, true});
    std::vector<double> vs;
    for (double x : xs) {
        if (c.quantity == "G") vs.push_back(eval_G_real(p, x, c.quad));
        else if (c.quantity == "density") vs.push_back(eval_density(p, x, c.quad));
        else vs.push_back(eval_tail(p, x, c.quad));
    }
    if (c.format == "json") {
        json j{{"schema_version", io::schema_version}, {"alpha", p.alpha}, {"gamma", p.gamma},
               {"quantity", c.quantity}, {"x", xs}, {"value", vs}};
        write_out(c, j.dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        os << "x," << c.quantity << "\n";
        for (size_t i = 0; i < xs.size(); ++i) os << fmt(xs[i]) << ',' << fmt(vs[i]) << '\n';
        write_out(c, os.str(), out);
    }
    return 0;
}

int cmd_theta(const RunConfig& c, std::ostream& out) {
    ThetaOptions opt;
    opt.n = c.theta_n;
    auto th = theta_extract(StableParams::one_sided(c.alpha()), c.rmin, c.rmax, c.quad, opt);
    write_out(c, c.format == "json" ? io::to_json(th).dump(2) + "\n" : io::theta_csv(th), out);
    return 0;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
    std::vector<ClassificationReport> reps;
    for (double a : c.alphas) reps.push_back(classify_alpha(a, c.quad));
    if (c.format == "csv") {
        std::ostringstream os;
        os << "alpha,verdict,margin,extrema\n";
        for (const auto& r : reps) {
            os << fmt(r.alpha) << ',' << to_string(r.verdict) << ',' << fmt(r.monotonicity_margin) << ',';
            for (size_t k = 0; k < r.theta_extrema.size(); ++k)
                os << (k ? ";" : "") << (r.theta_extrema[k].maximum ? "max@" : "min@") << fmt(r.theta_extrema[k].r);
            os << '\n';
        }
        write_out(c, os.str(), out);
    } else {
        json j = reps.size() == 1 ? io::to_json(reps[0]) : json::array();
        if (reps.size() > 1)
            for (const auto& r : reps) j.push_back(io::to_json(r));
        write_out(c, j.dump(2) + "\n", out);
    }
    return 0;
}

int cmd_envelope(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto p = StableParams::one_sided(c.alpha());
    auto consts = envelope_constants(p, c.grid_density, c.quad);
    auto xs = grid_or(c, GridSpec{1e-3, 1e3, 200, true});
    auto rep = check_envelope(p, consts, xs, c.quad);
    json j{{"schema_version", io::schema_version}, {"constants", io::to_json(consts)}, {"envelope", io::to_json(rep)}};
    bool ok = rep.ok;
    if (p.alpha >= 1.0 / 3) {
        auto s = sharp_envelope_check(p, xs, c.quad);
        j["sharp"] = io::to_json(s);
        ok = ok && s.ok;
    } else {
        j["sharp"] = nullptr;
    }
    write_out(c, j.dump(2) + "\n", out);
    if (!ok) {
        err << "error kind=envelope-violation lower_x=" << fmt(rep.lower_x) << " upper_x=" << fmt(rep.upper_x) << "\n";
        return 2;
    }
    return 0;
}

int cmd_sample(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto p = StableParams::one_sided(c.alpha());
    auto consts = envelope_constants(p, c.grid_density, c.quad);
    auto s = sample_inverse_beta_power(p, c.n_samples, c.seed.value_or(1), consts, c.quad);
    std::ostringstream os;
    if (c.format == "json") {
        json j{{"schema_version", io::schema_version}, {"alpha", p.alpha}, {"seed", c.seed.value_or(1)},
               {"acceptance_rate", s.acceptance_rate}, {"expected_rate", s.expected_rate}, {"x", s.x}};
        os << j.dump(2) << "\n";
    } else {
        os << "x\n";
        for (double x : s.x) os << fmt(x) << '\n';
    }
    write_out(c, os.str(), out);
    err << "acceptance_rate=" << fmt(s.acceptance_rate) << " expected_rate=" << fmt(s.expected_rate) << "\n";
    return 0;
}

struct SuiteLine {
    std::string name;
    bool pass;
    std::string detail;
};

SuiteLine suite_roundtrip(const StableParams& p, const QuadratureConfig& q) {
    auto th = theta_extract(p, 1e-4, 1e4, q);
    double worst = 0;
    for (int k = 0; k < 30; ++k) {
        double x = 0.01 * std::pow(1e4, k / 29.0);
        double g = eval_G_real(p, x, q);
        worst = std::max(worst, std::fabs(reconstruct_G(p, th, x, q).real() - g) / g);
    }
    return {"roundtrip", worst <= 1e-4, "max_rel_err=" + fmt(worst)};
}

SuiteLine suite_normalization(const StableParams& p, const QuadratureConfig& q) {
    auto t = tilt_density([&](double x) { return eval_G_real(p, x, q); }, 0.0, q);
    double err = std::fabs(t.m_beta - 1);
    return {"normalization", err <= 1e-6, "abs_err=" + fmt(err)};
}

SuiteLine suite_boundary(const StableParams& p, const QuadratureConfig& q) {
    auto ac = asymptotic_constants(p, q);
    double e0 = std::fabs(ac.c0_fitted / ac.c0 - 1), ei = std::fabs(ac.c_inf_fitted / ac.c_inf - 1);
    double cross = 0;
    for (double r : {0.1, 1.0, 10.0}) cross = std::max(cross, std::fabs(cross_check_identity(p, r, q)));
    return {"boundary", e0 <= 5e-3 && ei <= 5e-3 && cross <= 1e-6,
            "c0_rel=" + fmt(e0) + " cinf_rel=" + fmt(ei) + " cross=" + fmt(cross)};
}

SuiteLine suite_classify(const StableParams& p, const QuadratureConfig& q) {
    auto r = classify_alpha(p.alpha, q);
    const double a = p.alpha;
    bool ok;
    if (std::fabs(a - 0.5) < 1e-12 || std::fabs(a - 1.0 / 3) < 1e-12)
        ok = r.verdict == Verdict::HCM || r.verdict == Verdict::Inconclusive;
    else if (a > 0.5) ok = r.verdict == Verdict::AntiHCM;
    else if (a > 1.0 / 3) ok = r.verdict == Verdict::HCM;
    else ok = r.verdict == Verdict::Neither;
    return {"classify", ok, std::string("verdict=") + to_string(r.verdict) + " margin=" + fmt(r.monotonicity_margin)};
}

SuiteLine suite_envelope(const StableParams& p, const QuadratureConfig& q) {
    auto consts = envelope_constants(p, 200, q);
    GridSpec g{1e-3, 1e3, 200, true};
    auto xs = g.points();
    auto r = check_envelope(p, consts, xs, q);
    bool ok = r.ok && r.lower_slack > -r.tolerance && r.upper_slack > -r.tolerance;
    std::string d = "lower=" + fmt(r.lower_slack) + " upper=" + fmt(r.upper_slack);
    if (p.alpha >= 1.0 / 3) {
        auto s = sharp_envelope_check(p, xs, q);
        ok = ok && s.ok;
        d += " sharp_lower=" + fmt(s.lower_slack) + " sharp_upper=" + fmt(s.upper_slack);
    }
    return {"envelope", ok, d};
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const auto p = StableParams::one_sided(c.alpha());
    std::vector<std::string> names;
    if (c.suite == "all") names = {"roundtrip", "normalization", "boundary", "classify", "envelope"};
    else names = {c.suite};
    std::vector<SuiteLine> lines;
    for (const auto& n : names) {
        if (n == "roundtrip") lines.push_back(suite_roundtrip(p, c.quad));
        else if (n == "normalization") lines.push_back(suite_normalization(p, c.quad));
        else if (n == "boundary") lines.push_back(suite_boundary(p, c.quad));
        else if (n == "classify") lines.push_back(suite_classify(p, c.quad));
        else lines.push_back(suite_envelope(p, c.quad));
    }
    bool all = true;
    std::ostringstream os;
    if (c.format == "json") {
        json j{{"schema_version", io::schema_version}, {"alpha", p.alpha}, {"suites", json::array()}};
        for (const auto& l : lines) j["suites"].push_back({{"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
        os << j.dump(2) << "\n";
    } else {
        for (const auto& l : lines) os << (l.pass ? "PASS " : "FAIL ") << l.name << ' ' << l.detail << '\n';
    }
    for (const auto& l : lines) all = all && l.pass;
    write_out(c, os.str(), out);
    return all ? 0 : 2;
}

std::string quote(const std::string& s) {
    std::string o = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') o += '\\';
        o += ch == '\n' ? ' ' : ch;
    }
    return o + "\"";
}

}  // namespace

ParseOutcome parse_args(const std::vector<std::string>& argv) {
    if (argv.empty()) throw UsageError("no command given; expected one of eval, theta, classify, envelope, verify, sample");
    RunConfig c;
    Flags f;
    std::uint64_t seed = 0;
    std::vector<double> alphas;
    std::optional<double> gamma_opt;
    double gamma = 0;

    CLI::App app{"Numerics for the density of S_alpha^(-beta) and its HCM structure", "stablehcm"};
    app.require_subcommand(1);
    auto* ev = app.add_subcommand("eval", "evaluate G, the density g_{alpha,gamma} or its tail");
    auto* th = app.add_subcommand("theta", "extract the boundary argument theta(r)");
    auto* cl = app.add_subcommand("classify", "HCM / anti-HCM classification of G_alpha");
    auto* en = app.add_subcommand("envelope", "gamma-mixture envelope constants and checks");
    auto* ve = app.add_subcommand("verify", "run verification suites");
    auto* sa = app.add_subcommand("sample", "rejection sampler for S_alpha^(-beta)");
    for (auto* s : {ev, th, cl, en, ve, sa}) {
        auto* o = s->add_option("--alpha", alphas, "stability index in (0,1)")->required()->check(open_unit());
        if (s != cl) o->expected(1);
        add_quad(s, c);
        add_output(s, c);
    }
    ev->add_option("--gamma", gamma, "asymmetry parameter (defaults to alpha)");
    ev->add_option("--quantity", c.quantity, "G, density or tail")->check(CLI::IsMember({"G", "density", "tail"}));
    add_grid(ev, f, c);
    th->add_option("--rmin", c.rmin, "smallest r")->capture_default_str();
    th->add_option("--rmax", c.rmax, "largest r")->capture_default_str();
    th->add_option("--n", c.theta_n, "initial node count")->capture_default_str();
    add_grid(en, f, c);
    en->add_option("--grid-density", c.grid_density, "points per constant scan")->capture_default_str();
    ve->add_option("--suite", c.suite, "suite name")
        ->check(CLI::IsMember({"all", "roundtrip", "normalization", "boundary", "classify", "envelope"}))
        ->capture_default_str();
    sa->add_option("--n", c.n_samples, "number of variates")->capture_default_str();
    sa->add_option("--seed", seed, "stream seed");
    sa->add_option("--grid-density", c.grid_density, "points per constant scan")->capture_default_str();

    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::CallForAllHelp&) {
        return {std::nullopt, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    const std::pair<CLI::App*, Command> table[] = {{ev, Command::Eval},     {th, Command::Theta},
                                                   {cl, Command::Classify}, {en, Command::Envelope},
                                                   {ve, Command::Verify},   {sa, Command::Sample}};
    CLI::App* used = nullptr;
    for (auto [s, cmd] : table)
        if (s->parsed()) {
            c.command = cmd;
            used = s;
        }
    c.alphas = alphas;
    if (used == ev && ev->count("--gamma")) gamma_opt = gamma;
    c.gamma = gamma_opt;
    if (used->get_option_no_throw("--seed") && used->count("--seed")) c.seed = seed;
    if (used->get_option_no_throw("--xmin")) {
        bool any = used->count("--xmin") || used->count("--xmax") || used->count("--count") || used->count("--spacing");
        if (any) {
            GridSpec g = c.command == Command::Envelope ? GridSpec{1e-3, 1e3, 200, true} : GridSpec{};
            if (used->count("--xmin")) g.min = f.xmin;
            if (used->count("--xmax")) g.max = f.xmax;
            if (used->count("--count")) g.count = f.count;
            if (used->count("--spacing")) g.log = f.spacing == "log";
            if (!(g.min < g.max)) throw UsageError("--xmin must be below --xmax");
            if (g.count < 2) throw UsageError("--count must be at least 2");
            c.grid = g;
        } else {
            c.grid.count = 0;
        }
    }
    if (!used->count("--format")) c.format = (c.command == Command::Classify || c.command == Command::Envelope) ? "json" : "csv";
    if (c.command == Command::Theta && !(c.rmin > 0 && c.rmin < c.rmax)) throw UsageError("need 0 < --rmin < --rmax");
    if (c.command == Command::Sample && c.n_samples < 1) throw UsageError("--n must be positive");
    try {
        c.quad.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return {c, ""};
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        switch (c.command) {
            case Command::Eval: return cmd_eval(c, out);
            case Command::Theta: return cmd_theta(c, out);
            case Command::Classify: return cmd_classify(c, out);
            case Command::Envelope: return cmd_envelope(c, out, err);
            case Command::Verify: return cmd_verify(c, out);
            case Command::Sample: return cmd_sample(c, out, err);
        }
    } catch (const DomainError& e) {
        err << "error kind=domain command=" << command_name(c.command) << " message=" << quote(e.what()) << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "error kind=numerical:" << to_string(e.kind()) << " command=" << command_name(c.command)
            << " estimate=" << fmt(e.estimate()) << " message=" << quote(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error kind=io command=" << command_name(c.command) << " message=" << quote(e.what()) << "\n";
        return 2;
    }
    return 1;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        auto res = parse_args(args);
        if (!res.config) {
            out << res.help;
            return 0;
        }
        return run(*res.config, out, err);
    } catch (const UsageError& e) {
        err << "error kind=usage message=" << quote(e.what()) << "\n";
        if (args.empty()) err << "usage: stablehcm {eval,theta,classify,envelope,verify,sample} --alpha A [options]; see --help\n";
        return 1;
    }
}

}  // namespace stablehcm::cli
