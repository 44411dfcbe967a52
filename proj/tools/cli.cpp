#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "checks.hpp"
#include "jcm/dynamics.hpp"
#include "jcm/errors.hpp"
#include "jcm/states.hpp"
#include "output.hpp"
#include "sweep.hpp"

namespace jcm::cli {

namespace {

using Json = nlohmann::ordered_json;

struct StateOptions {
    std::string family;
    std::optional<double> beta_sq, n_T, r, psi;
    std::optional<int> l, m;
    std::optional<std::string> variant;
    std::string n_max = "auto";
    double eps_tail = 1e-8;
};

struct OutputOptions {
    std::string out;
    std::string svg;
    std::string format = "csv";
};

struct DynOptions {
    double delta = 0.0;
    double z_max = 100.0;
    int samples_per_period = 20;
    double prefactor = 1.0;
    std::string mode = "both";
};

struct XcheckOptions {
    std::vector<std::string> only;
    int dim = 64;
    bool list = false;
};

struct SweepOptions {
    std::string manifest;
    std::string out_dir = "sweep_out";
    int jobs = 1;
};

void add_state_options(CLI::App& cmd, StateOptions& s) {
    cmd.add_option("--family", s.family, "State family (or alias: vourdas, dsts, sdts, sdns)")->required();
    cmd.add_option("--beta2", s.beta_sq, "Coherent amplitude squared");
    cmd.add_option("--nt", s.n_T, "Mean thermal photon number");
    cmd.add_option("--r", s.r, "Squeezing parameter");
    cmd.add_option("--psi", s.psi, "Squeezing phase (default pi)");
    cmd.add_option("--l", s.l, "Fock level");
    cmd.add_option("--m", s.m, "Fock level (alias used for displaced number families)");
    cmd.add_option("--variant", s.variant, "Operator order for displaced squeezed thermal")
        ->check(CLI::IsMember({"dsts", "sdts"}));
    cmd.add_option("--nmax", s.n_max, "Truncation: integer or auto")->capture_default_str();
    cmd.add_option("--eps-tail", s.eps_tail, "Tail mass allowed by --nmax auto")->capture_default_str();
}

void add_output_options(CLI::App& cmd, OutputOptions& o) {
    cmd.add_option("--out", o.out, "Data file (stdout when absent)");
    cmd.add_option("--svg", o.svg, "SVG plot file");
    cmd.add_option("--format", o.format, "Data format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

StateSpec build_spec(const StateOptions& s) {
    const auto family = parse_family(s.family);
    if (!family) throw InvalidArgument("unknown family: " + s.family);
    if (s.l && s.m) throw InvalidArgument("give either --l or --m, not both");
    StateParams p;
    if (s.beta_sq) p.beta_sq = *s.beta_sq;
    if (s.n_T) p.n_T = *s.n_T;
    if (s.r) p.r = *s.r;
    if (s.psi) p.psi = *s.psi;
    if (s.l) p.fock_level = *s.l;
    if (s.m) p.fock_level = *s.m;
    const auto implied = parse_variant(s.family);
    if (s.variant) {
        const Variant v = *parse_variant(*s.variant);
        if (implied && *implied != v) throw InvalidArgument("--variant contradicts --family " + s.family);
        p.variant = v;
    } else if (implied) {
        p.variant = *implied;
    }
    return StateSpec(*family, p);
}

struct Prepared {
    StateSpec spec;
    PhotonDistribution pmf;
    bool automatic;
};

int parse_nmax(const std::string& text) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 0)
        throw InvalidArgument("--nmax must be a non-negative integer or auto");
    return value;
}

Prepared prepare(const StateOptions& s) {
    StateSpec spec = build_spec(s);
    if (!(s.eps_tail > 0.0 && s.eps_tail < 1.0)) throw InvalidArgument("--eps-tail must lie in (0, 1)");
    if (s.n_max != "auto") return {spec, make_distribution(spec, parse_nmax(s.n_max)), false};
    auto probs = auto_distribution(spec, s.eps_tail).probs();
    while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
    return {spec, make_distribution(spec, static_cast<int>(probs.size()) - 1), true};
}

Json params_json(const StateSpec& spec) {
    const FieldUsage use = fields_used(spec.family());
    Json j = Json::object();
    if (use.beta_sq) j["beta2"] = spec.beta_sq();
    if (use.n_T) j["nt"] = spec.n_T();
    if (use.r) j["r"] = spec.r();
    if (use.psi) j["psi"] = spec.psi();
    if (use.fock_level) j[spec.family() == Family::SqueezedDisplacedNumber ? "m" : "l"] = spec.fock_level();
    if (use.variant) j["variant"] = std::string(variant_name(spec.variant()));
    return j;
}

Json state_json(const char* command, const Prepared& p, double eps_tail) {
    Json j;
    j["command"] = command;
    j["family"] = std::string(family_name(p.spec.family()));
    j["params"] = params_json(p.spec);
    j["n_max"] = p.pmf.n_max();
    j["n_max_mode"] = p.automatic ? "auto" : "fixed";
    if (p.automatic) j["eps_tail"] = eps_tail;
    return j;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json columns_json(const CsvTable& t) {
    Json j = Json::object();
    for (std::size_t c = 0; c < t.header.size(); ++c) j[t.header[c]] = t.columns[c];
    return j;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path + " for writing");
    f << contents;
    if (!f) throw NumericError("failed writing " + path);
}

// Data to --out (or stdout); the summary goes to stdout when the data went
// to a file, otherwise to stderr.  JSON format embeds the data in the summary.
void emit(const OutputOptions& o, const CsvTable& table, Json summary, std::ostream& out, std::ostream& err) {
    std::ostringstream data;
    if (o.format == "json") {
        Json doc = summary;
        doc["data"] = columns_json(table);
        data << doc.dump(2) << '\n';
    } else {
        write_csv(data, table);
    }
    if (o.out.empty()) {
        out << data.str();
        if (o.format != "json") err << summary.dump(2) << '\n';
    } else {
        write_file(o.out, data.str());
        out << summary.dump(2) << '\n';
    }
}

void emit_svg(const std::string& path, const Plot& plot) {
    if (path.empty()) return;
    std::ostringstream s;
    write_svg(s, plot);
    write_file(path, s.str());
}

int cmd_pmf(const StateOptions& s, const OutputOptions& o, double delta, std::ostream& out, std::ostream& err) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("--delta must be >= 0");
    const Prepared p = prepare(s);
    CsvTable table{{"n", "rho_nn", "rho_nn_weighted"}, {{}, {}, {}}};
    for (int n = 0; n <= p.pmf.n_max(); ++n) {
        table.columns[0].push_back(n);
        table.columns[1].push_back(p.pmf[n]);
        table.columns[2].push_back(p.pmf[n] * (n + 1.0) / (n + 1.0 + delta));
    }
    Json summary = state_json("pmf", p, s.eps_tail);
    summary["delta"] = delta;
    summary["mean"] = p.pmf.mean();
    summary["variance"] = p.pmf.variance();
    summary["tail_mass"] = p.pmf.tail_mass();
    summary["norm_residual"] = p.pmf.norm_residual();
    summary["max_condition"] = p.pmf.max_condition();
    summary["precision_warning"] = p.pmf.precision_warning();
    emit(o, table, summary, out, err);

    Plot plot{p.spec.describe(), "n", "rho_nn", {}};
    plot.series.push_back({"rho_nn", table.columns[0], table.columns[1], PlotStyle::Stem, "#1f4e9c"});
    if (delta > 0.0)
        plot.series.push_back({"weighted", table.columns[0], table.columns[2], PlotStyle::Stem, "#c0392b"});
    emit_svg(o.svg, plot);
    return kExitOk;
}

Json envelope_json(const TimeSeries& ts, double closed_average) {
    const EnvelopeMetrics m = envelope_metrics(ts);
    Json j;
    j["time_average"] = ts.time_average;
    j["time_average_closed"] = closed_average;
    j["envelope_max"] = ts.envelope_max;
    j["slow_period"] = ts.slow_period;
    j["collapse_time"] = optional_number(m.collapse_time);
    j["revival_centers"] = m.revival_centers;
    j["node_count"] = m.node_count;
    j["initial_amplitude"] = m.initial_amplitude;
    return j;
}

int cmd_dyn(const StateOptions& s, const OutputOptions& o, const DynOptions& d, std::ostream& out, std::ostream& err) {
    const Prepared p = prepare(s);
    DynamicsConfig cfg;
    cfg.delta = d.delta;
    cfg.z_max = d.z_max;
    cfg.samples_per_period = d.samples_per_period;
    cfg.eps_tail = s.eps_tail;
    cfg.prefactor = d.prefactor;
    cfg.reference_mean = closed_form_moments(p.spec).mean;
    validate(cfg);
    const auto z = make_z_grid(p.pmf, cfg);

    Json summary = state_json("dyn", p, s.eps_tail);
    summary["delta"] = cfg.delta;
    summary["z_max"] = cfg.z_max;
    summary["samples_per_period"] = cfg.samples_per_period;
    summary["prefactor"] = cfg.prefactor;
    summary["reference_mean"] = *cfg.reference_mean;
    summary["samples"] = z.size();

    CsvTable table{{"z"}, {z}};
    Plot plot{p.spec.describe(), "z", "S1", {}};
    const auto add = [&](const char* column, const char* key, double delta, const char* color) {
        const TimeSeries ts = s1_on_grid(p.pmf, delta, z, cfg.prefactor, cfg.reference_mean);
        summary[key] = envelope_json(ts, cfg.prefactor * time_average_closed(p.pmf, delta));
        table.header.push_back(column);
        table.columns.push_back(ts.s1);
        plot.series.push_back({key, z, ts.s1, PlotStyle::Line, color});
    };
    if (d.mode == "both") {
        add("s1_r", "resonant", 0.0, "#1f4e9c");
        add("s1_nr", "nonresonant", cfg.delta, "#c0392b");
    } else if (d.mode == "r") {
        add("s1", "resonant", 0.0, "#1f4e9c");
    } else {
        add("s1", "nonresonant", cfg.delta, "#c0392b");
    }
    emit(o, table, summary, out, err);
    emit_svg(o.svg, plot);
    return kExitOk;
}

int cmd_moments(const StateOptions& s, std::ostream& out) {
    const Prepared p = prepare(s);
    const Moments closed = closed_form_moments(p.spec);
    const Moments got = pmf_moments(p.pmf);
    const Moments bound = truncation_bound(p.pmf);
    const double tol_mean = std::max(1e-6, 3.0 * bound.mean), tol_var = std::max(1e-6, 3.0 * bound.variance);
    Json j = state_json("moments", p, s.eps_tail);
    j["closed_mean"] = closed.mean;
    j["closed_var"] = closed.variance;
    j["pmf_mean"] = got.mean;
    j["pmf_var"] = got.variance;
    j["abs_diffs"] = {{"mean", std::abs(got.mean - closed.mean)}, {"variance", std::abs(got.variance - closed.variance)}};
    j["truncation_bound"] = {{"mean", bound.mean}, {"variance", bound.variance}};
    j["within_tolerance"] =
        std::abs(got.mean - closed.mean) <= tol_mean && std::abs(got.variance - closed.variance) <= tol_var;
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_xcheck(const XcheckOptions& x, std::ostream& out, std::ostream& err) {
    if (x.list) {
        for (const auto& c : check_catalog()) {
            char line[256];
            std::snprintf(line, sizeof line, "%-40s %-9s %s\n", c.id.c_str(), c.mandatory ? "mandatory" : "advisory",
                          c.description.c_str());
            out << line;
        }
        return kExitOk;
    }
    std::vector<std::string> ids = x.only;
    if (ids.empty())
        for (const auto& c : check_catalog()) ids.push_back(c.id);
    for (const auto& id : ids)
        if (!is_known_check(id)) throw InvalidArgument("unknown check: " + id + " (see xcheck --list)");
    if (x.dim < 16) throw InvalidArgument("--dim must be >= 16");

    bool ok = true;
    char line[512];
    std::snprintf(line, sizeof line, "%-40s %-8s %-10s %-10s %8s  %s\n", "check", "status", "metric", "tolerance",
                  "seconds", "detail");
    out << line;
    for (const auto& id : ids) {
        const CheckResult r = run_check(id, x.dim);
        const char* status = r.passed ? "PASS" : (r.mandatory ? "FAIL" : "ADVISORY");
        std::snprintf(line, sizeof line, "%-40s %-8s %-10.3g %-10.3g %8.2f  %s\n", r.id.c_str(), status, r.metric,
                      r.tolerance, r.seconds, r.detail.c_str());
        out << line;
        if (r.mandatory && !r.passed) ok = false;
    }
    if (!ok) err << "xcheck: mandatory check failed\n";
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Photon statistics and Jaynes-Cummings correlation functions", "jcm"};
    app.require_subcommand(1);

    StateOptions state;
    OutputOptions output;
    DynOptions dyn;
    XcheckOptions xcheck;
    SweepOptions sweep;
    double pmf_delta = 0.0;

    auto* pmf = app.add_subcommand("pmf", "Photon-number distribution as CSV");
    add_state_options(*pmf, state);
    add_output_options(*pmf, output);
    pmf->add_option("--delta", pmf_delta, "Detuning for the weighted column")->capture_default_str();

    auto* dyncmd = app.add_subcommand("dyn", "Correlation function S1 over z");
    add_state_options(*dyncmd, state);
    add_output_options(*dyncmd, output);
    dyncmd->add_option("--delta", dyn.delta, "Dimensionless detuning")->capture_default_str();
    dyncmd->add_option("--zmax", dyn.z_max, "Upper end of the z range")->capture_default_str();
    dyncmd->add_option("--samples-per-period", dyn.samples_per_period, "Samples per fastest period")
        ->capture_default_str();
    dyncmd->add_option("--prefactor", dyn.prefactor, "Overall factor (2 gamma / mu)^2")->capture_default_str();
    dyncmd->add_option("--mode", dyn.mode, "both, r (resonant) or nr (non-resonant)")
        ->check(CLI::IsMember({"both", "r", "nr"}))
        ->capture_default_str();

    auto* moments = app.add_subcommand("moments", "Closed-form against distribution moments");
    add_state_options(*moments, state);

    auto* xc = app.add_subcommand("xcheck", "Cross-validation suite");
    xc->add_option("--only", xcheck.only, "Run only these checks");
    xc->add_option("--dim", xcheck.dim, "Oracle dimension")->capture_default_str();
    xc->add_flag("--list", xcheck.list, "List checks and exit");

    auto* sw = app.add_subcommand("sweep", "Run every entry of an INI manifest");
    sw->add_option("manifest", sweep.manifest, "Manifest file")->required();
    sw->add_option("--outdir", sweep.out_dir, "Output root")->capture_default_str();
    sw->add_option("--jobs", sweep.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (pmf->parsed()) return cmd_pmf(state, output, pmf_delta, out, err);
        if (dyncmd->parsed()) return cmd_dyn(state, output, dyn, out, err);
        if (moments->parsed()) return cmd_moments(state, out);
        if (xc->parsed()) return cmd_xcheck(xcheck, out, err);
        if (sw->parsed()) return run_sweep(sweep.manifest, sweep.out_dir, sweep.jobs, out, err);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadArgs;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitBadArgs;
}

}  // namespace jcm::cli
