#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>

#include "jcm/alternatives.hpp"
#include "jcm/errors.hpp"
#include "jcm/oracle.hpp"
#include "jcm/states.hpp"

namespace jcm::cli {

namespace {

constexpr double kIdentityTol = 1e-7;
constexpr double kReductionTol = 1e-8;
constexpr double kOracleTol = 1e-8;
constexpr double kZeroPlus = 1e-9;

struct Outcome {
    double metric = 0.0;
    std::string detail;
    bool extra_ok = true;
};

std::string printf_string(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double max_abs(const PhotonDistribution& a, const PhotonDistribution& b) {
    const std::size_t n = std::max(a.probs().size(), b.probs().size());
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = k < a.probs().size() ? a[k] : 0.0;
        const double y = k < b.probs().size() ? b[k] : 0.0;
        worst = std::max(worst, std::abs(x - y));
    }
    return worst;
}

// Over the common prefix, entries where either side is a normal nonzero.
double max_rel(const PhotonDistribution& a, const PhotonDistribution& b) {
    const std::size_t n = std::min(a.probs().size(), b.probs().size());
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
        if (scale < 1e-290) continue;
        worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
    }
    return worst;
}

double mass_beyond(const PhotonDistribution& p, int n_last) {
    double s = 0.0;
    for (int n = n_last + 1; n <= p.n_max(); ++n) s += p[n];
    return s;
}

Outcome kernel_identity() {
    double worst = 0.0;
    int compared = 0;
    for (double r : {0.3, 1.0, 2.0})
        for (int n = 0; n <= 40; ++n)
            for (int l = 0; l <= 40; ++l) {
                const LogReal a = squeezed_fock_kernel(r, n, l);
                const LogReal b = alt::squeezed_fock_kernel_msum(r, n, l);
                if ((n - l) % 2 != 0) {
                    if (!a.is_zero() || !b.is_zero()) worst = std::max(worst, 1.0);
                    continue;
                }
                ++compared;
                if (a.sign != b.sign) {
                    worst = std::max(worst, 2.0);
                    continue;
                }
                if (a.is_zero()) continue;
                worst = std::max(worst, std::abs(std::expm1(a.logmag - b.logmag)));
            }
    return {worst, printf_string("%d kernel values, r in {0.3, 1, 2}", compared)};
}

Outcome squeezed_thermal_routes() {
    Outcome out;
    std::string detail;
    for (double n_T : {1.0, 10.0})
        for (double r : {0.5, 1.0, 2.0}) {
            const int n_max = std::min(auto_nmax(StateSpec::squeezed_thermal(r, n_T), 1e-8), 600);
            const auto primary = pmf_squeezed_thermal(r, n_T, n_max);
            const auto lsum = alt::squeezed_thermal_lsum(r, n_T, n_max);
            const auto hyp = alt::squeezed_thermal_hypergeometric(r, n_T, n_max);
            const auto leg = alt::squeezed_thermal_legendre(r, n_T, n_max);
            for (const auto* route : {&lsum, &hyp, &leg}) out.metric = std::max(out.metric, max_rel(primary, *route));
            const double uncovered = std::max({mass_beyond(primary, lsum.n_max()), mass_beyond(primary, hyp.n_max()),
                                               mass_beyond(primary, leg.n_max())});
            if (uncovered > 1e-6) out.extra_ok = false;
            const bool above = squeezed_thermal_params(r, n_T).v_sq < 0.0;
            detail += printf_string("%s(nt=%g r=%g%s N=%d: %d/%d/%d)", detail.empty() ? "" : " ", n_T, r,
                                    above ? ">r_s" : "", n_max, lsum.n_max(), hyp.n_max(), leg.n_max());
        }
    out.detail = "certified prefixes lsum/hyp/leg " + detail;
    return out;
}

Outcome critical_form() {
    Outcome out;
    for (double n_T : {0.5, 2.0, 10.0}) {
        const double r_s = squeezed_thermal_params(0.0, n_T).critical_r;
        const int n_max = std::min(auto_nmax(StateSpec::squeezed_thermal(r_s, n_T), 1e-8), 400);
        const auto crit = alt::squeezed_thermal_critical(r_s, n_T, n_max);
        for (const auto& route : {alt::squeezed_thermal_hypergeometric(r_s, n_T, n_max),
                                  alt::squeezed_thermal_lsum(r_s, n_T, n_max)}) {
            out.metric = std::max(out.metric, max_rel(crit, route));
            if (mass_beyond(crit, route.n_max()) > 1e-6) out.extra_ok = false;
        }
    }
    out.detail = "r = r_s for nt in {0.5, 2, 10} against the 2F1 and l-sum routes";
    return out;
}

Outcome quadruple_sum() {
    Outcome out;
    struct Point {
        double beta_sq, n_T, r;
        int n_max;
    };
    for (const Point& p : {Point{4.0, 2.0, 0.8, 300}, Point{0.0, 1.0, 1.0, 60}, Point{1.0, 0.5, 0.5, 120}}) {
        const auto primary = pmf_mixed_squeezed_coherent_thermal(p.beta_sq, p.n_T, p.r, p.n_max);
        const auto quad = alt::mixed_quadruple_sum(p.beta_sq, p.n_T, p.r, p.n_max);
        out.metric = std::max(out.metric, max_rel(primary, quad));
        const double uncovered = mass_beyond(primary, quad.n_max());
        if (uncovered > 1e-8) out.extra_ok = false;
        out.detail += printf_string("%s(%g,%g,%g: n<=%d, uncovered %.1e)", out.detail.empty() ? "" : " ", p.beta_sq,
                                    p.n_T, p.r, quad.n_max(), uncovered);
    }
    return out;
}

Outcome sdns_expansion() {
    Outcome out;
    int points = 0;
    for (double beta_sq : {2.0, 4.0})
        for (double r : {0.5, 1.0})
            for (double psi : {0.0, 2.0, kPi})
                for (int m : {0, 1, 3}) {
                    const auto primary = pmf_squeezed_displaced_number(beta_sq, r, psi, m, 200);
                    const auto expanded = alt::sdns_normal_ordered_sum(beta_sq, r, psi - kPi, m, 200);
                    out.metric = std::max(out.metric, max_rel(primary, expanded));
                    ++points;
                }
    out.detail = printf_string("%d parameter points, n <= 200", points);
    return out;
}

Outcome sdns_single_sum() {
    Outcome out;
    for (int m : {1, 2}) {
        const auto primary = pmf_squeezed_displaced_number(2.0, 0.5, kPi, m, 120);
        const auto direct = alt::sdns_direct_sum(2.0, 0.5, 0.0, m, 120);
        out.metric = std::max(out.metric, max_rel(primary, direct));
    }
    out.detail = "direct single sum at beta2=2 r=0.5 psi=pi m in {1, 2}";
    return out;
}

Outcome kummer() {
    Outcome out;
    struct Point {
        double beta_sq, n_T;
    };
    for (const Point& p : {Point{4.0, 1.0}, Point{25.0, 5.0}, Point{100.0, 10.0}}) {
        const int n_max = std::min(auto_nmax(StateSpec::mixed_coherent_thermal(p.beta_sq, p.n_T), 1e-8), 1000);
        out.metric = std::max(out.metric, max_rel(pmf_mixed_coherent_thermal(p.beta_sq, p.n_T, n_max),
                                                  alt::mixed_coherent_thermal_kummer(p.beta_sq, p.n_T, n_max)));
    }
    out.detail = "(beta2, nt) in {(4,1), (25,5), (100,10)}";
    return out;
}

struct Arrow {
    const char* name;
    StateSpec from;
    StateSpec to;
};

std::vector<Arrow> reduction_arrows() {
    const double b = 4.0, t = 1.5, r = 0.9;
    std::vector<Arrow> arrows{
        {"MixedCT(b,0+) -> Coherent", StateSpec::mixed_coherent_thermal(b, kZeroPlus), StateSpec::coherent(b)},
        {"MixedCT(0,t) -> Thermal", StateSpec::mixed_coherent_thermal(0.0, t), StateSpec::thermal(t)},
        {"SqFock(r,0) -> SqVacuum", StateSpec::squeezed_fock(r, 0), StateSpec::squeezed_vacuum(r)},
        {"SqCoherent(b,0+) -> Coherent", StateSpec::squeezed_coherent(b, kZeroPlus), StateSpec::coherent(b)},
        {"DSTS(0,t,r) -> SqThermal", StateSpec::displaced_squeezed_thermal(0.0, t, r), StateSpec::squeezed_thermal(r, t)},
        {"SDTS(0,t,r) -> SqThermal", StateSpec::displaced_squeezed_thermal(0.0, t, r, kPi, Variant::SDTS),
         StateSpec::squeezed_thermal(r, t)},
        {"DSTS(b,t,0) -> MixedCT", StateSpec::displaced_squeezed_thermal(b, t, 0.0),
         StateSpec::mixed_coherent_thermal(b, t)},
        {"DSTS(b,t,0+) -> MixedCT", StateSpec::displaced_squeezed_thermal(b, t, kZeroPlus),
         StateSpec::mixed_coherent_thermal(b, t)},
        {"DisplacedNumber(b,0) -> Coherent", StateSpec::displaced_number(b, 0), StateSpec::coherent(b)},
        {"SDNS(b,0+,m) -> DisplacedNumber", StateSpec::squeezed_displaced_number(b, kZeroPlus, kPi, 2),
         StateSpec::displaced_number(b, 2)},
        {"DSTS -> Coherent", StateSpec::displaced_squeezed_thermal(b, 0.0, 0.0), StateSpec::coherent(b)},
        {"DSTS -> Thermal", StateSpec::displaced_squeezed_thermal(0.0, t, 0.0), StateSpec::thermal(t)},
        {"DSTS -> SqVacuum", StateSpec::displaced_squeezed_thermal(0.0, 0.0, r), StateSpec::squeezed_vacuum(r)},
    };
    for (double psi : {0.0, kPi / 2, kPi}) {
        arrows.push_back({"SqCoherent(0,r) -> SqVacuum", StateSpec::squeezed_coherent(0.0, r, psi),
                          StateSpec::squeezed_vacuum(r)});
        arrows.push_back({"DSTS(b,0,r) -> SqCoherent", StateSpec::displaced_squeezed_thermal(b, 0.0, r, psi),
                          StateSpec::squeezed_coherent(b, r, psi)});
        arrows.push_back({"DSTS(b,0+,r) -> SqCoherent", StateSpec::displaced_squeezed_thermal(b, kZeroPlus, r, psi),
                          StateSpec::squeezed_coherent(b, r, psi)});
        arrows.push_back({"SDNS(b,r,0) -> SqCoherent", StateSpec::squeezed_displaced_number(b, r, psi, 0),
                          StateSpec::squeezed_coherent(b, r, psi)});
        // Squeeze-then-displace at zero temperature carries the rotated mean field.
        const double beta = std::sqrt(b);
        const ComplexVal field = beta * (std::cosh(r) + std::polar(1.0, psi) * std::sinh(r));
        double mapped_psi = std::remainder(psi - 2.0 * std::arg(field), 2.0 * kPi);
        if (mapped_psi < 0.0) mapped_psi += 2.0 * kPi;
        arrows.push_back({"SDTS(b,0,r) -> SqCoherent", StateSpec::displaced_squeezed_thermal(b, 0.0, r, psi, Variant::SDTS),
                          StateSpec::squeezed_coherent(std::norm(field), r, mapped_psi)});
    }
    return arrows;
}

Outcome reductions() {
    Outcome out;
    const auto arrows = reduction_arrows();
    std::string worst_name;
    for (const auto& a : arrows) {
        const double d = max_abs(make_distribution(a.from, 250), make_distribution(a.to, 250));
        if (d >= out.metric) {
            out.metric = d;
            worst_name = a.name;
        }
    }
    out.detail = printf_string("%zu arrows, worst %s", arrows.size(), worst_name.c_str());
    return out;
}

struct OracleCase {
    std::string id;
    std::function<StateSpec(double)> spec;  // argument scales the parameters
};

const std::vector<OracleCase>& oracle_cases() {
    static const std::vector<OracleCase> cases{
        {"oracle-coherent", [](double s) { return StateSpec::coherent(4.0 * s); }},
        {"oracle-thermal", [](double s) { return StateSpec::thermal(1.0 * s); }},
        {"oracle-fock", [](double s) { return StateSpec::fock(s < 0.5 ? 2 : 3); }},
        {"oracle-mixed-coherent-thermal", [](double s) { return StateSpec::mixed_coherent_thermal(3.0 * s, 1.0 * s); }},
        {"oracle-squeezed-vacuum", [](double s) { return StateSpec::squeezed_vacuum(0.8 * s); }},
        {"oracle-squeezed-fock", [](double s) { return StateSpec::squeezed_fock(0.6 * s, 2); }},
        {"oracle-squeezed-thermal", [](double s) { return StateSpec::squeezed_thermal(0.4 * s, 0.5 * s); }},
        {"oracle-squeezed-coherent", [](double s) { return StateSpec::squeezed_coherent(3.0 * s, 0.6 * s, kPi / 2); }},
        {"oracle-mixed-squeezed-coherent-thermal",
         [](double s) { return StateSpec::mixed_squeezed_coherent_thermal(2.0 * s, 0.3 * s, 0.4 * s); }},
        {"oracle-dsts",
         [](double s) { return StateSpec::displaced_squeezed_thermal(2.0 * s, 0.3 * s, 0.4 * s, kPi / 3); }},
        {"oracle-sdts", [](double s) {
             return StateSpec::displaced_squeezed_thermal(2.0 * s, 0.3 * s, 0.4 * s, kPi / 3, Variant::SDTS);
         }},
        {"oracle-displaced-number", [](double s) { return StateSpec::displaced_number(3.0 * s, 2); }},
        {"oracle-squeezed-displaced-number",
         [](double s) { return StateSpec::squeezed_displaced_number(2.0 * s, 0.5 * s, 1.0, 1); }},
    };
    return cases;
}

Outcome oracle_match(const OracleCase& c, int dim) {
    const double scale = std::min(1.0, (dim / 64.0) * (dim / 64.0));
    const StateSpec spec = c.spec(scale);
    const auto from_operators = oracle::to_distribution(oracle::build_state(spec, dim));
    const auto closed = make_distribution(spec, dim - 1);
    return {max_abs(from_operators, closed), printf_string("%s at dim %d", spec.describe().c_str(), dim)};
}

struct Entry {
    CheckInfo info;
    double tolerance;
    std::function<Outcome(int)> run;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e{
            {{"eq17-eq18", "squeezed Fock kernel: hypergeometric form equals the m-sum", true}, kIdentityTol,
             [](int) { return kernel_identity(); }},
            {{"eq10-eq25-eq26", "squeezed thermal: l-sum, 2F1 and Legendre routes agree", true}, kIdentityTol,
             [](int) { return squeezed_thermal_routes(); }},
            {{"eq28-critical", "squeezed thermal: degenerate form at the critical squeezing", true}, kIdentityTol,
             [](int) { return critical_form(); }},
            {{"eq12-a4", "mixed squeezed coherent thermal: primary equals the quadruple sum", true}, kIdentityTol,
             [](int) { return quadruple_sum(); }},
            {{"eq15-b8", "squeezed displaced number: primary equals the normal-ordered expansion", true},
             kIdentityTol, [](int) { return sdns_expansion(); }},
            {{"eq7-eq16", "mixed coherent thermal: Laguerre form equals the Kummer series", true}, kIdentityTol,
             [](int) { return kummer(); }},
            {{"b1-advisory", "squeezed displaced number: direct single sum (advisory)", false}, kIdentityTol,
             [](int) { return sdns_single_sum(); }},
            {{"reductions", "every special-case reduction arrow", true}, kReductionTol,
             [](int) { return reductions(); }},
        };
        for (const auto& c : oracle_cases())
            e.push_back({{c.id, "closed form equals the truncated operator construction", true}, kOracleTol,
                         [&c](int dim) { return oracle_match(c, dim); }});
        return e;
    }();
    return entries;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
    static const std::vector<CheckInfo> catalog = [] {
        std::vector<CheckInfo> out;
        for (const auto& e : registry()) out.push_back(e.info);
        return out;
    }();
    return catalog;
}

bool is_known_check(const std::string& id) {
    return std::any_of(registry().begin(), registry().end(), [&](const Entry& e) { return e.info.id == id; });
}

CheckResult run_check(const std::string& id, int oracle_dim) {
    if (oracle_dim < 16) throw InvalidArgument("oracle dimension must be >= 16");
    const auto it = std::find_if(registry().begin(), registry().end(), [&](const Entry& e) { return e.info.id == id; });
    if (it == registry().end()) throw InvalidArgument("unknown check: " + id);
    CheckResult result{id, it->info.mandatory, false, 0.0, it->tolerance, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
        const Outcome o = it->run(oracle_dim);
        result.metric = o.metric;
        result.detail = o.detail;
        result.passed = o.extra_ok && std::isfinite(o.metric) && o.metric < it->tolerance;
        if (!o.extra_ok) result.detail += " [coverage below requirement]";
    } catch (const std::exception& e) {
        result.metric = std::numeric_limits<double>::infinity();
        result.detail = std::string("error: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace jcm::cli
