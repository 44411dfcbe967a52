#include "jcm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "jcm/errors.hpp"

namespace jcm {

namespace {

constexpr std::size_t kAnchorStride = 64;

// Per-level weight (n+1)/(n+1+delta) rho_nn and angular frequency of sin^2.
struct Terms {
    std::vector<double> weight;
    std::vector<double> omega;
};

double scale_mean(const PhotonDistribution& pmf, std::optional<double> reference_mean) {
    return reference_mean ? *reference_mean : pmf.mean();
}

Terms collect_terms(const PhotonDistribution& pmf, double delta, double nbar) {
    Terms t;
    const auto& p = pmf.probs();
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] == 0.0) continue;
        const double level = static_cast<double>(n) + 1.0;
        t.weight.push_back(p[n] * level / (level + delta));
        t.omega.push_back(std::sqrt((level + delta) / (nbar + 1.0)));
    }
    return t;
}

bool is_uniform_from_zero(const std::vector<double>& z) {
    if (z.size() < 3 || z.front() != 0.0) return false;
    const double h = z.back() / static_cast<double>(z.size() - 1);
    for (std::size_t k = 0; k < z.size(); ++k)
        if (z[k] != static_cast<double>(k) * z.back() / static_cast<double>(z.size() - 1)) return false;
    return h > 0.0;
}

// sum_n w_n cos(2 omega_n z_k) on a uniform grid; the phasor is advanced by a
// fixed rotation and re-anchored from exact cos/sin every kAnchorStride steps.
std::vector<double> cosine_sum_uniform(const Terms& t, const std::vector<double>& z) {
    const std::size_t count = z.size();
    const double h = z.back() / static_cast<double>(count - 1);
    std::vector<double> acc(count, 0.0);
    for (std::size_t n = 0; n < t.weight.size(); ++n) {
        const double w = t.weight[n];
        const double two_omega = 2.0 * t.omega[n];
        const double rc = std::cos(two_omega * h), rs = std::sin(two_omega * h);
        double c = 1.0, s = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            if (k % kAnchorStride == 0) {
                c = std::cos(two_omega * z[k]);
                s = std::sin(two_omega * z[k]);
            }
            acc[k] += w * c;
            const double nc = c * rc - s * rs;
            s = s * rc + c * rs;
            c = nc;
        }
    }
    return acc;
}

std::vector<double> cosine_sum_general(const Terms& t, const std::vector<double>& z) {
    std::vector<double> acc(z.size(), 0.0);
    for (std::size_t n = 0; n < t.weight.size(); ++n)
        for (std::size_t k = 0; k < z.size(); ++k) acc[k] += t.weight[n] * std::cos(2.0 * t.omega[n] * z[k]);
    return acc;
}

double total_weight(const Terms& t) {
    double s = 0.0;
    for (double w : t.weight) s += w;
    return s;
}

TimeSeries evaluate(const PhotonDistribution& pmf, double delta, const std::vector<double>& z, double prefactor,
                    std::optional<double> reference_mean, Mode mode) {
    const Terms t = collect_terms(pmf, delta, scale_mean(pmf, reference_mean));
    const double wsum = total_weight(t);
    const std::vector<double> cs = is_uniform_from_zero(z) ? cosine_sum_uniform(t, z) : cosine_sum_general(t, z);
    TimeSeries out;
    out.z = z;
    out.mode = mode;
    out.s1.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out.s1[k] = prefactor * 0.5 * (wsum - cs[k]);
    out.time_average = trapezoid_average(out.z, out.s1);
    out.envelope_max = out.s1.empty() ? 0.0 : *std::max_element(out.s1.begin(), out.s1.end());
    out.slow_period = quantile_period(pmf, delta, 0.01, reference_mean);
    return out;
}

}  // namespace

void validate(const DynamicsConfig& cfg) {
    if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta)) throw InvalidArgument("delta must be >= 0");
    if (!(cfg.z_max > 0.0) || !std::isfinite(cfg.z_max)) throw InvalidArgument("z_max must be > 0");
    if (cfg.samples_per_period < 8) throw InvalidArgument("samples_per_period must be >= 8");
    if (!(cfg.eps_tail > 0.0 && cfg.eps_tail < 1.0)) throw InvalidArgument("eps_tail must lie in (0, 1)");
    if (!std::isfinite(cfg.prefactor)) throw InvalidArgument("prefactor must be finite");
    if (cfg.reference_mean && !(*cfg.reference_mean >= 0.0 && std::isfinite(*cfg.reference_mean)))
        throw InvalidArgument("reference mean must be finite and >= 0");
}

std::vector<double> make_z_grid(const PhotonDistribution& pmf, const DynamicsConfig& cfg) {
    validate(cfg);
    const double nbar = scale_mean(pmf, cfg.reference_mean);
    const double fastest = std::sqrt((pmf.n_max() + 1.0 + cfg.delta) / (nbar + 1.0));
    const double dz = kPi / fastest / cfg.samples_per_period;
    const auto intervals = static_cast<std::size_t>(std::ceil(cfg.z_max / dz));
    std::vector<double> z(std::max<std::size_t>(intervals, 2) + 1);
    for (std::size_t k = 0; k < z.size(); ++k)
        z[k] = static_cast<double>(k) * cfg.z_max / static_cast<double>(z.size() - 1);
    return z;
}

TimeSeries s1_resonant(const PhotonDistribution& pmf, const DynamicsConfig& cfg) {
    DynamicsConfig res = cfg;
    res.delta = 0.0;
    return evaluate(pmf, 0.0, make_z_grid(pmf, res), cfg.prefactor, cfg.reference_mean,
                    Mode::Resonant);
}

TimeSeries s1_nonresonant(const PhotonDistribution& pmf, const DynamicsConfig& cfg) {
    return evaluate(pmf, cfg.delta, make_z_grid(pmf, cfg), cfg.prefactor, cfg.reference_mean,
                    Mode::NonResonant);
}

TimeSeries s1_on_grid(const PhotonDistribution& pmf, double delta, const std::vector<double>& z, double prefactor,
                      std::optional<double> reference_mean) {
    if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
    if (reference_mean && !(*reference_mean >= 0.0)) throw InvalidArgument("reference mean must be >= 0");
    for (std::size_t k = 1; k < z.size(); ++k)
        if (!(z[k] > z[k - 1])) throw InvalidArgument("z grid must be strictly increasing");
    return evaluate(pmf, delta, z, prefactor, reference_mean, delta == 0.0 ? Mode::Resonant : Mode::NonResonant);
}

double time_average_closed(const PhotonDistribution& pmf, double delta) {
    if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
    double s = 0.0;
    const auto& p = pmf.probs();
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double level = static_cast<double>(n) + 1.0;
        s += p[n] * level / (level + delta);
    }
    return 0.5 * s;
}

double trapezoid_average(const std::vector<double>& z, const std::vector<double>& y) {
    if (z.size() != y.size()) throw InvalidArgument("trapezoid_average: size mismatch");
    if (z.size() < 2) return y.empty() ? 0.0 : y.front();
    double s = 0.0;
    for (std::size_t k = 1; k < z.size(); ++k) s += 0.5 * (y[k] + y[k - 1]) * (z[k] - z[k - 1]);
    return s / (z.back() - z.front());
}

double quantile_period(const PhotonDistribution& pmf, double delta, double quantile,
                       std::optional<double> reference_mean) {
    const auto& p = pmf.probs();
    const double target = quantile * pmf.total();
    double cum = 0.0;
    std::size_t level = 0;
    for (; level < p.size(); ++level) {
        cum += p[level];
        if (cum >= target && p[level] > 0.0) break;
    }
    level = std::min(level, p.size() - 1);
    const double omega =
        std::sqrt((static_cast<double>(level) + 1.0 + delta) / (scale_mean(pmf, reference_mean) + 1.0));
    return kPi / omega;
}

std::vector<double> windowed_amplitude(const TimeSeries& series) {
    const std::size_t count = series.s1.size();
    std::vector<double> amp(count, 0.0);
    if (count < 2) return amp;
    const double dz = series.z[1] - series.z[0];
    const auto half = static_cast<std::size_t>(std::llround(2.0 * series.slow_period / dz));
    std::deque<std::size_t> hi, lo;
    std::size_t next = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t right = std::min(count - 1, k + half);
        while (next <= right) {
            while (!hi.empty() && series.s1[hi.back()] <= series.s1[next]) hi.pop_back();
            hi.push_back(next);
            while (!lo.empty() && series.s1[lo.back()] >= series.s1[next]) lo.pop_back();
            lo.push_back(next);
            ++next;
        }
        const std::size_t left = k > half ? k - half : 0;
        while (hi.front() < left) hi.pop_front();
        while (lo.front() < left) lo.pop_front();
        amp[k] = series.s1[hi.front()] - series.s1[lo.front()];
    }
    return amp;
}

EnvelopeMetrics envelope_metrics(const TimeSeries& series) {
    EnvelopeMetrics out;
    const auto amp = windowed_amplitude(series);
    if (amp.size() < 2) return out;
    const double dz = series.z[1] - series.z[0];
    const auto half = static_cast<std::size_t>(std::llround(2.0 * series.slow_period / dz));
    if (amp.size() <= half + 1) return out;
    // Only samples whose window lies fully inside the series are interpreted.
    const std::size_t end = amp.size() - half;
    out.initial_amplitude = amp[0];
    const double floor = 0.1 * amp[0];
    if (amp[0] <= 0.0) return out;

    std::size_t k = 0;
    while (k < end && amp[k] >= floor) ++k;
    if (k == end) return out;
    out.collapse_time = series.z[k];
    out.node_count = 1;

    bool high = false;
    double trough = amp[k], peak = 0.0;
    std::size_t peak_at = k;
    for (; k < end; ++k) {
        const double a = amp[k];
        if (!high) {
            trough = std::min(trough, a);
            if (a >= floor && a >= 2.0 * trough) {
                high = true;
                peak = a;
                peak_at = k;
            }
        } else {
            if (a > peak) {
                peak = a;
                peak_at = k;
            }
            if (a <= 0.25 * peak) {
                high = false;
                trough = a;
                ++out.node_count;
                out.revival_centers.push_back(series.z[peak_at]);
            }
        }
    }
    if (high) out.revival_centers.push_back(series.z[peak_at]);
    return out;
}

}  // namespace jcm
