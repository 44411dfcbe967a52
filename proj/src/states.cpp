#include "jcm/states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "jcm/errors.hpp"
#include "jcm/specfun.hpp"

namespace jcm {

namespace {

using cd = std::complex<double>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_nmax(int n_max) {
    if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
}

void require_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(std::string(name) + " must be finite and >= 0");
}

// Neumaier summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::vector<double> log_factorial_table(int n_max) {
    std::vector<double> t(static_cast<std::size_t>(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) t[static_cast<std::size_t>(k)] = log_factorial(k);
    return t;
}

double safe_exp(double logv) { return logv == kNegInf ? 0.0 : std::exp(logv); }

PhotonDistribution from_logs(const std::vector<double>& logs) {
    std::vector<double> p(logs.size());
    std::transform(logs.begin(), logs.end(), p.begin(), safe_exp);
    return PhotonDistribution(std::move(p));
}

double log_half_tanh(double r) { return std::log(0.5 * std::tanh(r)); }

}  // namespace

PhotonDistribution::PhotonDistribution(std::vector<double> probs, double condition)
    : probs_(std::move(probs)), condition_(condition) {
    if (probs_.empty()) throw InvalidArgument("distribution must have at least one entry");
    CompensatedSum s;
    for (double& p : probs_) {
        if (!std::isfinite(p)) throw NumericError("non-finite probability");
        if (p < -1e-12) throw NumericError("negative probability beyond rounding: " + std::to_string(p));
        if (p < 0.0) p = 0.0;
        s.add(p);
    }
    norm_residual_ = 1.0 - s.value();
    tail_mass_ = std::max(0.0, norm_residual_);
}

double PhotonDistribution::mean() const {
    CompensatedSum s;
    for (std::size_t n = 0; n < probs_.size(); ++n) s.add(static_cast<double>(n) * probs_[n]);
    return s.value();
}

double PhotonDistribution::variance() const {
    const double m = mean();
    CompensatedSum s;
    for (std::size_t n = 0; n < probs_.size(); ++n) {
        const double d = static_cast<double>(n) - m;
        s.add(d * d * probs_[n]);
    }
    return s.value();
}

Moments pmf_moments(const PhotonDistribution& pmf) { return {pmf.mean(), pmf.variance()}; }

Moments truncation_bound(const PhotonDistribution& pmf) {
    const auto& p = pmf.probs();
    const int top = pmf.n_max();
    int last = top;
    while (last >= 0 && p[last] == 0.0) --last;
    if (last < 0) return {0.0, 0.0};
    // Finite support well inside the table: nothing was cut off.
    if (top - last >= 2) return {0.0, 0.0};
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Decay ratio from two blocks of up to ten entries, which averages over
    // parity and other short-period oscillation.
    const int width = std::min(10, (last + 1) / 2);
    if (width < 2) return {kInf, kInf};
    double recent = 0.0, earlier = 0.0;
    for (int k = 0; k < width; ++k) {
        recent += p[last - k];
        earlier += p[last - width - k];
    }
    if (!(earlier > 0.0)) return {kInf, kInf};
    const double q = std::pow(recent / earlier, 1.0 / width);
    if (!(q < 1.0)) return {kInf, kInf};
    const double head = recent * (1.0 / q - 1.0) / (std::pow(q, -width) - 1.0);
    const double s0 = q / (1.0 - q);
    const double s1 = q / ((1.0 - q) * (1.0 - q));
    const double s2 = q * (1.0 + q) / ((1.0 - q) * (1.0 - q) * (1.0 - q));
    const double offset = static_cast<double>(last) - pmf.mean();
    // Geometric continuation of the fitted last entry, and the same shape
    // carrying the mass actually missing from the table; the larger is kept.
    const double mass = pmf.tail_mass();
    const double spread = 1.0 / (1.0 - q);
    const double mean_tail = std::max(head * (static_cast<double>(last) * s0 + s1),
                                      mass * (static_cast<double>(last) + spread));
    const double var_tail = std::max(head * (offset * offset * s0 + 2.0 * offset * s1 + s2),
                                     mass * ((offset + spread) * (offset + spread) + q * spread * spread));
    return {mean_tail, var_tail + mean_tail * mean_tail};
}

Moments closed_form_moments(const StateSpec& spec) {
    const double b2 = spec.beta_sq();
    const double nt = spec.n_T();
    const double r = spec.r();
    const double psi = spec.psi();
    const double l = spec.fock_level();
    const double s2 = std::sinh(r) * std::sinh(r);
    const double sh2 = std::sinh(2.0 * r);
    const double quad = std::cosh(2.0 * r) + std::cos(psi) * sh2;
    switch (spec.family()) {
        case Family::Coherent:
            return {b2, b2};
        case Family::Thermal:
            return {nt, nt * nt + nt};
        case Family::Fock:
            return {l, 0.0};
        case Family::MixedCoherentThermal:
            return {b2 + nt, b2 * (1.0 + 2.0 * nt) + nt * nt + nt};
        case Family::SqueezedVacuum:
            return {s2, sh2 * sh2 / 2.0};
        case Family::SqueezedFock:
            return {l + (2.0 * l + 1.0) * s2, 0.5 * (l * l + l + 1.0) * sh2 * sh2};
        case Family::SqueezedThermal:
            return {nt + (2.0 * nt + 1.0) * s2, -0.25 + (nt + 0.5) * (nt + 0.5) * std::cosh(4.0 * r)};
        case Family::SqueezedCoherent:
            return {s2 + b2, b2 * quad + sh2 * sh2 / 2.0};
        case Family::MixedSqueezedCoherentThermal: {
            const double quad_pi = std::cosh(2.0 * r) + std::cos(kPi) * sh2;
            return {s2 + b2 + nt, b2 * quad_pi + sh2 * sh2 / 2.0 + 2.0 * nt * (s2 + b2) + nt * nt + nt};
        }
        case Family::DisplacedSqueezedThermal: {
            if (spec.variant() == Variant::DSTS) {
                return {nt + (2.0 * nt + 1.0) * s2 + b2,
                        -0.25 + b2 * (1.0 + 2.0 * nt) * quad +
                            (nt + 0.5) * (nt + 0.5) * std::cosh(4.0 * r)};
            }
            // Gaussian state with <da^dagger da> = a, <da da> = b, <a> = c.
            const double beta = std::sqrt(b2);
            const double a = nt + (2.0 * nt + 1.0) * s2;
            const cd b = (2.0 * nt + 1.0) * std::polar(1.0, psi) * std::sinh(r) * std::cosh(r);
            const cd c = beta * std::cosh(r) + beta * std::polar(1.0, psi) * std::sinh(r);
            const double c2 = std::norm(c);
            return {a + c2, 2.0 * std::real(std::conj(c) * std::conj(c) * b) + c2 * (2.0 * a + 1.0) + a * a + a +
                                std::norm(b)};
        }
        case Family::DisplacedNumber:
            return {l + b2, (2.0 * l + 1.0) * b2};
        case Family::SqueezedDisplacedNumber:
            return {b2 + (2.0 * l + 1.0) * s2 + l, b2 * quad * (2.0 * l + 1.0) + 0.5 * (l * l + l + 1.0) * sh2 * sh2};
    }
    throw InvalidArgument("unknown family");
}

PhotonDistribution pmf_coherent(double beta_sq, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nmax(n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1, kNegInf);
    if (beta_sq == 0.0) {
        logs[0] = 0.0;
        return from_logs(logs);
    }
    const double lb = std::log(beta_sq);
    for (int n = 0; n <= n_max; ++n) logs[static_cast<std::size_t>(n)] = -beta_sq + n * lb - log_factorial(n);
    return from_logs(logs);
}

PhotonDistribution pmf_thermal(double n_T, int n_max) {
    require_nonneg(n_T, "n_T");
    require_nmax(n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1, kNegInf);
    if (n_T == 0.0) {
        logs[0] = 0.0;
        return from_logs(logs);
    }
    const double l1 = std::log1p(n_T);
    const double ratio = std::log(n_T) - l1;
    for (int n = 0; n <= n_max; ++n) logs[static_cast<std::size_t>(n)] = -l1 + n * ratio;
    return from_logs(logs);
}

PhotonDistribution pmf_fock(int level, int n_max) {
    require_nmax(n_max);
    if (level < 0) throw InvalidArgument("fock level must be >= 0");
    if (level > n_max) throw InvalidArgument("fock level exceeds n_max");
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    p[static_cast<std::size_t>(level)] = 1.0;
    return PhotonDistribution(std::move(p));
}

PhotonDistribution pmf_mixed_coherent_thermal(double beta_sq, double n_T, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nonneg(n_T, "n_T");
    require_nmax(n_max);
    if (n_T < kThermalFloor) return pmf_coherent(beta_sq, n_max);
    if (beta_sq == 0.0) return pmf_thermal(n_T, n_max);
    const double l1 = std::log1p(n_T);
    const double ratio = std::log(n_T) - l1;
    const auto lag = laguerre_seq(n_max, 0, -beta_sq / (n_T * (n_T + 1.0)));
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const LogReal& L = lag[static_cast<std::size_t>(n)];
        if (L.sign <= 0) throw NumericError("mixed coherent thermal: non-positive Laguerre value");
        logs[static_cast<std::size_t>(n)] = -beta_sq / (n_T + 1.0) - l1 + n * ratio + L.logmag;
    }
    return from_logs(logs);
}

PhotonDistribution pmf_squeezed_vacuum(double r, int n_max) {
    require_nonneg(r, "r");
    require_nmax(n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1, kNegInf);
    if (r == 0.0) {
        logs[0] = 0.0;
        return from_logs(logs);
    }
    const double lht = log_half_tanh(r);
    const double lc = std::log(std::cosh(r));
    for (int n = 0; n <= n_max; n += 2)
        logs[static_cast<std::size_t>(n)] = n * lht + log_factorial(n) - lc - 2.0 * log_factorial(n / 2);
    return from_logs(logs);
}

LogReal squeezed_fock_kernel(double r, int n, int l) {
    if (n < 0 || l < 0) throw InvalidArgument("squeezed_fock_kernel: negative index");
    if (!(r > 0.0)) throw InvalidArgument("squeezed_fock_kernel: r must be > 0");
    if ((n - l) % 2 != 0) return LogReal::zero();
    const double s = std::sinh(r);
    const detail::DD x = -(detail::dd(1.0) / (detail::dd(s) * detail::dd(s)));
    const double log_half_s = std::log(0.5 * s);
    LogReal f;
    double log_pref;
    if (n % 2 == 0) {
        f = gauss2f1_terminating(-l / 2.0, -n / 2.0, 0.5, x);
        log_pref = 2.0 * n * log_half_s - 2.0 * (log_factorial(n / 2) + log_factorial(l / 2));
    } else {
        f = gauss2f1_terminating(-(l - 1) / 2.0, -(n - 1) / 2.0, 1.5, x);
        log_pref = 2.0 * (n - 1) * log_half_s - 2.0 * (log_factorial((n - 1) / 2) + log_factorial((l - 1) / 2));
    }
    if (f.is_zero()) return LogReal::zero();
    return LogReal::from_log(log_pref + 2.0 * f.logmag);
}

PhotonDistribution pmf_squeezed_fock(double r, int level, int n_max) {
    require_nonneg(r, "r");
    require_nmax(n_max);
    if (level < 0) throw InvalidArgument("fock level must be >= 0");
    if (r < kSqueezeFloor) return pmf_fock(level, n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1, kNegInf);
    const double lht = log_half_tanh(r);
    const double lc = std::log(std::cosh(r));
    const double ll = log_factorial(level);
    for (int n = level % 2; n <= n_max; n += 2) {
        const LogReal s = squeezed_fock_kernel(r, n, level);
        if (s.is_zero()) continue;
        logs[static_cast<std::size_t>(n)] = ll + log_factorial(n) - (2.0 * n + 1.0) * lc + (level - n) * lht + s.logmag;
    }
    return from_logs(logs);
}

SqueezedThermalParams squeezed_thermal_params(double r, double n_T) {
    SqueezedThermalParams p;
    p.critical_r = 0.5 * std::log1p(2.0 * n_T);
    // sinh(2 r_s) = 2 n_T (n_T + 1) / (2 n_T + 1)
    const double sinh_2rs = 2.0 * n_T * (n_T + 1.0) / (2.0 * n_T + 1.0);
    const detail::DD ratio = detail::dd(std::sinh(2.0 * r)) / detail::dd(sinh_2rs);
    const detail::DD v2 = detail::dd(1.0) - ratio * ratio;
    p.v_sq = v2.hi + v2.lo;
    const double s = std::sinh(r);
    p.base = 1.0 + (2.0 * n_T + 1.0) * s * s / ((n_T + 1.0) * (n_T + 1.0));
    return p;
}

PhotonDistribution pmf_squeezed_thermal(double r, double n_T, int n_max) {
    require_nonneg(r, "r");
    require_nonneg(n_T, "n_T");
    require_nmax(n_max);
    if (n_T < kThermalFloor) return pmf_squeezed_vacuum(r, n_max);
    if (r < kSqueezeFloor) return pmf_thermal(n_T, n_max);
    const SqueezedThermalParams par = squeezed_thermal_params(r, n_T);
    const double lbase = std::log(par.base);
    const double l1 = std::log1p(n_T);
    const double ratio = std::log(n_T) - l1;
    const bool degenerate = std::abs(par.v_sq) < kCriticalFloor;
    const auto q = degenerate ? std::vector<LogReal>{} : legendre_scaled_seq(par.v_sq, n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        double lq;
        if (degenerate) {
            lq = log_double_factorial_odd(n) - log_factorial(n);
        } else {
            const LogReal& v = q[static_cast<std::size_t>(n)];
            if (v.sign <= 0) throw NumericError("squeezed thermal: non-positive Legendre combination");
            lq = v.logmag;
        }
        logs[static_cast<std::size_t>(n)] = -(2.0 * n + 1.0) / 2.0 * lbase - l1 + n * ratio + lq;
    }
    return from_logs(logs);
}

PhotonDistribution pmf_squeezed_coherent(double beta_sq, double r, double psi, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nonneg(r, "r");
    require_nmax(n_max);
    if (r < kSqueezeFloor) return pmf_coherent(beta_sq, n_max);
    const double beta = std::sqrt(beta_sq);
    const double t = std::tanh(r);
    const cd z = beta / std::sqrt(2.0) *
                 (std::polar(1.0, -(psi + kPi) / 2.0) / std::sqrt(t) + std::polar(1.0, (psi + kPi) / 2.0) * std::sqrt(t));
    const double log_n1 = -beta_sq * (1.0 - std::cos(psi) * t) - std::log(std::cosh(r));
    const double lht = log_half_tanh(r);
    const auto h = hermite_seq(z, n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const LogComplex& hn = h[static_cast<std::size_t>(n)];
        logs[static_cast<std::size_t>(n)] =
            hn.is_zero() ? kNegInf : log_n1 + n * lht - log_factorial(n) + 2.0 * hn.logmag;
    }
    return from_logs(logs);
}

VourdasParams vourdas_params(double beta_sq, double n_T, double r) {
    VourdasParams p;
    const double t = std::tanh(r);
    const double c = std::cosh(r);
    p.k = 1.0 / (c * c * ((1.0 - t) * n_T + std::exp(-2.0 * r)));
    p.lambda_coef = 1.0 / (c * c * ((1.0 + t) * n_T + std::exp(2.0 * r)));
    p.c11 = 0.5 * (1.0 + n_T) * (p.lambda_coef - p.k) + t * (1.0 + 1.0 / n_T);
    p.c22 = p.c11;
    p.c12 = -0.5 * (1.0 + n_T) * (p.lambda_coef + p.k);
    const double amp = std::exp(-r) * std::sqrt(beta_sq / n_T) * c / std::sqrt(1.0 + n_T);
    p.r1 = -amp / (1.0 - t / (p.k * n_T));
    p.r2 = p.r1;
    // (c11 + c12) r1 with the vanishing factor cancelled analytically.
    p.linear = (1.0 + n_T) * p.k * amp;
    p.weight = n_T / (1.0 + n_T);
    p.norm = std::exp(-beta_sq / (n_T + std::exp(-2.0 * r) * c * c * (1.0 + t))) /
             (c * std::sqrt((n_T * (1.0 + t) + std::exp(2.0 * r)) * (n_T * (1.0 - t) + std::exp(-2.0 * r))));
    return p;
}

PhotonDistribution pmf_mixed_squeezed_coherent_thermal(double beta_sq, double n_T, double r, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nonneg(n_T, "n_T");
    require_nonneg(r, "r");
    require_nmax(n_max);
    if (n_T < kThermalFloor)
        throw InvalidArgument("mixed squeezed coherent thermal requires n_T >= 1e-6; use squeezed-coherent");
    const VourdasParams par = vourdas_params(beta_sq, n_T, r);
    const auto diag =
        gen_hermite_diag_weighted_linear(par.c11, par.c12, par.c22, par.linear, par.linear, par.weight, n_max);
    const double lnorm = std::log(par.norm);
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const LogReal& h = diag[static_cast<std::size_t>(n)];
        const double v = h.is_zero() ? 0.0 : h.sign * std::exp(lnorm + h.logmag);
        p[static_cast<std::size_t>(n)] = v;
    }
    PhotonDistribution out(std::move(p));
    if (out.norm_residual() < -1e-8)
        throw NumericError("mixed squeezed coherent thermal: normalization exceeds 1 by " +
                           std::to_string(-out.norm_residual()));
    return out;
}

PhotonDistribution pmf_displaced_squeezed_thermal(double beta_sq, double n_T, double r, double psi,
                                                  Variant variant, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nonneg(n_T, "n_T");
    require_nonneg(r, "r");
    require_nmax(n_max);
    const double beta = std::sqrt(beta_sq);
    const double s = std::sinh(r), c = std::cosh(r);
    const cd e = std::polar(1.0, psi);
    const double a = n_T + (2.0 * n_T + 1.0) * s * s;
    const cd b = -(2.0 * n_T + 1.0) * e * s * c;
    const cd cc = variant == Variant::DSTS ? cd(beta) : beta * c + beta * e * s;
    const double den = n_T * n_T + (n_T + 0.5) * (1.0 + std::cosh(2.0 * r));
    const double a_t = n_T * (n_T + 1.0) / den;
    const cd b_t = b / den;
    const cd c_t = ((1.0 + a) * cc + b * std::conj(cc)) / den;
    const double log_q0 =
        -0.5 * std::log(den) - ((1.0 + a) * std::norm(cc) + std::real(b * std::conj(cc) * std::conj(cc))) / den;

    // g_q = |B~/2|^{q/2} H_q(C~ / sqrt(2 B~)) up to a phase.
    std::vector<double> log_g2(static_cast<std::size_t>(n_max) + 1);
    {
        cd prev{0.0, 0.0}, cur{1.0, 0.0};
        double scale = 0.0;
        log_g2[0] = 0.0;
        for (int q = 0; q < n_max; ++q) {
            const cd next = c_t * cur - static_cast<double>(q) * b_t * prev;
            prev = cur;
            cur = next;
            const double m = std::max(std::abs(cur), std::abs(prev));
            if (m > 1e100 || (m < 1e-100 && m > 0.0)) {
                cur /= m;
                prev /= m;
                scale += std::log(m);
            }
            if (!std::isfinite(std::abs(cur))) throw NumericError("displaced squeezed thermal: q-recursion overflow");
            const double ac = std::abs(cur);
            log_g2[static_cast<std::size_t>(q) + 1] = ac == 0.0 ? kNegInf : 2.0 * (std::log(ac) + scale);
        }
    }
    const auto lf = log_factorial_table(n_max);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1);
    if (a_t <= 0.0) {
        for (int n = 0; n <= n_max; ++n)
            logs[static_cast<std::size_t>(n)] = log_q0 + log_g2[static_cast<std::size_t>(n)] - lf[static_cast<std::size_t>(n)];
        return from_logs(logs);
    }
    const double la = std::log(a_t);
    // Log of (n-q)-weight and q-weight; the q-sum is a convolution of positive terms.
    std::vector<double> wq(static_cast<std::size_t>(n_max) + 1), wk(static_cast<std::size_t>(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) {
        wq[static_cast<std::size_t>(k)] = log_g2[static_cast<std::size_t>(k)] - 2.0 * lf[static_cast<std::size_t>(k)];
        wk[static_cast<std::size_t>(k)] = k * la - lf[static_cast<std::size_t>(k)];
    }
    for (int n = 0; n <= n_max; ++n) {
        double mx = kNegInf;
        for (int q = 0; q <= n; ++q) mx = std::max(mx, wq[static_cast<std::size_t>(q)] + wk[static_cast<std::size_t>(n - q)]);
        if (mx == kNegInf) {
            logs[static_cast<std::size_t>(n)] = kNegInf;
            continue;
        }
        double acc = 0.0;
        for (int q = 0; q <= n; ++q)
            acc += std::exp(wq[static_cast<std::size_t>(q)] + wk[static_cast<std::size_t>(n - q)] - mx);
        const double v = log_q0 + lf[static_cast<std::size_t>(n)] + mx + std::log(acc);
        if (!std::isfinite(v)) throw NumericError("displaced squeezed thermal: non-finite log term");
        logs[static_cast<std::size_t>(n)] = v;
    }
    return from_logs(logs);
}

PhotonDistribution pmf_displaced_number(double beta_sq, int level, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nmax(n_max);
    if (level < 0) throw InvalidArgument("fock level must be >= 0");
    if (beta_sq == 0.0) return pmf_fock(level, n_max);
    const double lb = std::log(beta_sq);
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const int lo = std::min(n, level), hi = std::max(n, level);
        const LogReal lag = assoc_laguerre(lo, hi - lo, beta_sq);
        logs[static_cast<std::size_t>(n)] =
            lag.is_zero() ? kNegInf
                          : log_factorial(lo) - log_factorial(hi) + (hi - lo) * lb - beta_sq + 2.0 * lag.logmag;
    }
    return from_logs(logs);
}

PhotonDistribution pmf_squeezed_displaced_number(double beta_sq, double r, double psi, int level, int n_max) {
    require_nonneg(beta_sq, "beta_sq");
    require_nonneg(r, "r");
    require_nmax(n_max);
    if (level < 0) throw InvalidArgument("fock level must be >= 0");
    if (r < kSqueezeFloor) return pmf_displaced_number(beta_sq, level, n_max);
    const int m = level;
    const double beta = std::sqrt(beta_sq);
    const double c = std::cosh(r), s = std::sinh(r), t = std::tanh(r);
    const cd e = std::polar(1.0, psi - kPi);
    const cd gamma = beta * c + beta * e * s;
    // <n|D(beta) S(zeta)|m> = sqrt(n! m!) K sum_i G_{n-i} G'_{m-i} / (c^i i! (n-i)! (m-i)!)
    // with G_p = w^p H_p(u / 2w), (u, w^2) = (gamma/c, e t/2) and (-beta/c, -conj(e) t/2).
    const cd w1 = std::sqrt(0.5 * e * t);
    const cd w2 = std::sqrt(-0.5 * std::conj(e) * t);
    const auto h1 = hermite_seq(gamma / c / (2.0 * w1), n_max);
    const auto h2 = hermite_seq(-beta / c / (2.0 * w2), m);
    const LogComplex lw1 = LogComplex::from_complex(w1), lw2 = LogComplex::from_complex(w2);
    auto g = [](const LogComplex& h, const LogComplex& w, int p) {
        if (h.is_zero()) return h;
        return LogComplex{h.phase * std::pow(w.phase, p), h.logmag + p * w.logmag};
    };
    const double log_k_mag = -0.5 * std::log(c) - 0.5 * beta_sq - 0.5 * t * beta_sq * std::real(e);
    const double lc = std::log(c);
    const auto lf = log_factorial_table(std::max(n_max, m));
    double worst = 1.0;
    std::vector<double> logs(static_cast<std::size_t>(n_max) + 1);
    std::vector<LogComplex> terms;
    for (int n = 0; n <= n_max; ++n) {
        terms.clear();
        double mx = kNegInf;
        for (int i = 0; i <= std::min(m, n); ++i) {
            LogComplex tt = g(h1[static_cast<std::size_t>(n - i)], lw1, n - i) * g(h2[static_cast<std::size_t>(m - i)], lw2, m - i);
            if (tt.is_zero()) continue;
            tt.logmag -= i * lc + lf[static_cast<std::size_t>(i)] + lf[static_cast<std::size_t>(n - i)] +
                         lf[static_cast<std::size_t>(m - i)];
            mx = std::max(mx, tt.logmag);
            terms.push_back(tt);
        }
        if (terms.empty()) {
            logs[static_cast<std::size_t>(n)] = kNegInf;
            continue;
        }
        cd sum{0.0, 0.0}, comp{0.0, 0.0};
        double abs_sum = 0.0;
        for (const auto& tt : terms) {
            const cd v = tt.phase * std::exp(tt.logmag - mx);
            abs_sum += std::abs(v);
            const cd y = v - comp;
            const cd z = sum + y;
            comp = (z - sum) - y;
            sum = z;
        }
        const double mag = std::abs(sum);
        if (mag == 0.0) {
            logs[static_cast<std::size_t>(n)] = kNegInf;
            worst = std::numeric_limits<double>::infinity();
            continue;
        }
        worst = std::max(worst, abs_sum / mag);
        logs[static_cast<std::size_t>(n)] =
            lf[static_cast<std::size_t>(n)] + lf[static_cast<std::size_t>(m)] + 2.0 * log_k_mag + 2.0 * (mx + std::log(mag));
    }
    std::vector<double> p(logs.size());
    std::transform(logs.begin(), logs.end(), p.begin(), safe_exp);
    return PhotonDistribution(std::move(p), worst);
}

PhotonDistribution make_distribution(const StateSpec& spec, int n_max) {
    const double b2 = spec.beta_sq(), nt = spec.n_T(), r = spec.r(), psi = spec.psi();
    const int l = spec.fock_level();
    switch (spec.family()) {
        case Family::Coherent:
            return pmf_coherent(b2, n_max);
        case Family::Thermal:
            return pmf_thermal(nt, n_max);
        case Family::Fock:
            return pmf_fock(l, n_max);
        case Family::MixedCoherentThermal:
            return pmf_mixed_coherent_thermal(b2, nt, n_max);
        case Family::SqueezedVacuum:
            return pmf_squeezed_vacuum(r, n_max);
        case Family::SqueezedFock:
            return pmf_squeezed_fock(r, l, n_max);
        case Family::SqueezedThermal:
            return pmf_squeezed_thermal(r, nt, n_max);
        case Family::SqueezedCoherent:
            return pmf_squeezed_coherent(b2, r, psi, n_max);
        case Family::MixedSqueezedCoherentThermal:
            if (nt < kThermalFloor) return pmf_squeezed_coherent(b2, r, kPi, n_max);
            return pmf_mixed_squeezed_coherent_thermal(b2, nt, r, n_max);
        case Family::DisplacedSqueezedThermal:
            return pmf_displaced_squeezed_thermal(b2, nt, r, psi, spec.variant(), n_max);
        case Family::DisplacedNumber:
            return pmf_displaced_number(b2, l, n_max);
        case Family::SqueezedDisplacedNumber:
            return pmf_squeezed_displaced_number(b2, r, psi, l, n_max);
    }
    throw InvalidArgument("unknown family");
}

int hard_nmax_cap() {
    if (const char* env = std::getenv("JCM_HARD_NMAX_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 100000000) return static_cast<int>(v);
    }
    return kDefaultHardCap;
}

PhotonDistribution auto_distribution(const StateSpec& spec, double eps_tail) {
    if (!(eps_tail > 0.0 && eps_tail < 1.0)) throw InvalidArgument("eps_tail must lie in (0, 1)");
    const int cap = hard_nmax_cap();
    const Moments mom = closed_form_moments(spec);
    const double guess = mom.mean + 10.0 * std::sqrt(std::max(0.0, mom.variance)) + 16.0;
    int n = static_cast<int>(std::min<double>(std::ceil(guess), cap));
    n = std::max(n, spec.fock_level() + 1);
    while (true) {
        const PhotonDistribution pmf = make_distribution(spec, n);
        CompensatedSum cum;
        const auto& p = pmf.probs();
        for (int k = 0; k <= pmf.n_max(); ++k) {
            cum.add(p[static_cast<std::size_t>(k)]);
            if (1.0 - cum.value() < eps_tail) {
                const auto keep = static_cast<std::ptrdiff_t>(std::max(k, 1)) + 1;
                return PhotonDistribution(std::vector<double>(p.begin(), p.begin() + keep), pmf.max_condition());
            }
        }
        if (n >= cap) {
            char msg[256];
            std::snprintf(msg, sizeof msg, "auto_nmax: tail above %g at the hard cap %d for ", eps_tail, cap);
            throw NumericError(msg + spec.describe());
        }
        n = static_cast<int>(std::min<double>(std::ceil(1.5 * n), cap));
    }
}

int auto_nmax(const StateSpec& spec, double eps_tail) { return auto_distribution(spec, eps_tail).n_max(); }

}  // namespace jcm
