#include "jcm/alternatives.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "jcm/errors.hpp"
#include "jcm/specfun.hpp"

namespace jcm::alt {

namespace {

using cd = std::complex<double>;
using detail::DD;
using detail::ExtDD;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t idx(int n) { return static_cast<std::size_t>(n); }

PhotonDistribution from_logs(const std::vector<double>& logs) {
    std::vector<double> p(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) p[i] = logs[i] == kNegInf ? 0.0 : std::exp(logs[i]);
    return PhotonDistribution(std::move(p));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be > 0");
}

DD v_squared_dd(double r, double n_T) {
    const double sinh_2rs = 2.0 * n_T * (n_T + 1.0) / (2.0 * n_T + 1.0);
    const DD ratio = detail::dd(std::sinh(2.0 * r)) / detail::dd(sinh_2rs);
    return detail::dd(1.0) - ratio * ratio;
}

// Log of [base]^{-(2n+1)/2} n_T^n / (n_T+1)^{n+1}.
double log_squeezed_thermal_prefactor(double r, double n_T, int n) {
    const SqueezedThermalParams par = squeezed_thermal_params(r, n_T);
    const double l1 = std::log1p(n_T);
    return -(2.0 * n + 1.0) / 2.0 * std::log(par.base) - l1 + n * (std::log(n_T) - l1);
}

// rho_nn of the squeezed thermal state as sum_l w^l |<n|S|l>|^2 / (n_T + 1),
// with <m|S|l> from the two-index recurrence of the real squeeze matrix.  The
// recurrence loses accuracy in the oscillating band away from the diagonal, so
// it runs in the working type Real.
template <class Real>
std::vector<double> squeezed_thermal_lsum_at(double r, double n_T, int n_max) {
    const Real rr(r);
    const Real t = tanh(rr), sech = 1 / cosh(rr);
    const double lw = std::log(n_T) - std::log1p(n_T);
    const double tail_factor = -std::log1p(-std::exp(lw));
    const std::size_t rows = idx(n_max) + 1;
    std::vector<Real> root(rows + 1);
    for (std::size_t k = 0; k < root.size(); ++k) root[k] = sqrt(Real(static_cast<double>(k)));
    std::vector<Real> back2(rows), back1(rows), cur(rows), sum(rows);
    const Real w = Real(n_T) / (Real(n_T) + 1);
    Real weight = 1;
    for (int l = 0;; ++l) {
        const std::size_t lu = idx(l);
        while (root.size() <= lu) root.push_back(sqrt(Real(static_cast<double>(root.size()))));
        for (auto& v : cur) v = 0;
        for (std::size_t m = lu % 2; m < rows; m += 2) {
            if (m == 0 && l == 0) {
                cur[0] = sqrt(sech);
                continue;
            }
            Real v = 0;
            if (m >= 2) v -= root[m - 1] / root[m] * t * cur[m - 2];
            if (l >= 1 && m >= 1) v += root[lu] / root[m] * sech * back1[m - 1];
            if (m == 0) v = l >= 2 ? root[lu - 1] / root[lu] * t * back2[0] : Real(0);
            cur[m] = v;
        }
        for (std::size_t m = 0; m < rows; ++m) sum[m] += weight * cur[m] * cur[m];
        weight *= w;
        // Each |<n|S|l>|^2 <= 1, so the remainder is below w^{l+1} / (1 - w).
        const double rest = (l + 1) * lw + tail_factor;
        bool done = true;
        for (std::size_t m = 0; m < rows && done; ++m) {
            const double s = static_cast<double>(sum[m]);
            done = s > 0.0 && rest < std::log(s) - 18.0 * std::log(10.0);
        }
        if (done) break;
        if (l > 400000) throw NumericError("squeezed_thermal_lsum: l-series did not converge");
        std::swap(back2, back1);
        std::swap(back1, cur);
    }
    std::vector<double> p(rows);
    for (std::size_t m = 0; m < rows; ++m) p[m] = static_cast<double>(sum[m] / (Real(n_T) + 1));
    return p;
}

}  // namespace

LogReal squeezed_fock_kernel_msum(double r, int n, int l) {
    if (n < 0 || l < 0) throw InvalidArgument("squeezed_fock_kernel_msum: negative index");
    if ((n - l) % 2 != 0) return LogReal::zero();
    const double s = std::sinh(r);
    const DD q = detail::dd(0.5 * s) * detail::dd(0.5 * s);
    const int m0 = std::max(0, (n - l) / 2);
    const int shift = (l - n) / 2;  // [m + (l - n)/2]!
    if (m0 > n / 2) return LogReal::zero();
    const double log_first = 2.0 * m0 * std::log(0.5 * s) - log_factorial(m0) - log_factorial(n - 2 * m0) -
                             log_factorial(m0 + shift);
    ExtDD term = ExtDD::from_log(log_first, m0 % 2 == 0 ? 1 : -1);
    ExtDD sum = term;
    for (int m = m0; m + 1 <= n / 2; ++m) {
        const DD num = -(q * detail::dd(static_cast<double>(n - 2 * m)) * detail::dd(static_cast<double>(n - 2 * m - 1)));
        const DD den = detail::dd(static_cast<double>(m + 1)) * detail::dd(static_cast<double>(m + 1 + shift));
        term *= ExtDD(num / den);
        sum += term;
    }
    if (sum.is_zero()) return LogReal::zero();
    return LogReal::from_log(2.0 * sum.log_abs());
}

PhotonDistribution squeezed_thermal_lsum(double r, double n_T, int n_max) {
    require_positive(r, "r");
    require_positive(n_T, "n_T");
    namespace mp = boost::multiprecision;
    const auto coarse = squeezed_thermal_lsum_at<mp::cpp_bin_float_100>(r, n_T, n_max);
    const auto fine = squeezed_thermal_lsum_at<mp::number<mp::cpp_bin_float<150>>>(r, n_T, n_max);
    std::vector<double> p;
    for (std::size_t n = 0; n < fine.size(); ++n) {
        if (!(std::abs(coarse[n] - fine[n]) <= 1e-12 * fine[n])) break;
        p.push_back(fine[n]);
    }
    if (p.empty()) throw NumericError("squeezed_thermal_lsum: no certified entries");
    return PhotonDistribution(std::move(p));
}

PhotonDistribution squeezed_thermal_hypergeometric(double r, double n_T, int n_max) {
    namespace mp = boost::multiprecision;
    using Wide = mp::number<mp::cpp_bin_float<250>>;
    require_positive(r, "r");
    require_positive(n_T, "n_T");
    const Wide nt(n_T);
    const Wide ratio = mp::sinh(2 * Wide(r)) * (2 * nt + 1) / (2 * nt * (nt + 1));
    const Wide v2 = 1 - ratio * ratio;
    std::vector<double> logs;
    logs.reserve(idx(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const Wide a = Wide(-n) / 2, b = Wide(1 - n) / 2, c = Wide(1 - 2 * n) / 2;
        Wide term = 1, total = 1, magnitude = 1;
        for (int k = 0; 2 * k < n; ++k) {
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * v2;
            total += term;
            magnitude += mp::abs(term);
        }
        if (total <= 0 || magnitude > total * Wide(1e235)) {
            if (n == 0) throw NumericError("squeezed_thermal_hypergeometric: no certified entries");
            break;
        }
        logs.push_back(log_double_factorial_odd(n) - log_factorial(n) + log_squeezed_thermal_prefactor(r, n_T, n) +
                       static_cast<double>(mp::log(total)));
    }
    return from_logs(logs);
}

PhotonDistribution squeezed_thermal_legendre(double r, double n_T, int n_max) {
    require_positive(r, "r");
    require_positive(n_T, "n_T");
    const DD v2d = v_squared_dd(r, n_T);
    const double v2 = v2d.hi + v2d.lo;
    if (v2 == 0.0) throw InvalidArgument("squeezed_thermal_legendre: v = 0, use the critical form");
    const cd v = v2 > 0.0 ? cd(std::sqrt(v2), 0.0) : cd(0.0, std::sqrt(-v2));
    const auto p = legendre_seq(1.0 / v, n_max);
    const LogComplex lv = LogComplex::from_complex(v);
    std::vector<double> logs(idx(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const LogComplex& pn = p[idx(n)];
        const cd phase = pn.phase * std::pow(lv.phase, n);
        if (std::abs(phase.imag()) > 1e-8 * std::abs(phase) || phase.real() <= 0.0)
            throw NumericError("squeezed_thermal_legendre: complex residue at n = " + std::to_string(n));
        logs[idx(n)] = log_squeezed_thermal_prefactor(r, n_T, n) + pn.logmag + n * lv.logmag;
    }
    return from_logs(logs);
}

PhotonDistribution squeezed_thermal_critical(double r, double n_T, int n_max) {
    require_positive(n_T, "n_T");
    std::vector<double> logs(idx(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        logs[idx(n)] = log_double_factorial_odd(n) - log_factorial(n) + log_squeezed_thermal_prefactor(r, n_T, n);
    return from_logs(logs);
}

PhotonDistribution mixed_coherent_thermal_kummer(double beta_sq, double n_T, int n_max) {
    require_positive(n_T, "n_T");
    const double x = -beta_sq / (n_T * (n_T + 1.0));
    const double l1 = std::log1p(n_T);
    const double lw = std::log(n_T) - l1;
    std::vector<double> logs(idx(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        // M(-n, 1, x) = sum_k (-n)_k / ((1)_k k!) x^k
        ExtDD term(1.0), sum(1.0);
        for (int k = 0; k < n; ++k) {
            const DD ratio = (detail::dd(static_cast<double>(k - n)) * detail::dd(x)) /
                             (detail::dd(static_cast<double>(k + 1)) * detail::dd(static_cast<double>(k + 1)));
            term *= ExtDD(ratio);
            sum += term;
        }
        if (sum.sign() <= 0) throw NumericError("mixed_coherent_thermal_kummer: non-positive M");
        logs[idx(n)] = -beta_sq / (n_T + 1.0) - l1 + n * lw + sum.log_abs();
    }
    return from_logs(logs);
}

PhotonDistribution mixed_quadruple_sum(double beta_sq, double n_T, double r, int n_max) {
    using Wide = boost::multiprecision::cpp_bin_float_50;
    require_positive(n_T, "n_T");
    require_positive(r, "r");
    if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
    const double a0 = std::sqrt(beta_sq) * std::exp(r);
    const double t = std::tanh(r), c = std::cosh(r);
    const double sigma_sq = std::sinh(2.0 * r);
    const double py = std::exp(2.0 * r) / n_T + 1.0 + t;
    const double px = std::exp(-2.0 * r) / n_T + 1.0 - t;
    const double x0 = std::exp(-2.0 * r) * a0 / (n_T * px);
    const Wide arg = Wide(x0) / boost::multiprecision::sqrt(Wide(sigma_sq));
    const std::size_t top = idx(n_max);

    std::vector<Wide> herm(top + 1);
    herm[0] = 1;
    if (n_max >= 1) herm[1] = 2 * arg;
    for (std::size_t l = 1; l < top; ++l) herm[l + 1] = 2 * arg * herm[l] - Wide(2 * l) * herm[l - 1];

    // (2/sigma)^j Gamma((j+1)/2) p^{-(j+1)/2} for even j, by its two-step ratio.
    auto moments = [&](double p) {
        std::vector<Wide> m(2 * top + 1);
        m[0] = boost::multiprecision::sqrt(Wide(kPi) / Wide(p));
        for (std::size_t j = 0; j + 2 <= 2 * top; j += 2)
            m[j + 2] = m[j] * Wide(4) / Wide(sigma_sq) * Wide(j + 1) / 2 / Wide(p);
        return m;
    };
    const auto mom_x = moments(px), mom_y = moments(py);

    std::vector<std::vector<Wide>> binom(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        binom[n].assign(n + 1, Wide(1));
        for (std::size_t k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
    }

    // inner[k][k'] = sum_{l, l'} C(k,l) C(k',l') H_l H_l' M_x(k + k' - l - l'), symmetric and
    // independent of n; filled one new index at a time.
    std::vector<std::vector<Wide>> inner(top + 1, std::vector<Wide>(top + 1));
    std::vector<std::vector<Wide>> inner_abs(top + 1, std::vector<Wide>(top + 1));
    auto fill = [&](std::size_t k, std::size_t kp) {
        Wide sum = 0, sum_abs = 0;
        for (std::size_t l = 0; l <= k; ++l) {
            const Wide ul = binom[k][l] * herm[l];
            for (std::size_t lp = (l + k + kp) % 2; lp <= kp; lp += 2) {
                const Wide term = ul * binom[kp][lp] * herm[lp] * mom_x[k + kp - l - lp];
                sum += term;
                sum_abs += boost::multiprecision::abs(term);
            }
        }
        inner[k][kp] = inner[kp][k] = sum;
        inner_abs[k][kp] = inner_abs[kp][k] = sum_abs;
    };

    // Stop once 50 digits can no longer certify the entry to ~1e-10.
    const Wide max_condition("1e38");
    std::vector<double> logs;
    for (std::size_t n = 0; n <= top; ++n) {
        for (std::size_t k = n % 2; k <= n; k += 2) fill(k, n);
        for (std::size_t k = (n + 1) % 2; k <= n; k += 2) fill(k, n);
        Wide total = 0, total_abs = 0;
        for (std::size_t k = 0; k <= n; ++k)
            for (std::size_t kp = k % 2; kp <= n; kp += 2) {
                const long half = (static_cast<long>(kp) - static_cast<long>(k)) / 2;
                const Wide w = binom[n][k] * binom[n][kp] * mom_y[2 * n - k - kp];
                total += (half % 2 == 0 ? w : -w) * inner[k][kp];
                total_abs += w * inner_abs[k][kp];
            }
        if (total <= 0 || total_abs > max_condition * total) {
            if (total < 0 && total_abs < max_condition * -total)
                throw NumericError("mixed_quadruple_sum: negative diagonal entry");
            break;
        }
        const double log_pre = static_cast<double>(n) * std::log(0.5 * t) - std::log(c) -
                               log_factorial(static_cast<int>(n)) - std::log(kPi * n_T) + px * x0 * x0 -
                               std::exp(-2.0 * r) * a0 * a0 / n_T;
        logs.push_back(log_pre + static_cast<double>(boost::multiprecision::log(total)));
    }
    if (logs.empty()) throw NumericError("mixed_quadruple_sum: no entry could be certified");
    return from_logs(logs);
}

namespace {

// <p| S(zeta) D(gamma) |0> for zeta = r e^{i theta}.
std::vector<LogComplex> squeezed_displaced_vacuum(cd gamma, double r, double theta, int p_max) {
    const cd e = std::polar(1.0, theta);
    const double t = std::tanh(r);
    const cd z = gamma / std::sqrt(e * std::sinh(2.0 * r));
    const auto h = hermite_seq(z, p_max);
    const cd lead = -0.5 * std::norm(gamma) + 0.5 * std::conj(e) * gamma * gamma * t;
    const LogComplex half = LogComplex::from_complex(0.5 * e * t);
    const cd root_phase = std::sqrt(half.phase);
    std::vector<LogComplex> out(idx(p_max) + 1);
    for (int p = 0; p <= p_max; ++p) {
        if (h[idx(p)].is_zero()) continue;
        out[idx(p)] = LogComplex{h[idx(p)].phase * std::pow(root_phase, p) * std::polar(1.0, lead.imag()),
                                 h[idx(p)].logmag + lead.real() + 0.5 * p * half.logmag - 0.5 * std::log(std::cosh(r)) -
                                     0.5 * log_factorial(p)};
    }
    return out;
}

}  // namespace

PhotonDistribution sdns_normal_ordered_sum(double beta_sq, double r, double theta, int m, int n_max) {
    require_positive(r, "r");
    if (m < 0) throw InvalidArgument("sdns_normal_ordered_sum: m < 0");
    const double beta = std::sqrt(beta_sq);
    const cd e = std::polar(1.0, theta);
    const double c = std::cosh(r), s = std::sinh(r);
    const cd gamma = beta * c + beta * e * s;
    const double u = c;
    const cd v = std::conj(e) * s;
    const auto b5 = squeezed_displaced_vacuum(gamma, r, theta, n_max + m);
    std::vector<double> p(idx(n_max) + 1);
    double worst = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        cd amp{0.0, 0.0};
        double abs_sum = 0.0;
        for (int i = 0; i <= m; ++i) {
            const int j = m - i;
            const cd outer = std::exp(log_binomial(m, i) - 0.5 * log_factorial(m)) * std::pow(-std::conj(gamma), i);
            for (int k = 0; 2 * k <= j; ++k) {
                for (int sidx = 0; sidx <= j - 2 * k; ++sidx) {
                    if (sidx > n) continue;
                    const int tt = j - 2 * k - sidx;
                    const int kp = n - sidx + tt;
                    const LogComplex& b = b5[idx(kp)];
                    if (b.is_zero()) continue;
                    const double log_mag = log_factorial(j) - log_factorial(k) - log_factorial(j - 2 * k) +
                                           log_binomial(j - 2 * k, sidx) + 0.5 * (log_factorial(n) + log_factorial(kp)) -
                                           log_factorial(n - sidx) + b.logmag;
                    const cd coef = std::pow(0.5 * u * v, k) * std::pow(u, sidx) * std::pow(v, tt);
                    const cd term = outer * coef * b.phase * std::exp(log_mag);
                    abs_sum += std::abs(term);
                    amp += term;
                }
            }
        }
        p[idx(n)] = std::norm(amp);
        if (std::abs(amp) > 0.0) worst = std::max(worst, abs_sum / std::abs(amp));
    }
    return PhotonDistribution(std::move(p), worst);
}

PhotonDistribution sdns_direct_sum(double beta_sq, double r, double theta, int m, int n_max) {
    require_positive(r, "r");
    require_positive(beta_sq, "beta_sq");
    const double beta = std::sqrt(beta_sq);
    const cd e = std::polar(1.0, theta);
    const double c = std::cosh(r), s = std::sinh(r), t = std::tanh(r);
    const cd gamma = c * beta + s * e * beta;
    const double g2 = std::norm(gamma);
    std::vector<double> p(idx(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const int par = n % 2;
        const double log_n1 = log_factorial(m) + log_factorial(n) - std::log(c) + m * std::log(g2) - g2;
        cd total{0.0, 0.0};
        for (int j = 0; j < 2000; ++j) {
            const int jj = 2 * j + par;
            double ks = 0.0;
            for (int k = 0; k <= std::min(m, jj); ++k)
                ks += (k % 2 == 0 ? 1.0 : -1.0) *
                      std::exp(-k * std::log(g2) + log_factorial(jj) - log_factorial(k) - log_factorial(m - k) -
                               log_factorial(jj - k));
            double ps = 0.0;
            for (int q = 0; q <= std::min((n - par) / 2, j); ++q)
                ps += (q % 2 == 0 ? 1.0 : -1.0) *
                      std::exp(q * std::log(4.0 / (s * s)) - log_factorial(2 * q + par) - log_factorial(j - q) -
                               log_factorial((n - par) / 2 - q));
            const double log_mag = j * std::log(g2 * t / 2.0);
            const cd phase = std::pow(gamma / std::abs(gamma), 2 * j) * std::polar(1.0, -j * theta) *
                             (j % 2 == 0 ? 1.0 : -1.0);
            const cd term = phase * std::exp(log_mag) * ks * ps;
            total += term;
            if (j > 10 && std::abs(term) < 1e-17 * std::abs(total)) break;
        }
        p[idx(n)] = std::exp(log_n1) * g2 / (c * c) / (t / 2.0) * std::norm(total);
    }
    return PhotonDistribution(std::move(p));
}

}  // namespace jcm::alt
