#include "jcm/specfun.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "jcm/errors.hpp"

namespace jcm {

using detail::DD;
using detail::ExtDD;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

const std::array<double, 21>& small_log_factorials() {
    static const std::array<double, 21> table = [] {
        std::array<double, 21> t{};
        std::uint64_t f = 1;
        for (int k = 0; k <= 20; ++k) {
            if (k > 0) f *= static_cast<std::uint64_t>(k);
            t[k] = std::log(static_cast<double>(f));
        }
        return t;
    }();
    return table;
}

// Shared power-of-two rescaling for three-term recursions: keeps mantissas
// near unity and accumulates the exponent separately.
template <typename T>
int rescale_exponent(const T& value) {
    const double m = std::abs(value);
    if (m == 0.0 || !std::isfinite(m)) return 0;
    int e = 0;
    std::frexp(m, &e);
    return (e > 400 || e < -400) ? e : 0;
}

LogComplex to_log_complex(std::complex<double> mant, std::int64_t scale) {
    LogComplex v = LogComplex::from_complex(mant);
    if (!v.is_zero()) v.logmag += static_cast<double>(scale) * kLn2;
    return v;
}

LogReal to_log_real(double mant, std::int64_t scale) {
    LogReal v = LogReal::from_real(mant);
    if (!v.is_zero()) v.logmag += static_cast<double>(scale) * kLn2;
    return v;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite intermediate in ") + what);
}

bool is_nonpositive_integer(double v) { return v <= 0.0 && std::floor(v) == v; }

}  // namespace

double log_factorial(int n) {
    if (n < 0) throw InvalidArgument("log_factorial: negative argument");
    if (n <= 20) return small_log_factorials()[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_double_factorial_odd(int n) {
    if (n < 0) throw InvalidArgument("log_double_factorial_odd: negative argument");
    if (n <= 20) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += std::log(2.0 * k - 1.0);
        return s;
    }
    return std::lgamma(2.0 * n + 1.0) - n * kLn2 - std::lgamma(n + 1.0);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw InvalidArgument("log_binomial: k outside [0, n]");
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

std::vector<LogComplex> hermite_seq(ComplexVal z, int n_max) {
    if (n_max < 0) throw InvalidArgument("hermite_seq: n_max < 0");
    std::vector<LogComplex> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    std::complex<double> prev{0.0, 0.0};
    std::complex<double> cur{1.0, 0.0};
    std::int64_t scale = 0;
    out.push_back(LogComplex::from_complex(cur));
    for (int n = 0; n < n_max; ++n) {
        std::complex<double> next = 2.0 * z * cur - 2.0 * static_cast<double>(n) * prev;
        prev = cur;
        cur = next;
        const int e = std::max(rescale_exponent(cur), rescale_exponent(prev));
        if (e != 0) {
            cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
            prev = {std::ldexp(prev.real(), -e), std::ldexp(prev.imag(), -e)};
            scale += e;
        }
        require_finite(std::abs(cur), "hermite_seq");
        out.push_back(to_log_complex(cur, scale));
    }
    return out;
}

std::vector<LogReal> gen_hermite_diag_weighted(const GenHermiteCoeffs& c, double lambda, int n_max) {
    for (double v : {c.r1, c.r2}) require_finite(v, "gen_hermite_diag coefficients");
    return gen_hermite_diag_weighted_linear(c.c11, c.c12, c.c22, c.c11 * c.r1 + c.c12 * c.r2,
                                            c.c22 * c.r2 + c.c12 * c.r1, lambda, n_max);
}

std::vector<LogReal> gen_hermite_diag_weighted_linear(double c11, double c12, double c22, double x, double y,
                                                      double lambda, int n_max) {
    if (n_max < 0) throw InvalidArgument("gen_hermite_diag: n < 0");
    if (!(lambda > 0.0)) throw InvalidArgument("gen_hermite_diag: lambda must be positive");
    for (double v : {c11, c12, c22, x, y}) require_finite(v, "gen_hermite_diag coefficients");
    const GenHermiteCoeffs c{c11, c12, c22, 0.0, 0.0};

    const std::size_t width = static_cast<std::size_t>(n_max) + 1;
    const double sl = std::sqrt(lambda);
    std::vector<double> sqrt_int(width + 1);
    for (std::size_t k = 0; k <= width; ++k) sqrt_int[k] = std::sqrt(static_cast<double>(k));

    // Each row carries its own binary scale: value = row[m] * 2^scale.
    std::vector<double> prev(width, 0.0), row(width, 0.0), next(width, 0.0);
    std::int64_t prev_scale = 0, row_scale = 0;

    auto normalize = [](std::vector<double>& v, std::int64_t& scale) {
        double big = 0.0;
        for (double e : v) big = std::max(big, std::abs(e));
        require_finite(big, "gen_hermite_diag");
        if (big == 0.0) return;
        int e = 0;
        std::frexp(big, &e);
        if (e == 0) return;
        for (double& el : v) el = std::ldexp(el, -e);
        scale += e;
    };

    row[0] = 1.0;
    for (std::size_t m = 0; m + 1 < width; ++m) {
        const double back = m > 0 ? sqrt_int[m] * c.c22 * lambda * row[m - 1] : 0.0;
        row[m + 1] = (y * sl * row[m] - back) / sqrt_int[m + 1];
        if (std::abs(row[m + 1]) > 1e280) throw NumericError("gen_hermite_diag: first row overflow");
    }
    normalize(row, row_scale);

    std::vector<LogReal> diag;
    diag.reserve(width);
    diag.push_back(to_log_real(row[0], row_scale));
    for (int n = 0; n < n_max; ++n) {
        const double prev_factor = std::ldexp(1.0, static_cast<int>(std::max<std::int64_t>(
                                                        -1100, prev_scale - row_scale)));
        const double sn = sqrt_int[n];
        const double inv = 1.0 / sqrt_int[n + 1];
        for (std::size_t m = 0; m < width; ++m) {
            double v = x * sl * row[m];
            if (n > 0) v -= sn * c.c11 * lambda * prev[m] * prev_factor;
            if (m > 0) v -= sqrt_int[m] * c.c12 * lambda * row[m - 1];
            next[m] = v * inv;
        }
        std::int64_t next_scale = row_scale;
        normalize(next, next_scale);
        std::swap(prev, row);
        std::swap(row, next);
        prev_scale = row_scale;
        row_scale = next_scale;
        diag.push_back(to_log_real(row[static_cast<std::size_t>(n) + 1], row_scale));
    }
    return diag;
}

LogReal gen_hermite_diag(const GenHermiteCoeffs& c, int n) {
    const auto w = gen_hermite_diag_weighted(c, 1.0, n);
    return w.back() * LogReal::from_log(log_factorial(n));
}

LogReal assoc_laguerre(int n, int alpha, double x) {
    if (n < 0) throw InvalidArgument("assoc_laguerre: n < 0");
    if (n + alpha < 0) throw InvalidArgument("assoc_laguerre: n + alpha < 0");
    // Finite sum over k of (-1)^k (n+alpha)! / ((n-k)! (alpha+k)! k!) x^k,
    // dropping terms with a negative factorial argument.
    const int k0 = std::max(0, -alpha);
    if (k0 > n) return LogReal::zero();
    const double log_first = log_factorial(n + alpha) - log_factorial(n - k0) - log_factorial(alpha + k0) -
                             log_factorial(k0);
    if (x == 0.0) {
        return k0 == 0 ? LogReal::from_log(log_first) : LogReal::zero();
    }
    // Sign of (-1)^k0 x^k0.
    const int sgn0 = (k0 % 2 == 0) ? 1 : (x > 0.0 ? -1 : 1);
    ExtDD term = ExtDD::from_log(log_first + k0 * std::log(std::abs(x)), sgn0);
    ExtDD sum = term;
    const DD xd = detail::dd(x);
    for (int k = k0; k < n; ++k) {
        const DD ratio = -(xd * detail::dd(static_cast<double>(n - k))) /
                         (detail::dd(static_cast<double>(alpha + k + 1)) * detail::dd(static_cast<double>(k + 1)));
        term *= ExtDD(ratio);
        sum += term;
    }
    return sum.to_log_real();
}

std::vector<LogReal> laguerre_seq(int n_max, int alpha, double x) {
    if (n_max < 0) throw InvalidArgument("laguerre_seq: n_max < 0");
    if (alpha < 0) throw InvalidArgument("laguerre_seq: alpha < 0");
    std::vector<LogReal> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    double prev = 0.0, cur = 1.0;
    std::int64_t scale = 0;
    out.push_back(LogReal::one());
    for (int k = 0; k < n_max; ++k) {
        const double next = k == 0 ? 1.0 + alpha - x
                                   : ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        const int e = std::max(rescale_exponent(cur), rescale_exponent(prev));
        if (e != 0) {
            cur = std::ldexp(cur, -e);
            prev = std::ldexp(prev, -e);
            scale += e;
        }
        require_finite(cur, "laguerre_seq");
        out.push_back(to_log_real(cur, scale));
    }
    return out;
}

LogReal gauss2f1_terminating(double a, double b, double c, DD x) {
    int terms = -1;
    if (is_nonpositive_integer(a)) terms = static_cast<int>(-a);
    if (is_nonpositive_integer(b)) {
        const int tb = static_cast<int>(-b);
        terms = terms < 0 ? tb : std::min(terms, tb);
    }
    if (terms < 0) throw InvalidArgument("gauss2f1_terminating: series does not terminate");
    ExtDD term(1.0);
    ExtDD sum(1.0);
    for (int k = 0; k < terms; ++k) {
        if (is_nonpositive_integer(c + k)) throw InvalidArgument("gauss2f1_terminating: c hits a pole");
        const DD num = detail::dd(a + k) * detail::dd(b + k) * x;
        const DD den = detail::dd(c + k) * detail::dd(static_cast<double>(k + 1));
        term *= ExtDD(num / den);
        sum += term;
    }
    return sum.to_log_real();
}

LogReal gauss2f1_terminating(double a, double b, double c, double x) {
    return gauss2f1_terminating(a, b, c, detail::dd(x));
}

std::vector<LogComplex> legendre_seq(ComplexVal z, int n_max) {
    if (n_max < 0) throw InvalidArgument("legendre_seq: n_max < 0");
    std::vector<LogComplex> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    std::complex<double> prev{1.0, 0.0};
    std::complex<double> cur = z;
    std::int64_t scale = 0;
    out.push_back(LogComplex::from_complex(prev));
    if (n_max >= 1) out.push_back(LogComplex::from_complex(cur));
    for (int n = 1; n < n_max; ++n) {
        const std::complex<double> next =
            ((2.0 * n + 1.0) * z * cur - static_cast<double>(n) * prev) / (n + 1.0);
        prev = cur;
        cur = next;
        const int e = std::max(rescale_exponent(cur), rescale_exponent(prev));
        if (e != 0) {
            cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
            prev = {std::ldexp(prev.real(), -e), std::ldexp(prev.imag(), -e)};
            scale += e;
        }
        require_finite(std::abs(cur), "legendre_seq");
        out.push_back(to_log_complex(cur, scale));
    }
    return out;
}

LogComplex legendre_complex(int n, ComplexVal z) { return legendre_seq(z, n).back(); }

std::vector<LogReal> legendre_scaled_seq(double v_sq, int n_max) {
    if (n_max < 0) throw InvalidArgument("legendre_scaled_seq: n_max < 0");
    std::vector<LogReal> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    double prev = 1.0, cur = 1.0;
    std::int64_t scale = 0;
    out.push_back(LogReal::one());
    if (n_max >= 1) out.push_back(LogReal::one());
    for (int n = 1; n < n_max; ++n) {
        const double next = ((2.0 * n + 1.0) * cur - n * v_sq * prev) / (n + 1.0);
        prev = cur;
        cur = next;
        const int e = std::max(rescale_exponent(cur), rescale_exponent(prev));
        if (e != 0) {
            cur = std::ldexp(cur, -e);
            prev = std::ldexp(prev, -e);
            scale += e;
        }
        require_finite(cur, "legendre_scaled_seq");
        out.push_back(to_log_real(cur, scale));
    }
    return out;
}

}  // namespace jcm
