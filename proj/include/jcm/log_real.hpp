#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace jcm {

// Real number stored as sign and natural log of magnitude.
struct LogReal {
    int sign = 0;
    double logmag = -std::numeric_limits<double>::infinity();

    static LogReal zero() { return {}; }
    static LogReal one() { return {1, 0.0}; }
    static LogReal from_log(double logmag, int sign = 1) {
        if (sign == 0) return {};
        return {sign > 0 ? 1 : -1, logmag};
    }
    static LogReal from_real(double x) {
        if (x == 0.0) return {};
        return {x > 0 ? 1 : -1, std::log(std::abs(x))};
    }

    bool is_zero() const { return sign == 0; }
    double to_real() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }

    LogReal operator-() const { return {-sign, logmag}; }

    friend LogReal operator*(LogReal a, LogReal b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.sign * b.sign, a.logmag + b.logmag};
    }
    friend LogReal operator/(LogReal a, LogReal b) {
        if (a.sign == 0) return {};
        return {a.sign * b.sign, a.logmag - b.logmag};
    }
    friend LogReal operator+(LogReal a, LogReal b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (a.logmag < b.logmag) std::swap(a, b);
        const double ratio = std::exp(b.logmag - a.logmag);
        if (a.sign == b.sign) return {a.sign, a.logmag + std::log1p(ratio)};
        if (ratio == 1.0) return {};
        return {a.sign, a.logmag + std::log1p(-ratio)};
    }
    friend LogReal operator-(LogReal a, LogReal b) { return a + (-b); }
};

// Complex number stored as unit phase and natural log of modulus.
struct LogComplex {
    std::complex<double> phase{0.0, 0.0};
    double logmag = -std::numeric_limits<double>::infinity();

    static LogComplex from_complex(std::complex<double> z) {
        const double m = std::abs(z);
        if (m == 0.0) return {};
        return {z / m, std::log(m)};
    }
    static LogComplex from_log(double logmag, std::complex<double> phase = {1.0, 0.0}) {
        return {phase, logmag};
    }

    bool is_zero() const { return phase == std::complex<double>(0.0, 0.0); }
    std::complex<double> to_complex() const {
        return is_zero() ? std::complex<double>{} : phase * std::exp(logmag);
    }

    friend LogComplex operator*(LogComplex a, LogComplex b) {
        if (a.is_zero() || b.is_zero()) return {};
        return {a.phase * b.phase, a.logmag + b.logmag};
    }
};

using ComplexVal = std::complex<double>;

}  // namespace jcm
