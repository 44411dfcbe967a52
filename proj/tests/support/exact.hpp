#pragma once

// Exact and extended-precision reference arithmetic for the special-function
// tests.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <complex>

namespace jcm::testing {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Float50 = boost::multiprecision::cpp_bin_float_50;

struct ComplexRational {
    Rational re{0};
    Rational im{0};

    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator*(const Rational& s, const ComplexRational& a) { return {s * a.re, s * a.im}; }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    return Rational(factorial(n), factorial(k) * factorial(n - k));
}

inline Rational rational_pow(const Rational& x, int p) {
    Rational out = 1;
    for (int k = 0; k < p; ++k) out *= x;
    return out;
}

inline ComplexRational complex_pow(const ComplexRational& z, int p) {
    ComplexRational out{1, 0};
    for (int k = 0; k < p; ++k) out = out * z;
    return out;
}

// Natural log of |x| for a nonzero rational, in 50-digit precision.
inline double log_abs(const Rational& x) {
    Float50 num(boost::multiprecision::numerator(x));
    Float50 den(boost::multiprecision::denominator(x));
    return static_cast<double>(boost::multiprecision::log(boost::multiprecision::abs(num / den)));
}

inline double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    if (want == std::complex<double>{}) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

}  // namespace jcm::testing
