#pragma once

#include <vector>

#include "jcm/detail/dd_real.hpp"
#include "jcm/log_real.hpp"

namespace jcm {

double log_factorial(int n);

// ln((2n-1)!!) with (-1)!! = 1.
double log_double_factorial_odd(int n);

double log_binomial(int n, int k);

// Physicists' Hermite polynomials H_0(z)..H_{n_max}(z).
std::vector<LogComplex> hermite_seq(ComplexVal z, int n_max);

struct GenHermiteCoeffs {
    double c11 = 0.0;
    double c12 = 0.0;
    double c22 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

// Diagonal H_{n,n} of the two-index Hermite recursion.
LogReal gen_hermite_diag(const GenHermiteCoeffs& c, int n);

// H_{n,n} * lambda^n / n! for n = 0..n_max.  The table is kept normalized as
// H_{n,m} lambda^{(n+m)/2} / sqrt(n! m!), which stays O(1) when lambda matches
// the mixture weight.
std::vector<LogReal> gen_hermite_diag_weighted(const GenHermiteCoeffs& c, double lambda, int n_max);

// Same recursion parameterized by its linear coefficients
// x = c11 r1 + c12 r2 and y = c22 r2 + c12 r1.
std::vector<LogReal> gen_hermite_diag_weighted_linear(double c11, double c12, double c22, double x, double y,
                                                      double lambda, int n_max);

// Generalized Laguerre L_n^alpha(x) for integer alpha; requires n + alpha >= 0
// when alpha < 0.
LogReal assoc_laguerre(int n, int alpha, double x);

// L_0^alpha(x)..L_{n_max}^alpha(x) for alpha >= 0.
std::vector<LogReal> laguerre_seq(int n_max, int alpha, double x);

// Terminating 2F1(a, b; c; x).
LogReal gauss2f1_terminating(double a, double b, double c, double x);
LogReal gauss2f1_terminating(double a, double b, double c, detail::DD x);

// Legendre P_n(z) by the Bonnet recursion.
LogComplex legendre_complex(int n, ComplexVal z);
std::vector<LogComplex> legendre_seq(ComplexVal z, int n_max);

// Q_n = v^n P_n(1/v) for n = 0..n_max, as a function of v^2 (real).
std::vector<LogReal> legendre_scaled_seq(double v_sq, int n_max);

}  // namespace jcm
