#include <doctest.h>

#include <cmath>
#include <string>

#include "jcm/dynamics.hpp"
#include "jcm/errors.hpp"
#include "jcm/oracle.hpp"
#include "jcm/specfun.hpp"
#include "jcm/states.hpp"
#include "support/compare.hpp"

using namespace jcm;
using jcm::oracle::Matrix;

namespace {

double max_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix power(const Matrix& m, int k) {
    Matrix out = Matrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

double log_factorial_exact(int n) { return std::lgamma(n + 1.0); }

}  // namespace

TEST_CASE("ladder operator") {
    const auto a2 = oracle::annihilation(2);
    CHECK(a2.entries()(0, 1) == ComplexVal(1.0, 0.0));
    CHECK(std::abs(a2.entries()(1, 0)) == 0.0);
    CHECK(std::abs(a2.entries()(0, 0)) == 0.0);

    const auto a = oracle::annihilation(16);
    const Matrix number = (a.adjoint() * a).entries();
    for (int n = 0; n < 16; ++n) CHECK(std::abs(number(n, n) - ComplexVal(n, 0.0)) < 1e-14);
    CHECK(max_entry(number - Matrix(number.diagonal().asDiagonal())) < 1e-14);
    CHECK_THROWS_AS(oracle::annihilation(1), InvalidArgument);
}

TEST_CASE("normal-ordered matrix elements") {
    const int dim = 16;
    const Matrix a = oracle::annihilation(dim).entries();
    const Matrix ad = a.adjoint();
    for (int s = 0; s <= 3; ++s)
        for (int t = 0; t <= 3; ++t) {
            const Matrix m = power(ad, s) * power(a, t);
            for (int n = 0; n < dim; ++n)
                for (int k = 0; k < dim; ++k) {
                    double expected = 0.0;
                    if (n >= s && k == n - s + t)
                        expected = std::exp(0.5 * (log_factorial_exact(n) + log_factorial_exact(k)) -
                                            log_factorial_exact(n - s));
                    CHECK(std::abs(m(n, k) - expected) < 1e-10 * std::max(1.0, expected));
                }
        }
}

TEST_CASE("matrix exponential") {
    const int dim = 12;
    const oracle::OperatorMatrix zero(Matrix::Zero(dim, dim));
    CHECK(max_entry(oracle::matrix_exp(zero).entries() - Matrix::Identity(dim, dim)) < 1e-15);

    Matrix d = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = ComplexVal(-3.0 + 0.5 * i, 0.25 * i);
    const Matrix e = oracle::matrix_exp(oracle::OperatorMatrix(d)).entries();
    for (int i = 0; i < dim; ++i) CHECK(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-12 * std::abs(std::exp(d(i, i))));
    CHECK(max_entry(e - Matrix(e.diagonal().asDiagonal())) < 1e-14);

    const auto a = oracle::annihilation(dim).entries();
    const Matrix gen = ComplexVal(0.7, 0.2) * a.adjoint() - ComplexVal(0.7, -0.2) * a + Matrix(d);
    const Matrix prod = (oracle::matrix_exp(oracle::OperatorMatrix(gen)) *
                         oracle::matrix_exp(oracle::OperatorMatrix(Matrix(-gen))))
                            .entries();
    CHECK(max_entry(prod - Matrix::Identity(dim, dim)) < 1e-12);
}

TEST_CASE("displacement and squeeze are unitary") {
    for (int dim : {16, 64, 128}) {
        CHECK(oracle::unitarity_error(oracle::displacement(ComplexVal(1.5, -0.5), dim)) < 1e-10);
        CHECK(oracle::unitarity_error(oracle::squeeze(0.9, 0.4, dim)) < 1e-10);
        CHECK(oracle::unitarity_error(oracle::displacement(ComplexVal(1.0, 0.3), dim) *
                                      oracle::squeeze(0.5, -1.2, dim)) < 1e-10);
    }
    CHECK(max_entry(oracle::displacement(0.0, 20).entries() - Matrix::Identity(20, 20)) < 1e-15);
    CHECK(max_entry(oracle::squeeze(0.0, 0.3, 20).entries() - Matrix::Identity(20, 20)) < 1e-15);

    const ComplexVal beta(1.2, 0.4);
    const Matrix forward = oracle::displacement(beta, 64).adjoint().entries();
    const Matrix backward = oracle::displacement(-beta, 64).entries();
    CHECK(max_entry(forward - backward) < 1e-10);
}

TEST_CASE("displaced vacuum is Poissonian") {
    const int dim = 64;
    const Matrix d = oracle::displacement(2.0, dim).entries();
    const auto poisson = pmf_coherent(4.0, dim - 1);
    for (int n = 0; n < dim - 10; ++n) CHECK(std::abs(std::norm(d(n, 0)) - poisson[n]) < 1e-10);
}

TEST_CASE("squeezed vacuum statistics") {
    const int dim = 64;
    const Matrix s = oracle::squeeze(0.8, 0.0, dim).entries();
    const auto closed = pmf_squeezed_vacuum(0.8, dim - 1);
    for (int n = 0; n < dim - 16; ++n) CHECK(std::abs(std::norm(s(n, 0)) - closed[n]) < 1e-10);
}

TEST_CASE("squeezed displaced vacuum amplitudes") {
    const int dim = 96;
    const double r = 0.5, theta = 0.7;
    const ComplexVal gamma(0.8, 0.3);
    const Matrix u = (oracle::squeeze(r, theta, dim) * oracle::displacement(gamma, dim)).entries();
    const ComplexVal phase = std::polar(1.0, theta);
    const ComplexVal scale = std::sqrt(phase * std::sinh(2.0 * r));
    const auto herm = hermite_seq(gamma / scale, 20);
    const ComplexVal front = std::exp(-0.5 * std::norm(gamma) + 0.5 * std::conj(phase) * gamma * gamma * std::tanh(r)) /
                             std::sqrt(std::cosh(r));
    for (int p = 0; p <= 20; ++p) {
        const ComplexVal power_term = std::pow(0.5 * phase * std::tanh(r), 0.5 * p);
        const ComplexVal expected = front * power_term * herm[p].to_complex() / std::exp(0.5 * std::lgamma(p + 1.0));
        CHECK(std::abs(u(p, 0) - expected) < 1e-10);
    }
}

TEST_CASE("thermal density matrix") {
    const auto vac = oracle::thermal_dm(0.0, 8);
    CHECK(std::abs(vac.entries()(0, 0) - 1.0) < 1e-15);
    CHECK(vac.trace() == doctest::Approx(1.0).epsilon(1e-15));
    for (double n_T : {0.3, 1.0, 2.5}) {
        const auto dm = oracle::thermal_dm(n_T, 128);
        const auto diag = dm.diagonal();
        double mean = 0.0;
        for (std::size_t n = 0; n < diag.size(); ++n) mean += n * diag[n];
        CHECK(std::abs(dm.trace() - 1.0) < 1e-14);
        CHECK(std::abs(mean - n_T) < 1e-10);
    }
    CHECK_THROWS_AS(oracle::thermal_dm(10.0, 32), InvalidArgument);
}

TEST_CASE("density matrix invariants") {
    const std::vector<StateSpec> specs{
        StateSpec::squeezed_coherent(2.0, 0.5, 1.0),
        StateSpec::displaced_squeezed_thermal(1.5, 0.5, 0.4, 2.0, Variant::SDTS),
        StateSpec::squeezed_displaced_number(1.0, 0.4, 0.5, 1),
        StateSpec::mixed_squeezed_coherent_thermal(1.0, 0.5, 0.3),
    };
    for (const auto& spec : specs) {
        const auto dm = oracle::build_state(spec, 64);
        CHECK(dm.hermiticity_error() < 1e-12);
        CHECK(std::abs(dm.trace() - 1.0) < 1e-10);
        CHECK(dm.min_eigenvalue() > -1e-10);
        for (int n = 0; n < dm.dim(); ++n) CHECK(std::abs(dm.entries()(n, n).imag()) < 1e-12);
    }
}

TEST_CASE("truncation errors are reported") {
    CHECK_THROWS_AS(oracle::build_state(StateSpec::coherent(60.0), 32), NumericError);
    CHECK_THROWS_AS(oracle::build_state(StateSpec::fock(40), 8), InvalidArgument);
}

TEST_CASE("operator construction pins every closed form") {
    struct Case {
        StateSpec spec;
        int dim;
    };
    const std::vector<Case> cases{
        {StateSpec::coherent(4.0), 64},
        {StateSpec::thermal(1.0), 64},
        {StateSpec::fock(3), 64},
        {StateSpec::mixed_coherent_thermal(2.0, 0.5), 64},
        {StateSpec::squeezed_vacuum(0.8), 64},
        {StateSpec::squeezed_fock(0.5, 2), 64},
        {StateSpec::squeezed_fock(0.9, 2), 128},
        {StateSpec::squeezed_thermal(0.5, 0.5), 64},
        {StateSpec::squeezed_thermal(1.0, 0.2), 128},
        {StateSpec::squeezed_coherent(2.0, 0.5, 1.0), 64},
        {StateSpec::squeezed_coherent(3.0, 0.6, kPi / 2), 64},
        {StateSpec::mixed_squeezed_coherent_thermal(2.0, 0.5, 0.4), 64},
        {StateSpec::displaced_squeezed_thermal(2.0, 0.5, 0.4, 1.0, Variant::DSTS), 64},
        {StateSpec::displaced_squeezed_thermal(2.0, 0.5, 0.4, 1.0, Variant::SDTS), 96},
        {StateSpec::displaced_number(2.0, 2), 64},
        {StateSpec::squeezed_displaced_number(2.0, 0.5, 1.0, 1), 64},
        {StateSpec::squeezed_displaced_number(4.0, 0.7, kPi, 2), 128},
    };
    for (const auto& c : cases) {
        CAPTURE(std::string(family_name(c.spec.family())));
        CAPTURE(c.dim);
        const auto from_operators = oracle::to_distribution(oracle::build_state(c.spec, c.dim));
        const auto closed = make_distribution(c.spec, c.dim - 1);
        CHECK(testing::max_abs_diff(from_operators, closed) < 1e-8);
    }
}

TEST_CASE("correlation sum from operator diagonals") {
    std::vector<double> z(2001);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = 0.1 * static_cast<double>(k);

    const auto vacuum = oracle::build_state(StateSpec::fock(0), 8);
    const auto ts = oracle::s1_oracle(vacuum, 0.0, z);
    for (std::size_t k = 0; k < z.size(); ++k) CHECK(std::abs(ts.s1[k] - std::sin(z[k]) * std::sin(z[k])) < 1e-14);

    const auto dm = oracle::build_state(StateSpec::coherent(10.0), 64);
    const auto pmf = oracle::to_distribution(dm);
    for (double delta : {0.0, 10.0}) {
        const auto from_oracle = oracle::s1_oracle(dm, delta, z);
        const auto from_dynamics = s1_on_grid(pmf, delta, z);
        for (std::size_t k = 0; k < z.size(); ++k) CHECK(std::abs(from_oracle.s1[k] - from_dynamics.s1[k]) < 1e-12);
    }

    std::vector<double> long_z(200001);
    for (std::size_t k = 0; k < long_z.size(); ++k) long_z[k] = 0.01 * static_cast<double>(k);
    const auto detuned = oracle::s1_oracle(dm, 10.0, long_z);
    CHECK(std::abs(detuned.time_average - 0.25) < 0.02);
}
