#pragma once

// Truncated Fock-space operator algebra used as ground truth for the closed
// forms in states.hpp and the sums in dynamics.hpp.

#include <Eigen/Dense>
#include <vector>

#include "jcm/dynamics.hpp"
#include "jcm/log_real.hpp"
#include "jcm/state_spec.hpp"
#include "jcm/states.hpp"

namespace jcm::oracle {

using Matrix = Eigen::MatrixXcd;

class OperatorMatrix {
public:
    explicit OperatorMatrix(Matrix entries);
    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
        return OperatorMatrix(a.entries_ * b.entries_);
    }

private:
    Matrix entries_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);
    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    std::vector<double> diagonal() const;
    double trace() const;
    // max |rho - rho^dagger|
    double hermiticity_error() const;
    double min_eigenvalue() const;

private:
    Matrix entries_;
};

OperatorMatrix annihilation(int dim);
OperatorMatrix identity(int dim);
// Scaling and squaring over a Taylor series; throws NumericError if the series
// has not reached tol after its maximum order.
OperatorMatrix matrix_exp(const OperatorMatrix& m, double tol = 1e-16);
// exp(beta a^dagger - conj(beta) a)
OperatorMatrix displacement(ComplexVal beta, int dim);
// exp(conj(zeta) a^2 / 2 - zeta a^dagger^2 / 2), zeta = r e^{i theta}
OperatorMatrix squeeze(double r, double theta, int dim);
// max |U^dagger U - I|
double unitarity_error(const OperatorMatrix& u);

// Throws InvalidArgument when the geometric tail beyond dim exceeds 1e-12.
DensityMatrix thermal_dm(double n_T, int dim);

// Builds the state on an enlarged working space and truncates to dim; throws
// NumericError when the truncated trace misses 1 by more than 1e-10.
DensityMatrix build_state(const StateSpec& spec, int dim);

PhotonDistribution to_distribution(const DensityMatrix& dm);

// Non-resonant sum evaluated term by term with std::sin from oracle diagonals.
TimeSeries s1_oracle(const DensityMatrix& dm, double delta, const std::vector<double>& z);

}  // namespace jcm::oracle
