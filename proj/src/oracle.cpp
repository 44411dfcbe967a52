#include "jcm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "jcm/errors.hpp"

namespace jcm::oracle {

namespace {

constexpr int kWorkFactor = 4;
constexpr double kTruncationTol = 1e-10;

using Vector = Eigen::VectorXcd;

void require_dim(int dim) {
    if (dim < 2) throw InvalidArgument("oracle dimension must be >= 2");
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> geometric_weights(double n_T, int dim) {
    std::vector<double> w(dim, 0.0);
    if (n_T <= 0.0) {
        w[0] = 1.0;
        return w;
    }
    const double ratio = n_T / (n_T + 1.0);
    double p = 1.0 / (n_T + 1.0);
    for (int n = 0; n < dim; ++n, p *= ratio) w[n] = p;
    return w;
}

Matrix diagonal_matrix(const std::vector<double>& w) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
    for (std::size_t n = 0; n < w.size(); ++n) m(n, n) = w[n];
    return m;
}

Vector fock_vector(int level, int dim) {
    Vector v = Vector::Zero(dim);
    v(level) = 1.0;
    return v;
}

Vector coherent_vector(ComplexVal alpha, int dim) {
    Vector v(dim);
    const double log_norm = -0.5 * std::norm(alpha);
    ComplexVal term = std::exp(log_norm);
    v(0) = term;
    for (int k = 1; k < dim; ++k) {
        term *= alpha / std::sqrt(static_cast<double>(k));
        v(k) = term;
    }
    return v;
}

DensityMatrix truncate(const Matrix& work, int dim) {
    Matrix top = work.topLeftCorner(dim, dim);
    const double lost = 1.0 - top.trace().real();
    if (std::abs(lost) > kTruncationTol) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "oracle truncation loses %.3g of the trace at dim %d", lost, dim);
        throw NumericError(msg);
    }
    return DensityMatrix(0.5 * (top + top.adjoint()));
}

Matrix pure(const Vector& v) { return v * v.adjoint(); }

Matrix conjugate(const OperatorMatrix& u, const Matrix& rho) { return u.entries() * rho * u.entries().adjoint(); }

// Gauss-Hermite nodes and weights for weight e^{-x^2} by Golub-Welsch.
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    nodes.resize(order);
    weights.resize(order);
    for (int k = 0; k < order; ++k) {
        nodes[k] = eig.eigenvalues()(k);
        const double v0 = eig.eigenvectors()(0, k);
        weights[k] = std::sqrt(kPi) * v0 * v0;
    }
}

// Thermal P-function mixture of S(r, 0) D(A)|0> with A centered on beta e^r.
Matrix vourdas_top(double beta_sq, double n_T, double r, int dim, int work, int order) {
    const OperatorMatrix s = squeeze(r, 0.0, work);
    const Matrix s_top = s.entries().topRows(dim);
    const double center = std::sqrt(beta_sq) * std::exp(r);
    const double sx = std::sqrt(n_T * std::exp(2.0 * r));
    const double sy = std::sqrt(n_T * std::exp(-2.0 * r));
    std::vector<double> x, w;
    gauss_hermite(order, x, w);
    Matrix acc = Matrix::Zero(dim, dim);
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            const double weight = w[i] * w[j] / kPi;
            if (weight < 1e-300) continue;
            const ComplexVal a(center + sx * x[i], sy * x[j]);
            const Vector psi = s_top * coherent_vector(a, work);
            acc.noalias() += weight * (psi * psi.adjoint());
        }
    }
    return acc;
}

DensityMatrix build_vourdas(double beta_sq, double n_T, double r, int dim) {
    const int work = kWorkFactor * dim;
    if (n_T <= 0.0) return truncate(vourdas_top(beta_sq, 0.0, r, dim, work, 1), dim);
    Matrix prev = vourdas_top(beta_sq, n_T, r, dim, work, 16);
    for (int order = 32; order <= 256; order *= 2) {
        Matrix next = vourdas_top(beta_sq, n_T, r, dim, work, order);
        const double change = (next.diagonal() - prev.diagonal()).cwiseAbs().maxCoeff();
        if (change < 1e-9) return truncate(next, dim);
        prev = std::move(next);
    }
    throw NumericError("oracle quadrature did not converge");
}

}  // namespace

OperatorMatrix::OperatorMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw InvalidArgument("operator matrix must be square");
    if (!entries_.allFinite()) throw NumericError("operator matrix has non-finite entries");
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw InvalidArgument("density matrix must be square");
    if (!entries_.allFinite()) throw NumericError("density matrix has non-finite entries");
}

std::vector<double> DensityMatrix::diagonal() const {
    std::vector<double> d(entries_.rows());
    for (Eigen::Index n = 0; n < entries_.rows(); ++n) d[n] = entries_(n, n).real();
    return d;
}

double DensityMatrix::trace() const { return entries_.trace().real(); }

double DensityMatrix::hermiticity_error() const { return max_abs(entries_ - entries_.adjoint()); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

OperatorMatrix annihilation(int dim) {
    require_dim(dim);
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return OperatorMatrix(std::move(a));
}

OperatorMatrix identity(int dim) { return OperatorMatrix(Matrix::Identity(dim, dim)); }

OperatorMatrix matrix_exp(const OperatorMatrix& m, double tol) {
    const Matrix& g = m.entries();
    const double norm = g.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix scaled = g / std::ldexp(1.0, squarings);
    Matrix result = Matrix::Identity(g.rows(), g.cols());
    Matrix term = result;
    constexpr int kMaxOrder = 40;
    bool converged = false;
    for (int k = 1; k <= kMaxOrder; ++k) {
        term = term * scaled / static_cast<double>(k);
        result += term;
        if (max_abs(term) <= tol * max_abs(result)) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("matrix_exp series did not converge");
    for (int s = 0; s < squarings; ++s) result = result * result;
    return OperatorMatrix(std::move(result));
}

OperatorMatrix displacement(ComplexVal beta, int dim) {
    const Matrix a = annihilation(dim).entries();
    return matrix_exp(OperatorMatrix(beta * a.adjoint() - std::conj(beta) * a));
}

OperatorMatrix squeeze(double r, double theta, int dim) {
    const Matrix a = annihilation(dim).entries();
    const ComplexVal zeta = std::polar(r, theta);
    const Matrix a2 = a * a;
    return matrix_exp(OperatorMatrix(0.5 * std::conj(zeta) * a2 - 0.5 * zeta * a2.adjoint()));
}

double unitarity_error(const OperatorMatrix& u) {
    return max_abs(u.entries().adjoint() * u.entries() - Matrix::Identity(u.dim(), u.dim()));
}

DensityMatrix thermal_dm(double n_T, int dim) {
    require_dim(dim);
    if (!(n_T >= 0.0)) throw InvalidArgument("n_T must be >= 0");
    auto w = geometric_weights(n_T, dim);
    double total = 0.0;
    for (double x : w) total += x;
    if (1.0 - total > 1e-12) throw InvalidArgument("thermal tail too heavy for the oracle dimension");
    for (double& x : w) x /= total;
    return DensityMatrix(diagonal_matrix(w));
}

DensityMatrix build_state(const StateSpec& spec, int dim) {
    require_dim(dim);
    const int work = kWorkFactor * dim;
    const double beta = std::sqrt(spec.beta_sq());
    const double theta = spec.psi() - kPi;
    const Matrix thermal = diagonal_matrix(geometric_weights(spec.n_T(), work));
    auto level = [&] {
        if (spec.fock_level() >= work) throw InvalidArgument("Fock level exceeds oracle dimension");
        return spec.fock_level();
    };

    switch (spec.family()) {
        case Family::Coherent:
            return truncate(conjugate(displacement(beta, work), pure(fock_vector(0, work))), dim);
        case Family::Thermal:
            return truncate(thermal, dim);
        case Family::Fock:
            return truncate(pure(fock_vector(level(), work)), dim);
        case Family::MixedCoherentThermal:
            return truncate(conjugate(displacement(beta, work), thermal), dim);
        case Family::SqueezedVacuum:
            return truncate(conjugate(squeeze(spec.r(), 0.0, work), pure(fock_vector(0, work))), dim);
        case Family::SqueezedFock:
            return truncate(conjugate(squeeze(spec.r(), 0.0, work), pure(fock_vector(level(), work))), dim);
        case Family::SqueezedThermal:
            return truncate(conjugate(squeeze(spec.r(), 0.0, work), thermal), dim);
        case Family::SqueezedCoherent: {
            const auto u = displacement(beta, work) * squeeze(spec.r(), theta, work);
            return truncate(conjugate(u, pure(fock_vector(0, work))), dim);
        }
        case Family::MixedSqueezedCoherentThermal:
            return build_vourdas(spec.beta_sq(), spec.n_T(), spec.r(), dim);
        case Family::DisplacedSqueezedThermal: {
            const auto d = displacement(beta, work);
            const auto s = squeeze(spec.r(), theta, work);
            const auto u = spec.variant() == Variant::DSTS ? d * s : s * d;
            return truncate(conjugate(u, thermal), dim);
        }
        case Family::DisplacedNumber:
            return truncate(conjugate(displacement(beta, work), pure(fock_vector(level(), work))), dim);
        case Family::SqueezedDisplacedNumber: {
            const auto u = displacement(beta, work) * squeeze(spec.r(), theta, work);
            return truncate(conjugate(u, pure(fock_vector(level(), work))), dim);
        }
    }
    throw InvalidArgument("unknown family");
}

PhotonDistribution to_distribution(const DensityMatrix& dm) { return PhotonDistribution(dm.diagonal()); }

TimeSeries s1_oracle(const DensityMatrix& dm, double delta, const std::vector<double>& z) {
    const auto rho = dm.diagonal();
    double nbar = 0.0;
    for (std::size_t n = 0; n < rho.size(); ++n) nbar += static_cast<double>(n) * rho[n];
    TimeSeries out;
    out.z = z;
    out.mode = delta == 0.0 ? Mode::Resonant : Mode::NonResonant;
    out.s1.assign(z.size(), 0.0);
    for (std::size_t k = 0; k < z.size(); ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < rho.size(); ++n) {
            const double level = static_cast<double>(n) + 1.0;
            const double arg = std::sqrt((level + delta) / (nbar + 1.0)) * z[k];
            const double sn = std::sin(arg);
            s += rho[n] * level / (level + delta) * sn * sn;
        }
        out.s1[k] = s;
    }
    out.time_average = trapezoid_average(out.z, out.s1);
    out.envelope_max = out.s1.empty() ? 0.0 : *std::max_element(out.s1.begin(), out.s1.end());
    out.slow_period = quantile_period(to_distribution(dm), delta);
    return out;
}

}  // namespace jcm::oracle
