#pragma once

#include <optional>
#include <vector>

#include "jcm/log_real.hpp"
#include "jcm/state_spec.hpp"

namespace jcm {

// Truncated photon-number distribution rho_nn, n = 0..n_max.
class PhotonDistribution {
public:
    // Clamps rounding negatives above -1e-12 to zero; throws NumericError on
    // anything more negative or non-finite.
    explicit PhotonDistribution(std::vector<double> probs, double condition = 1.0);

    const std::vector<double>& probs() const { return probs_; }
    int n_max() const { return static_cast<int>(probs_.size()) - 1; }
    double operator[](std::size_t n) const { return probs_[n]; }

    // Geometric extrapolation of the mass beyond n_max.
    double tail_mass() const { return tail_mass_; }
    // 1 - sum(probs), compensated.
    double norm_residual() const { return norm_residual_; }
    double total() const { return 1.0 - norm_residual_; }
    // Largest condition number of an alternating sum used to build the entries.
    double max_condition() const { return condition_; }
    bool precision_warning() const { return condition_ > 1e12; }

    double mean() const;
    double variance() const;

private:
    std::vector<double> probs_;
    double tail_mass_ = 0.0;
    double norm_residual_ = 0.0;
    double condition_ = 1.0;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Closed-form mean and variance for each family.  The squeezed displaced thermal
// variant uses the general Gaussian-state moments, which reduce to the simpler
// form for the displaced-then-squeezed order.
Moments closed_form_moments(const StateSpec& spec);
Moments pmf_moments(const PhotonDistribution& pmf);
// Estimated contribution of the truncated tail to each moment: a geometric
// continuation fitted to the last entries, scaled to at least the missing mass.
// Infinite when the entries are not decaying.
Moments truncation_bound(const PhotonDistribution& pmf);

PhotonDistribution pmf_coherent(double beta_sq, int n_max);
PhotonDistribution pmf_thermal(double n_T, int n_max);
PhotonDistribution pmf_fock(int level, int n_max);
PhotonDistribution pmf_mixed_coherent_thermal(double beta_sq, double n_T, int n_max);
PhotonDistribution pmf_squeezed_vacuum(double r, int n_max);
PhotonDistribution pmf_squeezed_fock(double r, int level, int n_max);
PhotonDistribution pmf_squeezed_thermal(double r, double n_T, int n_max);
PhotonDistribution pmf_squeezed_coherent(double beta_sq, double r, double psi, int n_max);
PhotonDistribution pmf_mixed_squeezed_coherent_thermal(double beta_sq, double n_T, double r, int n_max);
PhotonDistribution pmf_displaced_squeezed_thermal(double beta_sq, double n_T, double r, double psi,
                                                  Variant variant, int n_max);
PhotonDistribution pmf_displaced_number(double beta_sq, int level, int n_max);
PhotonDistribution pmf_squeezed_displaced_number(double beta_sq, double r, double psi, int level, int n_max);

// S(r, n, l) through the terminating 2F1; zero when n - l is odd.
LogReal squeezed_fock_kernel(double r, int n, int l);

// Squeezed-thermal helper quantities.
struct SqueezedThermalParams {
    double critical_r = 0.0;  // r_s
    double v_sq = 0.0;        // v^2, negative above r_s
    double base = 0.0;        // 1 + (2 n_T + 1) sinh^2 r / (n_T + 1)^2
};
SqueezedThermalParams squeezed_thermal_params(double r, double n_T);

// Parameters of the generalized Hermite representation of the mixed squeezed
// coherent thermal state.
struct VourdasParams {
    double c11 = 0.0, c12 = 0.0, c22 = 0.0;
    double r1 = 0.0, r2 = 0.0;
    double linear = 0.0;  // c11 r1 + c12 r2, finite even where r1 is not
    double k = 0.0, lambda_coef = 0.0;
    double weight = 0.0;  // n_T / (1 + n_T)
    double norm = 0.0;    // N2
};
VourdasParams vourdas_params(double beta_sq, double n_T, double r);

// Switch thresholds for formulas that divide by n_T or sinh r.
inline constexpr double kThermalFloor = 1e-6;
inline constexpr double kSqueezeFloor = 1e-6;
// |v^2| below which the degenerate squeezed-thermal form is used.
inline constexpr double kCriticalFloor = 1e-12;
inline constexpr int kDefaultHardCap = 20000;

PhotonDistribution make_distribution(const StateSpec& spec, int n_max);

// Smallest N with realized tail below eps_tail.  Honors JCM_HARD_NMAX_CAP.
int auto_nmax(const StateSpec& spec, double eps_tail);
// The distribution truncated at auto_nmax.
PhotonDistribution auto_distribution(const StateSpec& spec, double eps_tail);
int hard_nmax_cap();

}  // namespace jcm
