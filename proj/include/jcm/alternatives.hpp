#pragma once

// Independent closed-form routes used to cross-validate the primary
// evaluators in states.hpp.

#include "jcm/log_real.hpp"
#include "jcm/states.hpp"

namespace jcm::alt {

// S(r, n, l) by the alternating m-sum.
LogReal squeezed_fock_kernel_msum(double r, int n, int l);

// Squeezed thermal state as a thermal mixture of squeezed Fock states, with the
// weights from the two-index recurrence for <n|S|l>.  The recurrence is run in
// 100 and 150 digits and the result ends at the first entry where the two
// differ by more than 1e-12 relative (or at n_max).
PhotonDistribution squeezed_thermal_lsum(double r, double n_T, int n_max);
// Squeezed thermal state through the terminating 2F1 in v^2.  Below the
// critical squeezing the series alternates, so it runs in 250-digit
// arithmetic and ends at the first entry whose condition number exceeds 1e235.
PhotonDistribution squeezed_thermal_hypergeometric(double r, double n_T, int n_max);
// Squeezed thermal state through complex Legendre values v^n P_n(1/v).
PhotonDistribution squeezed_thermal_legendre(double r, double n_T, int n_max);
// Degenerate form valid at r = r_s.
PhotonDistribution squeezed_thermal_critical(double r, double n_T, int n_max);

// Mixed coherent thermal state with M(-n, 1, x) summed as a confluent series.
PhotonDistribution mixed_coherent_thermal_kummer(double beta_sq, double n_T, int n_max);

// Mixed squeezed coherent thermal state by Gaussian integration over the
// P-function with the Hermite addition theorem (quadruple sum).  The sum
// cancels heavily, so it runs in 50-digit arithmetic and the result ends at the
// first entry whose condition number exceeds 1e38 (or at n_max).
PhotonDistribution mixed_quadruple_sum(double beta_sq, double n_T, double r, int n_max);

// Squeezed displaced number state as S(zeta) D(gamma) |m> expanded in
// normal-ordered powers of the squeezed creation operator.
PhotonDistribution sdns_normal_ordered_sum(double beta_sq, double r, double theta, int m, int n_max);

// The single-sum expression with the [tanh r / 2]^{-1} prefactor.  It does not
// match the oracle and is reported as advisory only.
PhotonDistribution sdns_direct_sum(double beta_sq, double r, double theta, int m, int n_max);

}  // namespace jcm::alt
