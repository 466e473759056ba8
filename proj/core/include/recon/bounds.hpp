#pragma once

#include "recon/estimators.hpp"

namespace recon {

/// Parameters of the small-ball admissibility condition
///   Pr(|<x, phi>| <= t) <= alpha * t^s  for all unit x and t in [0, 1].
struct AdmissibilityParams {
  double alpha = 1.0;
  double s = 1.0;
};

/// Hemisphere term 2^{1-N} sum_{k=0}^{d-1} C(N-1, k).  Exact (integer
/// arithmetic in double) for small N, log-space otherwise; equals 1 exactly
/// at N = d.
double bcl_hemisphere_term(int n, int d);

/// Burgisser-Cucker-Lotz bound on the non-coverage probability
/// p(N, d-1, theta) for fixed-radius caps, 0 < theta < pi/2, N >= d >= 2:
///   2^{1-N} sum_{k<d} C(N-1,k)
///     + C(N,d) (d sqrt(d-1) / 2^{d-1}) F_{N,d-1}(theta),
///   F = integral_0^{cos theta} (1-t^2)^{((d-1)^2-2)/2}
///         (1 - r_{d-1}(arccos t))^{N-d-2} dt.
/// The integrand is evaluated in log space; quad_tol is the absolute
/// quadrature tolerance on F.
double bcl_noncoverage_bound(int n, int d, double theta, double quad_tol = 1e-12);

/// 2 sqrt(d) 13^d (11/12)^{N/2}; valid for N >= 2d/ln(12/11) and all
/// theta in [arccos(1/sqrt(d)), pi/2).
double simple_noncoverage_bound(int n, int d);

/// Pr[R_N > lambda] = (1 - lambda C_d / (delta (d-1)))^N for uniform-sphere
/// directions and 0 <= lambda <= 2 delta.
double radial_survival(double lambda, int n, int d, double delta);

/// E|R_N|^2 = leading + 2 delta^2 alpha_{d,N} with alpha_{d,N} bracketed:
///   leading    = 2 delta^2 (d-1)^2 / (C_d^2 (N+1)(N+2)),
///   alpha_low  = -2 delta^2 (2C_d/(d-1)) (1 - C_d/(d-1))^{N+1},
///   alpha_high =  2 delta^2 54 C_d^2 (1 - 2C_d/(d-1))^N.
/// Requires N >= 3, d >= 2.
struct RadialMseBound {
  double leading = 0.0;
  double alpha_low = 0.0;   // additive, already scaled by 2 delta^2
  double alpha_high = 0.0;  // additive, already scaled by 2 delta^2
  double lower() const { return leading + alpha_low; }
  double upper() const { return leading + alpha_high; }
};
RadialMseBound theorem_radial_mse(int n, int d, double delta);

/// Limit constant 2 delta^2 ((d-1)/(2 C_d))^2 for N^2 E|R_N|^2.
double mse_lower_limit(int d, double delta);

/// Weaker closed form pi delta^2 (d-1).
double mse_lower_limit_weak(int d, double delta);

/// General admissible-law bound, N >= (d+2)/s:
///   1e5 delta^2 d^2 (2a)^{2/s} ln^2(16 (2a)^{1/s}) / ((N+1)(N+2))
///     + delta^2 32^{d+1} (2a)^{(d+1)/s} (1/2)^N.
double mse_upper_general(int n, int d, double delta, const AdmissibilityParams& params);

/// Uniform-direction bound, N >= d+2:
///   2 e^12 delta^2 d^3 / ((N+1)(N+2))
///     + 26 delta^2 d^{3/2} (11/12)^{N/2} e^{d ln(1024 d) / 2}.
double mse_upper_uniform(int n, int d, double delta);

/// Admissibility parameters of the uniform law: (alpha = 2 C_d, s = 1) for
/// d >= 3 and (alpha = 1, s = 1) for d = 2.
AdmissibilityParams uniform_admissibility(int d);

/// Exact one-dimensional laws:
///   endpoint_mse = 8 delta^2 / ((N+1)(N+2)),
///   worst_mse    = 14 delta^2 / ((N+1)(N+2)).
struct OneDimMse {
  double endpoint_mse = 0.0;
  double worst_mse = 0.0;
};
OneDimMse one_dim_mse_exact(int n, double delta);

/// Linear-reconstruction error identities for noise variance sigma2:
///   exact_mse = sigma2 * sum ||f_n||^2,  tight_frame_floor = d^2 sigma2 / N.
struct LinearMse {
  double exact_mse = 0.0;
  double tight_frame_floor = 0.0;
};
LinearMse linear_mse_formulas(const DualFrame& dual, double sigma2, int n, int d);

}  // namespace recon
