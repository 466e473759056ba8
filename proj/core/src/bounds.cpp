#include "recon/bounds.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "recon/linalg.hpp"
#include "recon/quadrature.hpp"

namespace recon {

namespace {

constexpr double kPi = std::numbers::pi;

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double bcl_hemisphere_term(int n, int d) {
  if (n < 1 || d < 1) throw DomainError("bcl_hemisphere_term: requires N, d >= 1");
  if (n <= 40) {
    // Exact in double: C(39, k) < 2^53 and 2^{1-N} is a power of two.
    double sum = 0.0;
    double binom = 1.0;  // C(N-1, 0)
    for (int k = 0; k < d && k <= n - 1; ++k) {
      sum += binom;
      binom = binom * (n - 1 - k) / (k + 1);
    }
    return std::ldexp(sum, 1 - n);
  }
  // Log-space evaluation for large N.
  double log_sum = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < d && k <= n - 1; ++k) {
    const double lb = log_binomial(n - 1, k);
    log_sum = std::max(log_sum, lb) +
              std::log1p(std::exp(std::min(log_sum, lb) - std::max(log_sum, lb)));
  }
  return std::exp(log_sum + (1.0 - n) * std::numbers::ln2);
}

double bcl_noncoverage_bound(int n, int d, double theta, double quad_tol) {
  if (d < 2 || n < d) throw DomainError("bcl_noncoverage_bound: requires N >= d >= 2");
  if (!(theta > 0.0) || !(theta < 0.5 * kPi)) {
    throw DomainError("bcl_noncoverage_bound: theta must lie in (0, pi/2)");
  }
  if (!(quad_tol > 0.0)) throw DomainError("bcl_noncoverage_bound: quad_tol must be positive");

  const double hemisphere = bcl_hemisphere_term(n, d);

  // Second term integrated with its constants folded in, so the integrand
  // exponent (log C(N,d) + log const + log integrand) stays in range even
  // when F alone would underflow.
  const double log_const = log_binomial(n, d) + std::log(static_cast<double>(d)) +
                           0.5 * std::log(static_cast<double>(d - 1)) -
                           (d - 1) * std::numbers::ln2;
  const double shape = 0.5 * ((d - 1.0) * (d - 1.0) - 2.0);
  const int tail_pow = n - d - 2;
  const auto integrand = [&](double t) {
    const double r = detail::cap_relative_measure_unchecked(d, std::acos(t));
    const double log_val =
        log_const + shape * std::log1p(-t * t) + tail_pow * std::log1p(-r);
    return std::exp(log_val);
  };
  const double tol_scale = std::exp(std::min(log_const, 600.0));
  const double cap_term = integrate_adaptive_simpson(integrand, 0.0, std::cos(theta),
                                                     quad_tol * tol_scale);
  return hemisphere + cap_term;
}

double simple_noncoverage_bound(int n, int d) {
  if (d < 2) throw DomainError("simple_noncoverage_bound: requires d >= 2");
  const double threshold = 2.0 * d / std::log(12.0 / 11.0);
  if (static_cast<double>(n) < threshold) {
    throw DomainError("simple_noncoverage_bound: requires N >= 2d/ln(12/11)");
  }
  return std::exp(std::numbers::ln2 + 0.5 * std::log(static_cast<double>(d)) +
                  d * std::log(13.0) + 0.5 * n * std::log(11.0 / 12.0));
}

double radial_survival(double lambda, int n, int d, double delta) {
  if (d < 2) throw DomainError("radial_survival: requires d >= 2");
  if (n < 1) throw DomainError("radial_survival: requires N >= 1");
  if (!(delta > 0.0)) throw DomainError("radial_survival: delta must be positive");
  if (lambda < 0.0 || lambda > 2.0 * delta) {
    throw DomainError("radial_survival: lambda must lie in [0, 2 delta]");
  }
  const double cd = gamma_ratio_constant(d);
  return std::pow(1.0 - lambda * cd / (delta * (d - 1)), n);
}

RadialMseBound theorem_radial_mse(int n, int d, double delta) {
  if (n < 3) throw DomainError("theorem_radial_mse: requires N >= 3");
  if (d < 2) throw DomainError("theorem_radial_mse: requires d >= 2");
  if (!(delta > 0.0)) throw DomainError("theorem_radial_mse: delta must be positive");
  const double cd = gamma_ratio_constant(d);
  const double d2 = delta * delta;
  RadialMseBound b;
  b.leading = 2.0 * d2 * (d - 1.0) * (d - 1.0) /
              (cd * cd * (n + 1.0) * (n + 2.0));
  b.alpha_low = -2.0 * d2 * (2.0 * cd / (d - 1.0)) *
                std::pow(1.0 - cd / (d - 1.0), n + 1);
  b.alpha_high = 2.0 * d2 * 54.0 * cd * cd * std::pow(1.0 - 2.0 * cd / (d - 1.0), n);
  return b;
}

double mse_lower_limit(int d, double delta) {
  if (d < 2) throw DomainError("mse_lower_limit: requires d >= 2");
  const double cd = gamma_ratio_constant(d);
  const double ratio = (d - 1.0) / (2.0 * cd);
  return 2.0 * delta * delta * ratio * ratio;
}

double mse_lower_limit_weak(int d, double delta) {
  if (d < 2) throw DomainError("mse_lower_limit_weak: requires d >= 2");
  return kPi * delta * delta * (d - 1.0);
}

double mse_upper_general(int n, int d, double delta, const AdmissibilityParams& params) {
  if (d < 2) throw DomainError("mse_upper_general: requires d >= 2");
  if (!(params.alpha >= 1.0) || !(params.s > 0.0)) {
    throw DomainError("mse_upper_general: requires alpha >= 1 and s > 0");
  }
  if (static_cast<double>(n) < (d + 2.0) / params.s) {
    throw DomainError("mse_upper_general: requires N >= (d+2)/s");
  }
  const double d2 = delta * delta;
  const double log2a = std::log(2.0 * params.alpha);
  const double log_16_2a = std::log(16.0) + log2a / params.s;
  const double first = 1e5 * d2 * d * d * std::exp(2.0 / params.s * log2a) *
                       log_16_2a * log_16_2a / ((n + 1.0) * (n + 2.0));
  const double second =
      d2 * std::exp((d + 1.0) * std::log(32.0) + (d + 1.0) / params.s * log2a -
                    n * std::numbers::ln2);
  return first + second;
}

double mse_upper_uniform(int n, int d, double delta) {
  if (d < 2) throw DomainError("mse_upper_uniform: requires d >= 2");
  if (n < d + 2) throw DomainError("mse_upper_uniform: requires N >= d + 2");
  const double d2 = delta * delta;
  const double dd = static_cast<double>(d);
  const double first = 2.0 * std::exp(12.0) * d2 * dd * dd * dd /
                       ((n + 1.0) * (n + 2.0));
  const double tail = 26.0 * d2 *
                      std::exp(1.5 * std::log(dd) + 0.5 * n * std::log(11.0 / 12.0) +
                               0.5 * dd * std::log(1024.0 * dd));
  return first + tail;
}

AdmissibilityParams uniform_admissibility(int d) {
  if (d < 2) throw DomainError("uniform_admissibility: requires d >= 2");
  if (d == 2) return AdmissibilityParams{1.0, 1.0};
  return AdmissibilityParams{2.0 * gamma_ratio_constant(d), 1.0};
}

OneDimMse one_dim_mse_exact(int n, double delta) {
  if (n < 1) throw DomainError("one_dim_mse_exact: requires N >= 1");
  if (!(delta > 0.0)) throw DomainError("one_dim_mse_exact: delta must be positive");
  const double denom = (n + 1.0) * (n + 2.0);
  return OneDimMse{8.0 * delta * delta / denom, 14.0 * delta * delta / denom};
}

LinearMse linear_mse_formulas(const DualFrame& dual, double sigma2, int n, int d) {
  if (!(sigma2 > 0.0)) throw DomainError("linear_mse_formulas: sigma2 must be positive");
  if (n < 1 || d < 1) throw DomainError("linear_mse_formulas: requires N, d >= 1");
  double sum = 0.0;
  for (const std::vector<double>& f : dual.duals) sum += detail::norm2(f);
  return LinearMse{sigma2 * sum, static_cast<double>(d) * d * sigma2 / n};
}

}  // namespace recon
