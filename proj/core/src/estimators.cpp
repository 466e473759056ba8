#include "recon/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "recon/linalg.hpp"

namespace recon {

double soft_threshold(double t, double delta) {
  if (!(delta > 0.0)) throw DomainError("soft_threshold: delta must be positive");
  if (t > delta) return t - delta;
  if (t < -delta) return t + delta;
  return 0.0;
}

namespace {

// In-place Rangan-Goyal update; identical arithmetic to rg_step.
inline void rg_step_inplace(std::vector<double>& x, const Measurement& m, double delta) {
  const double residual = m.value - dot(m.direction, x);
  const double shift = soft_threshold(residual, delta);
  if (shift != 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += m.direction[static_cast<int>(i)] * shift;
  }
}

}  // namespace

std::vector<double> rg_step(const std::vector<double>& current, const Measurement& m,
                            double delta) {
  if (static_cast<int>(current.size()) != m.direction.dimension()) {
    throw DimensionError("rg_step: dimension mismatch");
  }
  std::vector<double> out = current;
  rg_step_inplace(out, m, delta);
  return out;
}

EstimateReport consistent_estimate(const Instance& instance, std::vector<double> x0,
                                   double tol, int max_passes) {
  if (!(tol > 0.0)) throw DomainError("consistent_estimate: tol must be positive");
  if (max_passes < 1) throw DomainError("consistent_estimate: max_passes must be >= 1");
  if (static_cast<int>(x0.size()) != instance.dimension()) {
    throw DimensionError("consistent_estimate: x0 dimension mismatch");
  }

  std::vector<double> x = std::move(x0);
  for (int pass = 1;; ++pass) {
    const double r = max_abs_residual(x, instance);
    if (r <= instance.delta + tol) {
      return EstimateReport{std::move(x), true, pass, r};
    }
    if (pass >= max_passes) {
      return EstimateReport{std::move(x), false, pass, r};
    }
    for (const Measurement& m : instance.measurements) {
      rg_step_inplace(x, m, instance.delta);
    }
  }
}

EstimateReport rg_estimate(const Instance& instance, std::vector<double> x0) {
  if (static_cast<int>(x0.size()) != instance.dimension()) {
    throw DimensionError("rg_estimate: x0 dimension mismatch");
  }
  std::vector<double> x = std::move(x0);
  for (const Measurement& m : instance.measurements) {
    rg_step_inplace(x, m, instance.delta);
  }
  const double r = max_abs_residual(x, instance);
  return EstimateReport{std::move(x), r <= instance.delta + kReportTol, 1, r};
}

DualFrame canonical_dual(const std::vector<UnitVector>& directions) {
  if (directions.empty()) {
    throw DomainError("canonical_dual: empty direction set");
  }
  const int d = directions.front().dimension();
  for (const UnitVector& phi : directions) {
    if (phi.dimension() != d) {
      throw DimensionError("canonical_dual: mixed dimensions");
    }
  }
  // Frame operator S = sum phi phi^T.
  std::vector<double> s(static_cast<std::size_t>(d) * d, 0.0);
  for (const UnitVector& phi : directions) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        s[static_cast<std::size_t>(i) * d + j] += phi[i] * phi[j];
      }
    }
  }
  std::vector<int> piv(static_cast<std::size_t>(d));
  if (!detail::lu_factor(s.data(), d, piv.data())) {
    throw RankDeficiencyError(
        "canonical_dual: frame operator is rank-deficient (pivot below 1e-12); "
        "the directions do not span R^d");
  }
  DualFrame frame;
  frame.source_directions = directions;
  frame.duals.reserve(directions.size());
  for (const UnitVector& phi : directions) {
    std::vector<double> f = phi.coords();
    detail::lu_solve(s.data(), d, piv.data(), f.data());
    frame.duals.push_back(std::move(f));
  }
  return frame;
}

std::vector<double> linear_estimate(const Instance& instance, const DualFrame& dual) {
  if (dual.duals.size() != instance.measurements.size()) {
    throw DimensionError("linear_estimate: dual/measurement length mismatch");
  }
  std::vector<double> x(static_cast<std::size_t>(instance.dimension()), 0.0);
  for (std::size_t n = 0; n < dual.duals.size(); ++n) {
    const std::vector<double>& f = dual.duals[n];
    if (f.size() != x.size()) {
      throw DimensionError("linear_estimate: dual dimension mismatch");
    }
    const double q = instance.measurements[n].value;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += q * f[i];
  }
  return x;
}

namespace {

// C(n, k) in double, saturating at `cap` to avoid overflow.
double binomial_capped(int n, int k, double cap) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i);
    c /= static_cast<double>(i);
    if (c > cap) return cap * 2.0;
  }
  return c;
}

// A unit direction orthogonal to every slab normal, if one exists
// (modified Gram-Schmidt residual of the best basis vector).
std::vector<double> null_direction(const SlabSystem& slabs) {
  const int d = slabs.dimension();
  std::vector<std::vector<double>> basis;  // orthonormal span of the normals
  for (const Slab& s : slabs.slabs) {
    std::vector<double> v = s.direction.coords();
    for (const auto& b : basis) {
      const double c = detail::dot(v, b);
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] -= c * b[static_cast<std::size_t>(i)];
    }
    const double n = detail::norm(v);
    if (n > 1e-9) {
      for (double& x : v) x /= n;
      basis.push_back(std::move(v));
    }
  }
  std::vector<double> best;
  double best_norm = 0.0;
  for (int axis = 0; axis < d; ++axis) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[static_cast<std::size_t>(axis)] = 1.0;
    for (const auto& b : basis) {
      const double c = detail::dot(v, b);
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] -= c * b[static_cast<std::size_t>(i)];
    }
    const double n = detail::norm(v);
    if (n > best_norm) {
      best_norm = n;
      best = std::move(v);
    }
  }
  if (best_norm < 1e-9) return {};
  for (double& x : best) x /= best_norm;
  return best;
}

}  // namespace

WorstCaseResult worst_case_error_exact(const SlabSystem& slabs,
                                       const VertexEnumLimits& limits) {
  const int n = slabs.size();
  const int d = slabs.dimension();
  if (n == 0) throw DomainError("worst_case_error_exact: empty slab system");

  if (d >= 31) {
    throw CapacityError(
        "worst_case_error_exact: dimension too large for facet-sign enumeration; "
        "use worst_case_error_radial_net for a lower bound");
  }
  const double systems = binomial_capped(2 * n, d, limits.max_systems);
  if (systems > limits.max_systems) {
    throw CapacityError(
        "worst_case_error_exact: C(2N, d) exceeds the enumeration cap; "
        "use worst_case_error_radial_net for a lower bound");
  }

  // Enumerate d-subsets of slab indices in lexicographic order; the two
  // facet hyperplanes of one slab are parallel, so subsets picking a slab
  // twice contribute no vertex.  For a fixed index subset the matrix is
  // factored once and all 2^d facet sign choices reuse it.
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;

  std::vector<double> a(static_cast<std::size_t>(d) * d);
  std::vector<int> piv(static_cast<std::size_t>(d));
  std::vector<double> rhs(static_cast<std::size_t>(d));
  std::vector<double> u(static_cast<std::size_t>(d));

  double best_norm2 = -1.0;
  std::vector<double> witness;
  const double slack = kVertexFeasibilitySlack;

  const bool any_subset = n >= d;
  bool done = !any_subset;
  while (!done) {
    for (int i = 0; i < d; ++i) {
      const Slab& s = slabs.slabs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      for (int j = 0; j < d; ++j) a[static_cast<std::size_t>(i) * d + j] = s.direction[j];
    }
    if (detail::lu_factor(a.data(), d, piv.data())) {
      for (unsigned mask = 0; mask < (1u << d); ++mask) {
        for (int i = 0; i < d; ++i) {
          const Slab& s = slabs.slabs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          rhs[static_cast<std::size_t>(i)] =
              s.offset + ((mask >> i) & 1u ? slabs.delta : -slabs.delta);
        }
        u = rhs;
        detail::lu_solve(a.data(), d, piv.data(), u.data());
        bool feasible = true;
        for (const Slab& s : slabs.slabs) {
          if (std::fabs(dot(s.direction, u) - s.offset) > slabs.delta + slack) {
            feasible = false;
            break;
          }
        }
        if (feasible) {
          const double norm2 = detail::norm2(u);
          if (norm2 > best_norm2) {
            best_norm2 = norm2;
            witness = u;
          }
        }
      }
    }
    // next combination
    int i = d - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - d + i) --i;
    if (i < 0) {
      done = true;
    } else {
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < d; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }

  if (best_norm2 < 0.0) {
    // No feasible vertex: the polytope must be unbounded.  Certify with a
    // ray along which the radial extent is infinite.
    std::vector<double> ray = null_direction(slabs);
    if (!ray.empty() &&
        radial_extent(slabs, UnitVector::normalized(ray)) == kInfiniteExtent) {
      throw UnboundedPolytopeError(
          "worst_case_error_exact: slab system is unbounded (directions do not "
          "span R^d)");
    }
    throw InternalError(
        "worst_case_error_exact: no feasible vertex found for a seemingly "
        "bounded system");
  }

  return WorstCaseResult{std::sqrt(best_norm2), std::move(witness),
                         WorstCaseMethod::vertex_exact};
}

WorstCaseResult worst_case_error_radial_net(const SlabSystem& slabs,
                                            const GeodesicNet& net) {
  if (net.points.empty()) {
    throw DomainError("worst_case_error_radial_net: empty net");
  }
  if (net.dimension() != slabs.dimension()) {
    throw DimensionError("worst_case_error_radial_net: dimension mismatch");
  }
  double best = -1.0;
  const UnitVector* best_psi = nullptr;
  for (const UnitVector& psi : net.points) {
    const double r = radial_extent(slabs, psi);
    if (r == kInfiniteExtent) {
      throw UnboundedPolytopeError(
          "worst_case_error_radial_net: unbounded direction in the net");
    }
    if (r > best) {
      best = r;
      best_psi = &psi;
    }
  }
  std::vector<double> witness = best_psi->coords();
  for (double& x : witness) x *= best;
  return WorstCaseResult{best, std::move(witness), WorstCaseMethod::radial_net_lower};
}

}  // namespace recon
