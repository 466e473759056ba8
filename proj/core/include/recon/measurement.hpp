#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "recon/sphere.hpp"

namespace recon {

/// One noisy linear measurement q = <x, direction> + noise with |noise|
/// bounded by the owning instance's delta.
struct Measurement {
  UnitVector direction;
  double noise = 0.0;
  double value = 0.0;
};

/// A synthetic estimation problem with known ground truth.  The stored
/// noises make the exact error polytope observable, which a real receiver
/// never sees; this is a simulator with ground truth by design of the
/// experiments.
struct Instance {
  std::vector<double> signal;
  double delta = 0.0;
  std::vector<Measurement> measurements;

  int dimension() const { return static_cast<int>(signal.size()); }
  int size() const { return static_cast<int>(measurements.size()); }

  /// Throws if any structural invariant fails: N >= 1, delta > 0, matching
  /// dimensions, |noise| <= delta, exact feasibility of the signal, and
  /// value consistent with signal/noise.
  void validate() const;
};

/// Distribution of measurement directions.
class DirectionLaw {
 public:
  static DirectionLaw uniform_sphere();
  static DirectionLaw uniform_cap(UnitVector center, double theta0);
  static DirectionLaw fixed_list(std::vector<UnitVector> directions);

  /// Draws the direction for measurement `index` (the index selects the
  /// entry of a fixed list; random laws ignore it).
  UnitVector draw(int d, int index, RngStream& stream) const;

  bool is_fixed_list() const;
  int fixed_list_size() const;

  /// Stable textual form: "uniform", "cap:<theta0>", "file:<path>" or
  /// "fixed-list(<n>)".
  std::string describe() const;

  /// Label used by describe() for lists loaded from a file.
  void set_label(std::string label);

 private:
  struct Uniform {};
  struct UniformCap {
    UnitVector center;
    double theta0;
  };
  struct FixedList {
    std::vector<UnitVector> directions;
  };
  explicit DirectionLaw(std::variant<Uniform, UniformCap, FixedList> v)
      : law_(std::move(v)) {}
  std::variant<Uniform, UniformCap, FixedList> law_;
  std::string label_;
};

struct DrawOptions {
  /// Test hook: forces every noise to exactly zero.
  bool zero_noise = false;
};

/// Draws an instance with i.i.d. directions from `law` and i.i.d. noises
/// uniform on [-delta, delta].  The stored noise is the exact floating-point
/// residual value - <signal, direction>, so signal feasibility holds with no
/// tolerance.
Instance draw_instance(const std::vector<double>& signal, int n, double delta,
                       const DirectionLaw& law, RngStream& stream,
                       const DrawOptions& options = {});

/// Residuals r_n = <candidate, phi_n> - q_n.  The candidate is consistent
/// iff max_n |r_n| <= delta.
std::vector<double> consistency_residuals(const std::vector<double>& candidate,
                                          const Instance& instance);

/// max_n |<candidate, phi_n> - q_n|.
double max_abs_residual(const std::vector<double>& candidate, const Instance& instance);

/// One slab constraint |<u, direction> - offset| <= delta (delta lives on
/// the owning SlabSystem).
struct Slab {
  UnitVector direction;
  double offset = 0.0;
};

/// The error polytope as a list of slabs.  Always contains the origin when
/// built from a valid instance.
struct SlabSystem {
  std::vector<Slab> slabs;
  double delta = 0.0;

  int dimension() const {
    return slabs.empty() ? 0 : slabs.front().direction.dimension();
  }
  int size() const { return static_cast<int>(slabs.size()); }

  /// Membership with optional nonnegative slack on each constraint.
  bool contains(const std::vector<double>& u, double slack = 0.0) const;
};

/// Error polytope of an instance: slabs (phi_n, eps_n) with the instance's
/// delta.  Membership of u equals consistency of signal + u.
SlabSystem error_polytope(const Instance& instance);

/// Largest r >= 0 with r*psi inside the slab system; +infinity when the ray
/// is unconstrained.  Per slab the extent is (eps+delta)/<phi,psi> when
/// <phi,psi> >= 0 and (delta-eps)/|<phi,psi>| otherwise.
double radial_extent(const SlabSystem& slabs, const UnitVector& psi);

inline constexpr double kInfiniteExtent = std::numeric_limits<double>::infinity();

/// Line-oriented text dump: "d N delta", the signal line, then one line per
/// measurement with the d direction components, the noise and the value, all
/// with 17 significant digits.
std::string serialize_instance(const Instance& instance);

/// Parses the serialize_instance format and validates the result.
Instance parse_instance(const std::string& text);

}  // namespace recon
