#include "recon/measurement.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "recon/linalg.hpp"

namespace recon {

void Instance::validate() const {
  if (signal.empty()) throw DimensionError("Instance: empty signal");
  if (!(delta > 0.0)) throw DomainError("Instance: delta must be positive");
  if (measurements.empty()) throw DomainError("Instance: needs N >= 1 measurements");
  for (const Measurement& m : measurements) {
    if (m.direction.dimension() != dimension()) {
      throw DimensionError("Instance: measurement dimension mismatch");
    }
    if (std::fabs(m.noise) > delta) {
      throw DomainError("Instance: |noise| exceeds delta");
    }
    const double ip = dot(m.direction, signal);
    // Exact feasibility: the recomputed residual is the stored noise.
    if (m.value - ip != m.noise) {
      throw DomainError("Instance: value - <signal, direction> != noise");
    }
  }
}

DirectionLaw DirectionLaw::uniform_sphere() { return DirectionLaw(Uniform{}); }

DirectionLaw DirectionLaw::uniform_cap(UnitVector center, double theta0) {
  if (!(theta0 > 0.0) || !(theta0 < std::acos(-1.0))) {
    throw DomainError("DirectionLaw::uniform_cap: theta0 must lie in (0, pi)");
  }
  return DirectionLaw(UniformCap{std::move(center), theta0});
}

DirectionLaw DirectionLaw::fixed_list(std::vector<UnitVector> directions) {
  if (directions.empty()) {
    throw DomainError("DirectionLaw::fixed_list: empty list");
  }
  return DirectionLaw(FixedList{std::move(directions)});
}

UnitVector DirectionLaw::draw(int d, int index, RngStream& stream) const {
  if (const auto* fixed = std::get_if<FixedList>(&law_)) {
    if (index >= static_cast<int>(fixed->directions.size())) {
      throw DomainError("DirectionLaw: fixed list shorter than N");
    }
    const UnitVector& v = fixed->directions[static_cast<std::size_t>(index)];
    if (v.dimension() != d) {
      throw DimensionError("DirectionLaw: fixed-list dimension mismatch");
    }
    return v;
  }
  if (const auto* cap = std::get_if<UniformCap>(&law_)) {
    if (cap->center.dimension() != d) {
      throw DimensionError("DirectionLaw: cap center dimension mismatch");
    }
    const double threshold = std::cos(cap->theta0);
    // Rejection from the uniform law; exactly the conditional distribution.
    for (long long attempts = 0; attempts < 100000000; ++attempts) {
      UnitVector v = sample_uniform_direction(d, stream);
      if (dot(v, cap->center) > threshold) return v;
    }
    throw Error("DirectionLaw: cap acceptance rate too small for rejection sampling");
  }
  return sample_uniform_direction(d, stream);
}

bool DirectionLaw::is_fixed_list() const {
  return std::holds_alternative<FixedList>(law_);
}

int DirectionLaw::fixed_list_size() const {
  if (const auto* fixed = std::get_if<FixedList>(&law_)) {
    return static_cast<int>(fixed->directions.size());
  }
  return 0;
}

std::string DirectionLaw::describe() const {
  if (!label_.empty()) return label_;
  if (std::holds_alternative<Uniform>(law_)) return "uniform";
  if (const auto* cap = std::get_if<UniformCap>(&law_)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "cap:%.17g", cap->theta0);
    return buf;
  }
  return "fixed-list(" + std::to_string(fixed_list_size()) + ")";
}

void DirectionLaw::set_label(std::string label) { label_ = std::move(label); }

Instance draw_instance(const std::vector<double>& signal, int n, double delta,
                       const DirectionLaw& law, RngStream& stream,
                       const DrawOptions& options) {
  if (signal.empty()) throw DimensionError("draw_instance: empty signal");
  if (n < 1) throw DomainError("draw_instance: N must be >= 1");
  if (!(delta > 0.0)) throw DomainError("draw_instance: delta must be positive");

  const int d = static_cast<int>(signal.size());
  Instance instance;
  instance.signal = signal;
  instance.delta = delta;
  instance.measurements.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    UnitVector direction = law.draw(d, i, stream);
    const double eps = options.zero_noise ? 0.0 : stream.uniform(-delta, delta);
    const double ip = dot(direction, signal);
    double value = ip + eps;
    // Store the exact floating-point residual as the noise, nudging the
    // value by ulps in the astronomically rare case rounding pushed the
    // residual past delta.  Keeps |<x,phi> - q| <= delta an exact identity.
    double noise = value - ip;
    while (std::fabs(noise) > delta) {
      value = std::nextafter(value, ip);
      noise = value - ip;
    }
    instance.measurements.push_back(Measurement{std::move(direction), noise, value});
  }
  return instance;
}

std::vector<double> consistency_residuals(const std::vector<double>& candidate,
                                          const Instance& instance) {
  if (static_cast<int>(candidate.size()) != instance.dimension()) {
    throw DimensionError("consistency_residuals: dimension mismatch");
  }
  std::vector<double> r;
  r.reserve(instance.measurements.size());
  for (const Measurement& m : instance.measurements) {
    r.push_back(dot(m.direction, candidate) - m.value);
  }
  return r;
}

double max_abs_residual(const std::vector<double>& candidate, const Instance& instance) {
  if (static_cast<int>(candidate.size()) != instance.dimension()) {
    throw DimensionError("max_abs_residual: dimension mismatch");
  }
  double worst = 0.0;
  for (const Measurement& m : instance.measurements) {
    worst = std::max(worst, std::fabs(dot(m.direction, candidate) - m.value));
  }
  return worst;
}

bool SlabSystem::contains(const std::vector<double>& u, double slack) const {
  for (const Slab& s : slabs) {
    if (std::fabs(dot(s.direction, u) - s.offset) > delta + slack) return false;
  }
  return true;
}

SlabSystem error_polytope(const Instance& instance) {
  SlabSystem sys;
  sys.delta = instance.delta;
  sys.slabs.reserve(instance.measurements.size());
  for (const Measurement& m : instance.measurements) {
    sys.slabs.push_back(Slab{m.direction, m.noise});
  }
  return sys;
}

double radial_extent(const SlabSystem& slabs, const UnitVector& psi) {
  if (!slabs.slabs.empty() && slabs.dimension() != psi.dimension()) {
    throw DimensionError("radial_extent: dimension mismatch");
  }
  double extent = kInfiniteExtent;
  for (const Slab& s : slabs.slabs) {
    const double c = dot(s.direction, psi);
    double bound;
    if (c > 0.0) {
      bound = (s.offset + slabs.delta) / c;
    } else if (c < 0.0) {
      bound = (slabs.delta - s.offset) / (-c);
    } else {
      continue;  // slab unbounded along psi
    }
    extent = std::min(extent, bound);
  }
  return extent;
}

namespace {

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string serialize_instance(const Instance& instance) {
  std::string out;
  out += std::to_string(instance.dimension());
  out += ' ';
  out += std::to_string(instance.size());
  out += ' ';
  append_g17(out, instance.delta);
  out += '\n';
  for (int j = 0; j < instance.dimension(); ++j) {
    if (j) out += ' ';
    append_g17(out, instance.signal[static_cast<std::size_t>(j)]);
  }
  out += '\n';
  for (const Measurement& m : instance.measurements) {
    for (int j = 0; j < instance.dimension(); ++j) {
      if (j) out += ' ';
      append_g17(out, m.direction[j]);
    }
    out += ' ';
    append_g17(out, m.noise);
    out += ' ';
    append_g17(out, m.value);
    out += '\n';
  }
  return out;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  int d = 0, n = 0;
  double delta = 0.0;
  if (!(in >> d >> n >> delta)) {
    throw DomainError("parse_instance: malformed header line");
  }
  if (d < 1 || n < 1) {
    throw DomainError("parse_instance: invalid dimensions in header");
  }
  Instance instance;
  instance.delta = delta;
  instance.signal.resize(static_cast<std::size_t>(d));
  for (double& x : instance.signal) {
    if (!(in >> x)) throw DomainError("parse_instance: truncated signal line");
  }
  instance.measurements.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> dir(static_cast<std::size_t>(d));
    for (double& x : dir) {
      if (!(in >> x)) throw DomainError("parse_instance: truncated measurement line");
    }
    double noise = 0.0, value = 0.0;
    if (!(in >> noise >> value)) {
      throw DomainError("parse_instance: truncated measurement line");
    }
    instance.measurements.push_back(Measurement{UnitVector(std::move(dir)), noise, value});
  }
  instance.validate();
  return instance;
}

}  // namespace recon
