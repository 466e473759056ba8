#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recon::testing {

double stevens_noncoverage(int n, double arc_fraction) {
  double sum = 0.0;
  double binom = 1.0;  // C(n, 0)
  for (int k = 1; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    const double base = 1.0 - k * arc_fraction;
    if (base <= 0.0) break;
    const double term = binom * std::pow(base, n - 1);
    sum += (k % 2 == 1) ? term : -term;
  }
  return sum;
}

namespace {

struct Point {
  double x, y;
};

// Clips a convex polygon against the half-plane a.x + b.y <= c
// (Sutherland-Hodgman step).
std::vector<Point> clip_halfplane(const std::vector<Point>& poly, double a, double b,
                                  double c) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double fp = a * p.x + b * p.y - c;
    const double fq = a * q.x + b * q.y - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(Point{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

}  // namespace

double polygon_wn_d2(const SlabSystem& slabs, double box_half_width) {
  if (slabs.dimension() != 2) {
    throw std::invalid_argument("polygon_wn_d2: needs d = 2");
  }
  const double B = box_half_width;
  std::vector<Point> poly{{-B, -B}, {B, -B}, {B, B}, {-B, B}};
  for (const Slab& s : slabs.slabs) {
    const double a = s.direction[0];
    const double b = s.direction[1];
    poly = clip_halfplane(poly, a, b, s.offset + slabs.delta);
    poly = clip_halfplane(poly, -a, -b, slabs.delta - s.offset);
    if (poly.empty()) throw std::runtime_error("polygon_wn_d2: empty intersection");
  }
  double best = 0.0;
  for (const Point& p : poly) {
    if (std::fabs(p.x) > 0.99 * B || std::fabs(p.y) > 0.99 * B) {
      throw std::runtime_error("polygon_wn_d2: polygon not inside the clip box");
    }
    best = std::max(best, std::hypot(p.x, p.y));
  }
  return best;
}

double interval_wn_1d(const std::vector<double>& folded_noises, double delta) {
  double lo = folded_noises.front(), hi = folded_noises.front();
  for (double e : folded_noises) {
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return std::max(delta + lo, delta - hi);
}

double ks_distance_one_sample(std::vector<double> samples,
                              const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c * std::sqrt((static_cast<double>(n) + static_cast<double>(m)) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace recon::testing
