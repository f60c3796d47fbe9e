#include "rgg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rgg {

namespace {

constexpr double kPi = std::numbers::pi;

// ∫_0^X sqrt(s^2 - t^2) dt for X in [-s, s].
double half_chord_integral(double s, double X) {
  const double t = std::clamp(X / s, -1.0, 1.0);
  return 0.5 * s * s * (t * std::sqrt(std::max(0.0, 1.0 - t * t)) + std::asin(t));
}

// Area of the disk of radius s about the origin inside the quadrant {X <= a, Y <= b}.
double quadrant_area(double s, double a, double b) {
  if (a <= -s || b <= -s) return 0.0;
  a = std::min(a, s);
  const double H_lo = half_chord_integral(s, -s);
  if (b >= s) return 2.0 * (half_chord_integral(s, a) - H_lo);

  const double X0 = std::sqrt(std::max(0.0, s * s - b * b));
  double area = 0.0;
  // Outer pieces |X| > X0: the full chord (b >= 0) or nothing (b < 0).
  auto full_chord = [&](double lo, double hi) {
    hi = std::min(hi, a);
    if (hi <= lo) return 0.0;
    return 2.0 * (half_chord_integral(s, hi) - half_chord_integral(s, lo));
  };
  if (b >= 0) {
    area += full_chord(-s, -X0);
    area += full_chord(X0, s);
  }
  // Inner piece |X| <= X0: chord cut at Y = b.
  const double hi = std::min(X0, a);
  if (hi > -X0) {
    area += b * (hi + X0) + half_chord_integral(s, hi) - half_chord_integral(s, -X0);
  }
  return area;
}

}  // namespace

Domain::Domain(DomainKind kind, int dim, double radius) : kind_(kind), dim_(dim), radius_(radius) {
  switch (kind) {
    case DomainKind::UnitSquare2:
      volume_ = 1.0;
      boundary_measure_ = 4.0;
      break;
    case DomainKind::Disk2:
      volume_ = kPi * radius * radius;
      boundary_measure_ = 2.0 * kPi * radius;
      break;
    case DomainKind::Ball3:
      volume_ = 4.0 * kPi / 3.0 * radius * radius * radius;
      boundary_measure_ = 4.0 * kPi * radius * radius;
      break;
  }
  iso_ratio_ = boundary_measure_ / std::pow(volume_, 1.0 - 1.0 / dim_);
}

Domain Domain::unit_square() { return Domain(DomainKind::UnitSquare2, 2, 0.5); }

Domain Domain::disk(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("disk radius must be positive");
  return Domain(DomainKind::Disk2, 2, radius);
}

Domain Domain::ball(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  return Domain(DomainKind::Ball3, 3, radius);
}

double Domain::inradius() const { return kind_ == DomainKind::UnitSquare2 ? 0.5 : radius_; }

double Domain::diameter() const {
  return kind_ == DomainKind::UnitSquare2 ? std::numbers::sqrt2 : 2.0 * radius_;
}

Eigen::VectorXd Domain::box_lo() const {
  if (kind_ == DomainKind::UnitSquare2) return Eigen::VectorXd::Zero(2);
  return Eigen::VectorXd::Constant(dim_, -radius_);
}

Eigen::VectorXd Domain::box_hi() const {
  if (kind_ == DomainKind::UnitSquare2) return Eigen::VectorXd::Ones(2);
  return Eigen::VectorXd::Constant(dim_, radius_);
}

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::UnitSquare2:
      return "square";
    case DomainKind::Disk2:
      return "disk";
    case DomainKind::Ball3:
      return "ball";
  }
  return "?";
}

namespace detail {

bool contains(const Domain& dom, const double* x) {
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      return x[0] >= 0.0 && x[0] <= 1.0 && x[1] >= 0.0 && x[1] <= 1.0;
    case DomainKind::Disk2:
      return x[0] * x[0] + x[1] * x[1] <= dom.radius() * dom.radius();
    case DomainKind::Ball3:
      return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= dom.radius() * dom.radius();
  }
  return false;
}

double dist_to_boundary(const Domain& dom, const double* x) {
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      return std::min({x[0], 1.0 - x[0], x[1], 1.0 - x[1]});
    case DomainKind::Disk2:
      return std::max(0.0, dom.radius() - std::hypot(x[0], x[1]));
    case DomainKind::Ball3:
      return std::max(0.0, dom.radius() - std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  }
  return 0.0;
}

double ball_region_volume(const Domain& dom, const double* x, double s) {
  const int d = dom.dim();
  const double full = theta(d) * std::pow(s, d);
  if (dist_to_boundary(dom, x) >= s) return full;
  double v = 0.0;
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      v = disk_box_area(x[0], x[1], s, 0.0, 1.0, 0.0, 1.0);
      break;
    case DomainKind::Disk2:
      v = disk_disk_area(s, dom.radius(), std::hypot(x[0], x[1]));
      break;
    case DomainKind::Ball3:
      v = ball_ball_volume(s, dom.radius(), std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
      break;
  }
  return std::clamp(v, 0.0, std::min(full, dom.volume()));
}

}  // namespace detail

double erosion_volume(const Domain& dom, double s) {
  if (s < 0) throw std::domain_error("erosion_volume: s must be nonnegative");
  if (s > dom.inradius()) return 0.0;
  const double t = dom.inradius() - s;
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      return (1.0 - 2.0 * s) * (1.0 - 2.0 * s);
    case DomainKind::Disk2:
      return kPi * t * t;
    case DomainKind::Ball3:
      return 4.0 * kPi / 3.0 * t * t * t;
  }
  return 0.0;
}

double level_set_measure(const Domain& dom, double t) {
  if (t < 0 || t > dom.inradius()) return 0.0;
  const double rho = dom.radius();
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      return 4.0 * (1.0 - 2.0 * t);
    case DomainKind::Disk2:
      return 2.0 * kPi * (rho - t);
    case DomainKind::Ball3:
      return 4.0 * kPi * (rho - t) * (rho - t);
  }
  return 0.0;
}

double disk_box_area(double cx, double cy, double s, double x0, double x1, double y0, double y1) {
  const double area = quadrant_area(s, x1 - cx, y1 - cy) - quadrant_area(s, x0 - cx, y1 - cy) -
                      quadrant_area(s, x1 - cx, y0 - cy) + quadrant_area(s, x0 - cx, y0 - cy);
  return std::clamp(area, 0.0, kPi * s * s);
}

double disk_disk_area(double r1, double r2, double u) {
  if (u >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (u <= std::abs(r1 - r2)) return kPi * rmin * rmin;
  const double c1 = std::clamp((u * u + r1 * r1 - r2 * r2) / (2.0 * u * r1), -1.0, 1.0);
  const double c2 = std::clamp((u * u + r2 * r2 - r1 * r1) / (2.0 * u * r2), -1.0, 1.0);
  const double k = (-u + r1 + r2) * (u + r1 - r2) * (u - r1 + r2) * (u + r1 + r2);
  const double area = r1 * r1 * std::acos(c1) + r2 * r2 * std::acos(c2) - 0.5 * std::sqrt(std::max(0.0, k));
  return std::clamp(area, 0.0, kPi * rmin * rmin);
}

double ball_ball_volume(double r1, double r2, double u) {
  if (u >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  const double vmin = 4.0 * kPi / 3.0 * rmin * rmin * rmin;
  if (u <= std::abs(r1 - r2)) return vmin;
  const double h = r1 + r2 - u;
  const double v = kPi * h * h * (u * u + 2.0 * u * r1 - 3.0 * r1 * r1 + 2.0 * u * r2 + 6.0 * r1 * r2 - 3.0 * r2 * r2) /
                   (12.0 * u);
  return std::clamp(v, 0.0, vmin);
}

}  // namespace rgg
