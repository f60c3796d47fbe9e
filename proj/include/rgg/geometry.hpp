#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rgg {

/// Volume of the unit ball in R^d. Only d = 2 and d = 3 are supported.
template <typename Scalar = double>
Scalar theta(int d) {
  switch (d) {
    case 2:
      return std::numbers::pi_v<Scalar>;
    case 3:
      return Scalar(4) * std::numbers::pi_v<Scalar> / Scalar(3);
    default:
      throw std::invalid_argument("theta: unsupported dimension " + std::to_string(d));
  }
}

/// Volume of the unit ball in R^{d-1}, i.e. theta(d-1) with theta(1) = 2.
template <typename Scalar = double>
Scalar theta_lower(int d) {
  switch (d) {
    case 2:
      return Scalar(2);
    case 3:
      return std::numbers::pi_v<Scalar>;
    default:
      throw std::invalid_argument("theta_lower: unsupported dimension " + std::to_string(d));
  }
}

/// Volume of the slab B_1(o) ∩ ([0,s] × R^{d-1}).
template <typename Scalar = double>
Scalar g_function(int d, Scalar s) {
  if (!(s >= Scalar(0) && s <= Scalar(1))) {
    throw std::domain_error("g_function: s must lie in [0,1]");
  }
  using std::asin;
  using std::sqrt;
  switch (d) {
    case 2:
      return s * sqrt(Scalar(1) - s * s) + asin(s);
    case 3:
      return std::numbers::pi_v<Scalar> * (s - s * s * s / Scalar(3));
    default:
      throw std::invalid_argument("g_function: unsupported dimension " + std::to_string(d));
  }
}

enum class DomainKind { UnitSquare2, Disk2, Ball3 };

/// A compact region A: the unit square [0,1]^2, or a disk / 3-ball of the
/// given radius centred at the origin.
class Domain {
 public:
  static Domain unit_square();
  static Domain disk(double radius);
  static Domain ball(double radius);

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  double volume() const { return volume_; }
  double boundary_measure() const { return boundary_measure_; }
  /// |∂A| / λ(A)^{1-1/d}
  double iso_ratio() const { return iso_ratio_; }
  double inradius() const;
  double diameter() const;
  Eigen::VectorXd box_lo() const;
  Eigen::VectorXd box_hi() const;

  std::string name() const;

  bool operator==(const Domain&) const = default;

 private:
  Domain(DomainKind kind, int dim, double radius);

  DomainKind kind_;
  int dim_;
  double radius_;
  double volume_;
  double boundary_measure_;
  double iso_ratio_;
};

namespace detail {

// Raw-coordinate kernels; callers guarantee x has dom.dim() entries.
bool contains(const Domain& dom, const double* x);
double dist_to_boundary(const Domain& dom, const double* x);
double ball_region_volume(const Domain& dom, const double* x, double s);

template <typename Derived>
void check_point(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != dom.dim()) {
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match domain dimension " + std::to_string(dom.dim()));
  }
}

template <typename Derived>
Eigen::Vector3d to_coords(const Eigen::MatrixBase<Derived>& x) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (Eigen::Index i = 0; i < x.size(); ++i) c[i] = static_cast<double>(x[i]);
  return c;
}

}  // namespace detail

template <typename Derived>
bool contains(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  detail::check_point(dom, x);
  const Eigen::Vector3d c = detail::to_coords(x);
  return detail::contains(dom, c.data());
}

/// a(x) = dist(x, ∂A) for x ∈ A.
template <typename Derived>
double dist_to_boundary(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  detail::check_point(dom, x);
  const Eigen::Vector3d c = detail::to_coords(x);
  if (!detail::contains(dom, c.data())) {
    throw std::domain_error("dist_to_boundary: point outside domain");
  }
  return detail::dist_to_boundary(dom, c.data());
}

/// x ∈ A^{(-s)}, the set of points whose s-ball lies in A.
template <typename Derived>
bool in_erosion(const Domain& dom, const Eigen::MatrixBase<Derived>& x, double s) {
  if (s < 0) throw std::domain_error("in_erosion: s must be nonnegative");
  return dist_to_boundary(dom, x) >= s;
}

/// λ(A^{(-s)}); zero once s exceeds the inradius.
double erosion_volume(const Domain& dom, double s);

/// (d-1)-measure of the level set {x ∈ A : a(x) = t}, 0 <= t <= inradius.
double level_set_measure(const Domain& dom, double t);

/// Exact λ(B_s(x) ∩ A).
template <typename Derived>
double ball_region_volume(const Domain& dom, const Eigen::MatrixBase<Derived>& x, double s) {
  detail::check_point(dom, x);
  const Eigen::Vector3d c = detail::to_coords(x);
  if (!detail::contains(dom, c.data())) {
    throw std::domain_error("ball_region_volume: point outside domain");
  }
  if (!(s > 0)) throw std::domain_error("ball_region_volume: s must be positive");
  return detail::ball_region_volume(dom, c.data(), s);
}

/// Half-space surrogate (θ_d/2 + g(a(x)/s)) s^d for boundary points with a(x) < s.
template <typename Derived>
double boundary_volume_approx(const Domain& dom, const Eigen::MatrixBase<Derived>& x, double s) {
  const double a = dist_to_boundary(dom, x);
  if (!(s > 0)) throw std::domain_error("boundary_volume_approx: s must be positive");
  if (a > s) {
    throw std::domain_error("boundary_volume_approx: a(x) > s, use the full ball volume");
  }
  const int d = dom.dim();
  return (theta(d) / 2 + g_function(d, a / s)) * std::pow(s, d);
}

/// Area of the disk of radius s about (cx, cy) inside the box [x0,x1] × [y0,y1].
double disk_box_area(double cx, double cy, double s, double x0, double x1, double y0, double y1);

/// Area of the intersection of two disks with radii r1, r2 and centre distance u.
double disk_disk_area(double r1, double r2, double u);

/// Volume of the intersection of two 3-balls with radii r1, r2 and centre distance u.
double ball_ball_volume(double r1, double r2, double u);

}  // namespace rgg
