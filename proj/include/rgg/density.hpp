#pragma once

#include "rgg/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rgg {

enum class DensityKind { Uniform, BoundaryTilt };

struct DensitySpec {
  DensityKind kind = DensityKind::Uniform;
  double beta = 0.0;  // only used by BoundaryTilt

  static DensitySpec uniform() { return {}; }
  static DensitySpec tilt(double beta) { return {DensityKind::BoundaryTilt, beta}; }
  bool operator==(const DensitySpec&) const = default;
};

/// f(x) = normalizer · (1 + beta · a(x) / inradius(A)); beta = 0 is the
/// uniform density. f depends on x only through the boundary distance a(x).
class DensityModel {
 public:
  DensityKind kind() const { return spec_.kind; }
  const DensitySpec& spec() const { return spec_; }
  double beta() const { return spec_.beta; }
  const Domain& domain() const { return dom_; }
  double normalizer() const { return normalizer_; }
  double f0() const { return f0_; }
  double f1() const { return f1_; }
  double fmax() const { return fmax_; }
  bool is_uniform() const { return spec_.kind == DensityKind::Uniform; }

  /// f as a function of the boundary distance a.
  double at_boundary_distance(double a) const {
    return normalizer_ * (1.0 + spec_.beta * a / dom_.inradius());
  }

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& x) const {
    return at_boundary_distance(dist_to_boundary(dom_, x));
  }

 private:
  friend DensityModel make_density(const Domain& dom, const DensitySpec& spec);
  DensityModel(const Domain& dom, const DensitySpec& spec) : dom_(dom), spec_(spec) {}

  Domain dom_;
  DensitySpec spec_;
  double normalizer_ = 0.0;
  double f0_ = 0.0;
  double f1_ = 0.0;
  double fmax_ = 0.0;
};

DensityModel make_density(const Domain& dom, const DensitySpec& spec);

/// Thrown when adaptive quadrature runs out of budget; carries the best
/// estimate reached.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

namespace detail {
double nu_ball(const DensityModel& den, const double* x, double r);
/// ν(B_r(x)) for |x| = u in a disk or ball domain.
double nu_ball_radial(const DensityModel& den, double u, double r);
}  // namespace detail

/// ν(B_r(x)) = ∫_{B_r(x) ∩ A} f dλ.
template <typename Derived>
double nu_ball(const DensityModel& den, const Domain& dom, const Eigen::MatrixBase<Derived>& x, double r) {
  if (!(den.domain() == dom)) throw std::invalid_argument("nu_ball: density was built for another domain");
  detail::check_point(dom, x);
  const Eigen::Vector3d c = detail::to_coords(x);
  if (!detail::contains(dom, c.data())) throw std::domain_error("nu_ball: point outside domain");
  if (!(r > 0)) throw std::domain_error("nu_ball: r must be positive");
  return detail::nu_ball(den, c.data(), r);
}

enum class InputKind { Binomial, Poisson };

/// One realisation of a binomial or Poisson point process; points are the
/// columns of a d × N matrix.
struct PointSample {
  Eigen::MatrixXd points;
  InputKind input_kind = InputKind::Binomial;
  double nominal = 0.0;  // n for Binomial, the mean for Poisson
  std::uint64_t realized_count = 0;
  std::uint64_t seed = 0;

  int dim() const { return static_cast<int>(points.rows()); }
  Eigen::Index size() const { return points.cols(); }
};

PointSample sample_binomial(const Domain& dom, const DensityModel& den, std::uint64_t n, std::uint64_t seed);

/// Draws Z ~ Poisson(mean) from a stream derived from the seed, then Z points
/// exactly as sample_binomial(dom, den, Z, seed) would.
PointSample sample_poisson(const Domain& dom, const DensityModel& den, double mean, std::uint64_t seed);

}  // namespace rgg
