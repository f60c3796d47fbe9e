#include "rgg/density.hpp"

#include "rgg/quadrature.hpp"
#include "rgg/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace rgg {

namespace {

constexpr double kPi = std::numbers::pi;

// ∫_A a(x) dλ(x) for each supported domain.
double boundary_distance_moment(const Domain& dom) {
  const double rho = dom.radius();
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      return 1.0 / 6.0;
    case DomainKind::Disk2:
      return kPi * rho * rho * rho / 3.0;
    case DomainKind::Ball3:
      return kPi * rho * rho * rho * rho / 3.0;
  }
  return 0.0;
}

// Disk domain, non-uniform f: ∫ f(u') · |{|y| = u'} ∩ B_r(x)| du'.
double nu_disk_shells(const DensityModel& den, double u, double r) {
  const double rho = den.domain().radius();
  const double c = den.normalizer();
  const double A0 = c * (1.0 + den.beta());
  const double A1 = -c * den.beta() / rho;

  const double full = std::min(rho, std::max(0.0, r - u));
  double nu = 2.0 * kPi * (A0 * full * full / 2.0 + A1 * full * full * full / 3.0);

  const double lo = std::abs(u - r);
  const double hi = std::min(rho, u + r);
  if (u > 0 && hi > lo) {
    const double span = hi - lo;
    auto integrand = [&](double tau) {
      const double w = lo + 0.5 * span * (1.0 - std::cos(tau));
      if (w <= 0) return 0.0;
      const double cphi = std::clamp((w * w + u * u - r * r) / (2.0 * u * w), -1.0, 1.0);
      return (A0 + A1 * w) * 2.0 * w * std::acos(cphi) * 0.5 * span * std::sin(tau);
    };
    quad::Options opt;
    opt.rel_tol = 1e-10;
    opt.max_evaluations = 200'000;
    const auto res = quad::adaptive_simpson(integrand, 0.0, kPi, opt);
    if (!res.converged) throw QuadratureError("nu_ball: shell quadrature did not converge", nu + res.value, res.error);
    nu += res.value;
  }
  return nu;
}

// Ball domain, non-uniform f: the shell integrand is polynomial, so this is exact.
double nu_ball_shells(const DensityModel& den, double u, double r) {
  const double rho = den.domain().radius();
  const double c = den.normalizer();
  const double A0 = c * (1.0 + den.beta());
  const double A1 = -c * den.beta() / rho;

  const double full = std::min(rho, std::max(0.0, r - u));
  double nu = 4.0 * kPi * (A0 * std::pow(full, 3) / 3.0 + A1 * std::pow(full, 4) / 4.0);

  const double lo = std::abs(u - r);
  const double hi = std::min(rho, u + r);
  if (u > 1e-14 * r && hi > lo) {
    // (A0 + A1 w) w (q0 + q1 w - w^2) · π / u
    const double q0 = r * r - u * u;
    const double q1 = 2.0 * u;
    const std::array<double, 5> p = {0.0, A0 * q0, A0 * q1 + A1 * q0, -A0 + A1 * q1, -A1};
    auto antiderivative = [&](double w) {
      double s = 0.0;
      for (int k = 4; k >= 1; --k) s = (s + p[k] / (k + 1)) * w;
      return s * w;
    };
    nu += kPi / u * (antiderivative(hi) - antiderivative(lo));
  }
  return nu;
}

// Square domain, non-uniform f: polar quadrature about x. Along each ray a(·)
// is the minimum of four linear functions, so the radial integral is exact.
double nu_square_polar(const DensityModel& den, const double* x, double r) {
  const double c = den.normalizer();
  const double kappa = den.beta() / den.domain().inradius();

  auto radial = [&](double phi) {
    const double ex = std::cos(phi);
    const double ey = std::sin(phi);
    double exit = r;
    if (ex > 0) exit = std::min(exit, (1.0 - x[0]) / ex);
    if (ex < 0) exit = std::min(exit, -x[0] / ex);
    if (ey > 0) exit = std::min(exit, (1.0 - x[1]) / ey);
    if (ey < 0) exit = std::min(exit, -x[1] / ey);
    exit = std::max(exit, 0.0);
    const std::array<double, 4> v0 = {x[0], 1.0 - x[0], x[1], 1.0 - x[1]};
    const std::array<double, 4> k = {ex, -ex, ey, -ey};

    std::array<double, 8> cuts{};  // 0, at most six pairwise crossings, exit
    std::size_t ncut = 0;
    cuts[ncut++] = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (k[i] == k[j]) continue;
        const double s = (v0[j] - v0[i]) / (k[i] - k[j]);
        if (s > 0 && s < exit) cuts[ncut++] = s;
      }
    }
    cuts[ncut++] = exit;
    std::sort(cuts.begin(), cuts.begin() + ncut);

    double total = 0.0;
    for (std::size_t m = 0; m + 1 < ncut; ++m) {
      const double s0 = cuts[m];
      const double s1 = cuts[m + 1];
      if (s1 <= s0) continue;
      const double mid = 0.5 * (s0 + s1);
      int best = 0;
      for (int i = 1; i < 4; ++i) {
        if (v0[i] + k[i] * mid < v0[best] + k[best] * mid) best = i;
      }
      // ∫ c (1 + kappa (v + k s)) s ds
      const double alpha = c * (1.0 + kappa * v0[best]);
      const double slope = c * kappa * k[best];
      auto F = [&](double s) { return alpha * s * s / 2.0 + slope * s * s * s / 3.0; };
      total += F(s1) - F(s0);
    }
    return total;
  };

  // The radial integral is analytic in phi between the directions of the
  // corners, side midpoints and centre, and the directions where the r-circle
  // meets a wall or a medial line; integrate piecewise between those.
  std::vector<double> breaks = {0.0, 2.0 * kPi};
  auto add_direction = [&](double px, double py) {
    const double dx = px - x[0], dy = py - x[1];
    if (dx == 0 && dy == 0) return;
    double a = std::atan2(dy, dx);
    if (a < 0) a += 2.0 * kPi;
    breaks.push_back(a);
  };
  for (double px : {0.0, 0.5, 1.0}) {
    for (double py : {0.0, 0.5, 1.0}) add_direction(px, py);
  }
  const double h = std::numbers::sqrt2 / 2.0;
  const std::array<std::array<double, 3>, 8> lines = {{{1, 0, 0},
                                                        {1, 0, 1},
                                                        {0, 1, 0},
                                                        {0, 1, 1},
                                                        {1, 0, 0.5},
                                                        {0, 1, 0.5},
                                                        {h, -h, 0},
                                                        {h, h, h}}};
  for (const auto& [nx, ny, off] : lines) {
    const double delta = off - (nx * x[0] + ny * x[1]);
    if (std::abs(delta) > r) continue;
    const double t = std::sqrt(r * r - delta * delta);
    add_direction(x[0] + delta * nx - t * ny, x[1] + delta * ny + t * nx);
    add_direction(x[0] + delta * nx + t * ny, x[1] + delta * ny - t * nx);
  }
  std::sort(breaks.begin(), breaks.end());

  // Gauss–Legendre never evaluates a piece endpoint, where rays tangent to a
  // wall take the value from the wrong side.
  static const quad::GaussLegendre rule(16);
  const double tol = 1e-12 * c * r * r;
  bool converged = true;
  auto piece = [&](auto&& self, double a, double b, double whole, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double left = rule.integrate(radial, a, m);
    const double right = rule.integrate(radial, m, b);
    if (std::abs(left + right - whole) <= tol) return left + right;
    if (depth >= 30) {
      converged = false;
      return left + right;
    }
    return self(self, a, m, left, depth + 1) + self(self, m, b, right, depth + 1);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (b > a) total += piece(piece, a, b, rule.integrate(radial, a, b), 0);
  }
  if (!converged) throw QuadratureError("nu_ball: polar quadrature did not converge", total, tol);
  return total;
}

}  // namespace

DensityModel make_density(const Domain& dom, const DensitySpec& spec) {
  if (spec.kind == DensityKind::BoundaryTilt && !(spec.beta > -1.0)) {
    throw std::invalid_argument("make_density: tilt beta must exceed -1");
  }
  DensitySpec s = spec;
  if (s.kind == DensityKind::Uniform) s.beta = 0.0;
  DensityModel den(dom, s);

  den.normalizer_ = 1.0 / (dom.volume() + s.beta / dom.inradius() * boundary_distance_moment(dom));
  const double at_boundary = den.normalizer_;
  const double at_centre = den.normalizer_ * (1.0 + s.beta);
  den.f1_ = at_boundary;
  den.f0_ = std::min(at_boundary, at_centre);
  den.fmax_ = std::max(at_boundary, at_centre);

  // ∫_A f dλ = ∫_0^{inradius} f(t) |{a = t}| dt; the integrand is a polynomial.
  const quad::GaussLegendre rule(8);
  const double mass = rule.integrate(
      [&](double t) { return den.at_boundary_distance(t) * level_set_measure(dom, t); }, 0.0, dom.inradius());
  if (std::abs(mass - 1.0) > 1e-6) throw std::logic_error("make_density: density does not integrate to one");
  return den;
}

namespace detail {

double nu_ball_radial(const DensityModel& den, double u, double r) {
  const Domain& dom = den.domain();
  if (den.is_uniform()) {
    const double v = dom.dim() == 2 ? disk_disk_area(r, dom.radius(), u) : ball_ball_volume(r, dom.radius(), u);
    return std::clamp(den.f0() * v, 0.0, 1.0);
  }
  const double nu = dom.dim() == 2 ? nu_disk_shells(den, u, r) : nu_ball_shells(den, u, r);
  return std::clamp(nu, 0.0, 1.0);
}

double nu_ball(const DensityModel& den, const double* x, double r) {
  const Domain& dom = den.domain();
  if (den.is_uniform()) return std::clamp(den.f0() * ball_region_volume(dom, x, r), 0.0, 1.0);
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      return std::clamp(nu_square_polar(den, x, r), 0.0, 1.0);
    case DomainKind::Disk2:
      return nu_ball_radial(den, std::hypot(x[0], x[1]), r);
    case DomainKind::Ball3:
      return nu_ball_radial(den, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), r);
  }
  return 0.0;
}

}  // namespace detail

namespace {

void fill_points(const Domain& dom, const DensityModel& den, Eigen::MatrixXd& pts, Rng& rng) {
  const int d = dom.dim();
  const Eigen::VectorXd lo = dom.box_lo();
  const Eigen::VectorXd span = dom.box_hi() - lo;
  const bool uniform = den.is_uniform();
  const double fmax = den.fmax();
  double x[3] = {0.0, 0.0, 0.0};
  for (Eigen::Index j = 0; j < pts.cols();) {
    for (int i = 0; i < d; ++i) x[i] = lo[i] + span[i] * rng.uniform();
    if (!detail::contains(dom, x)) continue;
    if (!uniform) {
      const double f = den.at_boundary_distance(detail::dist_to_boundary(dom, x));
      if (rng.uniform() * fmax > f) continue;
    }
    for (int i = 0; i < d; ++i) pts(i, j) = x[i];
    ++j;
  }
}

}  // namespace

PointSample sample_binomial(const Domain& dom, const DensityModel& den, std::uint64_t n, std::uint64_t seed) {
  PointSample s;
  s.points.resize(dom.dim(), static_cast<Eigen::Index>(n));
  s.input_kind = InputKind::Binomial;
  s.nominal = static_cast<double>(n);
  s.realized_count = n;
  s.seed = seed;
  Rng rng(seed);
  fill_points(dom, den, s.points, rng);
  return s;
}

PointSample sample_poisson(const Domain& dom, const DensityModel& den, double mean, std::uint64_t seed) {
  if (!(mean > 0)) throw std::invalid_argument("sample_poisson: mean must be positive");
  Rng count_rng(splitmix64(seed ^ 0x6a09e667f3bcc909ULL));
  const std::uint64_t z = poisson_variate(count_rng, mean);
  PointSample s = sample_binomial(dom, den, z, seed);
  s.input_kind = InputKind::Poisson;
  s.nominal = mean;
  return s;
}

}  // namespace rgg
