#include "rgg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rgg {

namespace {

constexpr double kPi = std::numbers::pi;

double log_term(int d, double n) {
  const double L = std::log(n);
  return (2.0 - 2.0 / d) * (d >= 3 ? L - std::log(L) : L);
}

void check_nd(int d, double n) {
  if (d >= 3 && !(n > std::numbers::e)) throw std::domain_error("gamma_n: need n > e when d >= 3");
  if (!(n > 0)) throw std::domain_error("gamma_n: n must be positive");
}

// exp(−n ν) for I_n, (1 − ν)^{n−1} for Ĩ_n.
struct SingletonKernel {
  double n;
  bool binomial;
  double operator()(double nu) const {
    if (!binomial) return std::exp(-n * nu);
    if (nu >= 1.0) return n > 1.0 ? 0.0 : 1.0;
    return std::exp((n - 1.0) * std::log1p(-nu));
  }
};

constexpr double kRelTol = 1e-9;

quad::Options outer_options() {
  quad::Options opt;
  opt.rel_tol = kRelTol;
  opt.max_evaluations = 2'000'000;
  return opt;
}

// Uniform density on the unit square with r < 1/2: bulk, four edge strips
// (one-sided cut, depends only on the distance to the edge) and four corner
// squares [0,r]^2 integrated in polar coordinates about the corner.
quad::Result square_uniform(const Domain& dom, const DensityModel& den, const SingletonKernel& h, double r) {
  const double n = h.n;
  const double f0 = den.f0();
  const double r2 = r * r;
  quad::Result total;
  total.value = n * f0 * erosion_volume(dom, r) * h(f0 * kPi * r2);

  auto edge = [&](double t) {
    const double s = std::clamp(t / r, 0.0, 1.0);
    return h(f0 * r2 * (kPi / 2.0 + g_function(2, s)));
  };
  quad::Result e = quad::adaptive_simpson(edge, 0.0, r, outer_options());
  const double edge_scale = 4.0 * (1.0 - 2.0 * r) * n * f0;
  e.value *= edge_scale;
  e.error *= edge_scale;
  total += e;

  auto corner_value = [&](double x, double y) {
    const double p[2] = {x, y};
    return h(f0 * detail::ball_region_volume(dom, p, r));
  };
  // The integrand can only kink on the arc |p| = r, which separates the two pieces.
  auto corner = [&](const quad::GaussLegendre& rule) {
    double inner = 0.0;
    inner += rule.integrate(
        [&](double phi) {
          return rule.integrate(
              [&](double rho) { return rho * corner_value(rho * std::cos(phi), rho * std::sin(phi)); }, 0.0, r);
        },
        0.0, kPi / 2.0);
    inner += 2.0 * rule.integrate(
                       [&](double phi) {
                         return rule.integrate(
                             [&](double rho) {
                               return rho * corner_value(rho * std::cos(phi), rho * std::sin(phi));
                             },
                             r, r / std::cos(phi));
                       },
                       0.0, kPi / 4.0);
    return inner;
  };
  static const quad::GaussLegendre rule64(64);
  static const quad::GaussLegendre rule48(48);
  const double c64 = corner(rule64);
  const double c48 = corner(rule48);
  const double corner_scale = 4.0 * n * f0;
  total.value += corner_scale * c64;
  total.error += corner_scale * std::abs(c64 - c48);
  total.evaluations += 2 * (64 * 64 + 48 * 48) * 2;
  return total;
}

// Any density on the unit square: by the dihedral symmetry of both A and f the
// integral is 8 times the integral over {0 <= y <= x <= 1/2}, where a(x,y) = y.
quad::Result square_general(const DensityModel& den, const SingletonKernel& h, double r) {
  const double n = h.n;
  quad::Options inner_opt = outer_options();
  inner_opt.rel_tol = 1e-8;
  quad::Options outer_opt = outer_options();
  outer_opt.rel_tol = 1e-7;
  quad::Result acc;  // inner-quadrature bookkeeping

  auto inner = [&](double y) {
    const double fy = den.at_boundary_distance(y);
    auto along_x = [&](double x) {
      const double p[2] = {x, y};
      return h(detail::nu_ball(den, p, r));
    };
    quad::Result res;
    double lo = y;
    for (double cut : {r, 0.5}) {
      if (cut <= lo) continue;
      res += quad::adaptive_simpson(along_x, lo, std::min(cut, 0.5), inner_opt);
      lo = cut;
      if (lo >= 0.5) break;
    }
    acc.converged = acc.converged && res.converged;
    acc.evaluations += res.evaluations;
    acc.error = std::max(acc.error, std::abs(res.error / std::max(std::abs(res.value), 1e-300)));
    return fy * res.value;
  };

  quad::Result total;
  double lo = 0.0;
  for (double cut : {std::min(r, 0.5), 0.5}) {
    if (cut <= lo) continue;
    total += quad::adaptive_simpson(inner, lo, cut, outer_opt);
    lo = cut;
  }
  total.value *= 8.0 * n;
  total.error = 8.0 * n * total.error + acc.error * std::abs(total.value);
  total.converged = total.converged && acc.converged;
  total.evaluations += acc.evaluations;
  return total;
}

// Disk or ball: ν(B_r(x)) and f depend only on u = |x|, so I_n reduces to a
// radial integral. For the uniform density the bulk |x| <= ρ − r is exact.
quad::Result radial(const Domain& dom, const DensityModel& den, const SingletonKernel& h, double r) {
  const double n = h.n;
  const double rho = dom.radius();
  const int d = dom.dim();
  auto shell = [&](double u) { return d == 2 ? 2.0 * kPi * u : 4.0 * kPi * u * u; };
  auto integrand = [&](double u) {
    const double f = den.at_boundary_distance(rho - u);
    return f * shell(u) * h(detail::nu_ball_radial(den, u, r));
  };

  quad::Result total;
  const double split = std::max(0.0, rho - r);
  if (den.is_uniform()) {
    if (split > 0) {
      const double bulk_volume = d == 2 ? kPi * split * split : 4.0 * kPi / 3.0 * split * split * split;
      total.value = den.f0() * bulk_volume * h(den.f0() * theta(d) * std::pow(r, d));
    }
  } else if (split > 0) {
    total += quad::adaptive_simpson(integrand, 0.0, split, outer_options());
  }
  total += quad::adaptive_simpson(integrand, split, rho, outer_options());
  total.value *= n;
  total.error *= n;
  return total;
}

quad::Result singleton_integral(const Domain& dom, const DensityModel& den, const SingletonKernel& h, double r) {
  if (!(den.domain() == dom)) throw std::invalid_argument("I_n: density was built for another domain");
  if (!(h.n > 0) || !(r > 0)) throw std::domain_error("I_n: n and r must be positive");
  switch (dom.kind()) {
    case DomainKind::UnitSquare2:
      if (den.is_uniform() && r < 0.5) return square_uniform(dom, den, h, r);
      return square_general(den, h, r);
    case DomainKind::Disk2:
    case DomainKind::Ball3:
      return radial(dom, den, h, r);
  }
  return {};
}

}  // namespace

double gamma_n(const Domain& dom, double n, double r) {
  const int d = dom.dim();
  check_nd(d, n);
  if (!(r > 0)) throw std::domain_error("gamma_n: r must be positive");
  return n * theta(d) / dom.volume() * std::pow(r, d) - log_term(d, n);
}

double radius_for_gamma(const Domain& dom, double n, double gamma) {
  const int d = dom.dim();
  check_nd(d, n);
  const double bracket = gamma + log_term(d, n);
  if (!(bracket > 0)) throw std::domain_error("radius_for_gamma: gamma too negative, r^d would be nonpositive");
  return std::pow(bracket * dom.volume() / (n * theta(d)), 1.0 / d);
}

double radius_for_b(const Domain& dom, double n, double b) {
  if (!(b > 0)) throw std::domain_error("radius_for_b: b must be positive");
  if (!(n > 1)) throw std::domain_error("radius_for_b: n must exceed 1");
  const int d = dom.dim();
  return std::pow(b * std::log(n) / (n * theta(d)), 1.0 / d);
}

double b_hat(const Domain& dom, double n, double r) {
  if (!(n > 1)) throw std::domain_error("b_hat: n must exceed 1");
  const int d = dom.dim();
  return n * theta(d) * std::pow(r, d) / std::log(n);
}

CriticalValues critical_values(const DensityModel& den, const Domain& dom) {
  const int d = dom.dim();
  CriticalValues cv;
  cv.b_c = std::max(1.0 / den.f0(), (2.0 - 2.0 / d) / den.f1());
  if (den.f0() > den.f1() / 2.0) cv.b_prime_c = 1.0 / (d * (den.f0() - den.f1() / 2.0));
  return cv;
}

double c_dA(const Domain& dom) {
  const int d = dom.dim();
  if (d < 3) throw std::domain_error("c_dA: only defined for d >= 3");
  return std::pow(theta(d) / (2.0 - 2.0 / d), 1.0 - 1.0 / d) * dom.iso_ratio() / theta_lower(d);
}

double limit_intensity(const Domain& dom, double gamma) {
  if (!std::isfinite(gamma)) throw std::domain_error("limit_intensity: gamma must be finite");
  if (dom.dim() == 2) return std::exp(-gamma);
  return c_dA(dom) * std::exp(-gamma / 2.0);
}

double mu_n(const Domain& dom, double n, double r) {
  if (!(n > 0) || !(r > 0)) throw std::domain_error("mu_n: n and r must be positive");
  const int d = dom.dim();
  const double e = n * theta(d) * std::pow(r, d) / dom.volume();
  double mu = n * std::exp(-e);
  if (d >= 3) mu += dom.boundary_measure() * std::pow(r, 1.0 - d) * std::exp(-e / 2.0) / theta_lower(d);
  return mu;
}

quad::Result I_n(const Domain& dom, const DensityModel& den, double n, double r) {
  return singleton_integral(dom, den, SingletonKernel{n, false}, r);
}

quad::Result I_tilde_n(const Domain& dom, const DensityModel& den, double n, double r) {
  if (!(n >= 1) || n != std::floor(n)) throw std::domain_error("I_tilde_n: n must be a positive integer");
  return singleton_integral(dom, den, SingletonKernel{n, true}, r);
}

double exponent_prediction(const DensityModel& den, int d, double b) {
  if (!(b >= 0)) throw std::domain_error("exponent_prediction: b must be nonnegative");
  return 1.0 - std::min(den.f0() * b, 1.0 / d + den.f1() * b / 2.0);
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Sparse:
      return "Sparse";
    case Regime::Thermodynamic:
      return "Thermodynamic";
    case Regime::MildlyDense:
      return "MildlyDense";
    case Regime::Critical:
      return "Critical";
    case Regime::Connectivity:
      return "Connectivity";
  }
  return "?";
}

RegimeParams make_regime_params(const Domain& dom, const DensityModel& den, double n, double r) {
  if (!(n >= 1) || !(r > 0)) throw std::domain_error("regime: need n >= 1 and r > 0");
  const int d = dom.dim();
  RegimeParams p{n, r, dom, den, 0.0, 0.0, 0.0};
  p.nrd = n * std::pow(r, d);
  p.gamma = (d >= 3 && n <= std::numbers::e) ? std::numeric_limits<double>::quiet_NaN() : gamma_n(dom, n, r);
  p.b_hat = n > 1 ? b_hat(dom, n, r) : std::numeric_limits<double>::infinity();
  return p;
}

Regime classify_regime(const RegimeParams& p, double I_n_value) {
  const int d = p.dom.dim();
  const double degree = p.n * theta(d) * std::pow(p.r, d) / p.dom.volume();
  const double loglog = p.n > std::numbers::e ? std::log(std::log(p.n)) : 0.0;
  if (degree < 0.1) return Regime::Sparse;
  if (degree <= std::max(0.1, loglog)) return Regime::Thermodynamic;
  if (I_n_value < 0.1) return Regime::Connectivity;
  if (I_n_value <= 10.0) return Regime::Critical;
  return Regime::MildlyDense;
}

Predictions predict(const Domain& dom, const DensityModel& den, double n, double r) {
  const RegimeParams params = make_regime_params(dom, den, n, r);
  Predictions p;
  p.n = n;
  p.r = r;
  p.nrd = params.nrd;
  p.gamma = params.gamma;
  p.b_hat = params.b_hat;
  const quad::Result in = I_n(dom, den, n, r);
  p.I_n = in.value;
  p.quadrature_error = in.error;
  p.quadrature_converged = in.converged;
  {
    const double n_int = std::max(1.0, std::round(n));
    const quad::Result it = I_tilde_n(dom, den, n_int, r);
    p.I_tilde_n = it.value;
    p.quadrature_error = std::max(p.quadrature_error, it.error);
    p.quadrature_converged = p.quadrature_converged && it.converged;
  }
  p.mu_n = mu_n(dom, n, r);
  if (dom.dim() >= 3) p.c_dA = c_dA(dom);
  p.limit_intensity = std::isfinite(p.gamma) ? limit_intensity(dom, p.gamma) : std::numeric_limits<double>::quiet_NaN();
  const CriticalValues cv = critical_values(den, dom);
  p.b_c = cv.b_c;
  p.b_prime_c = cv.b_prime_c;
  p.exponent = std::isfinite(p.b_hat) ? exponent_prediction(den, dom.dim(), p.b_hat) : 0.0;
  p.regime = classify_regime(params, p.I_n);
  return p;
}

}  // namespace rgg
