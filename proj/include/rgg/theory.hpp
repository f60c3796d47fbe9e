#pragma once

#include "rgg/density.hpp"
#include "rgg/quadrature.hpp"

#include <limits>
#include <string>

namespace rgg {

/// γ_n = n (θ/λ(A)) r^d − (2 − 2/d)(log n − 1{d≥3} log log n).
double gamma_n(const Domain& dom, double n, double r);

/// Inverse of gamma_n in r.
double radius_for_gamma(const Domain& dom, double n, double gamma);

/// r with n θ r^d = b log n.
double radius_for_b(const Domain& dom, double n, double b);

/// n θ r^d / log n.
double b_hat(const Domain& dom, double n, double r);

struct CriticalValues {
  double b_c = 0.0;
  double b_prime_c = std::numeric_limits<double>::infinity();
};

CriticalValues critical_values(const DensityModel& den, const Domain& dom);

/// c_{d,A} = θ_{d-1}^{-1} (θ/(2 − 2/d))^{1−1/d} σ_A; only defined for d >= 3.
double c_dA(const Domain& dom);

/// Poisson intensity of the connectivity-window limit: e^{-γ} (d = 2) or
/// c_{d,A} e^{-γ/2} (d = 3).
double limit_intensity(const Domain& dom, double gamma);

/// Closed-form uniform-case equivalent of I_n.
double mu_n(const Domain& dom, double n, double r);

/// I_n = n ∫_A exp(−n ν(B_r(x))) ν(dx).
quad::Result I_n(const Domain& dom, const DensityModel& den, double n, double r);

/// Ĩ_n = n ∫_A (1 − ν(B_r(x)))^{n−1} ν(dx), the binomial singleton mean.
quad::Result I_tilde_n(const Domain& dom, const DensityModel& den, double n, double r);

/// Predicted growth exponent of K_n at logarithmic degree rate b:
/// 1 − min(f0 b, 1/d + f1 b / 2).
double exponent_prediction(const DensityModel& den, int d, double b);

enum class Regime { Sparse, Thermodynamic, MildlyDense, Critical, Connectivity };

std::string to_string(Regime regime);

struct RegimeParams {
  double n = 0.0;
  double r = 0.0;
  Domain dom;
  DensityModel den;
  double nrd = 0.0;
  double gamma = 0.0;
  double b_hat = 0.0;
};

RegimeParams make_regime_params(const Domain& dom, const DensityModel& den, double n, double r);

/// Finite-n regime label. The cutoffs are heuristics:
///   degree nθr^d/λ(A) < 0.1                → Sparse
///   degree in [0.1, log log n]             → Thermodynamic
///   otherwise I_n < 0.1 / [0.1, 10] / > 10 → Connectivity / Critical / MildlyDense
Regime classify_regime(const RegimeParams& params, double I_n_value);

struct Predictions {
  double n = 0.0;
  double r = 0.0;
  double nrd = 0.0;
  double gamma = 0.0;
  double b_hat = 0.0;
  double I_n = 0.0;
  double I_tilde_n = 0.0;
  double mu_n = 0.0;
  double c_dA = std::numeric_limits<double>::quiet_NaN();  // NaN when d = 2
  double limit_intensity = 0.0;
  double b_c = 0.0;
  double b_prime_c = std::numeric_limits<double>::infinity();
  double exponent = 0.0;
  Regime regime = Regime::Sparse;
  double quadrature_error = 0.0;
  bool quadrature_converged = true;
};

Predictions predict(const Domain& dom, const DensityModel& den, double n, double r);

/// ∫_{A∖A^{(-r)}} Ψ(a(y)) dy evaluated exactly through the level sets of a.
template <class Psi>
quad::Result moat_integral(const Domain& dom, const Psi& psi, double r) {
  return quad::adaptive_simpson([&](double s) { return psi(s) * level_set_measure(dom, s); }, 0.0,
                                std::min(r, dom.inradius()));
}

/// Flat-boundary approximation |∂A| ∫_0^r Ψ(s) ds of moat_integral.
template <class Psi>
quad::Result moat_integral_flat(const Domain& dom, const Psi& psi, double r) {
  auto res = quad::adaptive_simpson(psi, 0.0, std::min(r, dom.inradius()));
  res.value *= dom.boundary_measure();
  res.error *= dom.boundary_measure();
  return res;
}

}  // namespace rgg
