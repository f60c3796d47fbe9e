#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rgg::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    evaluations += o.evaluations;
    return *this;
  }
};

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_depth = 40;
  std::size_t max_evaluations = 2'000'000;
  int initial_panels = 16;
};

namespace detail {

template <class F>
struct SimpsonState {
  const F& f;
  const Options& opt;
  Result& out;
};

template <class F>
double simpson_recurse(SimpsonState<F>& st, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.out.evaluations += 2;
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth >= st.opt.max_depth || st.out.evaluations >= st.opt.max_evaluations ||
      lm <= a || rm >= b) {
    if (std::abs(delta) > 15.0 * tol) st.out.converged = false;
    st.out.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. The tolerance is
/// max(abs_tol, rel_tol · |coarse estimate|), where the coarse estimate comes
/// from composite Simpson on `initial_panels` panels.
template <class F>
Result adaptive_simpson(const F& f, double a, double b, const Options& opt = {}) {
  Result out;
  if (!(b > a)) return out;
  const int panels = std::max(1, opt.initial_panels);
  const double h = (b - a) / panels;
  std::vector<double> fx(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) fx[i] = f(a + 0.5 * h * i);
  out.evaluations += fx.size();
  double coarse = 0.0;
  std::vector<double> whole(panels);
  for (int i = 0; i < panels; ++i) {
    whole[i] = h / 6.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
    coarse += whole[i];
  }
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse)) / panels;
  detail::SimpsonState<F> st{f, opt, out};
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i;
    const double hi = (i + 1 == panels) ? b : lo + h;
    total += detail::simpson_recurse(st, lo, hi, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], whole[i], tol, 0);
  }
  out.value = total;
  return out;
}

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double z_old = z;
        z = z_old - p0 / dp;
        if (std::abs(z - z_old) < 1e-15) break;
      }
      nodes[i] = -z;
      nodes[n - 1 - i] = z;
      weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
      weights[n - 1 - i] = weights[i];
    }
  }

  /// ∫_a^b f using this rule mapped onto [a, b].
  template <class F>
  double integrate(const F& f, double a, double b) const {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(c + h * nodes[i]);
    return h * sum;
  }
};

}  // namespace rgg::quad
