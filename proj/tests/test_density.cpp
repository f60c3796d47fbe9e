#include "rgg/density.hpp"
#include "rgg/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace rgg;
using std::numbers::pi;

namespace {

// χ² quantiles at 0.999 for 99 and 9 degrees of freedom.
constexpr double kChi2_99 = 148.230;
constexpr double kChi2_9 = 27.877;

// Wilson–Hilferty approximation of the 0.999 χ² quantile.
double chi2_999(int dof) {
  const double k = dof;
  const double z = 3.0902;
  return k * std::pow(1 - 2 / (9 * k) + z * std::sqrt(2 / (9 * k)), 3);
}

struct McEstimate {
  double value;
  double se;
};

// ν(B_r(x)) = E[f(Y) 1{Y ∈ B_r(x) ∩ A}] · (2r)^d for Y uniform on the bounding cube.
McEstimate mc_nu(const DensityModel& den, const Eigen::VectorXd& x, double r, std::uint64_t samples, std::uint64_t seed) {
  const Domain& dom = den.domain();
  const int d = dom.dim();
  Rng rng(seed);
  Eigen::VectorXd y(d);
  double sum = 0, sq = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    double q = 0;
    for (int i = 0; i < d; ++i) {
      const double u = (2 * rng.uniform() - 1) * r;
      y[i] = x[i] + u;
      q += u * u;
    }
    if (q <= r * r && contains(dom, y)) {
      const double f = den(y);
      sum += f;
      sq += f * f;
    }
  }
  const double N = double(samples);
  const double mean = sum / N;
  const double var = sq / N - mean * mean;
  const double box = std::pow(2 * r, d);
  return {box * mean, box * std::sqrt(var / N)};
}

// ν(B_r(x)) by midpoint integration along rays from x (2-D convex domains).
double polar_nu(const DensityModel& den, const Eigen::Vector2d& x, double r) {
  const Domain& dom = den.domain();
  const int m = 3000;
  const int mt = 400;
  double total = 0;
  for (int k = 0; k < m; ++k) {
    const double phi = 2 * pi * (k + 0.5) / m;
    const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
    double exit = r;
    if (dom.kind() == DomainKind::UnitSquare2) {
      for (int i = 0; i < 2; ++i) {
        if (u[i] > 0) exit = std::min(exit, (1 - x[i]) / u[i]);
        if (u[i] < 0) exit = std::min(exit, -x[i] / u[i]);
      }
    } else {
      const double b = x.dot(u), c = x.squaredNorm() - dom.radius() * dom.radius();
      exit = std::min(exit, -b + std::sqrt(std::max(0.0, b * b - c)));
    }
    double ray = 0;
    for (int j = 0; j < mt; ++j) {
      const double t = exit * (j + 0.5) / mt;
      Eigen::Vector2d y = x + t * u;
      if (!contains(dom, y)) y *= (1 - 1e-15);
      ray += den.at_boundary_distance(detail::dist_to_boundary(dom, detail::to_coords(y).data())) * t;
    }
    total += ray * exit / mt;
  }
  return total * 2 * pi / m;
}

Eigen::VectorXd random_point(const Domain& dom, Rng& rng) {
  Eigen::VectorXd lo = dom.box_lo(), hi = dom.box_hi(), x(dom.dim());
  do {
    for (int i = 0; i < dom.dim(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
  } while (!contains(dom, x));
  return x;
}

// Closed form of ∫_{t1}^{t2} (1 + β t/ρ_in) m(t) dt with m the level-set measure.
double tilt_level_mass(const DensityModel& den, double t1, double t2) {
  const Domain& dom = den.domain();
  const double rho = dom.inradius();
  const double beta = den.beta();
  auto F = [&](double t) {
    switch (dom.kind()) {
      case DomainKind::UnitSquare2:  // m = 4(1 − 2t)
        return 4 * (t - t * t) + beta / rho * 4 * (t * t / 2 - 2 * t * t * t / 3);
      case DomainKind::Disk2:  // m = 2π(ρ − t)
        return 2 * pi * (rho * t - t * t / 2) + beta / rho * 2 * pi * (rho * t * t / 2 - t * t * t / 3);
      case DomainKind::Ball3:  // m = 4π(ρ − t)²
        return 4 * pi * (rho * rho * t - rho * t * t + t * t * t / 3) +
               beta / rho * 4 * pi * (rho * rho * t * t / 2 - 2 * rho * t * t * t / 3 + t * t * t * t / 4);
    }
    return 0.0;
  };
  return den.normalizer() * (F(t2) - F(t1));
}

}  // namespace

TEST_CASE("make_density uniform") {
  const DensityModel sq = make_density(Domain::unit_square(), DensitySpec::uniform());
  CHECK(sq.f0() == 1.0);
  CHECK(sq.f1() == 1.0);
  CHECK(sq.fmax() == 1.0);
  const DensityModel ball = make_density(Domain::ball(1), DensitySpec::uniform());
  CHECK(ball.f0() == doctest::Approx(0.2387324).epsilon(1e-7));
  CHECK(ball.f1() == ball.f0());
  CHECK(ball.fmax() == ball.f0());
}

TEST_CASE("make_density boundary tilt") {
  const DensityModel disk = make_density(Domain::disk(1), DensitySpec::tilt(1.0));
  CHECK(disk.normalizer() == doctest::Approx(3 / (4 * pi)).epsilon(1e-12));
  CHECK(disk.f1() == doctest::Approx(3 / (4 * pi)));
  CHECK(disk.f0() == disk.f1());
  CHECK(disk.fmax() == doctest::Approx(3 / (2 * pi)));

  // ∫ a over the square is 1/6, inradius 1/2.
  const DensityModel sq = make_density(Domain::unit_square(), DensitySpec::tilt(-0.6));
  CHECK(sq.normalizer() == doctest::Approx(1 / (1 - 0.6 / 3)).epsilon(1e-12));
  CHECK(sq.f0() == doctest::Approx(sq.normalizer() * 0.4));
  CHECK(sq.f1() == doctest::Approx(sq.normalizer()));
  CHECK(sq.fmax() == doctest::Approx(sq.normalizer()));
  CHECK(sq.f0() > 0);
  CHECK(sq.f1() >= sq.f0());
  CHECK(sq.fmax() >= sq.f1());

  CHECK_THROWS_AS(make_density(Domain::unit_square(), DensitySpec::tilt(-1.0)), std::invalid_argument);
  CHECK_THROWS(make_density(Domain::unit_square(), DensitySpec::tilt(-3.0)));
}

TEST_CASE("normalisation by an independent midpoint grid") {
  for (double beta : {-0.9, -0.3, 0.7, 2.5}) {
    const DensityModel sq = make_density(Domain::unit_square(), DensitySpec::tilt(beta));
    const int m = 1000;
    double sum = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const Eigen::Vector2d x((i + 0.5) / m, (j + 0.5) / m);
        sum += sq(x);
      }
    }
    CHECK(sum / (double(m) * m) == doctest::Approx(1.0).epsilon(1e-6));
  }
  for (const Domain& dom : {Domain::disk(1.3), Domain::ball(0.8)}) {
    const DensityModel den = make_density(dom, DensitySpec::tilt(1.5));
    CHECK(tilt_level_mass(den, 0, dom.inradius()) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("nu_ball uniform") {
  const Domain sq = Domain::unit_square();
  const DensityModel den = make_density(sq, DensitySpec::uniform());
  CHECK(nu_ball(den, sq, Eigen::Vector2d(0.5, 0.5), 0.1) == doctest::Approx(0.0314159).epsilon(1e-6));
  CHECK(nu_ball(den, sq, Eigen::Vector2d(0, 0), 0.1) == doctest::Approx(0.0078540).epsilon(1e-5));
  Rng rng(3);
  for (const Domain& dom : {Domain::unit_square(), Domain::disk(2), Domain::ball(1)}) {
    const DensityModel u = make_density(dom, DensitySpec::uniform());
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd x = random_point(dom, rng);
      const double r = 0.5 * dom.diameter() * rng.uniform() + 1e-3;
      CHECK(nu_ball(u, dom, x, r) * dom.volume() == doctest::Approx(ball_region_volume(dom, x, r)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(nu_ball(den, Domain::disk(1), Eigen::Vector2d(0, 0), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(nu_ball(den, sq, Eigen::Vector2d(0.5, 0.5), -0.1), std::domain_error);
}

TEST_CASE("nu_ball tilt against a 10^7-sample Monte Carlo") {
  const Domain disk = Domain::disk(1);
  const DensityModel den = make_density(disk, DensitySpec::tilt(1.0));
  const Eigen::Vector2d c(0, 0);
  const double v = nu_ball(den, disk, c, 0.2);
  const McEstimate mc = mc_nu(den, c, 0.2, 10'000'000, 17);
  CHECK(std::abs(v - mc.value) <= 4 * mc.se);
  // Centre ball: c ∫_0^{0.2} (1 + 1 − u) 2πu du.
  const double exact = 3 / (4 * pi) * 2 * pi * (0.04 - 0.008 / 3);
  CHECK(v == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("nu_ball tilt against ray integration and Monte Carlo") {
  Rng rng(8);
  for (const Domain& dom : {Domain::unit_square(), Domain::disk(1.2)}) {
    for (double beta : {-0.7, 1.8}) {
      const DensityModel den = make_density(dom, DensitySpec::tilt(beta));
      for (int k = 0; k < 8; ++k) {
        const Eigen::Vector2d x = random_point(dom, rng);
        const double r = dom.diameter() * (0.02 + 0.5 * rng.uniform());
        CHECK(nu_ball(den, dom, x, r) == doctest::Approx(polar_nu(den, x, r)).epsilon(2e-5));
      }
    }
  }
  const Domain ball = Domain::ball(1);
  for (double beta : {-0.5, 2.0}) {
    const DensityModel den = make_density(ball, DensitySpec::tilt(beta));
    for (int k = 0; k < 6; ++k) {
      const Eigen::VectorXd x = random_point(ball, rng);
      const double r = 0.05 + 1.2 * rng.uniform();
      const McEstimate mc = mc_nu(den, x, r, 1'000'000, rng.next());
      CHECK(std::abs(nu_ball(den, ball, x, r) - mc.value) <= 4 * mc.se + 1e-12);
    }
  }
}

TEST_CASE("nu_ball bounds and monotone ladders") {
  Rng rng(31);
  for (const Domain& dom : {Domain::unit_square(), Domain::disk(1), Domain::ball(1.4)}) {
    for (double beta : {-0.8, 0.0, 1.0, 3.0}) {
      const DensityModel den = make_density(dom, beta == 0 ? DensitySpec::uniform() : DensitySpec::tilt(beta));
      for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd x = random_point(dom, rng);
        double prev = 0;
        for (double r = 0.005 * dom.diameter(); r < 1.1 * dom.diameter(); r *= 1.5) {
          const double v = nu_ball(den, dom, x, r);
          CHECK(v >= 0);
          CHECK(v <= 1 + 1e-12);
          CHECK(v <= den.fmax() * theta(dom.dim()) * std::pow(r, dom.dim()) * (1 + 1e-9));
          CHECK(v >= den.f0() * ball_region_volume(dom, x, r) * (1 - 1e-9));
          CHECK(v >= prev * (1 - 1e-9));
          prev = v;
        }
        CHECK(nu_ball(den, dom, x, dom.diameter()) == doctest::Approx(1.0).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("sample_binomial basics") {
  const Domain sq = Domain::unit_square();
  const DensityModel den = make_density(sq, DensitySpec::uniform());
  const PointSample empty = sample_binomial(sq, den, 0, 1);
  CHECK(empty.size() == 0);
  CHECK(empty.realized_count == 0);
  const PointSample a = sample_binomial(sq, den, 1000, 42);
  const PointSample b = sample_binomial(sq, den, 1000, 42);
  const PointSample c = sample_binomial(sq, den, 1000, 43);
  CHECK(a.points == b.points);
  CHECK_FALSE(a.points == c.points);
  CHECK(a.realized_count == 1000);
  CHECK(a.dim() == 2);
  for (const Domain& dom : {Domain::disk(0.3), Domain::ball(2.0)}) {
    const PointSample s = sample_binomial(dom, make_density(dom, DensitySpec::tilt(2.0)), 5000, 9);
    for (Eigen::Index j = 0; j < s.size(); ++j) CHECK(contains(dom, s.points.col(j)));
  }
}

TEST_CASE("sample_binomial uniform square passes a 10x10 chi-square test") {
  const Domain sq = Domain::unit_square();
  const PointSample s = sample_binomial(sq, make_density(sq, DensitySpec::uniform()), 100'000, 2718);
  std::vector<double> bins(100, 0.0);
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const int i = std::min(9, int(s.points(0, j) * 10));
    const int k = std::min(9, int(s.points(1, j) * 10));
    bins[10 * i + k] += 1;
  }
  double chi2 = 0;
  for (double o : bins) chi2 += (o - 1000.0) * (o - 1000.0) / 1000.0;
  CHECK(chi2 < kChi2_99);
}

TEST_CASE("tilted samples follow the level-set law") {
  for (const Domain& dom : {Domain::unit_square(), Domain::disk(1.0), Domain::ball(1.0)}) {
    for (double beta : {-0.8, 2.0}) {
      const DensityModel den = make_density(dom, DensitySpec::tilt(beta));
      const PointSample s = sample_binomial(dom, den, 50'000, 77);
      const double rho = dom.inradius();
      std::vector<double> bins(10, 0.0);
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        const double a = dist_to_boundary(dom, s.points.col(j));
        bins[std::min(9, int(a / rho * 10))] += 1;
      }
      double chi2 = 0;
      for (int i = 0; i < 10; ++i) {
        const double e = 50'000 * tilt_level_mass(den, rho * i / 10, rho * (i + 1) / 10);
        chi2 += (bins[i] - e) * (bins[i] - e) / e;
      }
      CHECK(chi2 < kChi2_9);
    }
  }
}

TEST_CASE("sample_poisson") {
  const Domain sq = Domain::unit_square();
  const DensityModel den = make_density(sq, DensitySpec::uniform());
  int nonempty = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) nonempty += sample_poisson(sq, den, 1e-9, s).size() > 0;
  CHECK(nonempty <= 1);

  double sum = 0, sq_sum = 0;
  const int N = 10'000;
  for (int s = 0; s < N; ++s) {
    const double z = double(sample_poisson(sq, den, 100, s).realized_count);
    sum += z;
    sq_sum += z * z;
  }
  const double mean = sum / N;
  const double var = (sq_sum - N * mean * mean) / (N - 1);
  CHECK(std::abs(mean - 100) <= 4 * std::sqrt(100.0 / N));
  CHECK(var / mean >= 0.9);
  CHECK(var / mean <= 1.1);

  const PointSample a = sample_poisson(sq, den, 500, 5);
  const PointSample b = sample_poisson(sq, den, 500, 5);
  CHECK(a.points == b.points);
  CHECK(a.realized_count == std::uint64_t(a.size()));
  CHECK_THROWS(sample_poisson(sq, den, 0.0, 1));
}

TEST_CASE("Poisson sample given its count is the binomial sample") {
  const Domain disk = Domain::disk(1);
  const DensityModel den = make_density(disk, DensitySpec::tilt(0.5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointSample p = sample_poisson(disk, den, 300, seed);
    const PointSample b = sample_binomial(disk, den, p.realized_count, seed);
    CHECK(p.points == b.points);
  }
}

TEST_CASE("poisson_variate matches the Poisson pmf on both branches") {
  for (double mean : {0.7, 5.0, 29.0, 30.0, 75.0, 1000.0}) {
    Rng rng(static_cast<std::uint64_t>(mean * 1000));
    // About 20 near-equiprobable bins from quantiles of the exact law; five
    // independent replicates pool their statistics.
    std::vector<double> cdf;
    double c = 0;
    for (int k = 0; k < 10 * int(mean + 20); ++k) {
      c += std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
      cdf.push_back(c);
    }
    std::vector<int> edges;  // bin b holds k <= edges[b]
    for (int b = 1; b < 20; ++b) {
      const int k = int(std::lower_bound(cdf.begin(), cdf.end(), b / 20.0) - cdf.begin());
      if (edges.empty() || k > edges.back()) edges.push_back(k);
    }
    const int N = 200'000, reps = 5;
    double chi2 = 0, sum = 0;
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<double> obs(edges.size() + 1, 0);
      for (int i = 0; i < N; ++i) {
        const auto k = poisson_variate(rng, mean);
        sum += double(k);
        obs[std::lower_bound(edges.begin(), edges.end(), int(k)) - edges.begin()] += 1;
      }
      double prev = 0;
      for (std::size_t b = 0; b < obs.size(); ++b) {
        const double hi = b < edges.size() ? cdf[edges[b]] : 1.0;
        const double e = N * (hi - prev);
        chi2 += (obs[b] - e) * (obs[b] - e) / e;
        prev = hi;
      }
    }
    INFO("mean ", mean);
    CHECK(std::abs(sum / (N * reps) - mean) <= 5 * std::sqrt(mean / (N * reps)));
    CHECK(chi2 < chi2_999(reps * int(edges.size())));
  }
}
