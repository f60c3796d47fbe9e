#include "rgg/graph.hpp"
#include "rgg/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace rgg;

namespace {

PointSample from_points(const Eigen::MatrixXd& pts) {
  PointSample s;
  s.points = pts;
  s.realized_count = static_cast<std::uint64_t>(pts.cols());
  s.nominal = static_cast<double>(pts.cols());
  return s;
}

// Independent reference: BFS over an explicit adjacency matrix.
struct Reference {
  std::vector<std::vector<int>> comps;
};

Reference bfs_components(const Eigen::MatrixXd& pts, double r) {
  const int n = int(pts.cols());
  std::vector<int> seen(n, 0);
  Reference ref;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (!seen[v] && (pts.col(u) - pts.col(v)).norm() <= r) {
          seen[v] = 1;
          comp.push_back(v);
          stack.push_back(v);
        }
      }
    }
    ref.comps.push_back(comp);
  }
  return ref;
}

}  // namespace

TEST_CASE("components on small configurations") {
  const double r = 0.1;
  Eigen::MatrixXd chain(2, 3);
  chain << 0, 0, 0, 0, 0.9 * r, 1.8 * r;
  const ComponentSummary a = components(from_points(chain), r);
  CHECK(a.K == 1);
  CHECK(a.S == 0);
  CHECK(a.R == 0);
  CHECK(a.diam_L1 == doctest::Approx(1.8 * r));

  Eigen::MatrixXd pair(2, 2);
  pair << 0, 0, 0, 1.1 * r;
  const ComponentSummary b = components(from_points(pair), r);
  CHECK(b.K == 2);
  CHECK(b.S == 2);
  CHECK(b.L1 == 1);
  CHECK(b.R == 1);

  Eigen::MatrixXd tie(2, 2);
  tie << 0, 0.25, 0, 0;  // distance exactly r: closed adjacency
  CHECK(components(from_points(tie), 0.25).K == 1);
  CHECK(components_bruteforce(from_points(tie), 0.25).K == 1);
}

TEST_CASE("components_bruteforce edge cases") {
  const ComponentSummary e = components_bruteforce(from_points(Eigen::MatrixXd(2, 0)), 0.1);
  CHECK(e.K == 0);
  CHECK(e.S == 0);
  CHECK(e.R == 0);
  CHECK(components(from_points(Eigen::MatrixXd(3, 0)), 0.1) == e);

  Eigen::MatrixXd one(2, 1);
  one << 0.3, 0.3;
  const ComponentSummary s = components_bruteforce(from_points(one), 0.1);
  CHECK(s.K == 1);
  CHECK(s.S == 1);
  CHECK(s.R == 0);
  CHECK(s.diameters == std::vector<double>{0.0});

  const Domain sq = Domain::unit_square();
  const PointSample big = sample_binomial(sq, make_density(sq, DensitySpec::uniform()), kBruteforceLimit + 1, 1);
  CHECK_THROWS(components_bruteforce(big, 0.01));
}

TEST_CASE("grid and bruteforce agree with an explicit BFS") {
  const Domain sq = Domain::unit_square();
  const DensityModel den = make_density(sq, DensitySpec::uniform());
  const PointSample s = sample_binomial(sq, den, 500, 12345);
  const std::vector<Band> bands{{0, 0.25}, {0.25, 1}, {1, 30}, {30, std::numeric_limits<double>::infinity()}};
  const ComponentSummary grid = components(s, 0.08, bands);
  const ComponentSummary brute = components_bruteforce(s, 0.08, bands);
  CHECK(grid == brute);

  const Reference ref = bfs_components(s.points, 0.08);
  std::vector<std::uint64_t> orders;
  for (const auto& c : ref.comps) orders.push_back(c.size());
  std::sort(orders.rbegin(), orders.rend());
  CHECK(grid.orders == orders);
  CHECK(grid.K == ref.comps.size());
  CHECK(grid.S == std::uint64_t(std::count(orders.begin(), orders.end(), 1u)));
}

TEST_CASE("summary invariants on random samples") {
  Rng rng(77);
  for (int rep = 0; rep < 60; ++rep) {
    const int kind = rep % 3;
    const Domain dom = kind == 0 ? Domain::unit_square() : kind == 1 ? Domain::disk(1) : Domain::ball(1);
    const DensityModel den = make_density(dom, DensitySpec::tilt(2 * rng.uniform() - 0.5));
    const PointSample s = sample_binomial(dom, den, 200 + rep * 20, rng.next());
    const double r = dom.diameter() * (0.01 + 0.15 * rng.uniform());
    const std::vector<Band> bands{{0, 0.25}, {0.25, 1}, {1, 10}, {10, std::numeric_limits<double>::infinity()}};
    const ComponentSummary cs = components(s, r, bands);
    CHECK(std::accumulate(cs.orders.begin(), cs.orders.end(), std::uint64_t{0}) == cs.n_points);
    CHECK(cs.K == cs.orders.size());
    CHECK(cs.S == std::uint64_t(std::count(cs.orders.begin(), cs.orders.end(), 1u)));
    CHECK(cs.R == cs.n_points - cs.L1);
    CHECK(std::is_sorted(cs.orders.rbegin(), cs.orders.rend()));
    if (cs.L1 > 1) CHECK(cs.R >= cs.S);
    std::uint64_t band_K = 0, band_R = 0, nonsingleton = 0;
    for (const BandCount& b : cs.census) {
      band_K += b.K;
      band_R += b.R;
    }
    for (std::size_t i = 0; i < cs.orders.size(); ++i) {
      if (cs.orders[i] == 1) CHECK(cs.diameters[i] == 0.0);
      if (cs.orders[i] > 1) nonsingleton += cs.orders[i];
      CHECK(cs.diameters[i] <= double(cs.orders[i] - 1) * r * (1 + 1e-12));
    }
    CHECK(band_K == cs.K - cs.S);
    CHECK(band_R == nonsingleton);

    // Monotone in r: merging only.
    const ComponentSummary bigger = components(s, 1.3 * r, {}, DiameterMode::None);
    CHECK(bigger.K <= cs.K);
    CHECK(bigger.S <= cs.S);
  }
}

TEST_CASE("diameter modes") {
  const Domain sq = Domain::unit_square();
  const PointSample s = sample_binomial(sq, make_density(sq, DensitySpec::uniform()), 800, 4);
  const ComponentSummary all = components(s, 0.05, {}, DiameterMode::All);
  const ComponentSummary largest = components(s, 0.05, {}, DiameterMode::LargestOnly);
  const ComponentSummary none = components(s, 0.05, {}, DiameterMode::None);
  CHECK(all.diameters.size() == all.K);
  CHECK(largest.diam_L1 == all.diam_L1);
  CHECK(std::isnan(none.diam_L1));
  CHECK(none.orders == all.orders);
}

TEST_CASE("cell grid covers every point once and contains all r-neighbours") {
  const Domain ball = Domain::ball(1);
  const PointSample s = sample_binomial(ball, make_density(ball, DensitySpec::uniform()), 3000, 10);
  const double r = 0.12;
  const CellGrid g = build_grid(s.points, r);
  CHECK(g.cell_size >= r);
  std::vector<int> seen(s.size(), 0);
  for (auto id : g.order) ++seen[id];
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  CHECK(g.cell_start.size() == std::size_t(g.cell_count()) + 1);

  auto cell_of = [&](Eigen::Index j) {
    std::array<std::int64_t, 3> c{0, 0, 0};
    for (int i = 0; i < 3; ++i) c[i] = std::min(g.dims[i] - 1, std::int64_t((s.points(i, j) - g.lo[i]) / g.cell_size));
    return c;
  };
  for (Eigen::Index p = 0; p < 300; ++p) {
    const auto cp = cell_of(p);
    for (Eigen::Index q = 0; q < s.size(); ++q) {
      if ((s.points.col(p) - s.points.col(q)).norm() > r) continue;
      const auto cq = cell_of(q);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(cp[i] - cq[i]) <= 1);
    }
  }
  // Cell index stored in the grid agrees with the recomputed one.
  for (std::int64_t c = 0; c + 1 < std::int64_t(g.cell_start.size()); ++c) {
    for (auto k = g.cell_start[c]; k < g.cell_start[c + 1]; ++k) {
      const auto cc = cell_of(g.order[k]);
      CHECK(cc[0] + g.dims[0] * (cc[1] + g.dims[1] * cc[2]) == c);
    }
  }
}

TEST_CASE("tiny radius keeps the grid bounded") {
  const Domain sq = Domain::unit_square();
  const PointSample s = sample_binomial(sq, make_density(sq, DensitySpec::uniform()), 1000, 2);
  const CellGrid g = build_grid(s.points, 1e-9);
  CHECK(g.cell_count() <= 4 * 1000 + 64);
  CHECK(components(s, 1e-9).K == 1000);
}

TEST_CASE("component_diameter") {
  CHECK(component_diameter(Eigen::MatrixXd::Zero(2, 1)) == 0.0);
  Eigen::MatrixXd p(2, 2);
  p << 0, 3, 0, 4;
  CHECK(component_diameter(p) == doctest::Approx(5.0));
  CHECK_THROWS(component_diameter(Eigen::MatrixXd(2, 0)));

  Rng rng(1);
  for (int d : {2, 3}) {
    for (int k : {65, 200, 500}) {
      for (int rep = 0; rep < 5; ++rep) {
        Eigen::MatrixXd pts(d, k);
        for (int j = 0; j < k; ++j) {
          for (int i = 0; i < d; ++i) pts(i, j) = rep % 2 ? rng.uniform() : std::cos(7.0 * j + i) * (1 + 0.01 * rng.uniform());
        }
        CHECK(std::abs(component_diameter(pts) - diameter_bruteforce(pts)) <= 1e-12);
      }
    }
  }
  // Cocircular points: many hull ties.
  Eigen::MatrixXd circle(2, 360);
  for (int j = 0; j < 360; ++j) circle.col(j) << std::cos(j * M_PI / 180), std::sin(j * M_PI / 180);
  CHECK(std::abs(component_diameter(circle) - diameter_bruteforce(circle)) <= 1e-12);
  // Collinear points.
  Eigen::MatrixXd line(3, 100);
  for (int j = 0; j < 100; ++j) line.col(j) << j * 0.1, 2 * j * 0.1, -j * 0.1;
  CHECK(std::abs(component_diameter(line) - diameter_bruteforce(line)) <= 1e-12);
}

TEST_CASE("L1 tie-break prefers the component with the smallest vertex id") {
  Eigen::MatrixXd pts(2, 4);
  pts << 0.9, 0.1, 0.91, 0.11, 0.5, 0.5, 0.5, 0.5;
  // Vertices {0,2} and {1,3} form two pairs far apart.
  const ComponentSummary cs = components(from_points(pts), 0.05);
  CHECK(cs.K == 2);
  CHECK(cs.L1 == 2);
  CHECK(cs.L2 == 2);
  CHECK(cs.R == 2);
  CHECK(cs.diam_L1 == doctest::Approx(0.01));
}
