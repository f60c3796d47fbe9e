#pragma once

#include "rgg/density.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace rgg {

/// Diameter band (lo·r, hi·r]; hi may be +∞.
struct Band {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool operator==(const Band&) const = default;
};

struct BandCount {
  std::uint64_t K = 0;  // components with diameter in the band
  std::uint64_t R = 0;  // vertices in those components
  bool operator==(const BandCount&) const = default;
};

/// Per-realisation component statistics of G(X, r). Components are ordered
/// by (order desc, smallest vertex id asc); `orders` and `diameters` follow
/// that order.
struct ComponentSummary {
  std::uint64_t n_points = 0;
  std::uint64_t K = 0;
  std::uint64_t S = 0;
  std::uint64_t R = 0;
  std::uint64_t L1 = 0;
  std::uint64_t L2 = 0;
  std::vector<std::uint64_t> orders;
  std::vector<double> diameters;  // empty unless requested
  double diam_L1 = std::numeric_limits<double>::quiet_NaN();
  std::vector<BandCount> census;  // one entry per requested band

  bool operator==(const ComponentSummary& o) const;
};

enum class DiameterMode { None, LargestOnly, All };

/// Fixed-radius near-neighbour index: points bucketed into cubic cells of
/// side >= r, stored cell-major.
struct CellGrid {
  double cell_size = 0.0;
  std::array<std::int64_t, 3> dims{1, 1, 1};
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::vector<std::uint32_t> cell_start;  // size = #cells + 1
  std::vector<std::uint32_t> order;       // point ids, grouped by cell

  std::int64_t cell_count() const { return dims[0] * dims[1] * dims[2]; }
};

/// Buckets the columns of `points`. The cell side is r unless that would give
/// more than ~4 cells per point, in which case cells are enlarged.
CellGrid build_grid(const Eigen::MatrixXd& points, double r);

ComponentSummary components(const PointSample& sample, double r, std::span<const Band> bands = {},
                            DiameterMode diameters = DiameterMode::All);

/// All-pairs reference implementation of components(); limited to 10^4 points.
ComponentSummary components_bruteforce(const PointSample& sample, double r, std::span<const Band> bands = {},
                                       DiameterMode diameters = DiameterMode::All);

/// Exact Euclidean diameter of the columns of `points`.
double component_diameter(const Eigen::MatrixXd& points);

/// O(k^2) diameter scan.
double diameter_bruteforce(const Eigen::MatrixXd& points);

inline constexpr std::uint64_t kBruteforceLimit = 10'000;

}  // namespace rgg
