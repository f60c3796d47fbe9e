#include "rgg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rgg {

namespace {

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

template <int D>
inline double squared_distance(const double* p, const double* q) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) {
    const double t = p[i] - q[i];
    s += t * t;
  }
  return s;
}

double squared_distance(const Eigen::MatrixXd& pts, Eigen::Index i, Eigen::Index j) {
  return pts.rows() == 2 ? squared_distance<2>(pts.col(i).data(), pts.col(j).data())
                         : squared_distance<3>(pts.col(i).data(), pts.col(j).data());
}

template <int D>
void unite_grid_pairs(const Eigen::MatrixXd& points, double r, DisjointSets& sets) {
  const CellGrid grid = build_grid(points, r);
  const double r2 = r * r;
  const std::size_t n = grid.order.size();

  // Cell-major copy of the coordinates.
  std::vector<double> xs(n * D);
  for (std::size_t k = 0; k < n; ++k) {
    const double* p = points.col(grid.order[k]).data();
    for (int i = 0; i < D; ++i) xs[k * D + i] = p[i];
  }

  // Forward half of the 3^D - 1 neighbour offsets.
  std::vector<std::array<int, 3>> offsets;
  for (int dz = (D == 3 ? -1 : 0); dz <= (D == 3 ? 1 : 0); ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dz > 0 || (dz == 0 && (dy > 0 || (dy == 0 && dx > 0)))) offsets.push_back({dx, dy, dz});
      }
    }
  }

  const auto& dims = grid.dims;
  for (std::int64_t cz = 0; cz < dims[2]; ++cz) {
    for (std::int64_t cy = 0; cy < dims[1]; ++cy) {
      for (std::int64_t cx = 0; cx < dims[0]; ++cx) {
        const std::int64_t c = (cz * dims[1] + cy) * dims[0] + cx;
        const std::uint32_t begin = grid.cell_start[c];
        const std::uint32_t end = grid.cell_start[c + 1];
        if (begin == end) continue;
        for (std::uint32_t a = begin; a < end; ++a) {
          for (std::uint32_t b = a + 1; b < end; ++b) {
            if (squared_distance<D>(&xs[a * D], &xs[b * D]) <= r2) sets.unite(grid.order[a], grid.order[b]);
          }
        }
        for (const auto& off : offsets) {
          const std::int64_t nx = cx + off[0];
          const std::int64_t ny = cy + off[1];
          const std::int64_t nz = cz + off[2];
          if (nx < 0 || ny < 0 || nz < 0 || nx >= dims[0] || ny >= dims[1] || nz >= dims[2]) continue;
          const std::int64_t nc = (nz * dims[1] + ny) * dims[0] + nx;
          const std::uint32_t nb = grid.cell_start[nc];
          const std::uint32_t ne = grid.cell_start[nc + 1];
          for (std::uint32_t a = begin; a < end; ++a) {
            const double* pa = &xs[a * D];
            for (std::uint32_t b = nb; b < ne; ++b) {
              if (squared_distance<D>(pa, &xs[b * D]) <= r2) sets.unite(grid.order[a], grid.order[b]);
            }
          }
        }
      }
    }
  }
}

void check_inputs(const PointSample& sample, double r, std::span<const Band> bands) {
  if (!(r > 0)) throw std::invalid_argument("components: r must be positive");
  if (sample.size() > 0 && sample.dim() != 2 && sample.dim() != 3) {
    throw std::invalid_argument("components: points must be 2- or 3-dimensional");
  }
  if (sample.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("components: too many points");
  }
  for (const Band& b : bands) {
    if (!(b.lo >= 0 && b.lo < b.hi)) throw std::invalid_argument("components: bands need 0 <= lo < hi");
  }
}

// Turns a vertex partition into the summary; shared by both edge-discovery paths.
ComponentSummary summarize_partition(const PointSample& sample, double r, std::span<const Band> bands,
                                     DiameterMode mode, DisjointSets& sets) {
  ComponentSummary out;
  const std::size_t n = static_cast<std::size_t>(sample.size());
  out.n_points = n;
  out.census.assign(bands.size(), BandCount{});
  if (n == 0) return out;
  if (!bands.empty()) mode = DiameterMode::All;

  // Component index by first appearance, i.e. by smallest vertex id.
  std::vector<std::uint32_t> comp_of(n);
  std::vector<std::uint32_t> root_to_comp(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint64_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t root = sets.find(static_cast<std::uint32_t>(v));
    if (root_to_comp[root] == std::numeric_limits<std::uint32_t>::max()) {
      root_to_comp[root] = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
    }
    comp_of[v] = root_to_comp[root];
    ++sizes[comp_of[v]];
  }
  const std::size_t K = sizes.size();

  std::vector<std::uint32_t> rank(K);
  std::iota(rank.begin(), rank.end(), 0u);
  std::stable_sort(rank.begin(), rank.end(), [&](std::uint32_t a, std::uint32_t b) { return sizes[a] > sizes[b]; });

  out.K = K;
  out.orders.resize(K);
  for (std::size_t i = 0; i < K; ++i) out.orders[i] = sizes[rank[i]];
  out.S = static_cast<std::uint64_t>(std::count(out.orders.begin(), out.orders.end(), 1u));
  out.L1 = out.orders[0];
  out.L2 = K > 1 ? out.orders[1] : 0;
  out.R = n - out.L1;

  if (mode == DiameterMode::None) return out;

  // Members of each component in vertex-id order (counting sort).
  std::vector<std::uint64_t> start(K + 1, 0);
  for (std::size_t c = 0; c < K; ++c) start[c + 1] = start[c] + sizes[c];
  std::vector<std::uint32_t> members(n);
  {
    std::vector<std::uint64_t> fill(start.begin(), start.end() - 1);
    for (std::size_t v = 0; v < n; ++v) members[fill[comp_of[v]]++] = static_cast<std::uint32_t>(v);
  }
  const int d = sample.dim();
  auto diameter_of = [&](std::uint32_t c) {
    const std::uint64_t k = sizes[c];
    if (k == 1) return 0.0;
    Eigen::MatrixXd pts(d, static_cast<Eigen::Index>(k));
    for (std::uint64_t m = 0; m < k; ++m) pts.col(static_cast<Eigen::Index>(m)) = sample.points.col(members[start[c] + m]);
    return component_diameter(pts);
  };

  if (mode == DiameterMode::LargestOnly) {
    out.diam_L1 = diameter_of(rank[0]);
    return out;
  }
  out.diameters.resize(K);
  for (std::size_t i = 0; i < K; ++i) out.diameters[i] = diameter_of(rank[i]);
  out.diam_L1 = out.diameters[0];
  for (std::size_t i = 0; i < K; ++i) {
    if (out.orders[i] < 2) continue;
    const double ratio_diam = out.diameters[i];
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (ratio_diam > bands[b].lo * r && ratio_diam <= bands[b].hi * r) {
        ++out.census[b].K;
        out.census[b].R += out.orders[i];
      }
    }
  }
  return out;
}

// Andrew's monotone chain; returns hull vertex indices.
std::vector<Eigen::Index> convex_hull_2d(const Eigen::MatrixXd& pts) {
  const Eigen::Index k = pts.cols();
  std::vector<Eigen::Index> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return pts(0, a) < pts(0, b) || (pts(0, a) == pts(0, b) && pts(1, a) < pts(1, b));
  });
  auto cross = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
    return (pts(0, a) - pts(0, o)) * (pts(1, b) - pts(1, o)) - (pts(1, a) - pts(1, o)) * (pts(0, b) - pts(0, o));
  };
  std::vector<Eigen::Index> hull(2 * k);
  std::size_t h = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], idx[i]) <= 0) --h;
    hull[h++] = idx[i];
  }
  for (Eigen::Index i = k - 2, lower = static_cast<Eigen::Index>(h) + 1; i >= 0; --i) {
    while (static_cast<Eigen::Index>(h) >= lower && cross(hull[h - 2], hull[h - 1], idx[i]) <= 0) --h;
    hull[h++] = idx[i];
  }
  hull.resize(h > 1 ? h - 1 : h);
  return hull;
}

double diameter_over(const Eigen::MatrixXd& pts, const std::vector<Eigen::Index>& subset) {
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      best = std::max(best, squared_distance(pts, subset[a], subset[b]));
    }
  }
  return std::sqrt(best);
}

// Exact diameter by pruned pair search: pairs are visited in decreasing order
// of |p - c| + |q - c|, which bounds |p - q|, and the scan stops once that
// bound falls below the best distance found.
double diameter_pruned(const Eigen::MatrixXd& pts) {
  const Eigen::Index k = pts.cols();
  const Eigen::VectorXd c = 0.5 * (pts.rowwise().minCoeff() + pts.rowwise().maxCoeff());
  std::vector<double> rad(k);
  for (Eigen::Index i = 0; i < k; ++i) rad[i] = (pts.col(i) - c).norm();
  std::vector<Eigen::Index> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return rad[a] > rad[b]; });

  // Seed with a double-normal walk from the farthest point.
  double best2 = 0.0;
  Eigen::Index cur = idx[0];
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::Index far = cur;
    double far2 = -1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double s = squared_distance(pts, cur, j);
      if (s > far2) {
        far2 = s;
        far = j;
      }
    }
    best2 = std::max(best2, far2);
    cur = far;
  }

  constexpr double slack = 1.0 + 1e-12;
  for (Eigen::Index a = 0; a < k; ++a) {
    const double ra = rad[idx[a]];
    if ((ra + rad[idx[std::min(a + 1, k - 1)]]) * slack < std::sqrt(best2)) break;
    for (Eigen::Index b = a + 1; b < k; ++b) {
      if ((ra + rad[idx[b]]) * slack < std::sqrt(best2)) break;
      best2 = std::max(best2, squared_distance(pts, idx[a], idx[b]));
    }
  }
  return std::sqrt(best2);
}

}  // namespace

bool ComponentSummary::operator==(const ComponentSummary& o) const {
  if (n_points != o.n_points || K != o.K || S != o.S || R != o.R || L1 != o.L1 || L2 != o.L2) return false;
  if (orders != o.orders || census != o.census || !same_double(diam_L1, o.diam_L1)) return false;
  if (diameters.size() != o.diameters.size()) return false;
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    if (!same_double(diameters[i], o.diameters[i])) return false;
  }
  return true;
}

CellGrid build_grid(const Eigen::MatrixXd& points, double r) {
  if (!(r > 0)) throw std::invalid_argument("build_grid: r must be positive");
  CellGrid grid;
  const int d = static_cast<int>(points.rows());
  const std::size_t n = static_cast<std::size_t>(points.cols());
  if (n == 0) {
    grid.cell_size = r;
    grid.cell_start = {0, 0};
    return grid;
  }
  const Eigen::VectorXd lo = points.rowwise().minCoeff();
  const Eigen::VectorXd hi = points.rowwise().maxCoeff();
  const double max_cells = 4.0 * static_cast<double>(n) + 64.0;
  double cell = r;
  for (;;) {
    double cells = 1.0;
    for (int i = 0; i < d; ++i) cells *= std::floor((hi[i] - lo[i]) / cell) + 1.0;
    if (cells <= max_cells) break;
    cell *= 1.5;
  }
  grid.cell_size = cell;
  for (int i = 0; i < d; ++i) {
    grid.lo[i] = lo[i];
    grid.dims[i] = static_cast<std::int64_t>(std::floor((hi[i] - lo[i]) / cell)) + 1;
  }

  const std::int64_t ncell = grid.cell_count();
  std::vector<std::uint32_t> cell_of(n);
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(ncell) + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t c = 0;
    for (int i = d - 1; i >= 0; --i) {
      std::int64_t ci = static_cast<std::int64_t>((points(i, j) - grid.lo[i]) / cell);
      ci = std::clamp<std::int64_t>(ci, 0, grid.dims[i] - 1);
      c = c * grid.dims[i] + ci;
    }
    cell_of[j] = static_cast<std::uint32_t>(c);
    ++counts[c + 1];
  }
  for (std::int64_t c = 0; c < ncell; ++c) counts[c + 1] += counts[c];
  grid.cell_start = counts;
  grid.order.resize(n);
  for (std::size_t j = 0; j < n; ++j) grid.order[counts[cell_of[j]]++] = static_cast<std::uint32_t>(j);
  return grid;
}

ComponentSummary components(const PointSample& sample, double r, std::span<const Band> bands, DiameterMode mode) {
  check_inputs(sample, r, bands);
  DisjointSets sets(static_cast<std::size_t>(sample.size()));
  if (sample.size() > 1) {
    if (sample.dim() == 2) {
      unite_grid_pairs<2>(sample.points, r, sets);
    } else {
      unite_grid_pairs<3>(sample.points, r, sets);
    }
  }
  return summarize_partition(sample, r, bands, mode, sets);
}

ComponentSummary components_bruteforce(const PointSample& sample, double r, std::span<const Band> bands,
                                       DiameterMode mode) {
  check_inputs(sample, r, bands);
  if (static_cast<std::uint64_t>(sample.size()) > kBruteforceLimit) {
    throw std::invalid_argument("components_bruteforce: sample exceeds the size guard");
  }
  const Eigen::Index n = sample.size();
  DisjointSets sets(static_cast<std::size_t>(n));
  const double r2 = r * r;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (squared_distance(sample.points, i, j) <= r2) {
        sets.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }
  return summarize_partition(sample, r, bands, mode, sets);
}

double diameter_bruteforce(const Eigen::MatrixXd& points) {
  if (points.cols() == 0) throw std::invalid_argument("component_diameter: empty component");
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points.cols(); ++j) best = std::max(best, squared_distance(points, i, j));
  }
  return std::sqrt(best);
}

double component_diameter(const Eigen::MatrixXd& points) {
  if (points.cols() == 0) throw std::invalid_argument("component_diameter: empty component");
  if (points.rows() != 2 && points.rows() != 3) throw std::invalid_argument("component_diameter: bad dimension");
  if (points.cols() <= 64) return diameter_bruteforce(points);
  if (points.rows() == 2) return diameter_over(points, convex_hull_2d(points));
  return diameter_pruned(points);
}

}  // namespace rgg
