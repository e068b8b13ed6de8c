#include "hullpeel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "hullpeel/error.hpp"

namespace hullpeel::geometry {

double Facet::signed_distance(std::span<const double> x) const {
  double s = -offset;
  for (std::size_t i = 0; i < normal.size(); ++i) s += normal[i] * x[i];
  return s;
}

ConvexHull::ConvexHull(std::size_t dim, std::vector<std::size_t> vertices,
                       std::vector<Facet> facets, double volume, double epsilon)
    : dim_(dim),
      vertices_(std::move(vertices)),
      facets_(std::move(facets)),
      volume_(volume),
      epsilon_(epsilon) {}

bool ConvexHull::is_vertex(std::size_t index) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), index);
}

double scaled_epsilon(const Matrix& points, std::span<const std::size_t> subset) {
  const std::size_t d = points.cols();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t idx : subset) {
    auto p = points.row(idx);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  double diag2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) diag2 += (hi[j] - lo[j]) * (hi[j] - lo[j]);
  return kRelativeEpsilon * std::sqrt(diag2);
}

namespace {

void validate(const Matrix& points, std::span<const std::size_t> subset) {
  const std::size_t d = points.cols();
  if (d < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "hull dimension must be at least 2");
  }
  if (subset.size() < d + 1) {
    throw Error(ErrorCode::kTooFewPoints, "need at least " + std::to_string(d + 1) +
                                              " points in " + std::to_string(d) +
                                              " dimensions, got " +
                                              std::to_string(subset.size()));
  }
  for (std::size_t idx : subset) {
    if (idx >= points.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "subset index out of range");
    }
    for (double v : points.row(idx)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kDimensionMismatch, "point " + std::to_string(idx) +
                                                       " has a non-finite coordinate");
      }
    }
  }
}

}  // namespace

ConvexHull compute_hull(const Matrix& points, HullAlgorithm algorithm) {
  std::vector<std::size_t> all(points.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return compute_hull(points, all, algorithm);
}

ConvexHull compute_hull(const Matrix& points, std::span<const std::size_t> subset,
                        HullAlgorithm algorithm) {
  validate(points, subset);
  const double eps = scaled_epsilon(points, subset);
  const bool planar = points.cols() == 2;
  if (algorithm == HullAlgorithm::kMonotoneChain && !planar) {
    throw Error(ErrorCode::kDimensionMismatch, "monotone chain requires 2-D points");
  }
  if (algorithm == HullAlgorithm::kMonotoneChain ||
      (algorithm == HullAlgorithm::kAuto && planar)) {
    return detail::monotone_chain(points, subset, eps);
  }
  return detail::quickhull(points, subset, eps);
}

double hull_volume(const ConvexHull& hull, const Matrix& points) {
  return detail::fan_volume(points, hull.facets(), hull.vertex_indices(), hull.dim());
}

bool contains(const ConvexHull& hull, std::span<const double> query, double tolerance) {
  if (query.size() != hull.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(query.size()) + " coordinates, hull is " +
                    std::to_string(hull.dim()) + "-dimensional");
  }
  return std::all_of(hull.facets().begin(), hull.facets().end(),
                     [&](const Facet& f) { return f.signed_distance(query) <= tolerance; });
}

namespace detail {

bool facet_plane(const Matrix& points, std::span<const std::size_t> vertices,
                 std::span<const double> interior, Facet& out) {
  const std::size_t d = points.cols();
  auto base = points.row(vertices[0]);
  // Rows span the facet; the normal is the generalized cross product, i.e.
  // the signed cofactors of the (d-1) x d edge matrix.
  Eigen::MatrixXd edges(d - 1, d);
  for (std::size_t r = 1; r < d; ++r) {
    auto v = points.row(vertices[r]);
    for (std::size_t c = 0; c < d; ++c) edges(r - 1, c) = v[c] - base[c];
  }
  std::vector<double> normal(d);
  Eigen::MatrixXd minor(d - 1, d - 1);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t cc = 0, k = 0; cc < d; ++cc) {
      if (cc == c) continue;
      minor.col(static_cast<Eigen::Index>(k++)) = edges.col(static_cast<Eigen::Index>(cc));
    }
    const double det = d == 2 ? minor(0, 0) : minor.determinant();
    normal[c] = (c % 2 == 0 ? 1.0 : -1.0) * det;
  }
  double norm = 0.0;
  for (double v : normal) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  for (double& v : normal) v /= norm;
  double offset = 0.0;
  for (std::size_t c = 0; c < d; ++c) offset += normal[c] * base[c];
  double side = -offset;
  for (std::size_t c = 0; c < d; ++c) side += normal[c] * interior[c];
  if (side > 0.0) {
    for (double& v : normal) v = -v;
    offset = -offset;
  }
  out.vertices.assign(vertices.begin(), vertices.end());
  out.normal = std::move(normal);
  out.offset = offset;
  return true;
}

double fan_volume(const Matrix& points, std::span<const Facet> facets,
                  std::span<const std::size_t> vertices, std::size_t dim) {
  if (vertices.empty()) return 0.0;
  std::vector<double> centroid(dim, 0.0);
  for (std::size_t v : vertices) {
    auto p = points.row(v);
    for (std::size_t c = 0; c < dim; ++c) centroid[c] += p[c];
  }
  for (double& c : centroid) c /= static_cast<double>(vertices.size());

  double factorial = 1.0;
  for (std::size_t k = 2; k <= dim; ++k) factorial *= static_cast<double>(k);

  Eigen::MatrixXd simplex(dim, dim);
  double total = 0.0;
  for (const Facet& f : facets) {
    for (std::size_t r = 0; r < dim; ++r) {
      auto p = points.row(f.vertices[r]);
      for (std::size_t c = 0; c < dim; ++c) {
        simplex(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = p[c] - centroid[c];
      }
    }
    double det;
    if (dim == 2) {
      det = simplex(0, 0) * simplex(1, 1) - simplex(0, 1) * simplex(1, 0);
    } else {
      det = simplex.determinant();
    }
    total += std::abs(det);
  }
  return total / factorial;
}

ConvexHull monotone_chain(const Matrix& points, std::span<const std::size_t> subset, double eps) {
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ax = points(a, 0), bx = points(b, 0);
    if (ax != bx) return ax < bx;
    const double ay = points(a, 1), by = points(b, 1);
    if (ay != by) return ay < by;
    return a < b;
  });
  // Coincident points: keep the lowest index only.
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return points(a, 0) == points(b, 0) && points(a, 1) == points(b, 1);
                          }),
              order.end());

  // Pops the middle point unless it lies strictly more than eps to the right
  // of the chord (o, b), matching the quickhull visibility threshold.
  auto keeps = [&](std::size_t o, std::size_t a, std::size_t b) {
    const double ox = points(o, 0), oy = points(o, 1);
    const double ex = points(b, 0) - ox, ey = points(b, 1) - oy;
    const double cross = ex * (points(a, 1) - oy) - ey * (points(a, 0) - ox);
    const double len = std::hypot(ex, ey);
    return -cross > eps * len;
  };

  std::vector<std::size_t> hull;
  hull.reserve(order.size() * 2);
  for (std::size_t idx : order) {
    while (hull.size() >= 2 && !keeps(hull[hull.size() - 2], hull.back(), idx)) hull.pop_back();
    hull.push_back(idx);
  }
  const std::size_t lower = hull.size() + 1;
  for (std::size_t i = order.size() - 1; i-- > 0;) {
    const std::size_t idx = order[i];
    while (hull.size() >= lower && !keeps(hull[hull.size() - 2], hull.back(), idx)) {
      hull.pop_back();
    }
    hull.push_back(idx);
  }
  hull.pop_back();

  if (hull.size() < 3) {
    throw Error(ErrorCode::kDegenerateInput, "points are collinear");
  }

  // Chain order is counterclockwise; facets are
  // consecutive pairs, oriented against the vertex centroid.
  std::vector<double> centroid(2, 0.0);
  for (std::size_t v : hull) {
    centroid[0] += points(v, 0);
    centroid[1] += points(v, 1);
  }
  centroid[0] /= static_cast<double>(hull.size());
  centroid[1] /= static_cast<double>(hull.size());

  std::vector<Facet> facets;
  facets.reserve(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const std::size_t pair[2] = {hull[i], hull[(i + 1) % hull.size()]};
    Facet f;
    if (!facet_plane(points, pair, centroid, f)) {
      throw Error(ErrorCode::kDegenerateInput, "zero-length hull edge");
    }
    facets.push_back(std::move(f));
  }
  std::vector<std::size_t> vertices = hull;
  std::sort(vertices.begin(), vertices.end());
  const double volume = fan_volume(points, facets, vertices, 2);
  if (!(volume > 0.0)) {
    throw Error(ErrorCode::kDegenerateInput, "hull has zero area");
  }
  return ConvexHull(2, std::move(vertices), std::move(facets), volume, eps);
}

}  // namespace detail

}  // namespace hullpeel::geometry
