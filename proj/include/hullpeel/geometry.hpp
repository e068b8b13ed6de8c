#pragma once

// d-dimensional convex hulls, their hyper-volume, and containment queries.
//
// Hulls are computed over a Matrix of points (one point per row). The result
// refers back to source rows by index, so a hull of a subset still names the
// original dataset rows.

#include <cstddef>
#include <span>
#include <vector>

#include "hullpeel/matrix.hpp"

namespace hullpeel::geometry {

/// Relative tolerance applied to the bounding-box diagonal of the hulled
/// points. All orientation and containment decisions use the scaled value.
inline constexpr double kRelativeEpsilon = 1e-9;

/// A boundary (d-1)-simplex. `normal` is unit length and points outward;
/// a point x is on the inner side when dot(normal, x) - offset <= 0.
struct Facet {
  std::vector<std::size_t> vertices;
  std::vector<double> normal;
  double offset = 0.0;

  double signed_distance(std::span<const double> x) const;
};

class ConvexHull {
 public:
  ConvexHull(std::size_t dim, std::vector<std::size_t> vertices, std::vector<Facet> facets,
             double volume, double epsilon);

  std::size_t dim() const noexcept { return dim_; }
  /// Sorted, unique source-row indices of the extreme points.
  const std::vector<std::size_t>& vertex_indices() const noexcept { return vertices_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  double volume() const noexcept { return volume_; }
  /// Absolute tolerance used while building this hull.
  double epsilon() const noexcept { return epsilon_; }

  bool is_vertex(std::size_t index) const;

 private:
  std::size_t dim_;
  std::vector<std::size_t> vertices_;
  std::vector<Facet> facets_;
  double volume_;
  double epsilon_;
};

enum class HullAlgorithm {
  kAuto,           // monotone chain for d = 2, quickhull otherwise
  kQuickhull,      // general d-dimensional path
  kMonotoneChain,  // 2-D only
};

/// Hull of all rows of `points`. Requires d >= 2 and at least d + 1 rows.
/// Throws kTooFewPoints, kDimensionMismatch (d < 2 or non-finite values)
/// or kDegenerateInput (the points do not span d dimensions).
ConvexHull compute_hull(const Matrix& points, HullAlgorithm algorithm = HullAlgorithm::kAuto);

/// Hull of the rows named by `subset`; indices in the result refer to rows of
/// `points`.
ConvexHull compute_hull(const Matrix& points, std::span<const std::size_t> subset,
                        HullAlgorithm algorithm = HullAlgorithm::kAuto);

/// Centroid-fan volume: each facet forms a simplex with the vertex centroid,
/// contributing |det| / d!. Equals the shoelace area when d = 2.
double hull_volume(const ConvexHull& hull, const Matrix& points);

/// True iff `query` lies on the inner side of every facet within `tolerance`.
/// Throws kDimensionMismatch when the query length differs from the hull's.
bool contains(const ConvexHull& hull, std::span<const double> query, double tolerance);

/// Absolute tolerance for a point set: kRelativeEpsilon times the
/// bounding-box diagonal of the selected rows.
double scaled_epsilon(const Matrix& points, std::span<const std::size_t> subset);

namespace detail {

ConvexHull quickhull(const Matrix& points, std::span<const std::size_t> subset, double eps);
ConvexHull monotone_chain(const Matrix& points, std::span<const std::size_t> subset, double eps);

/// Outward unit normal of the hyperplane through `vertices`, oriented away
/// from `interior`. Returns false if the vertices are affinely dependent.
bool facet_plane(const Matrix& points, std::span<const std::size_t> vertices,
                 std::span<const double> interior, Facet& out);

double fan_volume(const Matrix& points, std::span<const Facet> facets,
                  std::span<const std::size_t> vertices, std::size_t dim);

}  // namespace detail

}  // namespace hullpeel::geometry
