// Quickhull in d dimensions: start from a maximal simplex, then repeatedly
// take the farthest outside point of some facet, delete every facet it can
// see and cone the horizon ridges to it.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "hullpeel/error.hpp"
#include "hullpeel/geometry.hpp"

namespace hullpeel::geometry::detail {

namespace {

using Ridge = std::vector<std::size_t>;

struct WorkFacet {
  Facet plane;
  std::vector<std::size_t> outside;  // kept sorted by source index
  bool alive = true;
};

// Picks d + 1 affinely independent points greedily: the two extremes of the
// first coordinate, then the point farthest from the affine span so far.
std::vector<std::size_t> initial_simplex(const Matrix& points, std::span<const std::size_t> subset,
                                         double eps) {
  const std::size_t d = points.cols();
  std::size_t lo = subset[0], hi = subset[0];
  for (std::size_t idx : subset) {
    if (points(idx, 0) < points(lo, 0)) lo = idx;
    if (points(idx, 0) > points(hi, 0)) hi = idx;
  }
  std::vector<std::size_t> chosen{lo};
  if (hi == lo) {
    throw Error(ErrorCode::kDegenerateInput, "points do not span the space");
  }
  chosen.push_back(hi);

  // Orthonormal basis of the span of (chosen - chosen[0]).
  std::vector<Eigen::VectorXd> basis;
  auto origin = points.row(lo);
  auto offset_of = [&](std::size_t idx) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (std::size_t c = 0; c < d; ++c) v(static_cast<Eigen::Index>(c)) = points(idx, c) - origin[c];
    return v;
  };
  auto residual = [&](std::size_t idx) {
    Eigen::VectorXd v = offset_of(idx);
    for (const auto& b : basis) v -= b.dot(v) * b;
    return v;
  };
  {
    Eigen::VectorXd v = offset_of(hi);
    basis.push_back(v.normalized());
  }
  while (chosen.size() < d + 1) {
    double best = -1.0;
    std::size_t best_idx = subset[0];
    for (std::size_t idx : subset) {
      const double dist = residual(idx).norm();
      if (dist > best) {
        best = dist;
        best_idx = idx;
      }
    }
    if (best <= eps) {
      throw Error(ErrorCode::kDegenerateInput, "points are affinely dependent (span " +
                                                   std::to_string(chosen.size() - 1) +
                                                   " of " + std::to_string(d) + " dimensions)");
    }
    Eigen::VectorXd r = residual(best_idx);
    basis.push_back(r / r.norm());
    chosen.push_back(best_idx);
  }
  return chosen;
}

Ridge ridge_key(const std::vector<std::size_t>& vertices, std::size_t skip) {
  Ridge r;
  r.reserve(vertices.size() - 1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i != skip) r.push_back(vertices[i]);
  }
  std::sort(r.begin(), r.end());
  return r;
}

class Builder {
 public:
  Builder(const Matrix& points, double eps) : points_(points), eps_(eps) {}

  ConvexHull run(std::span<const std::size_t> subset) {
    const std::size_t d = points_.cols();
    const std::vector<std::size_t> simplex = initial_simplex(points_, subset, eps_);

    interior_.assign(d, 0.0);
    for (std::size_t v : simplex) {
      for (std::size_t c = 0; c < d; ++c) interior_[c] += points_(v, c);
    }
    for (double& c : interior_) c /= static_cast<double>(d + 1);

    std::vector<std::size_t> created;
    for (std::size_t skip = 0; skip <= d; ++skip) {
      std::vector<std::size_t> verts;
      for (std::size_t i = 0; i <= d; ++i) {
        if (i != skip) verts.push_back(simplex[i]);
      }
      created.push_back(add_facet(verts));
    }

    std::vector<std::size_t> pending;
    for (std::size_t idx : subset) {
      if (std::find(simplex.begin(), simplex.end(), idx) == simplex.end()) pending.push_back(idx);
    }
    std::sort(pending.begin(), pending.end());
    assign_outside(pending, created);

    for (std::size_t f = 0; f < facets_.size(); ++f) {
      while (facets_[f].alive && !facets_[f].outside.empty()) expand(f);
    }
    return finish();
  }

 private:
  std::size_t add_facet(const std::vector<std::size_t>& verts) {
    WorkFacet wf;
    if (!facet_plane(points_, verts, interior_, wf.plane)) {
      throw Error(ErrorCode::kDegenerateInput, "flat facet during hull construction");
    }
    const std::size_t id = facets_.size();
    facets_.push_back(std::move(wf));
    for (std::size_t skip = 0; skip < verts.size(); ++skip) {
      ridges_[ridge_key(facets_[id].plane.vertices, skip)].push_back(id);
    }
    return id;
  }

  void retire(std::size_t id) {
    WorkFacet& wf = facets_[id];
    wf.alive = false;
    for (std::size_t skip = 0; skip < wf.plane.vertices.size(); ++skip) {
      auto it = ridges_.find(ridge_key(wf.plane.vertices, skip));
      auto& owners = it->second;
      owners.erase(std::remove(owners.begin(), owners.end(), id), owners.end());
      if (owners.empty()) ridges_.erase(it);
    }
  }

  void assign_outside(const std::vector<std::size_t>& candidates,
                      const std::vector<std::size_t>& targets) {
    for (std::size_t idx : candidates) {
      auto p = points_.row(idx);
      for (std::size_t f : targets) {
        if (facets_[f].plane.signed_distance(p) > eps_) {
          facets_[f].outside.push_back(idx);
          break;
        }
      }
    }
  }

  void expand(std::size_t start) {
    WorkFacet& seed = facets_[start];
    std::size_t apex = seed.outside.front();
    double far = seed.plane.signed_distance(points_.row(apex));
    for (std::size_t idx : seed.outside) {
      const double dist = seed.plane.signed_distance(points_.row(idx));
      if (dist > far) {
        far = dist;
        apex = idx;
      }
    }
    auto apex_point = points_.row(apex);

    // Visible region: flood fill across shared ridges.
    std::vector<std::size_t> visible{start};
    std::vector<char> is_visible(facets_.size(), 0);
    is_visible[start] = 1;
    std::vector<std::pair<Ridge, std::size_t>> horizon;  // ridge, visible owner
    for (std::size_t i = 0; i < visible.size(); ++i) {
      const std::size_t f = visible[i];
      const auto& verts = facets_[f].plane.vertices;
      for (std::size_t skip = 0; skip < verts.size(); ++skip) {
        Ridge key = ridge_key(verts, skip);
        const auto& owners = ridges_.at(key);
        for (std::size_t g : owners) {
          if (g == f) continue;
          if (is_visible[g]) continue;
          if (facets_[g].plane.signed_distance(apex_point) > eps_) {
            is_visible[g] = 1;
            visible.push_back(g);
          } else {
            horizon.emplace_back(key, f);
          }
        }
      }
    }
    // A ridge enqueued as horizon may have turned visible later in the fill.
    std::erase_if(horizon, [&](const auto& h) {
      const auto& owners = ridges_.at(h.first);
      return std::all_of(owners.begin(), owners.end(),
                         [&](std::size_t g) { return is_visible[g] != 0; });
    });

    std::vector<std::size_t> orphans;
    for (std::size_t f : visible) {
      for (std::size_t idx : facets_[f].outside) {
        if (idx != apex) orphans.push_back(idx);
      }
      facets_[f].outside.clear();
    }
    std::sort(orphans.begin(), orphans.end());
    orphans.erase(std::unique(orphans.begin(), orphans.end()), orphans.end());

    for (std::size_t f : visible) retire(f);

    std::sort(horizon.begin(), horizon.end());
    horizon.erase(std::unique(horizon.begin(), horizon.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  horizon.end());

    std::vector<std::size_t> created;
    created.reserve(horizon.size());
    for (const auto& [ridge, owner] : horizon) {
      std::vector<std::size_t> verts = ridge;
      verts.push_back(apex);
      created.push_back(add_facet(verts));
    }
    assign_outside(orphans, created);
  }

  ConvexHull finish() {
    const std::size_t d = points_.cols();
    std::vector<Facet> out;
    std::vector<std::size_t> vertices;
    for (auto& wf : facets_) {
      if (!wf.alive) continue;
      vertices.insert(vertices.end(), wf.plane.vertices.begin(), wf.plane.vertices.end());
      out.push_back(std::move(wf.plane));
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    const double volume = fan_volume(points_, out, vertices, d);
    if (!(volume > 0.0)) {
      throw Error(ErrorCode::kDegenerateInput, "hull has zero volume");
    }
    return ConvexHull(d, std::move(vertices), std::move(out), volume, eps_);
  }

  const Matrix& points_;
  double eps_;
  std::vector<double> interior_;
  std::vector<WorkFacet> facets_;
  std::map<Ridge, std::vector<std::size_t>> ridges_;
};

}  // namespace

ConvexHull quickhull(const Matrix& points, std::span<const std::size_t> subset, double eps) {
  return Builder(points, eps).run(subset);
}

}  // namespace hullpeel::geometry::detail
