#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hullpeel/geometry.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hullpeel;
using namespace hullpeel::geometry;
using Catch::Approx;

namespace {

const Matrix kSquare = Matrix::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});

std::vector<double> q(double x, double y) { return {x, y}; }

Matrix transform2d(const Matrix& m, double theta, double s, double tx, double ty) {
  Matrix out(m.rows(), 2, 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double x = m(i, 0), y = m(i, 1);
    out.row(i)[0] = s * (std::cos(theta) * x - std::sin(theta) * y) + tx;
    out.row(i)[1] = s * (std::sin(theta) * x + std::cos(theta) * y) + ty;
  }
  return out;
}

Matrix disk_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(n, 2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(u(rng)), a = 2 * std::numbers::pi * u(rng);
    m.row(i)[0] = r * std::cos(a);
    m.row(i)[1] = r * std::sin(a);
  }
  return m;
}

}  // namespace

TEST_CASE("unit square is its own hull") {
  const auto h = compute_hull(kSquare);
  CHECK(h.vertex_indices() == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(h.facets().size() == 4);
  CHECK(h.volume() == Approx(1.0).epsilon(1e-15));
  CHECK(hull_volume(h, kSquare) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("interior point never becomes a vertex") {
  Matrix m = kSquare;
  m.append_row(q(0.5, 0.5));
  const auto h = compute_hull(m);
  CHECK(h.vertex_indices() == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK_FALSE(h.is_vertex(4));
}

TEST_CASE("triangle and square-plus-far-point volumes") {
  CHECK(compute_hull(Matrix::from_rows({{0, 0}, {1, 0}, {0, 1}})).volume() == Approx(0.5));
  Matrix m = kSquare;
  m.append_row(q(10, 10));
  CHECK(compute_hull(m).volume() == Approx(10.0).epsilon(1e-14));
  CHECK(compute_hull(m, HullAlgorithm::kQuickhull).volume() == Approx(10.0).epsilon(1e-14));
}

TEST_CASE("disk sample vertices match the brute-force test") {
  const Matrix m = disk_points(30, 11);
  const auto expect = oracle::brute_vertices_2d(m, oracle::all_indices(30));
  CHECK(compute_hull(m).vertex_indices() == expect);
  CHECK(compute_hull(m, HullAlgorithm::kQuickhull).vertex_indices() == expect);
}

TEST_CASE("containment queries on the unit square") {
  const auto h = compute_hull(kSquare);
  CHECK(contains(h, q(0.5, 0.5), 1e-9));
  CHECK_FALSE(contains(h, q(2, 2), 1e-9));
  CHECK(contains(h, q(1.0, 0.5), 1e-9));
  CHECK(support::error_of([&] { contains(h, std::vector<double>{1, 2, 3}, 1e-9); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("invalid inputs") {
  CHECK(support::error_of([] { compute_hull(Matrix::from_rows({{0, 0}, {1, 1}})); }) ==
        ErrorCode::kTooFewPoints);
  CHECK(support::error_of([] {
          compute_hull(Matrix::from_rows({{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
        }) == ErrorCode::kDegenerateInput);
  CHECK(support::error_of([] { compute_hull(Matrix::from_rows({{0}, {1}, {2}})); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(support::error_of([] {
          compute_hull(Matrix::from_rows({{0, 0}, {1, 0}, {0, std::nan("")}}));
        }) == ErrorCode::kDimensionMismatch);
  CHECK(support::error_of([] {
          compute_hull(Matrix::from_rows({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}),
                       HullAlgorithm::kMonotoneChain);
        }) == ErrorCode::kDimensionMismatch);
  // flat in 3-D
  CHECK(support::error_of([] {
          compute_hull(Matrix::from_rows({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
        }) == ErrorCode::kDegenerateInput);
}

TEST_CASE("duplicates: one copy is a vertex and volume is unchanged") {
  Matrix m = kSquare;
  m.append_row(q(1, 1));
  const auto h = compute_hull(m);
  CHECK(h.vertex_indices() == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(h.volume() == Approx(1.0));
  const auto hq = compute_hull(m, HullAlgorithm::kQuickhull);
  CHECK(hq.vertex_indices().size() == 4);
  CHECK(hq.volume() == Approx(1.0));
}

TEST_CASE("collinear boundary points are not vertices") {
  Matrix m = kSquare;
  m.append_row(q(0.5, 0));
  m.append_row(q(1, 0.25));
  CHECK(compute_hull(m).vertex_indices().size() == 4);
  CHECK(compute_hull(m, HullAlgorithm::kQuickhull).vertex_indices().size() == 4);
}

TEST_CASE("unit cube and simplex in 3-D and 4-D") {
  Matrix cube(0, 3);
  for (int i = 0; i < 8; ++i) {
    const std::vector<double> r{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)};
    cube.append_row(r);
  }
  cube.append_row(std::vector<double>{0.5, 0.5, 0.5});
  const auto h = compute_hull(cube);
  CHECK(h.vertex_indices().size() == 8);
  CHECK(h.volume() == Approx(1.0).epsilon(1e-13));
  CHECK(h.facets().size() == 12);

  const Matrix simplex4 = Matrix::from_rows(
      {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(compute_hull(simplex4).volume() == Approx(1.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("subset hull addresses source rows") {
  Matrix m = kSquare;
  m.append_row(q(10, 10));
  const std::vector<std::size_t> sub{0, 1, 3, 4};
  const auto h = compute_hull(m, sub);
  CHECK(h.vertex_indices() == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(h.volume() == Approx(10.0));  // (1,1) is interior anyway
}

TEST_CASE("facets face outward and every vertex touches a facet") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t d = 2 + seed % 3;
    const Matrix m = oracle::random_points(40, d, seed);
    const auto h = compute_hull(m);
    std::vector<double> c(d, 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < d; ++j) c[j] += m(i, j) / double(m.rows());
    for (const auto& f : h.facets()) CHECK(f.signed_distance(c) < 0);
    for (std::size_t v : h.vertex_indices()) {
      bool on_facet = false;
      for (const auto& f : h.facets())
        on_facet |= std::find(f.vertices.begin(), f.vertices.end(), v) != f.vertices.end();
      CHECK(on_facet);
    }
  }
}

TEST_CASE("property: containment of every source point") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const std::size_t d = 2 + seed % 3;
    const Matrix m = oracle::random_points(10 + seed % 50, d, seed);
    const auto h = compute_hull(m);
    for (std::size_t i = 0; i < m.rows(); ++i) REQUIRE(contains(h, m.row(i), h.epsilon()));
  }
}

TEST_CASE("property: deletion never grows the hull; removing non-vertices keeps it") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const std::size_t d = 2 + seed % 2;
    const Matrix m = oracle::random_points(25, d, seed);
    const auto full = compute_hull(m);
    for (std::size_t p = 0; p < m.rows(); ++p) {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (i != p) rest.push_back(i);
      const double v = compute_hull(m, rest).volume();
      REQUIRE(v <= full.volume() * (1 + 1e-12));
      if (!full.is_vertex(p)) REQUIRE(std::abs(v - full.volume()) <= full.epsilon());
    }
  }
}

TEST_CASE("property: quickhull and monotone chain agree in 2-D") {
  for (std::uint64_t seed = 300; seed < 400; ++seed) {
    const Matrix m = oracle::random_uniform(5 + seed % 80, 2, seed);
    const auto a = compute_hull(m, HullAlgorithm::kMonotoneChain);
    const auto b = compute_hull(m, HullAlgorithm::kQuickhull);
    REQUIRE(a.vertex_indices() == b.vertex_indices());
    REQUIRE(a.volume() == Approx(b.volume()).epsilon(1e-12));
    REQUIRE(a.volume() == Approx(oracle::brute_area(m, oracle::all_indices(m.rows())))
                              .epsilon(1e-12));
  }
}

TEST_CASE("property: 3-D vertex sets match brute force") {
  for (std::uint64_t seed = 400; seed < 430; ++seed) {
    const Matrix m = oracle::random_points(10 + seed % 40, 3, seed);
    REQUIRE(compute_hull(m).vertex_indices() ==
            oracle::brute_vertices_3d(m, oracle::all_indices(m.rows())));
  }
}

TEST_CASE("property: volume invariant under rigid motion, scales by s^d") {
  for (std::uint64_t seed = 500; seed < 540; ++seed) {
    const Matrix m = oracle::random_points(30, 2, seed);
    const double base = compute_hull(m).volume();
    const double s = 0.5 + double(seed % 7);
    const Matrix moved = transform2d(m, 0.1 * double(seed), 1.0, 3.0, -7.0);
    const Matrix scaled = transform2d(m, 0.1 * double(seed), s, -1.0, 2.0);
    REQUIRE(compute_hull(moved).volume() == Approx(base).epsilon(1e-9));
    REQUIRE(compute_hull(scaled).volume() == Approx(base * s * s).epsilon(1e-9));
    REQUIRE(compute_hull(moved).vertex_indices() == compute_hull(m).vertex_indices());
  }
}

TEST_CASE("property: Monte-Carlo agreement on a few sets") {
  for (std::uint64_t seed = 600; seed < 606; ++seed) {
    const std::size_t d = 2 + seed % 2;
    const Matrix m = oracle::random_points(40, d, seed);
    const auto est = oracle::mc_volume(m, 40000, seed);
    CHECK(std::abs(compute_hull(m).volume() - est.volume) <= 3 * est.standard_error);
  }
}

TEST_CASE("epsilon scales with the bounding box") {
  const std::vector<std::size_t> all{0, 1, 2, 3};
  CHECK(scaled_epsilon(kSquare, all) == Approx(1e-9 * std::sqrt(2.0)));
  const auto h = compute_hull(transform2d(kSquare, 0, 1000, 0, 0));
  CHECK(h.epsilon() == Approx(1e-6 * std::sqrt(2.0)));
}
