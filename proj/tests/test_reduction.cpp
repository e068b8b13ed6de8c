#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "hullpeel/reduction.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hullpeel;
using namespace hullpeel::reduction;
using Catch::Approx;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double sample_var(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / double(v.size() - 1);
}

double total_variance(const Matrix& m) {
  double t = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) t += sample_var(m.column(j));
  return t;
}

Matrix correlated(std::size_t n, std::size_t f, std::uint64_t seed) {
  const Matrix z = oracle::random_points(n, f, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> mix(f * f);
  for (auto& x : mix) x = g(rng);
  Matrix out(n, f, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < f; ++j)
      for (std::size_t k = 0; k < f; ++k) out.row(i)[j] += z(i, k) * mix[k * f + j];
  return out;
}

// Mean squared distance between centered rows and their projection on u.
double reconstruction_error(const Matrix& m, const std::vector<double>& u) {
  std::vector<double> mu(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) mu[j] = mean(m.column(j));
  double err = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double dot = 0, norm2 = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double c = m(i, j) - mu[j];
      dot += c * u[j];
      norm2 += c * c;
    }
    err += norm2 - dot * dot;
  }
  return err / double(m.rows());
}

}  // namespace

TEST_CASE("standardize two-point column uses the sample deviation") {
  const Matrix s = standardize(Matrix::from_rows({{1}, {3}}));
  CHECK(s(0, 0) == Approx(-1 / std::sqrt(2.0)));
  CHECK(s(1, 0) == Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("standardize constant column becomes zeros") {
  const Matrix s = standardize(Matrix::from_rows({{5, 1}, {5, 2}, {5, 3}}));
  CHECK(s.column(0) == std::vector<double>{0, 0, 0});
}

TEST_CASE("standardize gives mean 0, std 1, order preserved") {
  const Matrix s = standardize(Matrix::from_rows({{1}, {2}, {3}, {4}}));
  const auto c = s.column(0);
  CHECK(mean(c) == Approx(0).margin(1e-15));
  CHECK(sample_var(c) == Approx(1.0));
  CHECK(std::is_sorted(c.begin(), c.end()));
  CHECK(support::error_of([] { standardize(Matrix::from_rows({{1, 2}})); }) ==
        ErrorCode::kEmptyInput);
}

TEST_CASE("property: standardize is idempotent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix a = standardize(correlated(30, 4, seed));
    const Matrix b = standardize(a);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) REQUIRE(b(i, j) == Approx(a(i, j)).margin(1e-9));
  }
}

TEST_CASE("collinear data keeps all variance in one component") {
  Matrix m(0, 2);
  for (int i = 0; i < 20; ++i) m.append_row(std::vector<double>{double(i), double(i)});
  const Matrix y = pca_fit_transform(m, 1);
  CHECK(sample_var(y.column(0)) == Approx(total_variance(m)).epsilon(1e-9));
}

TEST_CASE("isotropic Gaussian has no preferred axis") {
  const std::size_t n = 2000;
  const Matrix m = oracle::random_points(n, 2, 17);
  const Matrix y = pca_fit_transform(m, 2);
  const double v1 = sample_var(y.column(0)), v2 = sample_var(y.column(1));
  // standard error of a sample variance near 1 is about sqrt(2/(n-1))
  CHECK(v1 >= v2);
  CHECK(v1 - v2 < 3 * std::sqrt(2.0 / double(n - 1)) * std::sqrt(2.0));
}

TEST_CASE("rotating the input leaves PCA output unchanged up to sign") {
  const Matrix m = correlated(60, 2, 5);
  const double t = std::numbers::pi / 6;
  Matrix r(m.rows(), 2, 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    r.row(i)[0] = std::cos(t) * m(i, 0) - std::sin(t) * m(i, 1);
    r.row(i)[1] = std::sin(t) * m(i, 0) + std::cos(t) * m(i, 1);
  }
  const Matrix a = pca_fit_transform(m, 2), b = pca_fit_transform(r, 2);
  for (std::size_t j = 0; j < 2; ++j) {
    const double sign = (a(0, j) * b(0, j) >= 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) REQUIRE(b(i, j) == Approx(sign * a(i, j)).margin(1e-9));
  }
}

TEST_CASE("pca argument errors") {
  const Matrix m = correlated(3, 3, 1);
  CHECK(support::error_of([&] { pca_fit(m, 3); }) == ErrorCode::kInsufficientSamples);
  CHECK(support::error_of([&] { pca_fit(correlated(10, 3, 1), 4); }) == ErrorCode::kInvalidArgument);
  CHECK(support::error_of([&] { pca_fit(correlated(10, 3, 1), 0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("sign rule: largest loading of each component is positive") {
  const PcaModel model = pca_fit(correlated(80, 5, 9), 3);
  for (std::size_t j = 0; j < 3; ++j) {
    double best = 0;
    for (std::size_t i = 0; i < 5; ++i)
      if (std::abs(model.components(i, j)) > std::abs(best)) best = model.components(i, j);
    CHECK(best > 0);
  }
}

TEST_CASE("property: projected variance equals top eigenvalues") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix m = correlated(40, 5, seed);
    const std::size_t k = 1 + seed % 4;
    const PcaModel model = pca_fit(m, k);
    const Matrix y = model.transform(m);
    double top = 0;
    for (std::size_t j = 0; j < k; ++j) top += model.eigenvalues[j];
    REQUIRE(total_variance(y) == Approx(top).epsilon(1e-8));
  }
}

TEST_CASE("property: first component beats random directions") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t f = 2 + seed % 4;
    const Matrix m = correlated(20 + 3 * seed, f, seed);
    const PcaModel model = pca_fit(m, 1);
    std::vector<double> u(f);
    for (std::size_t i = 0; i < f; ++i) u[i] = model.components(i, 0);
    const double best = reconstruction_error(m, u);
    std::mt19937_64 rng(seed + 1000);
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> r(f);
      double norm = 0;
      for (auto& x : r) norm += (x = g(rng)) * x;
      for (auto& x : r) x /= std::sqrt(norm);
      REQUIRE(best <= reconstruction_error(m, r) + 1e-10);
    }
  }
}

TEST_CASE("property: Jacobi agrees with Eigen's symmetric solver") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t f = 2 + seed % 8;
    const Matrix a = oracle::random_points(f, f, seed);
    Matrix sym(f, f, 0.0);
    Eigen::MatrixXd e(f, f);
    for (std::size_t i = 0; i < f; ++i)
      for (std::size_t j = 0; j < f; ++j) {
        sym.row(i)[j] = a(i, j) + a(j, i);
        e(Eigen::Index(i), Eigen::Index(j)) = sym(i, j);
      }
    const EigenDecomposition mine = jacobi_eigen(sym);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(e);
    const auto vals = ref.eigenvalues();  // ascending
    for (std::size_t j = 0; j < f; ++j) {
      REQUIRE(mine.values[j] == Approx(vals(Eigen::Index(f - 1 - j))).margin(1e-9));
      // A v = lambda v
      for (std::size_t i = 0; i < f; ++i) {
        double av = 0;
        for (std::size_t k = 0; k < f; ++k) av += sym(i, k) * mine.vectors(k, j);
        REQUIRE(av == Approx(mine.values[j] * mine.vectors(i, j)).margin(1e-9));
      }
    }
  }
}

TEST_CASE("external embedding loading") {
  support::TempDir dir;
  const auto good = dir.write("e.csv", "1,2\n3,4\n5,6\n");
  const Matrix m = load_external_embedding(good, 3);
  CHECK(m == Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}}));
  CHECK(support::error_of([&] { load_external_embedding(dir.write("s.csv", "1,2\n3,4\n"), 3); }) ==
        ErrorCode::kRowCountMismatch);
  const auto bad = dir.write("b.csv", "1,abc\n");
  CHECK(support::error_of([&] { load_external_embedding(bad, 1); }) == ErrorCode::kParseError);
  CHECK(support::error_line([&] { load_external_embedding(bad, 1); }) == 1u);
  CHECK(support::error_of([&] { load_external_embedding(dir.file("missing.csv"), 1); }) ==
        ErrorCode::kIoError);
}

TEST_CASE("reduce dispatches on the method") {
  const Matrix m = correlated(30, 4, 3);
  ReductionConfig pca;
  CHECK(reduce(m, pca).cols() == 2);
  ReductionConfig none{Method::kNone, 2, false, std::nullopt};
  CHECK(reduce(m, none) == m);
  ReductionConfig ext{Method::kExternal, 2, true, std::nullopt};
  CHECK(support::error_of([&] { reduce(m, ext); }) == ErrorCode::kInvalidArgument);
  CHECK(parse_method("external") == Method::kExternal);
  CHECK_FALSE(parse_method("tsne").has_value());
}
