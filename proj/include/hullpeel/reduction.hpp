#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "hullpeel/matrix.hpp"

namespace hullpeel::reduction {

enum class Method { kPca, kExternal, kNone };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

struct ReductionConfig {
  Method method = Method::kPca;
  std::size_t target_dim = 2;
  bool standardize = true;
  std::optional<std::filesystem::path> embedding_path;

  /// Checks the target_dim bounds against `feature_count` and that an
  /// embedding path is given exactly for the external method.
  void validate(std::size_t feature_count) const;
};

/// Column-wise z-scores using the sample (n - 1) standard deviation.
/// Constant columns become all zeros. kEmptyInput when n < 2.
Matrix standardize(const Matrix& matrix);

struct PcaModel {
  std::vector<double> mean;          // per input feature
  Matrix components;                 // f x k, orthonormal columns
  std::vector<double> eigenvalues;   // all f, descending
  std::vector<double> explained;     // top k

  Matrix transform(const Matrix& matrix) const;
};

/// Projects centered data onto the top-k eigenvectors of the sample
/// covariance. The largest-magnitude loading of each component is positive.
/// kInsufficientSamples when n <= k.
PcaModel pca_fit(const Matrix& matrix, std::size_t k);
Matrix pca_fit_transform(const Matrix& matrix, std::size_t k);

struct EigenDecomposition {
  std::vector<double> values;   // descending
  Matrix vectors;               // column j pairs with values[j]
};

/// Cyclic Jacobi rotations on a symmetric matrix.
EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tolerance = 1e-14,
                                 std::size_t max_sweeps = 100);

/// Headerless CSV of reals, one row per dataset row. kRowCountMismatch when
/// the row count differs from `expected_rows`; kParseError with a 1-based
/// line number on malformed values or ragged rows.
Matrix load_external_embedding(const std::filesystem::path& path, std::size_t expected_rows);

/// Applies the configured pipeline: optional standardization, then PCA,
/// external embedding or nothing.
Matrix reduce(const Matrix& features, const ReductionConfig& config);

}  // namespace hullpeel::reduction
