#pragma once

// Isolation Forest baseline: random axis-aligned partition trees built on
// subsamples; points isolated after few splits score close to 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hullpeel/matrix.hpp"

namespace hullpeel::iforest {

struct Node {
  // Internal node when left >= 0; leaf otherwise.
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::size_t feature = 0;
  double split = 0.0;
  std::size_t size = 0;  // training points reaching this node
  std::size_t depth = 0;

  bool is_leaf() const noexcept { return left < 0; }
  friend bool operator==(const Node&, const Node&) = default;
};

struct IsolationTree {
  std::vector<Node> nodes;  // nodes[0] is the root
  std::size_t height_limit = 0;

  /// Edges to the reached leaf plus the average-path correction for the
  /// points left unresolved in that leaf.
  double path_length(std::span<const double> x) const;
  std::size_t depth() const;

  friend bool operator==(const IsolationTree&, const IsolationTree&) = default;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t subsample_size = 256;  // clamped to n
  double contamination = 0.1;
  std::uint64_t seed = 42;
};

class IsolationForestModel {
 public:
  IsolationForestModel(std::vector<IsolationTree> trees, std::size_t subsample_size,
                       std::size_t dim, double contamination, std::uint64_t seed);

  const std::vector<IsolationTree>& trees() const noexcept { return trees_; }
  std::size_t subsample_size() const noexcept { return subsample_size_; }
  std::size_t dim() const noexcept { return dim_; }
  double contamination() const noexcept { return contamination_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::vector<IsolationTree> trees_;
  std::size_t subsample_size_;
  std::size_t dim_;
  double contamination_;
  std::uint64_t seed_;
};

/// Average unsuccessful-search path length of a binary search tree on m
/// points: 0 for m <= 1, 1 for m = 2, 2H(m-1) - 2(m-1)/m otherwise with
/// H(i) ~ ln(i) + Euler-Mascheroni.
double average_path_length(std::size_t m);

/// Tree t draws from a std::mt19937_64 seeded with seed + t. Throws
/// kTooFewPoints for n < 2 and kInvalidArgument for non-finite input.
IsolationForestModel iforest_fit(const Matrix& points, const ForestParams& params = {},
                                 std::size_t threads = 1);

/// 2^(-mean path / c(subsample_size)); kDimensionMismatch on a wrong-length
/// query.
double iforest_score(const IsolationForestModel& model, std::span<const double> query);
std::vector<double> iforest_score_all(const IsolationForestModel& model, const Matrix& points);

/// Labels the ceil(contamination * n) highest-scoring rows as anomalies
/// (1), lower row index first among equal scores.
std::vector<int> iforest_predict(const IsolationForestModel& model, const Matrix& points,
                                 double contamination);

/// Same thresholding applied to precomputed scores.
std::vector<int> top_fraction_labels(std::span<const double> scores, double contamination);

}  // namespace hullpeel::iforest
