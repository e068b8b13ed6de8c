#include "hullpeel/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hullpeel/error.hpp"
#include "hullpeel/parallel.hpp"

namespace hullpeel::iforest {

namespace {

constexpr double kEulerGamma = 0.5772156649;

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& points, std::size_t height_limit, std::mt19937_64& rng)
      : points_(points), height_limit_(height_limit), rng_(rng) {}

  IsolationTree build(std::vector<std::size_t> rows) {
    tree_.height_limit = height_limit_;
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.push_back(Node{-1, -1, 0, 0.0, rows.size(), depth});
    if (depth >= height_limit_ || rows.size() <= 1) return id;

    const std::size_t f = points_.cols();
    std::vector<std::size_t> splittable;
    std::vector<std::pair<double, double>> ranges(f);
    for (std::size_t c = 0; c < f; ++c) {
      double lo = points_(rows[0], c), hi = lo;
      for (std::size_t r : rows) {
        lo = std::min(lo, points_(r, c));
        hi = std::max(hi, points_(r, c));
      }
      ranges[c] = {lo, hi};
      if (hi > lo) splittable.push_back(c);
    }
    if (splittable.empty()) return id;

    const std::size_t feature = splittable[uniform_index(rng_, splittable.size())];
    const auto [lo, hi] = ranges[feature];
    double split = lo + unit_uniform(rng_) * (hi - lo);
    if (!(split > lo)) split = std::nextafter(lo, hi);
    if (!(split < hi)) split = std::nextafter(hi, lo);

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) (points_(r, feature) < split ? left : right).push_back(r);

    tree_.nodes[id].feature = feature;
    tree_.nodes[id].split = split;
    const std::int32_t l = grow(left, depth + 1);
    const std::int32_t rr = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = rr;
    return id;
  }

  const Matrix& points_;
  std::size_t height_limit_;
  std::mt19937_64& rng_;
  IsolationTree tree_;
};

}  // namespace

double average_path_length(std::size_t m) {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  const double mm = static_cast<double>(m);
  return 2.0 * (std::log(mm - 1.0) + kEulerGamma) - 2.0 * (mm - 1.0) / mm;
}

double IsolationTree::path_length(std::span<const double> x) const {
  std::size_t i = 0;
  double edges = 0.0;
  while (!nodes[i].is_leaf()) {
    const Node& node = nodes[i];
    i = static_cast<std::size_t>(x[node.feature] < node.split ? node.left : node.right);
    edges += 1.0;
  }
  return edges + average_path_length(nodes[i].size);
}

std::size_t IsolationTree::depth() const {
  std::size_t d = 0;
  for (const Node& n : nodes) d = std::max(d, n.depth);
  return d;
}

IsolationForestModel::IsolationForestModel(std::vector<IsolationTree> trees,
                                           std::size_t subsample_size, std::size_t dim,
                                           double contamination, std::uint64_t seed)
    : trees_(std::move(trees)),
      subsample_size_(subsample_size),
      dim_(dim),
      contamination_(contamination),
      seed_(seed) {}

IsolationForestModel iforest_fit(const Matrix& points, const ForestParams& params,
                                 std::size_t threads) {
  const std::size_t n = points.rows();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewPoints, "isolation forest needs at least 2 points");
  }
  if (!points.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "isolation forest input must be finite");
  }
  if (params.n_trees < 1) {
    throw Error(ErrorCode::kInvalidArgument, "isolation forest needs at least one tree");
  }
  if (!(params.contamination > 0.0 && params.contamination <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "contamination must lie in (0, 0.5]");
  }
  const std::size_t psi = std::clamp<std::size_t>(params.subsample_size, 2, n);
  const auto height_limit =
      static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(psi))));

  std::vector<IsolationTree> trees(params.n_trees);
  parallel_for(params.n_trees, threads, [&](std::size_t t) {
    std::mt19937_64 rng(params.seed + t);
    // Partial Fisher-Yates: the first psi entries are a uniform sample
    // without replacement.
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < psi; ++i) {
      const std::size_t j = i + uniform_index(rng, n - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(psi);
    trees[t] = TreeBuilder(points, height_limit, rng).build(std::move(pool));
  });
  return IsolationForestModel(std::move(trees), psi, points.cols(), params.contamination,
                              params.seed);
}

double iforest_score(const IsolationForestModel& model, std::span<const double> query) {
  if (query.size() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(query.size()) + " features, model expects " +
                    std::to_string(model.dim()));
  }
  double total = 0.0;
  for (const auto& tree : model.trees()) total += tree.path_length(query);
  const double mean = total / static_cast<double>(model.trees().size());
  return std::exp2(-mean / average_path_length(model.subsample_size()));
}

std::vector<double> iforest_score_all(const IsolationForestModel& model, const Matrix& points) {
  std::vector<double> out(points.rows());
  for (std::size_t r = 0; r < points.rows(); ++r) out[r] = iforest_score(model, points.row(r));
  return out;
}

std::vector<int> top_fraction_labels(std::span<const double> scores, double contamination) {
  const std::size_t n = scores.size();
  // Guard against products like 0.1 * 30 = 3.0000000000000004.
  const double raw = contamination * static_cast<double>(n);
  std::size_t count = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  count = std::min(count, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < count; ++i) labels[order[i]] = 1;
  return labels;
}

std::vector<int> iforest_predict(const IsolationForestModel& model, const Matrix& points,
                                 double contamination) {
  const std::vector<double> scores = iforest_score_all(model, points);
  return top_fraction_labels(scores, contamination);
}

}  // namespace hullpeel::iforest
