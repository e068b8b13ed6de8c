#include "hullpeel/reduction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "hullpeel/error.hpp"

namespace hullpeel::reduction {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kPca: return "pca";
    case Method::kExternal: return "external";
    case Method::kNone: return "none";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kPca, Method::kExternal, Method::kNone}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

void ReductionConfig::validate(std::size_t feature_count) const {
  if ((method == Method::kExternal) != embedding_path.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "an embedding path is required for, and only for, the external method");
  }
  if (method == Method::kPca && (target_dim < 2 || target_dim > feature_count)) {
    throw Error(ErrorCode::kInvalidArgument,
                "target dimension " + std::to_string(target_dim) + " must lie in [2, " +
                    std::to_string(feature_count) + "]");
  }
}

Matrix standardize(const Matrix& matrix) {
  const std::size_t n = matrix.rows();
  const std::size_t f = matrix.cols();
  if (n < 2 || f == 0) {
    throw Error(ErrorCode::kEmptyInput, "standardize needs at least 2 rows");
  }
  Matrix out(n, f);
  for (std::size_t c = 0; c < f; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += matrix(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (matrix(r, c) - mean) * (matrix(r, c) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    // Zero-variance up to roundoff of the mean itself.
    const double floor = 1e-12 * std::max(1.0, std::abs(mean));
    for (std::size_t r = 0; r < n; ++r) {
      out(r, c) = sd > floor ? (matrix(r, c) - mean) / sd : 0.0;
    }
  }
  return out;
}

EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tolerance, std::size_t max_sweeps) {
  const std::size_t f = symmetric.rows();
  if (f == 0 || symmetric.cols() != f) {
    throw Error(ErrorCode::kDimensionMismatch, "jacobi_eigen needs a square matrix");
  }
  Matrix a = symmetric;
  Matrix v(f, f);
  for (std::size_t i = 0; i < f; ++i) v(i, i) = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < f; ++i)
      for (std::size_t j = i + 1; j < f; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (double x : a.data()) scale = std::max(scale, std::abs(x));

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tolerance * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < f; ++p) {
      for (std::size_t q = p + 1; q < f; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < f; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < f; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < f; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(f);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  EigenDecomposition out;
  out.vectors = Matrix(f, f);
  for (std::size_t j = 0; j < f; ++j) {
    out.values.push_back(a(order[j], order[j]));
    for (std::size_t i = 0; i < f; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Matrix PcaModel::transform(const Matrix& matrix) const {
  if (matrix.cols() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "PCA input has the wrong feature count");
  }
  const std::size_t k = components.cols();
  Matrix out(matrix.rows(), k);
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < mean.size(); ++c) s += (matrix(r, c) - mean[c]) * components(c, j);
      out(r, j) = s;
    }
  }
  return out;
}

PcaModel pca_fit(const Matrix& matrix, std::size_t k) {
  const std::size_t n = matrix.rows();
  const std::size_t f = matrix.cols();
  if (k < 1 || k > f) {
    throw Error(ErrorCode::kInvalidArgument, "PCA component count must lie in [1, features]");
  }
  if (n <= k) {
    throw Error(ErrorCode::kInsufficientSamples,
                "PCA with " + std::to_string(k) + " components needs more than " +
                    std::to_string(k) + " rows");
  }
  PcaModel model;
  model.mean.assign(f, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < f; ++c) model.mean[c] += matrix(r, c);
  for (double& m : model.mean) m /= static_cast<double>(n);

  Matrix cov(f, f);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < f; ++i) {
      const double di = matrix(r, i) - model.mean[i];
      for (std::size_t j = i; j < f; ++j) cov(i, j) += di * (matrix(r, j) - model.mean[j]);
    }
  }
  for (std::size_t i = 0; i < f; ++i) {
    for (std::size_t j = i; j < f; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  }

  EigenDecomposition eig = jacobi_eigen(cov);
  model.eigenvalues = eig.values;
  model.components = Matrix(f, k);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t lead = 0;
    for (std::size_t i = 1; i < f; ++i) {
      if (std::abs(eig.vectors(i, j)) > std::abs(eig.vectors(lead, j))) lead = i;
    }
    const double sign = eig.vectors(lead, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < f; ++i) model.components(i, j) = sign * eig.vectors(i, j);
    model.explained.push_back(eig.values[j]);
  }
  return model;
}

Matrix pca_fit_transform(const Matrix& matrix, std::size_t k) {
  return pca_fit(matrix, k).transform(matrix);
}

Matrix load_external_embedding(const std::filesystem::path& path, std::size_t expected_rows) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open embedding file " + path.string());
  }
  Matrix out;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    row.clear();
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      std::string_view field(line.data() + pos,
                             (comma == std::string::npos ? line.size() : comma) - pos);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
          !std::isfinite(value)) {
        throw Error(ErrorCode::kParseError, "invalid number '" + std::string(field) + "'", line_no);
      }
      row.push_back(value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!out.empty() && row.size() != out.cols()) {
      throw Error(ErrorCode::kParseError, "expected " + std::to_string(out.cols()) + " values",
                  line_no);
    }
    out.append_row(row);
  }
  if (out.rows() != expected_rows) {
    throw Error(ErrorCode::kRowCountMismatch, "embedding has " + std::to_string(out.rows()) +
                                                  " rows, dataset has " +
                                                  std::to_string(expected_rows));
  }
  return out;
}

Matrix reduce(const Matrix& features, const ReductionConfig& config) {
  config.validate(features.cols());
  switch (config.method) {
    case Method::kExternal:
      return load_external_embedding(*config.embedding_path, features.rows());
    case Method::kPca: {
      const Matrix input = config.standardize ? standardize(features) : features;
      return pca_fit_transform(input, config.target_dim);
    }
    case Method::kNone:
      return config.standardize ? standardize(features) : features;
  }
  return features;
}

}  // namespace hullpeel::reduction
