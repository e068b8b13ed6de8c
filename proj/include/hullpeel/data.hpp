#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hullpeel/matrix.hpp"

namespace hullpeel::data {

struct Dataset {
  Matrix features;
  std::optional<std::vector<int>> labels;  // 1 = anomaly
  std::string name;
  std::vector<std::string> feature_names;  // empty or one per column

  std::size_t rows() const noexcept { return features.rows(); }
  std::size_t cols() const noexcept { return features.cols(); }
  std::size_t anomaly_count() const;

  /// Throws kInvalidArgument when labels or names disagree with the matrix
  /// shape, labels are not 0/1, or values are non-finite.
  void validate() const;
};

/// Column selector: header name or 0-based column index.
using LabelColumn = std::variant<std::string, std::size_t>;

/// Comma-separated, period decimal point, optional header row.
/// Errors: kParseError(line) for malformed numbers or ragged rows,
/// kMissingLabelColumn, kNonBinaryLabel(line), kIoError.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<LabelColumn>& label_column = std::nullopt,
                 bool has_header = true);

/// Header row, then one row per point; the label column comes last and is
/// named "label". Values are written with round-trip precision.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);
std::string to_csv(const Dataset& dataset);

/// Normals uniform (by area) on the annulus r_inner <= |x| <= r_outer;
/// anomalies uniform in the disk of radius 0.25 r_inner at the origin.
/// kBadRadii unless 0 < r_inner < r_outer.
Dataset gen_torus(std::size_t n_normal, std::size_t n_anomaly, double r_inner, double r_outer,
                  std::uint64_t seed);

/// Normals on a circle with isotropic Gaussian jitter; anomalies uniform in
/// the box [-1.5 r, 1.5 r]^2 outside the band r +- 3 noise_std.
Dataset gen_circle_noise(std::size_t n_normal, std::size_t n_anomaly, double radius,
                         double noise_std, std::uint64_t seed);

/// Standard Gaussian normals scaled per axis; anomalies sit 3 to 4 standard
/// deviations out along the short axis while staying within the long axis'
/// extent.
Dataset gen_unnormalized(std::size_t n_normal, std::size_t n_anomaly, double scale_x,
                         double scale_y, std::uint64_t seed);

/// Unit square whose boundary is densely sampled, a few interior points, and
/// two anomalies off opposite sides that enlarge the hull by close to 50%.
/// The anomalies are the last two rows.
Dataset gen_square_demo(std::size_t n_normal = 100, std::uint64_t seed = 0);

/// Adds zero-mean Gaussian noise with variance level * var_j to each
/// feature j (sample variance). Labels are untouched.
Dataset add_gaussian_noise(const Dataset& dataset, double level, std::uint64_t seed);

/// Sample variance (n - 1) of each column.
std::vector<double> column_variances(const Matrix& matrix);

}  // namespace hullpeel::data
