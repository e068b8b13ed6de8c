#include "hullpeel/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "hullpeel/error.hpp"

namespace hullpeel::data {

std::size_t Dataset::anomaly_count() const {
  if (!labels) return 0;
  return static_cast<std::size_t>(std::count(labels->begin(), labels->end(), 1));
}

void Dataset::validate() const {
  if (features.rows() == 0 || features.cols() == 0) {
    throw Error(ErrorCode::kEmptyInput, "dataset has no rows or no columns");
  }
  if (!features.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset contains non-finite values");
  }
  if (labels) {
    if (labels->size() != features.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "label count differs from row count");
    }
    for (int l : *labels) {
      if (l != 0 && l != 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
  }
  if (!feature_names.empty() && feature_names.size() != features.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "feature name count differs from column count");
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    out.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<double> parse_real(const std::string& field) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (begin == end || ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::optional<LabelColumn>& label_column,
                 bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());

  Dataset ds;
  ds.name = path.stem().string();
  std::vector<std::string> header;
  std::optional<std::size_t> label_index;
  std::size_t width = 0;
  std::vector<int> labels;
  std::vector<double> row;

  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);

    if (first) {
      first = false;
      width = fields.size();
      if (has_header) header = fields;
      if (label_column) {
        if (const auto* name = std::get_if<std::string>(&*label_column)) {
          auto it = std::find(header.begin(), header.end(), *name);
          if (it == header.end()) {
            throw Error(ErrorCode::kMissingLabelColumn, "no column named '" + *name + "'");
          }
          label_index = static_cast<std::size_t>(it - header.begin());
        } else {
          label_index = std::get<std::size_t>(*label_column);
          if (*label_index >= width) {
            throw Error(ErrorCode::kMissingLabelColumn,
                        "label column " + std::to_string(*label_index) + " out of range");
          }
        }
      }
      if (has_header) continue;
    }

    if (fields.size() != width) {
      throw Error(ErrorCode::kParseError, "expected " + std::to_string(width) + " fields, got " +
                                              std::to_string(fields.size()),
                  line_no);
    }
    row.clear();
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto value = parse_real(fields[c]);
      if (label_index && c == *label_index) {
        if (!value || (*value != 0.0 && *value != 1.0)) {
          throw Error(ErrorCode::kNonBinaryLabel, "label '" + fields[c] + "' is not 0 or 1",
                      line_no);
        }
        labels.push_back(static_cast<int>(*value));
        continue;
      }
      if (!value) {
        throw Error(ErrorCode::kParseError, "invalid number '" + fields[c] + "'", line_no);
      }
      row.push_back(*value);
    }
    if (row.empty()) {
      throw Error(ErrorCode::kParseError, "row has no feature columns", line_no);
    }
    ds.features.append_row(row);
  }
  if (ds.features.empty()) throw Error(ErrorCode::kEmptyInput, path.string() + " has no data rows");

  if (has_header) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (!label_index || c != *label_index) ds.feature_names.push_back(header[c]);
    }
  }
  if (label_index) ds.labels = std::move(labels);
  return ds;
}

std::string to_csv(const Dataset& dataset) {
  dataset.validate();
  std::ostringstream out;
  const std::size_t f = dataset.cols();
  for (std::size_t c = 0; c < f; ++c) {
    if (c) out << ',';
    out << (dataset.feature_names.empty() ? "x" + std::to_string(c) : dataset.feature_names[c]);
  }
  if (dataset.labels) out << ",label";
  out << '\n';
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    for (std::size_t c = 0; c < f; ++c) {
      if (c) out << ',';
      out << format_real(dataset.features(r, c));
    }
    if (dataset.labels) out << ',' << (*dataset.labels)[r];
    out << '\n';
  }
  return out.str();
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  const std::string text = to_csv(dataset);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

namespace {

Dataset planar(std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  ds.features = Matrix(0, 2);
  ds.feature_names = {"x", "y"};
  ds.labels = std::vector<int>{};
  return ds;
}

void push(Dataset& ds, double x, double y, int label) {
  const double p[2] = {x, y};
  ds.features.append_row(p);
  ds.labels->push_back(label);
}

}  // namespace

Dataset gen_torus(std::size_t n_normal, std::size_t n_anomaly, double r_inner, double r_outer,
                  std::uint64_t seed) {
  if (!(r_inner > 0.0 && r_inner < r_outer && std::isfinite(r_outer))) {
    throw Error(ErrorCode::kBadRadii, "torus radii must satisfy 0 < r_inner < r_outer");
  }
  if (n_normal < 1 || n_anomaly < 1) {
    throw Error(ErrorCode::kInvalidArgument, "torus needs at least one point of each class");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  Dataset ds = planar("torus");
  const double a2 = r_inner * r_inner, b2 = r_outer * r_outer;
  for (std::size_t i = 0; i < n_normal; ++i) {
    const double r = std::clamp(std::sqrt(a2 + unit(rng) * (b2 - a2)), r_inner, r_outer);
    const double t = kTwoPi * unit(rng);
    push(ds, r * std::cos(t), r * std::sin(t), 0);
  }
  const double core = 0.25 * r_inner;
  for (std::size_t i = 0; i < n_anomaly; ++i) {
    const double r = core * std::sqrt(unit(rng));
    const double t = kTwoPi * unit(rng);
    push(ds, r * std::cos(t), r * std::sin(t), 1);
  }
  return ds;
}

Dataset gen_circle_noise(std::size_t n_normal, std::size_t n_anomaly, double radius,
                         double noise_std, std::uint64_t seed) {
  if (!(radius > 0.0) || !(noise_std >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "circle needs radius > 0 and noise_std >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  Dataset ds = planar("circle");
  for (std::size_t i = 0; i < n_normal; ++i) {
    const double t = kTwoPi * unit(rng);
    double x = radius * std::cos(t), y = radius * std::sin(t);
    if (noise_std > 0.0) {
      x += noise_std * gauss(rng);
      y += noise_std * gauss(rng);
    }
    push(ds, x, y, 0);
  }
  const double half = 1.5 * radius;
  const double band = 3.0 * noise_std;
  for (std::size_t i = 0; i < n_anomaly;) {
    const double x = -half + 2.0 * half * unit(rng);
    const double y = -half + 2.0 * half * unit(rng);
    if (std::abs(std::hypot(x, y) - radius) <= band) continue;
    push(ds, x, y, 1);
    ++i;
  }
  return ds;
}

Dataset gen_unnormalized(std::size_t n_normal, std::size_t n_anomaly, double scale_x,
                         double scale_y, std::uint64_t seed) {
  if (!(scale_x > 0.0 && scale_y > 0.0) || scale_x == scale_y) {
    throw Error(ErrorCode::kInvalidArgument, "scales must be positive and different");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset ds = planar("unnormalized");
  for (std::size_t i = 0; i < n_normal; ++i) {
    const double x = scale_x * gauss(rng);
    const double y = scale_y * gauss(rng);
    push(ds, x, y, 0);
  }
  const bool x_long = scale_x > scale_y;
  const double long_scale = x_long ? scale_x : scale_y;
  const double short_scale = x_long ? scale_y : scale_x;
  for (std::size_t i = 0; i < n_anomaly; ++i) {
    const double along = long_scale * (-1.5 + 3.0 * unit(rng));
    const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double across = side * short_scale * (3.0 + unit(rng));
    if (x_long) {
      push(ds, along, across, 1);
    } else {
      push(ds, across, along, 1);
    }
  }
  return ds;
}

Dataset gen_square_demo(std::size_t n_normal, std::uint64_t seed) {
  if (n_normal < 8) {
    throw Error(ErrorCode::kInvalidArgument, "square demo needs at least 8 normal points");
  }
  Dataset ds = planar("square-demo");
  // Four fifths of the normals sample the square's boundary evenly so no
  // single boundary point carries much area; the rest fill the interior.
  const std::size_t per_edge = std::max<std::size_t>(2, n_normal * 4 / 5 / 4);
  const double step = 1.0 / static_cast<double>(per_edge);
  for (std::size_t i = 0; i < per_edge; ++i) {
    const double t = static_cast<double>(i) * step;
    push(ds, t, 0.0, 0);
    push(ds, 1.0, t, 0);
    push(ds, 1.0 - t, 1.0, 0);
    push(ds, 0.0, 1.0 - t, 0);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> inner(0.1, 0.9);
  while (ds.rows() < n_normal) {
    const double x = inner(rng);
    const double y = inner(rng);
    push(ds, x, y, 0);
  }
  push(ds, 1.5, 0.45, 1);
  push(ds, -0.45, 0.6, 1);
  return ds;
}

std::vector<double> column_variances(const Matrix& matrix) {
  const std::size_t n = matrix.rows();
  std::vector<double> out(matrix.cols(), 0.0);
  if (n < 2) return out;
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += matrix(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (matrix(r, c) - mean) * (matrix(r, c) - mean);
    out[c] = ss / static_cast<double>(n - 1);
  }
  return out;
}

Dataset add_gaussian_noise(const Dataset& dataset, double level, std::uint64_t seed) {
  if (!(level >= 0.0) || !std::isfinite(level)) {
    throw Error(ErrorCode::kInvalidArgument, "noise level must be a finite value >= 0");
  }
  Dataset out = dataset;
  if (level == 0.0) return out;
  const std::vector<double> var = column_variances(dataset.features);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      const double sd = std::sqrt(level * var[c]);
      const double z = gauss(rng);
      if (sd > 0.0) out.features(r, c) += sd * z;
    }
  }
  return out;
}

}  // namespace hullpeel::data
