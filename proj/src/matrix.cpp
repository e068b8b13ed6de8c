#include "hullpeel/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hullpeel/error.hpp"

namespace hullpeel {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kInsufficientProfile: return "InsufficientProfile";
    case ErrorCode::kRowCountMismatch: return "RowCountMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::kNonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kBadRadii: return "BadRadii";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(error_code_name(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::kEmptyInput, "matrix needs at least one row and one column");
  }
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                      " values, expected " + std::to_string(m.cols_));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "appended row has wrong length");
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace hullpeel
