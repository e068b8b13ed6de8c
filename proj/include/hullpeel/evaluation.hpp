#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>

namespace hullpeel::evaluation {

/// Anomaly is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> auc;  // absent when the truth has a single class
  double computation_time_s = 0.0;
};

/// Labels are 0/1. kLengthMismatch on unequal lengths, kInvalidArgument on
/// values other than 0 and 1.
ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> truth);

/// 0/0 is taken as 0 for precision, recall and F1. kEmptyInput when n = 0.
ClassificationMetrics metrics(const ConfusionCounts& counts);

/// Mann-Whitney statistic: P(score_pos > score_neg) + 0.5 P(equal), computed
/// from average ranks. kSingleClass if only one class is present.
double roc_auc(std::span<const double> scores, std::span<const int> truth);

/// Full report; auc is left empty for single-class truth.
EvalReport evaluate(std::span<const int> predicted, std::span<const double> scores,
                    std::span<const int> truth, double computation_time_s = 0.0);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace hullpeel::evaluation
