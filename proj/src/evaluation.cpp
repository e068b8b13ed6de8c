#include "hullpeel/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hullpeel/error.hpp"

namespace hullpeel::evaluation {

namespace {

void check_binary(std::span<const int> labels, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " label at position " +
                                                   std::to_string(i) + " is not 0 or 1");
    }
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predicted has " + std::to_string(predicted.size()) +
                                                " labels, truth has " +
                                                std::to_string(truth.size()));
  }
  check_binary(predicted, "predicted");
  check_binary(truth, "truth");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == 1) {
      (truth[i] == 1 ? c.tp : c.fp) += 1;
    } else {
      (truth[i] == 1 ? c.fn : c.tn) += 1;
    }
  }
  return c;
}

ClassificationMetrics metrics(const ConfusionCounts& counts) {
  if (counts.total() == 0) {
    throw Error(ErrorCode::kEmptyInput, "metrics need at least one labelled point");
  }
  ClassificationMetrics m;
  m.accuracy = ratio(counts.tp + counts.tn, counts.total());
  m.precision = ratio(counts.tp, counts.tp + counts.fp);
  m.recall = ratio(counts.tp, counts.tp + counts.fn);
  const double denom = m.precision + m.recall;
  m.f1 = denom > 0.0 ? 2.0 * m.precision * m.recall / denom : 0.0;
  return m;
}

double roc_auc(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and truth differ in length");
  }
  check_binary(truth, "truth");
  const std::size_t n = scores.size();
  const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), 1));
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kSingleClass, "AUC needs both classes in the truth labels");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of (1-based, tie-averaged) ranks of the positives. Ranks are kept
  // doubled so tie averages stay integral.
  std::size_t doubled_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::size_t doubled_avg = (i + 1) + j;  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]] == 1) doubled_rank_sum += doubled_avg;
    }
    i = j;
  }
  // U = R_pos - P(P+1)/2; doubled: 2U = 2R_pos - P(P+1).
  const double doubled_u =
      static_cast<double>(doubled_rank_sum) - static_cast<double>(positives * (positives + 1));
  return doubled_u / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

EvalReport evaluate(std::span<const int> predicted, std::span<const double> scores,
                    std::span<const int> truth, double computation_time_s) {
  const ClassificationMetrics m = metrics(confusion(predicted, truth));
  EvalReport r;
  r.accuracy = m.accuracy;
  r.precision = m.precision;
  r.recall = m.recall;
  r.f1 = m.f1;
  const auto positives = std::count(truth.begin(), truth.end(), 1);
  if (positives > 0 && static_cast<std::size_t>(positives) < truth.size()) {
    r.auc = roc_auc(scores, truth);
  }
  r.computation_time_s = computation_time_s;
  return r;
}

}  // namespace hullpeel::evaluation
