#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hullpeel/evaluation.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hullpeel;
using namespace hullpeel::evaluation;
using Catch::Approx;

TEST_CASE("confusion examples") {
  CHECK(confusion(std::vector<int>{1, 0}, std::vector<int>{1, 0}) == ConfusionCounts{1, 0, 1, 0});
  CHECK(confusion(std::vector<int>{1, 1}, std::vector<int>{0, 0}).fp == 2);
  CHECK(confusion(std::vector<int>{1, 0, 1, 0}, std::vector<int>{1, 1, 0, 0}) ==
        ConfusionCounts{1, 1, 1, 1});
  CHECK(support::error_of([] { confusion(std::vector<int>{1}, std::vector<int>{1, 0}); }) ==
        ErrorCode::kLengthMismatch);
  CHECK(support::error_of([] { confusion(std::vector<int>{2}, std::vector<int>{1}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("metric examples") {
  const auto perfect = metrics({1, 0, 1, 0});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  const auto none = metrics({0, 0, 5, 5});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.accuracy == 0.5);
  const auto half = metrics({1, 1, 1, 1});
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  CHECK(half.f1 == 0.5);
  CHECK(half.accuracy == 0.5);
  CHECK(support::error_of([] { metrics({0, 0, 0, 0}); }) == ErrorCode::kEmptyInput);
}

TEST_CASE("auc examples") {
  CHECK(roc_auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
  CHECK(roc_auc(std::vector<double>{3, 3, 3, 3}, std::vector<int>{1, 0, 1, 0}) == 0.5);
  CHECK(roc_auc(std::vector<double>{0.8, 0.6, 0.4, 0.2}, std::vector<int>{1, 0, 1, 0}) == 0.75);
  CHECK(support::error_of([] { roc_auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}); }) ==
        ErrorCode::kSingleClass);
  CHECK(support::error_of([] { roc_auc(std::vector<double>{1}, std::vector<int>{1, 0}); }) ==
        ErrorCode::kLengthMismatch);
}

TEST_CASE("evaluate leaves auc empty for single-class truth") {
  const auto r = evaluate(std::vector<int>{0, 0}, std::vector<double>{0.1, 0.2},
                          std::vector<int>{0, 0}, 1.5);
  CHECK_FALSE(r.auc.has_value());
  CHECK(r.computation_time_s == 1.5);
  CHECK(r.accuracy == 1.0);
}

TEST_CASE("property: metrics match the pair-counting oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 99;
    std::vector<int> pred(n), truth(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = int(rng() % 2);
      truth[i] = int(rng() % 2);
      scores[i] = double(rng() % 7);  // plenty of ties
    }
    truth[0] = 1;
    truth[1] = 0;
    const auto c = confusion(pred, truth);
    const auto o = oracle::count_pairs(pred, truth);
    REQUIRE(c == ConfusionCounts{o.tp, o.fp, o.tn, o.fn});
    const auto m = metrics(c);
    const double p = (o.tp + o.fp) ? double(o.tp) / double(o.tp + o.fp) : 0.0;
    const double r = (o.tp + o.fn) ? double(o.tp) / double(o.tp + o.fn) : 0.0;
    REQUIRE(m.precision == Approx(p).margin(1e-12));
    REQUIRE(m.recall == Approx(r).margin(1e-12));
    REQUIRE(m.f1 == Approx(p + r > 0 ? 2 * p * r / (p + r) : 0.0).margin(1e-12));
    REQUIRE(m.accuracy == Approx(double(o.tp + o.tn) / double(n)).margin(1e-12));
    REQUIRE(roc_auc(scores, truth) == Approx(oracle::pair_auc(scores, truth)).margin(1e-12));
  }
}

TEST_CASE("property: auc invariances") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 + rng() % 50;
    std::vector<double> s(n), warped(n), neg(n);
    std::vector<int> t(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = g(rng);
      warped[i] = std::exp(2 * s[i]) + 5;
      neg[i] = -s[i];
      t[i] = int(rng() % 2);
    }
    t[0] = 1;
    t[1] = 0;
    const double a = roc_auc(s, t);
    REQUIRE(roc_auc(warped, t) == Approx(a).margin(1e-12));
    REQUIRE(roc_auc(neg, t) == Approx(1 - a).margin(1e-12));
  }
}
