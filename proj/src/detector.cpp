#include "hullpeel/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hullpeel/error.hpp"
#include "hullpeel/parallel.hpp"

namespace hullpeel::detector {

namespace {

// Candidate volumes within this fraction of the current volume count as tied;
// ties go to the lowest row index.
constexpr double kTieTolerance = 1e-12;
// Allowed roundoff when a removal appears to grow the hull.
constexpr double kGrowthTolerance = 1e-9;
constexpr double kScoreOrderEpsilon = 1e-12;

}  // namespace

std::string_view stop_kind_name(StopKind kind) {
  switch (kind) {
    case StopKind::kNaive: return "naive";
    case StopKind::kElbow: return "elbow";
    case StopKind::kOptimal: return "optimal";
    case StopKind::kObjective: return "objective";
  }
  return "unknown";
}

std::optional<StopKind> parse_stop_kind(std::string_view name) {
  for (StopKind k : {StopKind::kNaive, StopKind::kElbow, StopKind::kOptimal, StopKind::kObjective}) {
    if (stop_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kCriterionMet: return "criterion_met";
    case StopReason::kExhausted: return "exhausted";
    case StopReason::kOptimalKReached: return "optimal_k_reached";
  }
  return "unknown";
}

StoppingRule StoppingRule::naive(double fraction) {
  return {StopKind::kNaive, fraction, std::nullopt};
}
StoppingRule StoppingRule::elbow() { return {StopKind::kElbow, 0.01, std::nullopt}; }
StoppingRule StoppingRule::optimal(std::size_t k) { return {StopKind::kOptimal, 0.01, k}; }
StoppingRule StoppingRule::objective() { return {StopKind::kObjective, 0.01, std::nullopt}; }

void StoppingRule::validate() const {
  if ((kind == StopKind::kOptimal) != optimal_k.has_value()) {
    throw Error(ErrorCode::kInvalidArgument, "optimal_k must be given exactly for the optimal rule");
  }
  if (!(naive_fraction > 0.0 && naive_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "naive_fraction must lie in (0, 1)");
  }
}

std::vector<double> VolumeProfile::volumes() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.volume);
  return out;
}

VolumeProfile VolumeProfile::from_volumes(const std::vector<double>& volumes, double lambda,
                                          std::size_t n) {
  VolumeProfile p;
  for (std::size_t t = 0; t < volumes.size(); ++t) {
    ProfileStep s;
    s.step = t;
    if (t > 0) s.removed = t - 1;
    s.volume = volumes[t];
    const std::size_t remaining = n >= t ? n - t : 0;
    s.objective = objective(remaining, volumes[t], lambda);
    p.steps.push_back(s);
  }
  return p;
}

std::vector<int> DetectionResult::labels() const {
  std::vector<int> out(scores.size(), 0);
  for (std::size_t idx : anomalies) out[idx] = 1;
  return out;
}

double objective(std::size_t remaining_count, double volume, double lambda) {
  return static_cast<double>(remaining_count) - lambda * volume;
}

bool stop_naive(const VolumeProfile& profile, double fraction) {
  if (profile.size() < 2) {
    throw Error(ErrorCode::kInsufficientProfile, "naive rule needs at least 2 profile steps");
  }
  const double original = profile.volume(0) - profile.volume(1);
  if (original <= 0.0) return true;
  const std::size_t last = profile.last_step();
  const double latest = profile.volume(last - 1) - profile.volume(last);
  return latest < fraction * original;
}

std::size_t stop_elbow(const VolumeProfile& profile) {
  if (profile.size() < 3) {
    throw Error(ErrorCode::kInsufficientProfile, "elbow rule needs at least 3 profile steps");
  }
  const std::vector<double> v = profile.volumes();
  const std::size_t last = v.size() - 1;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double span = *hi_it - *lo_it;
  auto norm_y = [&](std::size_t t) { return span > 0.0 ? (v[t] - *lo_it) / span : 0.0; };
  const double y0 = norm_y(0);
  const double y1 = norm_y(last);

  // Signed distance below the chord (0, y0) -> (1, y1), up to a constant
  // factor that is the same for every step.
  std::size_t best = 1;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < last; ++t) {
    const double x = static_cast<double>(t) / static_cast<double>(last);
    const double chord = y0 + (y1 - y0) * x;
    const double gap = chord - norm_y(t);
    if (gap > best_gap) {
      best_gap = gap;
      best = t;
    }
  }
  return best;
}

std::size_t stop_objective(const VolumeProfile& profile) {
  if (profile.size() == 0) {
    throw Error(ErrorCode::kInsufficientProfile, "empty profile");
  }
  std::size_t best = 0;
  for (std::size_t t = 1; t < profile.size(); ++t) {
    if (profile.steps[t].objective > profile.steps[best].objective) best = t;
  }
  return best;
}

std::vector<double> anomaly_scores(const VolumeProfile& profile, std::size_t stop_step,
                                   std::size_t n) {
  std::vector<double> scores(n, 0.0);
  if (profile.size() == 0) return scores;
  stop_step = std::min(stop_step, profile.last_step());
  const double base = profile.volume(0);
  for (std::size_t t = 1; t <= stop_step; ++t) {
    const auto& s = profile.steps[t];
    if (!s.removed || *s.removed >= n) continue;
    const double drop = base > 0.0 ? (profile.volume(t - 1) - s.volume) / base : 0.0;
    scores[*s.removed] =
        std::max(drop, 0.0) + kScoreOrderEpsilon * static_cast<double>(stop_step - t + 1);
  }
  return scores;
}

Friendliness ch_friendly(const VolumeProfile& profile, std::size_t window, double threshold) {
  Friendliness out;
  if (profile.size() == 0 || profile.volume(0) <= 0.0) return out;
  const std::size_t at = std::min(window, profile.last_step());
  out.ratio = (profile.volume(0) - profile.volume(at)) / profile.volume(0);
  out.friendly = out.ratio >= threshold;
  return out;
}

namespace {

struct Candidate {
  std::optional<geometry::ConvexHull> hull;  // empty when the set degenerates
};

}  // namespace

DetectionResult peel(const Matrix& points, const DetectorConfig& config) {
  config.stopping.validate();
  if (config.lambda < 0.0 || !std::isfinite(config.lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be a finite non-negative number");
  }
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (d < 2) {
    throw Error(ErrorCode::kDimensionMismatch, "peeling needs at least 2 dimensions");
  }
  if (n < d + 2) {
    throw Error(ErrorCode::kTooFewPoints, "peeling needs at least d + 2 = " +
                                              std::to_string(d + 2) + " points, got " +
                                              std::to_string(n));
  }
  const std::size_t min_points = config.min_points.value_or(d + 1);
  if (min_points < d + 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_points must be at least d + 1");
  }
  const StopKind kind = config.stopping.kind;
  const bool full_run = kind == StopKind::kElbow || kind == StopKind::kObjective;
  const std::size_t floor = full_run ? std::max<std::size_t>(min_points, 3) : min_points;
  const std::size_t threads = config.threads > 0 ? config.threads : default_thread_count();

  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});
  geometry::ConvexHull hull = geometry::compute_hull(points, active, config.algorithm);

  DetectionResult result;
  auto record = [&](std::optional<std::size_t> removed, double volume) {
    ProfileStep s;
    s.step = result.profile.size();
    s.removed = removed;
    s.volume = volume;
    s.objective = config.record_objective ? objective(active.size(), volume, config.lambda) : 0.0;
    result.profile.steps.push_back(s);
  };
  record(std::nullopt, hull.volume());

  std::optional<std::size_t> stop_step;
  StopReason reason = StopReason::kExhausted;
  if (kind == StopKind::kOptimal && *config.stopping.optimal_k == 0) {
    stop_step = 0;
    reason = StopReason::kOptimalKReached;
  }

  while (!stop_step && active.size() > floor) {
    const double current = result.profile.steps.back().volume;
    const std::vector<std::size_t>& vertices = hull.vertex_indices();
    std::vector<Candidate> candidates(vertices.size());
    parallel_for(vertices.size(), threads, [&](std::size_t c) {
      std::vector<std::size_t> rest;
      rest.reserve(active.size() - 1);
      for (std::size_t idx : active) {
        if (idx != vertices[c]) rest.push_back(idx);
      }
      try {
        candidates[c].hull = geometry::compute_hull(points, rest, config.algorithm);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateInput) throw;
      }
    });

    // Degenerate leftovers end the run; otherwise take the smallest volume,
    // lowest row index among ties.
    if (std::any_of(candidates.begin(), candidates.end(),
                    [](const Candidate& c) { return !c.hull; })) {
      break;
    }
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) smallest = std::min(smallest, c.hull->volume());
    std::size_t pick = 0;
    while (candidates[pick].hull->volume() > smallest + kTieTolerance * current) ++pick;
    const double next = candidates[pick].hull->volume();
    if (next > current * (1.0 + kGrowthTolerance)) break;

    const std::size_t removed = vertices[pick];
    active.erase(std::find(active.begin(), active.end(), removed));
    geometry::ConvexHull next_hull = std::move(*candidates[pick].hull);
    hull = std::move(next_hull);
    record(removed, std::min(next, current));
    const std::size_t t = result.profile.last_step();

    if (kind == StopKind::kNaive && stop_naive(result.profile, config.stopping.naive_fraction)) {
      stop_step = t - 1;
      reason = StopReason::kCriterionMet;
    } else if (kind == StopKind::kOptimal && t == *config.stopping.optimal_k) {
      stop_step = t;
      reason = StopReason::kOptimalKReached;
    }
  }

  if (!stop_step) {
    if (kind == StopKind::kElbow && result.profile.size() >= 3) {
      stop_step = stop_elbow(result.profile);
      reason = StopReason::kCriterionMet;
    } else if (kind == StopKind::kObjective) {
      stop_step = stop_objective(result.profile);
      reason = StopReason::kCriterionMet;
    } else {
      stop_step = result.profile.last_step();
      reason = StopReason::kExhausted;
    }
  }

  result.stop_step = *stop_step;
  result.stop_reason = reason;
  for (std::size_t t = 1; t <= result.stop_step; ++t) {
    result.anomalies.push_back(*result.profile.steps[t].removed);
  }
  result.scores = anomaly_scores(result.profile, result.stop_step, n);
  return result;
}

}  // namespace hullpeel::detector
