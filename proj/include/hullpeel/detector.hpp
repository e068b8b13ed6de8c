#pragma once

// Greedy volume peeling. Each round recomputes the hull of the current set
// without each hull vertex in turn and removes the vertex whose absence
// leaves the smallest hull. The sequence of volumes (the profile) drives the
// stopping rules and the anomaly scores.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hullpeel/geometry.hpp"
#include "hullpeel/matrix.hpp"

namespace hullpeel::detector {

enum class StopKind {
  kNaive,      // drop falls below a fraction of the first drop
  kElbow,      // full run, then the profile's elbow
  kOptimal,    // exactly k removals (k known in advance)
  kObjective,  // full run, then the step maximizing remaining - lambda * volume
};

std::string_view stop_kind_name(StopKind kind);
std::optional<StopKind> parse_stop_kind(std::string_view name);

struct StoppingRule {
  StopKind kind = StopKind::kNaive;
  double naive_fraction = 0.01;
  std::optional<std::size_t> optimal_k;

  static StoppingRule naive(double fraction = 0.01);
  static StoppingRule elbow();
  static StoppingRule optimal(std::size_t k);
  static StoppingRule objective();

  /// Throws kInvalidArgument when optimal_k presence disagrees with kind or
  /// naive_fraction is outside (0, 1).
  void validate() const;
};

struct DetectorConfig {
  StoppingRule stopping;
  double lambda = 1.0;
  /// Smallest set size peeling may leave; defaults to d + 1.
  std::optional<std::size_t> min_points;
  bool record_objective = true;
  /// Workers for candidate evaluation; 0 means default_thread_count().
  std::size_t threads = 0;
  geometry::HullAlgorithm algorithm = geometry::HullAlgorithm::kAuto;
};

struct ProfileStep {
  std::size_t step = 0;
  std::optional<std::size_t> removed;  // absent at step 0
  double volume = 0.0;
  double objective = 0.0;
};

struct VolumeProfile {
  std::vector<ProfileStep> steps;

  std::size_t size() const noexcept { return steps.size(); }
  std::size_t last_step() const noexcept { return steps.empty() ? 0 : steps.size() - 1; }
  double volume(std::size_t step) const { return steps.at(step).volume; }
  std::vector<double> volumes() const;

  /// Synthetic profile over the given volumes; step t > 0 records removal of
  /// point t - 1. For analysing volume curves directly.
  static VolumeProfile from_volumes(const std::vector<double>& volumes, double lambda = 0.0,
                                    std::size_t n = 0);
};

enum class StopReason { kCriterionMet, kExhausted, kOptimalKReached };
std::string_view stop_reason_name(StopReason reason);

struct DetectionResult {
  std::vector<std::size_t> anomalies;  // removal order
  std::vector<double> scores;          // one per input row
  VolumeProfile profile;
  std::size_t stop_step = 0;
  StopReason stop_reason = StopReason::kExhausted;

  /// Per-row anomaly flags (1 = anomaly).
  std::vector<int> labels() const;
};

struct Friendliness {
  bool friendly = false;
  double ratio = 0.0;
};

/// Runs the peeling loop. Requires n >= d + 2 and a full-dimensional initial
/// hull (kTooFewPoints / kDegenerateInput otherwise).
DetectionResult peel(const Matrix& points, const DetectorConfig& config);

/// remaining_count - lambda * volume
double objective(std::size_t remaining_count, double volume, double lambda);

/// True iff the latest drop is below fraction * (first drop); true at once
/// when the first drop is zero. kInsufficientProfile below 2 steps.
bool stop_naive(const VolumeProfile& profile, double fraction);

/// Step with the largest normalized gap below the chord from the first to the
/// last profile point; interior steps only, ties toward the smaller step.
/// kInsufficientProfile below 3 steps.
std::size_t stop_elbow(const VolumeProfile& profile);

/// Step with the largest recorded objective, ties toward the smaller step.
std::size_t stop_objective(const VolumeProfile& profile);

/// Removed point at step t <= stop_step scores its relative volume drop
/// (v[t-1] - v[t]) / v[0] plus a 1e-12 * (stop_step - t + 1) order bonus;
/// everything else scores 0.
std::vector<double> anomaly_scores(const VolumeProfile& profile, std::size_t stop_step,
                                   std::size_t n);

/// Relative volume reduction over the first `window` steps (clamped to the
/// profile length), compared against `threshold`.
Friendliness ch_friendly(const VolumeProfile& profile, std::size_t window = 10,
                         double threshold = 0.5);

}  // namespace hullpeel::detector
