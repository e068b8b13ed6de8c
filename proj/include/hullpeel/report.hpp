#pragma once

// JSON report records shared by the CLI commands. Every document carries
// "schema_version": 1. Wall-clock data lives under "timing" and "timestamp";
// everything else is reproducible for a fixed seed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "hullpeel/detector.hpp"
#include "hullpeel/evaluation.hpp"

namespace hullpeel::report {

inline constexpr int kSchemaVersion = 1;

struct ProfileSummary {
  std::size_t steps = 0;
  double volume0 = 0.0;
  double volume_final = 0.0;

  friend bool operator==(const ProfileSummary&, const ProfileSummary&) = default;
};

struct StageTiming {
  double load_s = 0.0;
  double reduce_s = 0.0;
  double detect_s = 0.0;
  double evaluate_s = 0.0;

  double total_s() const { return load_s + reduce_s + detect_s + evaluate_s; }
};

struct RunRecord {
  std::string dataset;
  std::string detector;
  nlohmann::json config = nlohmann::json::object();
  std::optional<evaluation::EvalReport> eval;  // computation_time_s = detect stage
  std::optional<detector::Friendliness> ch_friendly;
  std::optional<ProfileSummary> profile;
  std::uint64_t seed = 0;
  std::string timestamp;
  StageTiming timing;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const evaluation::EvalReport& eval);
nlohmann::json to_json(const detector::VolumeProfile& profile);
nlohmann::json to_json(const StageTiming& timing);
ProfileSummary summarize(const detector::VolumeProfile& profile);

/// ISO-8601 UTC, second resolution.
std::string utc_timestamp();

/// Copy with every "timestamp" and "timing" member removed at any depth.
nlohmann::json strip_volatile(const nlohmann::json& j);

/// Exact textual rendering of a double (shortest round-trip form).
std::string format_double(double v);

}  // namespace hullpeel::report
