#include "hullpeel/report.hpp"

#include <charconv>
#include <chrono>
#include <ctime>

namespace hullpeel::report {

using nlohmann::json;

json to_json(const evaluation::EvalReport& eval) {
  json j = {{"accuracy", eval.accuracy},
            {"precision", eval.precision},
            {"recall", eval.recall},
            {"f1", eval.f1}};
  j["auc"] = eval.auc ? json(*eval.auc) : json(nullptr);
  return j;
}

json to_json(const detector::VolumeProfile& profile) {
  json steps = json::array();
  for (const auto& s : profile.steps) {
    steps.push_back({{"step", s.step},
                     {"removed", s.removed ? json(*s.removed) : json(nullptr)},
                     {"volume", s.volume},
                     {"objective", s.objective}});
  }
  return steps;
}

json to_json(const StageTiming& timing) {
  return {{"load_s", timing.load_s},
          {"reduce_s", timing.reduce_s},
          {"detect_s", timing.detect_s},
          {"evaluate_s", timing.evaluate_s},
          {"total_s", timing.total_s()}};
}

ProfileSummary summarize(const detector::VolumeProfile& profile) {
  ProfileSummary s;
  s.steps = profile.size();
  if (profile.size() > 0) {
    s.volume0 = profile.volume(0);
    s.volume_final = profile.volume(profile.last_step());
  }
  return s;
}

json to_json(const RunRecord& record) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["dataset"] = record.dataset;
  j["detector"] = record.detector;
  j["config"] = record.config;
  j["metrics"] = record.eval ? to_json(*record.eval) : json(nullptr);
  if (record.ch_friendly) {
    j["ch_friendly"] = {{"friendly", record.ch_friendly->friendly},
                        {"ratio", record.ch_friendly->ratio}};
  } else {
    j["ch_friendly"] = nullptr;
  }
  if (record.profile) {
    j["profile_summary"] = {{"steps", record.profile->steps},
                            {"volume0", record.profile->volume0},
                            {"volume_final", record.profile->volume_final}};
  } else {
    j["profile_summary"] = nullptr;
  }
  j["seed"] = record.seed;
  j["timestamp"] = record.timestamp;
  json timing = to_json(record.timing);
  if (record.eval) timing["computation_time_s"] = record.eval->computation_time_s;
  j["timing"] = timing;
  return j;
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.dataset = j.at("dataset").get<std::string>();
  r.detector = j.at("detector").get<std::string>();
  r.config = j.at("config");
  const json& timing = j.at("timing");
  r.timing.load_s = timing.at("load_s").get<double>();
  r.timing.reduce_s = timing.at("reduce_s").get<double>();
  r.timing.detect_s = timing.at("detect_s").get<double>();
  r.timing.evaluate_s = timing.at("evaluate_s").get<double>();
  if (!j.at("metrics").is_null()) {
    const json& m = j.at("metrics");
    evaluation::EvalReport e;
    e.accuracy = m.at("accuracy").get<double>();
    e.precision = m.at("precision").get<double>();
    e.recall = m.at("recall").get<double>();
    e.f1 = m.at("f1").get<double>();
    if (!m.at("auc").is_null()) e.auc = m.at("auc").get<double>();
    e.computation_time_s = timing.value("computation_time_s", 0.0);
    r.eval = e;
  }
  if (!j.at("ch_friendly").is_null()) {
    r.ch_friendly = detector::Friendliness{j["ch_friendly"].at("friendly").get<bool>(),
                                           j["ch_friendly"].at("ratio").get<double>()};
  }
  if (!j.at("profile_summary").is_null()) {
    const json& p = j["profile_summary"];
    r.profile = ProfileSummary{p.at("steps").get<std::size_t>(), p.at("volume0").get<double>(),
                               p.at("volume_final").get<double>()};
  }
  r.seed = j.at("seed").get<std::uint64_t>();
  r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json strip_volatile(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "timestamp" || it.key() == "timing") continue;
      out[it.key()] = strip_volatile(it.value());
    }
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(strip_volatile(v));
    return out;
  }
  return j;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace hullpeel::report
