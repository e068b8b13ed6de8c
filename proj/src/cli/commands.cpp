#include "hullpeel/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hullpeel/data.hpp"
#include "hullpeel/detector.hpp"
#include "hullpeel/error.hpp"
#include "hullpeel/evaluation.hpp"
#include "hullpeel/iforest.hpp"
#include "hullpeel/parallel.hpp"
#include "hullpeel/reduction.hpp"
#include "hullpeel/report.hpp"

namespace hullpeel::cli {

namespace {

using nlohmann::json;
using evaluation::Stopwatch;

// Seed offsets: every random stream derives from --seed.
constexpr std::uint64_t kForestSeedOffset = 0;
constexpr std::uint64_t kNoiseSeedOffset = 100;
constexpr std::uint64_t kNoiseLevelStride = 1000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared pipeline pieces

struct InputOptions {
  std::string path;
  std::string label_col;
  bool no_header = false;
};

data::Dataset load_input(const InputOptions& in) {
  std::optional<data::LabelColumn> label;
  if (!in.label_col.empty()) {
    if (in.no_header) {
      std::size_t idx = 0;
      const auto [ptr, ec] =
          std::from_chars(in.label_col.data(), in.label_col.data() + in.label_col.size(), idx);
      if (ec != std::errc() || ptr != in.label_col.data() + in.label_col.size()) {
        throw UsageError("--label-col must be a column index when --no-header is set");
      }
      label = idx;
    } else {
      label = in.label_col;
    }
  }
  return data::load_csv(in.path, label, !in.no_header);
}

struct ChSetup {
  reduction::ReductionConfig reduce;
  detector::DetectorConfig detect;
  std::size_t friendly_window = 10;
  double friendly_threshold = 0.5;
};

struct ChOutcome {
  detector::DetectionResult result;
  detector::Friendliness friendly;
  std::optional<evaluation::EvalReport> eval;
  report::StageTiming timing;
};

ChOutcome run_ch(const data::Dataset& ds, const ChSetup& setup) {
  ChOutcome out;
  Stopwatch reduce_clock;
  const Matrix points = reduction::reduce(ds.features, setup.reduce);
  out.timing.reduce_s = reduce_clock.seconds();

  Stopwatch detect_clock;
  out.result = detector::peel(points, setup.detect);
  out.timing.detect_s = detect_clock.seconds();
  out.friendly =
      detector::ch_friendly(out.result.profile, setup.friendly_window, setup.friendly_threshold);

  if (ds.labels) {
    Stopwatch eval_clock;
    const std::vector<int> predicted = out.result.labels();
    out.eval = evaluation::evaluate(predicted, out.result.scores, *ds.labels, out.timing.detect_s);
    out.timing.evaluate_s = eval_clock.seconds();
  }
  return out;
}

struct IfSetup {
  iforest::ForestParams params;
  std::optional<double> contamination;  // default: labelled fraction, else params'
};

struct IfOutcome {
  std::vector<double> scores;
  std::vector<int> predicted;
  double contamination = 0.0;
  std::optional<evaluation::EvalReport> eval;
  report::StageTiming timing;
};

double resolve_contamination(const data::Dataset& ds, const IfSetup& setup) {
  if (setup.contamination) return *setup.contamination;
  if (ds.labels && ds.anomaly_count() > 0) {
    return std::min(0.5, static_cast<double>(ds.anomaly_count()) / static_cast<double>(ds.rows()));
  }
  return setup.params.contamination;
}

IfOutcome run_iforest(const data::Dataset& ds, const IfSetup& setup, std::size_t threads) {
  IfOutcome out;
  out.contamination = resolve_contamination(ds, setup);
  iforest::ForestParams params = setup.params;
  params.contamination = out.contamination;
  Stopwatch detect_clock;
  const auto model = iforest::iforest_fit(ds.features, params, threads);
  out.scores = iforest::iforest_score_all(model, ds.features);
  out.predicted = iforest::top_fraction_labels(out.scores, out.contamination);
  out.timing.detect_s = detect_clock.seconds();
  if (ds.labels) {
    Stopwatch eval_clock;
    out.eval = evaluation::evaluate(out.predicted, out.scores, *ds.labels, out.timing.detect_s);
    out.timing.evaluate_s = eval_clock.seconds();
  }
  return out;
}

json reduce_config_json(const reduction::ReductionConfig& c) {
  return {{"method", std::string(reduction::method_name(c.method))},
          {"target_dim", c.target_dim},
          {"standardize", c.standardize},
          {"embedding", c.embedding_path ? json(c.embedding_path->string()) : json(nullptr)}};
}

json detector_config_json(const detector::DetectorConfig& c) {
  json stop = {{"kind", std::string(detector::stop_kind_name(c.stopping.kind))},
               {"naive_fraction", c.stopping.naive_fraction}};
  stop["k"] = c.stopping.optimal_k ? json(*c.stopping.optimal_k) : json(nullptr);
  json j = {{"stop", stop}, {"lambda", c.lambda}};
  j["min_points"] = c.min_points ? json(*c.min_points) : json(nullptr);
  return j;
}

json ch_config_json(const ChSetup& s) {
  json j = detector_config_json(s.detect);
  j["reduce"] = reduce_config_json(s.reduce);
  j["friendly_window"] = s.friendly_window;
  j["friendly_threshold"] = s.friendly_threshold;
  return j;
}

json iforest_config_json(const IfSetup& s, double contamination) {
  return {{"n_trees", s.params.n_trees},
          {"subsample_size", s.params.subsample_size},
          {"contamination", contamination},
          {"seed", s.params.seed}};
}

json dataset_json(const data::Dataset& ds) {
  return {{"name", ds.name},
          {"rows", ds.rows()},
          {"cols", ds.cols()},
          {"labeled", ds.labels.has_value()},
          {"anomalies", ds.labels ? json(ds.anomaly_count()) : json(nullptr)}};
}

void emit_json(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
  f << text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
  f << text;
}

// Common flag sets ------------------------------------------------------------

struct ChFlags {
  std::string reduce = "pca";
  bool no_reduce = false;
  std::string embedding;
  bool no_standardize = false;
  std::size_t target_dim = 2;
  std::string stop = "naive";
  std::optional<std::size_t> k;
  double naive_fraction = 0.01;
  double lambda = 1.0;
  std::optional<std::size_t> min_points;
  std::size_t friendly_window = 10;
  double friendly_threshold = 0.5;
};

void add_input_flags(CLI::App* app, InputOptions& in, bool required = true) {
  auto* opt = app->add_option("--input", in.path, "Dataset CSV")->check(CLI::ExistingFile);
  if (required) opt->required();
  app->add_option("--label-col", in.label_col, "Label column name (index with --no-header)");
  app->add_flag("--no-header", in.no_header, "Input has no header row");
}

void add_stop_flags(CLI::App* app, ChFlags& f) {
  app->add_option("--stop", f.stop, "Stopping rule")
      ->check(CLI::IsMember({"naive", "elbow", "optimal", "objective"}));
  app->add_option("--k", f.k, "Removals for the optimal rule (default: labelled anomaly count)");
  app->add_option("--naive-fraction", f.naive_fraction, "Naive rule fraction of the first drop")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--lambda", f.lambda, "Objective weight of the hull volume")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--min-points", f.min_points, "Smallest set size peeling may leave");
  app->add_option("--friendly-window", f.friendly_window, "Steps for the CH-friendly ratio");
  app->add_option("--friendly-threshold", f.friendly_threshold, "CH-friendly cutoff");
}

void add_reduce_flags(CLI::App* app, ChFlags& f) {
  app->add_option("--reduce", f.reduce, "Dimensionality reduction")
      ->check(CLI::IsMember({"pca", "external", "none"}));
  app->add_flag("--no-reduce", f.no_reduce, "Peel in the native feature space");
  app->add_option("--embedding", f.embedding, "Headerless CSV embedding for --reduce external");
  app->add_flag("--no-standardize", f.no_standardize, "Skip z-scoring the features");
  app->add_option("--target-dim", f.target_dim, "PCA output dimension")->check(CLI::PositiveNumber);
}

detector::StoppingRule make_stop(const ChFlags& f, const data::Dataset& ds) {
  const auto kind = detector::parse_stop_kind(f.stop);
  if (!kind) throw UsageError("unknown stopping rule " + f.stop);
  switch (*kind) {
    case detector::StopKind::kNaive: return detector::StoppingRule::naive(f.naive_fraction);
    case detector::StopKind::kElbow: return detector::StoppingRule::elbow();
    case detector::StopKind::kObjective: return detector::StoppingRule::objective();
    case detector::StopKind::kOptimal:
      if (f.k) return detector::StoppingRule::optimal(*f.k);
      if (ds.labels) return detector::StoppingRule::optimal(ds.anomaly_count());
      throw UsageError("--stop optimal needs --k or a labelled dataset");
  }
  throw UsageError("unknown stopping rule");
}

ChSetup make_ch_setup(const ChFlags& f, const data::Dataset& ds, std::size_t threads) {
  ChSetup s;
  std::string method = f.no_reduce ? "none" : f.reduce;
  if (!f.embedding.empty() && !f.no_reduce && f.reduce == "pca") method = "external";
  s.reduce.method = *reduction::parse_method(method);
  s.reduce.target_dim = f.target_dim;
  s.reduce.standardize = !f.no_standardize;
  if (s.reduce.method == reduction::Method::kExternal) {
    if (f.embedding.empty()) throw UsageError("--reduce external needs --embedding");
    s.reduce.embedding_path = f.embedding;
  }
  s.detect.stopping = make_stop(f, ds);
  s.detect.lambda = f.lambda;
  s.detect.min_points = f.min_points;
  s.detect.threads = threads;
  s.friendly_window = f.friendly_window;
  s.friendly_threshold = f.friendly_threshold;
  return s;
}

// ---------------------------------------------------------------------------
// detect

struct DetectFlags {
  InputOptions input;
  ChFlags ch;
  std::uint64_t seed = 42;
  std::string out;
  std::string scores;
};

int cmd_detect(const DetectFlags& f, std::ostream& out) {
  Stopwatch load_clock;
  const data::Dataset ds = load_input(f.input);
  const double load_s = load_clock.seconds();

  const ChSetup setup = make_ch_setup(f.ch, ds, 0);
  ChOutcome run = run_ch(ds, setup);
  run.timing.load_s = load_s;

  json doc;
  doc["schema_version"] = report::kSchemaVersion;
  doc["command"] = "detect";
  doc["timestamp"] = report::utc_timestamp();
  doc["dataset"] = dataset_json(ds);
  json config = ch_config_json(setup);
  config["seed"] = f.seed;
  doc["config"] = config;
  doc["result"] = {{"anomalies", run.result.anomalies},
                   {"n_anomalies", run.result.anomalies.size()},
                   {"stop_step", run.result.stop_step},
                   {"stop_reason", std::string(detector::stop_reason_name(run.result.stop_reason))}};
  doc["profile"] = report::to_json(run.result.profile);
  doc["ch_friendly"] = {{"friendly", run.friendly.friendly}, {"ratio", run.friendly.ratio}};
  doc["metrics"] = run.eval ? report::to_json(*run.eval) : json(nullptr);
  doc["timing"] = report::to_json(run.timing);
  emit_json(doc, f.out, out);

  if (!f.scores.empty()) {
    std::ostringstream csv;
    csv << "index,score,predicted" << (ds.labels ? ",label" : "") << '\n';
    const std::vector<int> predicted = run.result.labels();
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      csv << i << ',' << report::format_double(run.result.scores[i]) << ',' << predicted[i];
      if (ds.labels) csv << ',' << (*ds.labels)[i];
      csv << '\n';
    }
    write_text(f.scores, csv.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> embeddings;
  std::string label_col;
  bool no_header = false;
  std::vector<std::string> stops{"naive", "elbow", "optimal"};
  std::vector<std::string> reductions{"pca", "none", "external"};
  std::size_t max_native_dim = 3;
  double naive_fraction = 0.01;
  double lambda = 1.0;
  std::size_t trees = 100;
  std::size_t subsample = 256;
  std::optional<double> contamination;
  std::uint64_t seed = 42;
  std::string out;
  std::string csv;
};

struct BenchCell {
  std::size_t dataset = 0;
  std::string detector_id;
  std::function<report::RunRecord()> run;
};

json mean_metrics(const std::vector<const report::RunRecord*>& records) {
  double acc = 0, prec = 0, rec = 0, f1 = 0, auc = 0;
  std::size_t n = 0, n_auc = 0;
  for (const auto* r : records) {
    if (!r->eval) continue;
    acc += r->eval->accuracy;
    prec += r->eval->precision;
    rec += r->eval->recall;
    f1 += r->eval->f1;
    if (r->eval->auc) {
      auc += *r->eval->auc;
      ++n_auc;
    }
    ++n;
  }
  if (n == 0) return nullptr;
  const double dn = static_cast<double>(n);
  json j = {{"accuracy", acc / dn}, {"precision", prec / dn}, {"recall", rec / dn}, {"f1", f1 / dn}};
  j["auc"] = n_auc ? json(auc / static_cast<double>(n_auc)) : json(nullptr);
  return j;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  if (!f.embeddings.empty() && f.embeddings.size() != f.inputs.size()) {
    throw UsageError("--embedding must be given once per --input");
  }
  const std::size_t threads = default_thread_count();

  std::vector<data::Dataset> datasets;
  std::vector<double> load_times;
  for (const auto& path : f.inputs) {
    Stopwatch clock;
    datasets.push_back(load_input({path, f.label_col, f.no_header}));
    load_times.push_back(clock.seconds());
  }

  std::vector<BenchCell> cells;
  for (std::size_t di = 0; di < datasets.size(); ++di) {
    const data::Dataset& ds = datasets[di];
    for (const auto& method : f.reductions) {
      if (method == "external" && f.embeddings.empty()) continue;
      if (method == "none" && ds.cols() > f.max_native_dim) continue;
      if (method == "pca" && ds.cols() < 2) continue;
      for (const auto& stop : f.stops) {
        if (stop == "optimal" && !ds.labels) continue;
        ChFlags flags;
        flags.reduce = method;
        if (method == "external") flags.embedding = f.embeddings[di];
        flags.stop = stop;
        flags.naive_fraction = f.naive_fraction;
        flags.lambda = f.lambda;
        // Cells already run in parallel; keep each peel single-threaded.
        ChSetup setup = make_ch_setup(flags, ds, 1);
        const std::string id = "ch-" + stop + "-" + method;
        cells.push_back({di, id, [&, di, setup, id] {
                           const data::Dataset& d = datasets[di];
                           ChOutcome run = run_ch(d, setup);
                           run.timing.load_s = load_times[di];
                           report::RunRecord r;
                           r.dataset = d.name;
                           r.detector = id;
                           r.config = ch_config_json(setup);
                           r.eval = run.eval;
                           r.ch_friendly = run.friendly;
                           r.profile = report::summarize(run.result.profile);
                           r.seed = f.seed;
                           r.timing = run.timing;
                           return r;
                         }});
      }
    }
    IfSetup if_setup;
    if_setup.params.n_trees = f.trees;
    if_setup.params.subsample_size = f.subsample;
    if_setup.params.seed = f.seed + kForestSeedOffset;
    if_setup.contamination = f.contamination;
    cells.push_back({di, "iforest", [&, di, if_setup] {
                       const data::Dataset& d = datasets[di];
                       IfOutcome run = run_iforest(d, if_setup, 1);
                       run.timing.load_s = load_times[di];
                       report::RunRecord r;
                       r.dataset = d.name;
                       r.detector = "iforest";
                       r.config = iforest_config_json(if_setup, run.contamination);
                       r.eval = run.eval;
                       r.seed = f.seed;
                       r.timing = run.timing;
                       return r;
                     }});
  }

  std::vector<report::RunRecord> records(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) { records[i] = cells[i].run(); });

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cells[a].dataset != cells[b].dataset) return cells[a].dataset < cells[b].dataset;
    return cells[a].detector_id < cells[b].detector_id;
  });

  const std::string stamp = report::utc_timestamp();
  json doc;
  doc["schema_version"] = report::kSchemaVersion;
  doc["command"] = "bench";
  doc["timestamp"] = stamp;
  doc["seed"] = f.seed;
  json rows = json::array();
  std::map<std::string, std::vector<const report::RunRecord*>> by_detector;
  for (std::size_t i : order) {
    records[i].timestamp = stamp;
    rows.push_back(report::to_json(records[i]));
    by_detector[records[i].detector].push_back(&records[i]);
  }
  doc["records"] = rows;
  json summary = json::array();
  for (const auto& [id, recs] : by_detector) {
    summary.push_back({{"detector", id},
                       {"datasets", recs.size()},
                       {"aggregation", "unweighted_mean"},
                       {"mean", mean_metrics(recs)}});
  }
  doc["summary"] = summary;
  emit_json(doc, f.out, out);

  if (!f.csv.empty()) {
    std::ostringstream csv;
    csv << "dataset,detector,accuracy,precision,recall,f1,auc,ch_friendly,ch_ratio,"
           "reduce_s,detect_s,total_s\n";
    for (std::size_t i : order) {
      const auto& r = records[i];
      csv << r.dataset << ',' << r.detector << ',';
      if (r.eval) {
        csv << report::format_double(r.eval->accuracy) << ','
            << report::format_double(r.eval->precision) << ','
            << report::format_double(r.eval->recall) << ',' << report::format_double(r.eval->f1)
            << ',' << (r.eval->auc ? report::format_double(*r.eval->auc) : "") << ',';
      } else {
        csv << ",,,,,";
      }
      if (r.ch_friendly) {
        csv << (r.ch_friendly->friendly ? "yes" : "no") << ','
            << report::format_double(r.ch_friendly->ratio) << ',';
      } else {
        csv << ",,";
      }
      csv << report::format_double(r.timing.reduce_s) << ','
          << report::format_double(r.timing.detect_s) << ','
          << report::format_double(r.timing.total_s()) << '\n';
    }
    write_text(f.csv, csv.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthFlags {
  std::string generator;
  std::string out;
  std::uint64_t seed = 7;
  std::optional<std::size_t> n_normal;
  std::optional<std::size_t> n_anomaly;
  double r_inner = 2.0;
  double r_outer = 3.0;
  double radius = 1.0;
  double noise_std = 0.03;
  double scale_x = 10.0;
  double scale_y = 1.0;
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  data::Dataset ds;
  if (f.generator == "torus") {
    ds = data::gen_torus(f.n_normal.value_or(500), f.n_anomaly.value_or(5), f.r_inner, f.r_outer,
                         f.seed);
  } else if (f.generator == "circle") {
    ds = data::gen_circle_noise(f.n_normal.value_or(200), f.n_anomaly.value_or(10), f.radius,
                                f.noise_std, f.seed);
  } else if (f.generator == "unnormalized") {
    ds = data::gen_unnormalized(f.n_normal.value_or(500), f.n_anomaly.value_or(10), f.scale_x,
                                f.scale_y, f.seed);
  } else if (f.generator == "square-demo") {
    if (f.n_anomaly && *f.n_anomaly != 2) {
      throw UsageError("square-demo always plants exactly 2 anomalies");
    }
    ds = data::gen_square_demo(f.n_normal.value_or(100), f.seed);
  } else {
    throw UsageError("unknown generator " + f.generator);
  }
  if (f.out.empty()) {
    out << data::to_csv(ds);
  } else {
    data::write_csv(ds, f.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// noise-sweep

struct SweepFlags {
  InputOptions input;
  ChFlags ch;
  std::string detector = "ch";
  std::vector<double> levels{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
  std::size_t repetitions = 10;
  std::size_t trees = 100;
  std::size_t subsample = 256;
  std::optional<double> contamination;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_noise_sweep(const SweepFlags& f, std::ostream& out) {
  const data::Dataset ds = load_input(f.input);
  if (!ds.labels) {
    throw Error(ErrorCode::kInvalidArgument, "noise-sweep needs a labelled dataset (--label-col)");
  }
  if (f.repetitions < 1) throw UsageError("--repetitions must be at least 1");
  for (double level : f.levels) {
    if (!(level >= 0.0)) throw UsageError("noise levels must be >= 0");
  }
  const bool use_ch = f.detector == "ch";
  const std::size_t threads = default_thread_count();

  ChSetup ch_setup;
  IfSetup if_setup;
  json config;
  if (use_ch) {
    ch_setup = make_ch_setup(f.ch, ds, 1);
    config = ch_config_json(ch_setup);
  } else {
    if_setup.params.n_trees = f.trees;
    if_setup.params.subsample_size = f.subsample;
    if_setup.params.seed = f.seed + kForestSeedOffset;
    if_setup.contamination = f.contamination;
    config = iforest_config_json(if_setup, resolve_contamination(ds, if_setup));
  }
  config["levels"] = f.levels;
  config["repetitions"] = f.repetitions;
  config["seed"] = f.seed;

  struct RepResult {
    evaluation::EvalReport eval;
    double detect_s = 0.0;
  };
  const std::size_t total = f.levels.size() * f.repetitions;
  std::vector<RepResult> results(total);
  parallel_for(total, threads, [&](std::size_t job) {
    const std::size_t li = job / f.repetitions;
    const std::size_t rep = job % f.repetitions;
    const std::uint64_t noise_seed = f.seed + kNoiseSeedOffset + kNoiseLevelStride * li + rep;
    const data::Dataset noisy = data::add_gaussian_noise(ds, f.levels[li], noise_seed);
    if (use_ch) {
      ChOutcome run = run_ch(noisy, ch_setup);
      results[job] = {*run.eval, run.timing.detect_s};
    } else {
      IfOutcome run = run_iforest(noisy, if_setup, 1);
      results[job] = {*run.eval, run.timing.detect_s};
    }
  });

  json rows = json::array();
  for (std::size_t li = 0; li < f.levels.size(); ++li) {
    double acc = 0, prec = 0, rec = 0, f1 = 0, auc = 0, ct = 0;
    std::size_t n_auc = 0;
    for (std::size_t rep = 0; rep < f.repetitions; ++rep) {
      const RepResult& r = results[li * f.repetitions + rep];
      acc += r.eval.accuracy;
      prec += r.eval.precision;
      rec += r.eval.recall;
      f1 += r.eval.f1;
      ct += r.detect_s;
      if (r.eval.auc) {
        auc += *r.eval.auc;
        ++n_auc;
      }
    }
    const double n = static_cast<double>(f.repetitions);
    json mean = {{"accuracy", acc / n}, {"precision", prec / n}, {"recall", rec / n}, {"f1", f1 / n}};
    mean["auc"] = n_auc ? json(auc / static_cast<double>(n_auc)) : json(nullptr);
    rows.push_back({{"level", f.levels[li]},
                    {"repetitions", f.repetitions},
                    {"mean", mean},
                    {"timing", {{"mean_detect_s", ct / n}}}});
  }

  json doc;
  doc["schema_version"] = report::kSchemaVersion;
  doc["command"] = "noise-sweep";
  doc["timestamp"] = report::utc_timestamp();
  doc["dataset"] = dataset_json(ds);
  doc["detector"] = use_ch ? "ch-" + f.ch.stop : std::string("iforest");
  doc["config"] = config;
  doc["rows"] = rows;
  emit_json(doc, f.out, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex hull volume peeling anomaly detector", "hullpeel"};
  app.require_subcommand(1);

  DetectFlags detect;
  auto* detect_cmd = app.add_subcommand("detect", "Peel a dataset and report anomalies");
  add_input_flags(detect_cmd, detect.input);
  add_reduce_flags(detect_cmd, detect.ch);
  add_stop_flags(detect_cmd, detect.ch);
  detect_cmd->add_option("--seed", detect.seed, "Base seed");
  detect_cmd->add_option("--out", detect.out, "JSON report path (default stdout)");
  detect_cmd->add_option("--scores", detect.scores, "Per-point score CSV path");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Compare hull configurations with Isolation Forest");
  bench_cmd->add_option("--input", bench.inputs, "Dataset CSV (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--embedding", bench.embeddings, "External embedding per input");
  bench_cmd->add_option("--label-col", bench.label_col, "Label column name");
  bench_cmd->add_flag("--no-header", bench.no_header, "Inputs have no header row");
  bench_cmd->add_option("--stops", bench.stops, "Stopping rules to run")
      ->check(CLI::IsMember({"naive", "elbow", "optimal", "objective"}));
  bench_cmd->add_option("--reductions", bench.reductions, "Reductions to run")
      ->check(CLI::IsMember({"pca", "external", "none"}));
  bench_cmd->add_option("--max-native-dim", bench.max_native_dim,
                        "Largest feature count peeled without reduction");
  bench_cmd->add_option("--naive-fraction", bench.naive_fraction)->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--lambda", bench.lambda)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--trees", bench.trees, "Isolation trees")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--subsample", bench.subsample, "Isolation subsample size")
      ->check(CLI::Range(2, 1 << 30));
  bench_cmd->add_option("--contamination", bench.contamination,
                        "Isolation Forest anomaly fraction (default: labelled fraction)")
      ->check(CLI::Range(0.0, 0.5));
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--out", bench.out, "JSON report path (default stdout)");
  bench_cmd->add_option("--csv", bench.csv, "Flat CSV table path");

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic labelled dataset");
  synth_cmd->add_option("generator", synth.generator, "torus | circle | unnormalized | square-demo")
      ->required()
      ->check(CLI::IsMember({"torus", "circle", "unnormalized", "square-demo"}));
  synth_cmd->add_option("--out", synth.out, "CSV path (default stdout)");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--n-normal", synth.n_normal, "Normal points");
  synth_cmd->add_option("--n-anomaly", synth.n_anomaly, "Anomalies");
  synth_cmd->add_option("--r-inner", synth.r_inner, "Torus inner radius");
  synth_cmd->add_option("--r-outer", synth.r_outer, "Torus outer radius");
  synth_cmd->add_option("--radius", synth.radius, "Circle radius");
  synth_cmd->add_option("--noise-std", synth.noise_std, "Circle jitter");
  synth_cmd->add_option("--scale-x", synth.scale_x, "Unnormalized x scale");
  synth_cmd->add_option("--scale-y", synth.scale_y, "Unnormalized y scale");

  SweepFlags sweep;
  sweep.ch.stop = "optimal";
  auto* sweep_cmd = app.add_subcommand("noise-sweep", "Metrics under additive Gaussian noise");
  add_input_flags(sweep_cmd, sweep.input);
  add_reduce_flags(sweep_cmd, sweep.ch);
  add_stop_flags(sweep_cmd, sweep.ch);
  sweep_cmd->add_option("--detector", sweep.detector, "ch | iforest")
      ->check(CLI::IsMember({"ch", "iforest"}));
  sweep_cmd->add_option("--levels", sweep.levels, "Noise levels as fractions of variance")
      ->delimiter(',');
  sweep_cmd->add_option("--repetitions", sweep.repetitions, "Repetitions per level");
  sweep_cmd->add_option("--trees", sweep.trees)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--subsample", sweep.subsample)->check(CLI::Range(2, 1 << 30));
  sweep_cmd->add_option("--contamination", sweep.contamination)->check(CLI::Range(0.0, 0.5));
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed");
  sweep_cmd->add_option("--out", sweep.out, "JSON report path (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*detect_cmd) return cmd_detect(detect, out);
    if (*bench_cmd) return cmd_bench(bench, out);
    if (*synth_cmd) return cmd_synth(synth, out);
    if (*sweep_cmd) return cmd_noise_sweep(sweep, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace hullpeel::cli
