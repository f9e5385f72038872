// Copyright 2026 The AgriSynth Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agrisynth/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "agrisynth/augment.hpp"
#include "agrisynth/compose.hpp"
#include "agrisynth/ganmetrics.hpp"
#include "agrisynth/parallel.hpp"
#include "agrisynth/random.hpp"
#include "agrisynth/segeval.hpp"

namespace agrisynth::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct GlobalFlags {
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  bool strict = false;
  bool pretty = false;
};

struct GeneratorFlags {
  std::string kind = "mock";
  std::string location;
  std::uint32_t crop_size = 512;
  std::uint32_t weed_size = 128;
  std::optional<std::uint64_t> fixed_seed;
  std::int64_t timeout_ms = 120000;

  void add_to(CLI::App* app) {
    app->add_option("--generator", kind, "Generator endpoint kind")
        ->check(CLI::IsMember({"mock", "directory", "subprocess"}))
        ->capture_default_str();
    app->add_option("--generator-location", location,
                    "Patch-bank directory or generator command line");
    app->add_option("--crop-size", crop_size, "Crop patch side length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--weed-size", weed_size, "Weed patch side length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--fixed-seed", fixed_seed, "Use this seed for every instance");
    app->add_option("--generator-timeout", timeout_ms, "Subprocess timeout in milliseconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  GeneratorEndpoint endpoint() const {
    GeneratorEndpoint e;
    e.kind = parse_endpoint_kind(kind);
    e.location = location;
    e.patch_size = {crop_size, weed_size};
    if (fixed_seed) e.seed_policy = {SeedPolicy::Mode::kFixed, *fixed_seed};
    e.timeout = std::chrono::milliseconds(timeout_ms);
    return e;
  }
};

struct FilterFlags {
  std::uint32_t margin = 5;
  double centrality = 0.5;

  void add_to(CLI::App* app) {
    app->add_option("--margin", margin, "Border band (px) an eligible plant must avoid")
        ->capture_default_str();
    app->add_option("--centrality", centrality,
                    "Central bbox fraction that must contain the footprint centroid")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }

  ReplacementFilter get() const { return {margin, centrality}; }
};

std::vector<PlantClass> parse_classes(const std::vector<std::string>& names) {
  std::vector<PlantClass> out;
  for (const auto& n : names) {
    const PlantClass c = parse_plant_class(n);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

ojson number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

ojson manifest_summary(const DatasetManifest& m, const fs::path& out_dir) {
  std::size_t real = 0;
  for (const auto& e : m.entries) real += e.provenance == Provenance::kReal ? 1 : 0;
  ojson j;
  j["manifest"] = (out_dir / "manifest.json").generic_string();
  j["entries"] = m.entries.size();
  j["real"] = real;
  j["semi_artificial"] = m.entries.size() - real;
  return j;
}

BuildOptions build_options(const GlobalFlags& g, const FilterFlags& f, std::string name,
                           std::ostream& err) {
  static std::mutex log_mutex;
  BuildOptions opts;
  opts.name = std::move(name);
  opts.filter = f.get();
  opts.strict = g.strict;
  opts.jobs = g.jobs;
  opts.on_skip = [&err](const std::string& msg) {
    std::lock_guard lock(log_mutex);
    err << "skipped " << msg << "\n";
  };
  return opts;
}

// ---------------------------------------------------------------------------
// Subcommands

struct DatasetBuildCmd {
  fs::path source;
  fs::path out;
  std::size_t original = 0;
  std::size_t synthetic = 0;
  std::vector<std::string> classes = {"crop", "weed"};
  std::string name = "dataset";
  GeneratorFlags gen;
  FilterFlags filter;

  void add_to(CLI::App* app) {
    app->add_option("--source", source, "Source manifest")->required();
    app->add_option("--out", out, "Output directory")->required();
    app->add_option("--original", original, "Number of real entries")->capture_default_str();
    app->add_option("--synthetic", synthetic, "Number of composed entries")->capture_default_str();
    app->add_option("--classes", classes, "Classes to replace in composed entries")
        ->delimiter(',')
        ->check(CLI::IsMember({"crop", "weed"}))
        ->capture_default_str();
    app->add_option("--name", name, "Dataset name")->capture_default_str();
    gen.add_to(app);
    filter.add_to(app);
  }

  int run(const GlobalFlags& g, std::ostream& out_stream, std::ostream& err) const {
    const DatasetManifest src = read_manifest(source);
    const auto generator = open_generator(gen.endpoint());
    MixSpec spec{original, synthetic, parse_classes(classes), g.seed};
    const DatasetManifest m =
        build_dataset(src, spec, *generator, out, build_options(g, filter, name, err));
    out_stream << manifest_summary(m, out).dump(2) << "\n";
    return kOk;
  }
};

struct ComposeCmd {
  fs::path source;
  fs::path rgb;
  fs::path nir;
  fs::path mask;
  std::string id;
  fs::path out;
  std::vector<std::string> classes = {"crop", "weed"};
  GeneratorFlags gen;
  FilterFlags filter;

  void add_to(CLI::App* app) {
    auto* src = app->add_option("--source", source, "Manifest of samples to compose");
    auto* r = app->add_option("--rgb", rgb, "RGB PNG of a single sample");
    auto* n = app->add_option("--nir", nir, "NIR PNG of a single sample");
    auto* m = app->add_option("--mask", mask, "Label mask PNG of a single sample");
    app->add_option("--id", id, "Sample id (defaults to the mask file stem)");
    r->needs(n, m)->excludes(src);
    n->needs(r, m);
    m->needs(r, n);
    app->add_option("--out", out, "Output directory")->required();
    app->add_option("--classes", classes, "Classes to replace")
        ->delimiter(',')
        ->check(CLI::IsMember({"crop", "weed"}))
        ->capture_default_str();
    gen.add_to(app);
    filter.add_to(app);
  }

  int run(const GlobalFlags& g, std::ostream& out_stream, std::ostream& err) const {
    const auto generator = open_generator(gen.endpoint());
    ComposeOptions opts;
    opts.classes = parse_classes(classes);
    opts.filter = filter.get();
    opts.seed = g.seed;
    opts.strict = g.strict;

    if (!source.empty()) {
      const DatasetManifest src = read_manifest(source);
      const DatasetManifest m = compose_dataset(src, *generator, opts, out,
                                                build_options(g, filter, src.name, err));
      out_stream << manifest_summary(m, out).dump(2) << "\n";
      return kOk;
    }
    if (rgb.empty()) throw UsageError("compose needs --source or --rgb/--nir/--mask");

    const AnnotatedSample sample =
        load_sample(rgb, nir, mask, id.empty() ? std::nullopt : std::optional(id));
    const ComposeResult result = compose_scene(sample, *generator, opts);
    for (const auto& msg : result.skipped) err << "skipped " << msg << "\n";
    save_sample(result.sample, out);
    DatasetManifest m;
    m.name = result.sample.id;
    m.entries.push_back({result.sample.id, fs::path("rgb") / (result.sample.id + ".png"),
                         fs::path("nir") / (result.sample.id + ".png"),
                         fs::path("mask") / (result.sample.id + ".png"), result.sample.provenance});
    write_manifest(m, out / "manifest.json");

    ojson j = manifest_summary(m, out);
    j["replaced_instances"] = result.replaced_instances;
    j["replaced_area"] = result.replaced_area;
    j["skipped"] = result.skipped.size();
    out_stream << j.dump(2) << "\n";
    return kOk;
  }
};

struct MetricsGanCmd {
  fs::path real;
  fs::path fake;
  fs::path real_probs;
  fs::path fake_probs;
  fs::path reference;
  std::vector<std::string> metrics = {"all"};
  std::size_t is_splits = 1;
  std::string format = "json";

  void add_to(CLI::App* app) {
    app->add_option("--real", real, "Real feature set (AGF1 or CSV)");
    app->add_option("--fake", fake, "Generated feature set (AGF1 or CSV)");
    app->add_option("--real-probs", real_probs, "Real class probabilities");
    app->add_option("--fake-probs", fake_probs, "Generated class probabilities");
    app->add_option("--metric", metrics, "Metrics to compute")
        ->delimiter(',')
        ->check(CLI::IsMember({"all", "emd", "fid", "inception", "knn", "mmd", "mode"}))
        ->capture_default_str();
    app->add_option("--reference", reference,
                    "JSON reference metric vector; adds per-metric errors and their mean");
    app->add_option("--is-splits", is_splits, "Inception score splits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  }

  int run(const GlobalFlags& g, std::ostream& out, std::ostream& err) const {
    std::vector<std::string> wanted;
    for (const auto name : MetricVector::kNames) {
      const bool all = std::find(metrics.begin(), metrics.end(), "all") != metrics.end();
      if (all || std::find(metrics.begin(), metrics.end(), name) != metrics.end()) {
        wanted.emplace_back(name);
      }
    }
    auto want = [&](std::string_view n) {
      return std::find(wanted.begin(), wanted.end(), n) != wanted.end();
    };

    std::optional<FeatureSet> xr, xf;
    std::optional<ProbabilityMatrix> pr, pf;
    if (want("emd") || want("fid") || want("knn") || want("mmd")) {
      if (real.empty() || fake.empty()) throw UsageError("--real and --fake are required");
      xr = FeatureSet::from_table(agf::read(real));
      xf = FeatureSet::from_table(agf::read(fake));
    }
    if (want("inception") || want("mode")) {
      if (fake_probs.empty()) throw UsageError("--fake-probs is required for inception/mode");
      pf = ProbabilityMatrix::from_table(agf::read(fake_probs));
    }
    if (want("mode")) {
      if (real_probs.empty()) throw UsageError("--real-probs is required for mode");
      pr = ProbabilityMatrix::from_table(agf::read(real_probs));
    }
    if (want("fid") && (xr->rows() <= xr->dims() || xf->rows() <= xf->dims())) {
      err << "warning: fid with rows <= dims gives a rank-deficient covariance estimate\n";
    }

    MetricVector mv;
    if (want("emd")) mv.emd = wasserstein(*xr, *xf);
    if (want("fid")) mv.fid = fid(*xr, *xf);
    if (want("inception")) mv.inception = inception_score(*pf, is_splits);
    if (want("knn")) mv.knn = one_nn_accuracy(*xr, *xf);
    if (want("mmd")) mv.mmd = kernel_mmd(*xr, *xf);
    if (want("mode")) mv.mode = mode_score(*pf, *pr);

    const auto values = mv.values();
    std::optional<MetricVector> errors;
    if (!reference.empty()) {
      if (wanted.size() != values.size()) throw UsageError("--reference needs all six metrics");
      errors = metric_errors(mv, read_reference(reference));
    }

    if (g.pretty || format == "csv") {
      const char* sep = g.pretty ? "  " : ",";
      out << "metric" << sep << "value" << (errors ? std::string(sep) + "error" : "") << "\n";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!want(MetricVector::kNames[i])) continue;
        out << MetricVector::kNames[i] << sep << format_value(values[i]);
        if (errors) out << sep << format_value(errors->values()[i]);
        out << "\n";
      }
      if (errors) out << "mean_error" << sep << format_value(model_mean_error(*errors)) << "\n";
      return kOk;
    }

    ojson metrics_json = ojson::object();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (want(MetricVector::kNames[i])) metrics_json[std::string(MetricVector::kNames[i])] = number(values[i]);
    }
    if (!errors) {
      out << metrics_json.dump(2) << "\n";
      return kOk;
    }
    ojson j;
    j["metrics"] = metrics_json;
    ojson err_json = ojson::object();
    for (std::size_t i = 0; i < values.size(); ++i) {
      err_json[std::string(MetricVector::kNames[i])] = number(errors->values()[i]);
    }
    j["errors"] = err_json;
    j["mean_error"] = number(model_mean_error(*errors));
    out << j.dump(2) << "\n";
    return kOk;
  }

  static MetricVector read_reference(const fs::path& path) {
    try {
      const auto j = nlohmann::json::parse(read_text(path));
      const auto& obj = j.contains("metrics") ? j.at("metrics") : j;
      std::array<double, 6> v{};
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = obj.at(std::string(MetricVector::kNames[i])).get<double>();
      }
      return MetricVector::from_values(v);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": malformed reference (" + e.what() + ")");
    }
  }
};

struct MetricsBaselineCmd {
  fs::path features;
  fs::path probs;
  std::size_t repeats = 20;
  double split = 0.5;

  void add_to(CLI::App* app) {
    app->add_option("--features", features, "Real feature set")->required();
    app->add_option("--probs", probs, "Real class probabilities")->required();
    app->add_option("--repeats", repeats, "Number of random disjoint splits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--split", split, "Fraction of rows in each subset")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
  }

  int run(const GlobalFlags& g, std::ostream& out, std::ostream&) const {
    const FeatureSet x = FeatureSet::from_table(agf::read(features));
    const ProbabilityMatrix p = ProbabilityMatrix::from_table(agf::read(probs));
    const MetricVector mv = reference_baseline(x, p, {repeats, split, g.seed});
    const auto values = mv.values();
    if (g.pretty) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        out << MetricVector::kNames[i] << "  " << format_value(values[i]) << "\n";
      }
      return kOk;
    }
    ojson j = ojson::object();
    for (std::size_t i = 0; i < values.size(); ++i) {
      j[std::string(MetricVector::kNames[i])] = number(values[i]);
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
};

ojson report_json(const std::string& label, std::size_t images, const DirectoryEvaluation& ev) {
  static constexpr const char* kClassNames[] = {"soil", "crop", "weed"};
  const SegReport r = segmentation_metrics(ev.total);
  ojson j;
  j["label"] = label;
  j["images"] = images;
  j["miou"] = r.miou;
  j["accuracy"] = r.accuracy;
  ojson per_class = ojson::object();
  for (int c = 0; c < kNumLabels; ++c) {
    per_class[kClassNames[c]] = {{"iou", r.per_class[c].iou},
                                 {"precision", r.per_class[c].precision},
                                 {"recall", r.per_class[c].recall},
                                 {"dice", r.per_class[c].dice}};
  }
  j["per_class"] = per_class;
  j["confusion"] = ev.total.counts;
  return j;
}

struct MetricsSegCmd {
  fs::path gt;
  fs::path pred;
  fs::path per_image;
  std::string label = "model";
  bool csv = false;

  void add_to(CLI::App* app) {
    app->add_option("--gt", gt, "Directory of ground-truth label PNGs")->required();
    app->add_option("--pred", pred, "Directory of predicted label PNGs")->required();
    app->add_option("--per-image", per_image, "Write per-image scores CSV here");
    app->add_option("--label", label, "Row label")->capture_default_str();
    app->add_flag("--csv", csv, "Print the report table as CSV");
  }

  int run(const GlobalFlags& g, std::ostream& out, std::ostream&) const {
    const DirectoryEvaluation ev = evaluate_directories(gt, pred, g.jobs);
    if (!per_image.empty()) write_text(per_image, scores_to_csv(ev.per_image));
    if (g.pretty || csv) {
      out << report_table({{label, segmentation_metrics(ev.total)}},
                          csv ? TableFormat::kCsv : TableFormat::kText);
      return kOk;
    }
    out << report_json(label, ev.per_image.size(), ev).dump(2) << "\n";
    return kOk;
  }
};

struct CompareCmd {
  fs::path gt;
  fs::path pred_a;
  fs::path pred_b;
  fs::path scores_a;
  fs::path scores_b;
  std::string label_a = "A";
  std::string label_b = "B";

  void add_to(CLI::App* app) {
    auto* g = app->add_option("--gt", gt, "Ground-truth label directory");
    auto* pa = app->add_option("--pred-a", pred_a, "Predictions of model A");
    auto* pb = app->add_option("--pred-b", pred_b, "Predictions of model B");
    auto* sa = app->add_option("--scores-a", scores_a, "Per-image score CSV of model A");
    auto* sb = app->add_option("--scores-b", scores_b, "Per-image score CSV of model B");
    g->needs(pa, pb);
    pa->needs(g, pb);
    pb->needs(g, pa);
    sa->needs(sb)->excludes(g);
    sb->needs(sa)->excludes(g);
    app->add_option("--label-a", label_a, "Name of model A")->capture_default_str();
    app->add_option("--label-b", label_b, "Name of model B")->capture_default_str();
  }

  int run(const GlobalFlags& g, std::ostream& out, std::ostream&) const {
    std::vector<ImageScores> a, b;
    if (!scores_a.empty()) {
      a = scores_from_csv(read_text(scores_a));
      b = scores_from_csv(read_text(scores_b));
    } else if (!gt.empty()) {
      a = evaluate_directories(gt, pred_a, g.jobs).per_image;
      b = evaluate_directories(gt, pred_b, g.jobs).per_image;
    } else {
      throw UsageError("compare needs --gt/--pred-a/--pred-b or --scores-a/--scores-b");
    }
    if (a.size() != b.size()) {
      throw DataError("score lists differ in length: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].id != b[i].id) {
        throw DataError("score lists are not aligned: '" + a[i].id + "' vs '" + b[i].id + "'");
      }
    }

    std::vector<PairedComparison> results;
    for (const PairedMetric m : {PairedMetric::kAccuracy, PairedMetric::kDice, PairedMetric::kIou}) {
      std::vector<double> va, vb;
      for (std::size_t i = 0; i < a.size(); ++i) {
        va.push_back(a[i].get(m));
        vb.push_back(b[i].get(m));
      }
      results.push_back(paired_compare(va, vb, m));
    }

    if (g.pretty) {
      out << "metric    " << label_a << " better / " << label_b << " better  " << label_a
          << " win rate\n";
      for (const auto& r : results) {
        std::string name(to_string(r.metric));
        name.resize(std::max<std::size_t>(name.size(), 8), ' ');
        out << name << "  " << r.wins_a << " / " << r.wins_b << "  " << format_percent(r.win_rate_a)
            << "\n";
      }
      return kOk;
    }
    ojson j;
    j["label_a"] = label_a;
    j["label_b"] = label_b;
    j["total"] = a.size();
    j["comparisons"] = ojson::array();
    for (const auto& r : results) {
      j["comparisons"].push_back({{"metric", std::string(to_string(r.metric))},
                                  {"wins_a", r.wins_a},
                                  {"wins_b", r.wins_b},
                                  {"total", r.total},
                                  {"win_rate_a", r.win_rate_a},
                                  {"win_rate_a_percent", format_percent(r.win_rate_a)}});
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
};

struct AugmentCmd {
  fs::path source;
  fs::path spec;
  fs::path out;
  std::string name;

  void add_to(CLI::App* app) {
    app->add_option("--source", source, "Source manifest")->required();
    app->add_option("--spec", spec, "Augmentation JSON: one object, or an array applied in order")
        ->required();
    app->add_option("--out", out, "Output directory")->required();
    app->add_option("--name", name, "Dataset name (defaults to source name + '-augmented')");
  }

  int run(const GlobalFlags& g, std::ostream& out_stream, std::ostream&) const {
    const DatasetManifest src = read_manifest(source);
    const std::vector<AugmentationSpec> chain = augmentation_list_from_json(read_text(spec));

    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError(out.string() + ": " + ec.message());

    DatasetManifest m;
    m.name = name.empty() ? src.name + "-augmented" : name;
    m.base_dir = out;
    m.entries.resize(src.entries.size());
    parallel_for(src.entries.size(), g.jobs, [&](std::size_t i) {
      AnnotatedSample s = src.load(src.entries[i]);
      for (AugmentationSpec step : chain) {
        // Stochastic steps differ per sample but stay reproducible.
        step.seed = mix_seed(mix_seed(step.seed, g.seed), fnv1a64(s.id));
        s = augment(s, step);
      }
      save_sample(s, out);
      m.entries[i] = {s.id, fs::path("rgb") / (s.id + ".png"), fs::path("nir") / (s.id + ".png"),
                      fs::path("mask") / (s.id + ".png"), s.provenance};
    });
    std::sort(m.entries.begin(), m.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
    write_manifest(m, out / "manifest.json");
    out_stream << manifest_summary(m, out).dump(2) << "\n";
    return kOk;
  }
};

struct ValidateCmd {
  fs::path manifest;

  void add_to(CLI::App* app) {
    app->add_option("--manifest", manifest, "Manifest to check")->required();
  }

  int run(const GlobalFlags& g, std::ostream& out, std::ostream&) const {
    const DatasetManifest m = read_manifest(manifest);
    const auto issues = validate_manifest(m);
    if (g.pretty) {
      if (issues.empty()) out << "ok: " << m.entries.size() << " entries\n";
      for (const auto& i : issues) out << to_string(i.kind) << "  " << i.id << "  " << i.detail << "\n";
    } else {
      ojson j;
      j["valid"] = issues.empty();
      j["entries"] = m.entries.size();
      j["issues"] = ojson::array();
      for (const auto& i : issues) {
        j["issues"].push_back({{"kind", std::string(to_string(i.kind))}, {"id", i.id}, {"detail", i.detail}});
      }
      out << j.dump(2) << "\n";
    }
    return issues.empty() ? kOk : kDataError;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-artificial RGB+NIR crop/weed dataset builder and evaluation toolkit",
               "agrisynth"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file with option values; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
  app.add_flag("--strict", g.strict, "Abort on the first generator failure");
  app.add_flag("--pretty", g.pretty, "Human-readable tables instead of JSON");

  DatasetBuildCmd dataset_build;
  ComposeCmd compose;
  MetricsGanCmd metrics_gan;
  MetricsBaselineCmd metrics_baseline;
  MetricsSegCmd metrics_seg;
  CompareCmd compare;
  AugmentCmd augment_cmd;
  ValidateCmd validate;

  auto* dataset = app.add_subcommand("dataset", "Dataset construction");
  dataset->require_subcommand(1);
  auto* build = dataset->add_subcommand("build", "Mix real and composed samples into a dataset");
  dataset_build.add_to(build);

  auto* compose_app = app.add_subcommand("compose", "Replace eligible plants with generated patches");
  compose.add_to(compose_app);

  auto* metrics = app.add_subcommand("metrics", "Evaluation metrics");
  metrics->require_subcommand(1);
  auto* gan = metrics->add_subcommand("gan", "Two-sample metrics between real and generated sets");
  metrics_gan.add_to(gan);
  auto* baseline = metrics->add_subcommand("gan-baseline", "Real-vs-real reference metrics");
  metrics_baseline.add_to(baseline);
  auto* seg = metrics->add_subcommand("seg", "Segmentation report over mask directories");
  metrics_seg.add_to(seg);

  auto* compare_app = app.add_subcommand("compare", "Paired per-image comparison of two models");
  compare.add_to(compare_app);

  auto* augment_app = app.add_subcommand("augment", "Classical augmentation of a manifest");
  augment_cmd.add_to(augment_app);

  auto* validate_app = app.add_subcommand("validate", "Check a dataset manifest");
  validate.add_to(validate_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return dataset_build.run(g, out, err);
    if (*compose_app) return compose.run(g, out, err);
    if (*gan) return metrics_gan.run(g, out, err);
    if (*baseline) return metrics_baseline.run(g, out, err);
    if (*seg) return metrics_seg.run(g, out, err);
    if (*compare_app) return compare.run(g, out, err);
    if (*augment_app) return augment_cmd.run(g, out, err);
    if (*validate_app) return validate.run(g, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const GeneratorError& e) {
    err << "generator error: " << e.what() << "\n";
    return kGeneratorError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  err << app.help();
  return kUsage;
}

}  // namespace agrisynth::cli
