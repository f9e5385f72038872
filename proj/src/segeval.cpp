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

#include "agrisynth/segeval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "agrisynth/error.hpp"
#include "agrisynth/parallel.hpp"
#include "agrisynth/png_io.hpp"

namespace agrisynth {
namespace {

constexpr std::array<std::string_view, kNumLabels> kClassNames = {"soil", "crop", "weed"};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (int g = 0; g < kNumLabels; ++g) {
    for (int p = 0; p < kNumLabels; ++p) counts[g][p] += other.counts[g][p];
  }
  return *this;
}

ConfusionMatrix accumulate(const LabelMask& gt, const LabelMask& pred, ConfusionMatrix into) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw DataError("prediction is " + std::to_string(pred.width()) + "x" +
                    std::to_string(pred.height()) + " but ground truth is " +
                    std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  const auto g = gt.raw().pixels();
  const auto p = pred.raw().pixels();
  for (std::size_t i = 0; i < g.size(); ++i) ++into.counts[g[i]][p[i]];
  return into;
}

SegReport segmentation_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw DataError("segmentation metrics of an empty confusion matrix");

  SegReport report;
  std::uint64_t correct = 0;
  for (int c = 0; c < kNumLabels; ++c) {
    const std::uint64_t tp = cm.counts[c][c];
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    for (int o = 0; o < kNumLabels; ++o) {
      if (o == c) continue;
      fp += cm.counts[o][c];
      fn += cm.counts[c][o];
    }
    correct += tp;
    const bool absent = tp + fp + fn == 0;
    auto ratio = [absent](double num, double den) { return den == 0.0 ? (absent ? 1.0 : 0.0) : num / den; };
    auto& s = report.per_class[c];
    s.iou = ratio(tp, static_cast<double>(tp + fp + fn));
    s.precision = ratio(tp, static_cast<double>(tp + fp));
    s.recall = ratio(tp, static_cast<double>(tp + fn));
    s.dice = ratio(2.0 * tp, 2.0 * tp + fp + fn);
  }
  report.miou = (report.per_class[0].iou + report.per_class[1].iou + report.per_class[2].iou) / 3.0;
  report.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return report;
}

std::string_view to_string(PairedMetric m) {
  switch (m) {
    case PairedMetric::kAccuracy: return "accuracy";
    case PairedMetric::kDice: return "dice";
    case PairedMetric::kIou: return "iou";
  }
  return "unknown";
}

double ImageScores::get(PairedMetric m) const {
  switch (m) {
    case PairedMetric::kAccuracy: return accuracy;
    case PairedMetric::kDice: return dice;
    case PairedMetric::kIou: return iou;
  }
  return 0.0;
}

ImageScores image_scores(std::string id, const ConfusionMatrix& cm) {
  const SegReport r = segmentation_metrics(cm);
  ImageScores s;
  s.id = std::move(id);
  s.accuracy = r.accuracy;
  s.dice = (r.per_class[0].dice + r.per_class[1].dice + r.per_class[2].dice) / 3.0;
  s.iou = r.miou;
  return s;
}

PairedComparison paired_compare(std::span<const double> per_image_a,
                                std::span<const double> per_image_b, PairedMetric metric) {
  if (per_image_a.empty() || per_image_b.empty()) throw DataError("paired comparison of empty lists");
  if (per_image_a.size() != per_image_b.size()) {
    throw DataError("paired comparison: " + std::to_string(per_image_a.size()) + " vs " +
                    std::to_string(per_image_b.size()) + " images");
  }
  PairedComparison out;
  out.metric = metric;
  out.total = per_image_a.size();
  for (std::size_t i = 0; i < per_image_a.size(); ++i) {
    if (per_image_a[i] > per_image_b[i]) ++out.wins_a;
  }
  out.wins_b = out.total - out.wins_a;
  out.win_rate_a = static_cast<double>(out.wins_a) / static_cast<double>(out.total);
  return out;
}

std::string format_percent(double fraction) { return fixed2(fraction * 100.0) + "%"; }

std::string report_table(const std::vector<std::pair<std::string, SegReport>>& reports,
                         TableFormat format) {
  std::vector<std::string> header = {"model", "mIoU", "accuracy"};
  for (const char* metric : {"IoU", "recall", "precision", "dice"}) {
    for (const auto name : kClassNames) header.push_back(std::string(metric) + "_" + std::string(name));
  }

  std::vector<std::vector<std::string>> rows;
  for (const auto& [label, r] : reports) {
    std::vector<std::string> row = {label, fixed2(r.miou), fixed2(r.accuracy)};
    for (int m = 0; m < 4; ++m) {
      for (const auto& s : r.per_class) {
        const double v = m == 0 ? s.iou : m == 1 ? s.recall : m == 2 ? s.precision : s.dice;
        row.push_back(fixed2(v));
      }
    }
    rows.push_back(std::move(row));
  }

  std::ostringstream out;
  if (format == TableFormat::kCsv) {
    auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << "\n";
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out.str();
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 0) {
        out << cells[i] << std::string(width[i] - cells[i].size(), ' ');
      } else {
        out << "  " << std::string(width[i] - cells[i].size(), ' ') << cells[i];
      }
    }
    out << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

DirectoryEvaluation evaluate_directories(const std::filesystem::path& gt_dir,
                                         const std::filesystem::path& pred_dir, unsigned jobs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(gt_dir, ec)) throw DataError(gt_dir.string() + ": not a directory");
  if (!fs::is_directory(pred_dir, ec)) throw DataError(pred_dir.string() + ": not a directory");

  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(gt_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      names.push_back(entry.path().filename());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw DataError(gt_dir.string() + ": no PNG masks found");

  std::vector<ConfusionMatrix> matrices(names.size());
  parallel_for(names.size(), jobs, [&](std::size_t i) {
    const fs::path gt_path = gt_dir / names[i];
    const fs::path pred_path = pred_dir / names[i];
    if (!fs::is_regular_file(pred_path)) throw DataError(pred_path.string() + ": missing prediction");
    auto load = [](const fs::path& p) {
      try {
        return LabelMask(png::read_gray(p));
      } catch (const DataError& e) {
        throw DataError(p.string() + ": " + e.what());
      }
    };
    matrices[i] = accumulate(load(gt_path), load(pred_path));
  });

  DirectoryEvaluation out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.total += matrices[i];
    out.per_image.push_back(image_scores(names[i].stem().string(), matrices[i]));
  }
  return out;
}

std::string scores_to_csv(const std::vector<ImageScores>& scores) {
  std::ostringstream out;
  out << "id,accuracy,dice,iou\n";
  char buf[128];
  for (const auto& s : scores) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g\n", s.accuracy, s.dice, s.iou);
    out << s.id << buf;
  }
  return out.str();
}

std::vector<ImageScores> scores_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "id,accuracy,dice,iou") {
    throw DataError("score file must start with header id,accuracy,dice,iou");
  }
  std::vector<ImageScores> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      cells.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 4) {
      throw DataError("score file line " + std::to_string(line_no) + ": expected 4 columns");
    }
    ImageScores s;
    s.id = std::string(cells[0]);
    double* targets[3] = {&s.accuracy, &s.dice, &s.iou};
    for (int i = 0; i < 3; ++i) {
      const auto cell = cells[i + 1];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), *targets[i]);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError("score file line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(cell) + "'");
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace agrisynth
