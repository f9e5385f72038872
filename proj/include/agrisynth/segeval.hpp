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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agrisynth/imagery.hpp"

namespace agrisynth {

/// counts[g][p]: pixels with ground truth g predicted as p, class order soil, crop, weed.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels> counts{};

  std::uint64_t total() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix accumulate(const LabelMask& gt, const LabelMask& pred, ConfusionMatrix into = {});

struct ClassScores {
  double iou = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double dice = 0.0;
};

struct SegReport {
  std::array<ClassScores, kNumLabels> per_class{};
  double miou = 0.0;
  double accuracy = 0.0;
};

/// All ratios derive from the matrix. A 0/0 ratio is 1 when the class appears in neither
/// ground truth nor prediction, otherwise 0. Throws DataError on an empty matrix.
SegReport segmentation_metrics(const ConfusionMatrix& cm);

enum class PairedMetric { kAccuracy, kDice, kIou };

std::string_view to_string(PairedMetric m);

/// Per-image scalar scores used for paired comparison: pixel accuracy, mean DICE and
/// mean IoU over the three classes.
struct ImageScores {
  std::string id;
  double accuracy = 0.0;
  double dice = 0.0;
  double iou = 0.0;

  double get(PairedMetric m) const;
};

ImageScores image_scores(std::string id, const ConfusionMatrix& cm);

struct PairedComparison {
  PairedMetric metric = PairedMetric::kAccuracy;
  std::size_t wins_a = 0;
  std::size_t wins_b = 0;
  std::size_t total = 0;
  double win_rate_a = 0.0;
};

/// wins_a counts a_i > b_i; ties go to b.
PairedComparison paired_compare(std::span<const double> per_image_a,
                                std::span<const double> per_image_b, PairedMetric metric);

/// "94.67%"
std::string format_percent(double fraction);

enum class TableFormat { kText, kCsv };

/// Values rounded to two decimals. An empty list gives the header only.
std::string report_table(const std::vector<std::pair<std::string, SegReport>>& reports,
                         TableFormat format = TableFormat::kText);

struct DirectoryEvaluation {
  ConfusionMatrix total;
  std::vector<ImageScores> per_image;  // sorted by id
};

/// Scores every `<id>.png` label mask in `gt_dir` against the same file name in `pred_dir`.
DirectoryEvaluation evaluate_directories(const std::filesystem::path& gt_dir,
                                         const std::filesystem::path& pred_dir, unsigned jobs = 1);

/// CSV `id,accuracy,dice,iou`.
std::string scores_to_csv(const std::vector<ImageScores>& scores);
std::vector<ImageScores> scores_from_csv(const std::string& text);

}  // namespace agrisynth
