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
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "agrisynth/agf.hpp"

namespace agrisynth {

/// n x d matrix of finite embeddings, one row per sample.
class FeatureSet {
 public:
  explicit FeatureSet(Eigen::MatrixXd data);
  static FeatureSet from_table(const agf::Table& table);

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index dims() const { return data_.cols(); }
  const Eigen::MatrixXd& data() const { return data_; }

  FeatureSet subset(std::span<const std::size_t> row_indices) const;

 private:
  Eigen::MatrixXd data_;
};

/// n x k matrix of class probabilities; entries in [0,1], rows sum to 1 within 1e-6.
class ProbabilityMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-6;

  explicit ProbabilityMatrix(Eigen::MatrixXd data);
  static ProbabilityMatrix from_table(const agf::Table& table);

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index classes() const { return data_.cols(); }
  const Eigen::MatrixXd& data() const { return data_; }

  // Column means: the label marginal of the set.
  Eigen::VectorXd marginal() const;

  ProbabilityMatrix subset(std::span<const std::size_t> row_indices) const;

 private:
  Eigen::MatrixXd data_;
};

struct MetricVector {
  double emd = 0.0;
  double fid = 0.0;
  double inception = 0.0;
  double knn = 0.0;
  double mmd = 0.0;
  double mode = 0.0;

  static constexpr std::array<std::string_view, 6> kNames = {"emd", "fid", "inception",
                                                            "knn", "mmd", "mode"};
  std::array<double, 6> values() const { return {emd, fid, inception, knn, mmd, mode}; }
  static MetricVector from_values(const std::array<double, 6>& v);
};

/// KL(p || q) with natural log; 0 log(0/q) = 0; +inf when q_i = 0 < p_i.
double kl_divergence(const Eigen::Ref<const Eigen::VectorXd>& p,
                     const Eigen::Ref<const Eigen::VectorXd>& q);

/// exp(mean_x KL(p(l|x) || p(l))). With splits > 1 the rows are cut into that many
/// contiguous chunks and the per-chunk scores averaged.
double inception_score(const ProbabilityMatrix& probs, std::size_t splits = 1);

/// exp(mean_x KL(p(l|x) || p*(l)) - KL(p(l) || p*(l))), p* being the real marginal.
double mode_score(const ProbabilityMatrix& generated, const ProbabilityMatrix& real);

/// Median of all pairwise Euclidean distances over the pooled set.
double median_pairwise_distance(const FeatureSet& x, const FeatureSet& y);

/// Square root of the biased (V-statistic) MMD^2 under an RBF kernel whose bandwidth is
/// the pooled median pairwise distance. Zero when that median is zero.
double kernel_mmd(const FeatureSet& x, const FeatureSet& y);

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
/// Returns assignment[row] = column.
std::vector<Eigen::Index> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Exact 1-Wasserstein distance between equal-size uniform empirical distributions
/// under Euclidean ground cost.
double wasserstein(const FeatureSet& x, const FeatureSet& y);

/// Frechet distance between Gaussian fits using sample covariances. The trace of
/// (Sx Sy)^(1/2) comes from the eigenvalues of Sx^(1/2) Sy Sx^(1/2), clipped at zero.
/// Callers should ensure rows > dims for a well-conditioned estimate.
double fid(const FeatureSet& x, const FeatureSet& y);

/// Leave-one-out 1-NN accuracy over the pooled set labelled real (x) / generated (y).
/// Distance ties go to the lower pooled index.
double one_nn_accuracy(const FeatureSet& x, const FeatureSet& y);

/// All six metrics of a generated set against a real one.
MetricVector evaluate_metrics(const FeatureSet& real_features, const FeatureSet& fake_features,
                              const ProbabilityMatrix& real_probs,
                              const ProbabilityMatrix& fake_probs);

struct BaselineOptions {
  std::size_t repeats = 20;
  // Fraction of rows in each of the two disjoint subsets; at most 0.5.
  double split = 0.5;
  std::uint64_t seed = 42;
};

/// Mean over repeats of the six metrics between two disjoint, seeded random subsets of
/// the real data.
MetricVector reference_baseline(const FeatureSet& real_features, const ProbabilityMatrix& real_probs,
                                const BaselineOptions& options = {});

/// Per-metric |model - reference|.
MetricVector metric_errors(const MetricVector& model, const MetricVector& reference);

/// Arithmetic mean of the six entries. Throws DataError on non-finite input.
double model_mean_error(const MetricVector& errors);

}  // namespace agrisynth
