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

#include "agrisynth/ganmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "agrisynth/error.hpp"
#include "agrisynth/random.hpp"

namespace agrisynth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd table_to_matrix(const agf::Table& table) {
  Eigen::MatrixXd m(table.rows, table.dims);
  for (std::uint32_t r = 0; r < table.rows; ++r) {
    for (std::uint32_t c = 0; c < table.dims; ++c) m(r, c) = table.at(r, c);
  }
  return m;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void require_same_dims(const FeatureSet& x, const FeatureSet& y, std::string_view metric) {
  if (x.dims() != y.dims()) {
    throw DataError(std::string(metric) + ": feature dimensions differ (" +
                    std::to_string(x.dims()) + " vs " + std::to_string(y.dims()) + ")");
  }
}

Eigen::MatrixXd pooled(const FeatureSet& x, const FeatureSet& y) {
  Eigen::MatrixXd z(x.rows() + y.rows(), x.dims());
  z << x.data(), y.data();
  return z;
}

// Mean KL of each row against `reference`; +inf if any row diverges.
double mean_row_kl(const Eigen::MatrixXd& probs, const Eigen::VectorXd& reference) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    const double kl = kl_divergence(probs.row(r).transpose(), reference);
    if (std::isinf(kl)) return kInf;
    sum += kl;
  }
  return sum / static_cast<double>(probs.rows());
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data, const Eigen::VectorXd& mean) {
  const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  return centered.transpose() * centered / static_cast<double>(data.rows() - 1);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

FeatureSet::FeatureSet(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (!data_.allFinite()) throw DataError("feature set contains non-finite values");
}

FeatureSet FeatureSet::from_table(const agf::Table& table) {
  if (table.kind && *table.kind != agf::Kind::kFeatures) {
    throw DataError("expected an AGF1 feature table, found probabilities");
  }
  return FeatureSet(table_to_matrix(table));
}

FeatureSet FeatureSet::subset(std::span<const std::size_t> row_indices) const {
  return FeatureSet(take_rows(data_, row_indices));
}

ProbabilityMatrix::ProbabilityMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  for (Eigen::Index r = 0; r < data_.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < data_.cols(); ++c) {
      const double p = data_(r, c);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError("probability row " + std::to_string(r) + " has entry outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw DataError("probability row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
  }
}

ProbabilityMatrix ProbabilityMatrix::from_table(const agf::Table& table) {
  if (table.kind && *table.kind != agf::Kind::kProbabilities) {
    throw DataError("expected an AGF1 probability table, found features");
  }
  return ProbabilityMatrix(table_to_matrix(table));
}

Eigen::VectorXd ProbabilityMatrix::marginal() const {
  return data_.colwise().mean().transpose();
}

ProbabilityMatrix ProbabilityMatrix::subset(std::span<const std::size_t> row_indices) const {
  return ProbabilityMatrix(take_rows(data_, row_indices));
}

MetricVector MetricVector::from_values(const std::array<double, 6>& v) {
  return MetricVector{v[0], v[1], v[2], v[3], v[4], v[5]};
}

// ---------------------------------------------------------------------------

double kl_divergence(const Eigen::Ref<const Eigen::VectorXd>& p,
                     const Eigen::Ref<const Eigen::VectorXd>& q) {
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double inception_score(const ProbabilityMatrix& probs, std::size_t splits) {
  const auto n = static_cast<std::size_t>(probs.rows());
  if (n == 0) throw DataError("inception score of an empty set");
  if (splits == 0 || splits > n) throw DataError("invalid inception score split count");
  double total = 0.0;
  for (std::size_t s = 0; s < splits; ++s) {
    const auto begin = static_cast<Eigen::Index>(s * n / splits);
    const auto end = static_cast<Eigen::Index>((s + 1) * n / splits);
    const Eigen::MatrixXd chunk = probs.data().middleRows(begin, end - begin);
    const Eigen::VectorXd marginal = chunk.colwise().mean().transpose();
    total += std::exp(mean_row_kl(chunk, marginal));
  }
  return total / static_cast<double>(splits);
}

double mode_score(const ProbabilityMatrix& generated, const ProbabilityMatrix& real) {
  if (generated.classes() != real.classes()) {
    throw DataError("mode score: class counts differ");
  }
  if (generated.rows() == 0 || real.rows() == 0) throw DataError("mode score of an empty set");
  const Eigen::VectorXd real_marginal = real.marginal();
  const double row_term = mean_row_kl(generated.data(), real_marginal);
  if (std::isinf(row_term)) return kInf;
  return std::exp(row_term - kl_divergence(generated.marginal(), real_marginal));
}

double median_pairwise_distance(const FeatureSet& x, const FeatureSet& y) {
  const Eigen::MatrixXd z = pooled(x, y);
  const Eigen::Index n = z.rows();
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((z.row(i) - z.row(j)).norm());
  }
  if (d.empty()) return 0.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  const double upper = d[mid];
  if (d.size() % 2 == 1) return upper;
  const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double kernel_mmd(const FeatureSet& x, const FeatureSet& y) {
  require_same_dims(x, y, "mmd");
  if (x.rows() == 0 || y.rows() == 0) throw DataError("mmd: empty feature set");
  const double sigma = median_pairwise_distance(x, y);
  if (sigma == 0.0) return 0.0;
  const double gamma = 1.0 / (2.0 * sigma * sigma);

  auto mean_kernel = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < b.rows(); ++j) {
        row += std::exp(-gamma * (a.row(i) - b.row(j)).squaredNorm());
      }
      sum += row;
    }
    return sum / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
  };
  const double mmd2 = mean_kernel(x.data(), x.data()) + mean_kernel(y.data(), y.data()) -
                      2.0 * mean_kernel(x.data(), y.data());
  return std::sqrt(std::max(0.0, mmd2));
}

std::vector<Eigen::Index> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw DataError("assignment needs a square cost matrix");
  const Eigen::Index n = cost.rows();
  // Shortest augmenting paths with row/column potentials; 1-based, column 0 is a sentinel.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<Eigen::Index> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index col = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col] = 1;
      const Eigen::Index row = match[col];
      double delta = kInf;
      Eigen::Index next = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(row - 1, j - 1) - u[row] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (match[col] != 0);
    do {
      const Eigen::Index prev = way[col];
      match[col] = match[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(n));
  for (Eigen::Index j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  return assignment;
}

double wasserstein(const FeatureSet& x, const FeatureSet& y) {
  require_same_dims(x, y, "emd");
  if (x.rows() != y.rows()) {
    throw DataError("emd: exact solver needs equal set sizes (" + std::to_string(x.rows()) +
                    " vs " + std::to_string(y.rows()) + "); resample both sets to the same n");
  }
  const Eigen::Index n = x.rows();
  if (n == 0) throw DataError("emd: empty feature set");
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = (x.data().row(i) - y.data().row(j)).norm();
  }
  const auto assignment = min_cost_assignment(cost);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += cost(i, assignment[static_cast<std::size_t>(i)]);
  return total / static_cast<double>(n);
}

double fid(const FeatureSet& x, const FeatureSet& y) {
  require_same_dims(x, y, "fid");
  if (x.rows() < 2 || y.rows() < 2) throw DataError("fid: need at least two rows per set");
  const Eigen::VectorXd mu_x = x.data().colwise().mean().transpose();
  const Eigen::VectorXd mu_y = y.data().colwise().mean().transpose();
  const Eigen::MatrixXd cov_x = sample_covariance(x.data(), mu_x);
  const Eigen::MatrixXd cov_y = sample_covariance(y.data(), mu_y);
  if (!cov_x.allFinite() || !cov_y.allFinite()) throw DataError("fid: non-finite covariance");

  const Eigen::MatrixXd root_x = psd_sqrt(cov_x);
  Eigen::MatrixXd inner = root_x * cov_y * root_x;
  inner = 0.5 * (inner + inner.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  const double trace_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double value =
      (mu_x - mu_y).squaredNorm() + cov_x.trace() + cov_y.trace() - 2.0 * trace_sqrt;
  return std::max(0.0, value);
}

double one_nn_accuracy(const FeatureSet& x, const FeatureSet& y) {
  require_same_dims(x, y, "knn");
  if (x.rows() < 2 || y.rows() < 2) throw DataError("knn: need at least two rows per set");
  const Eigen::MatrixXd z = pooled(x, y);
  const Eigen::Index n = z.rows();
  const Eigen::Index n_real = x.rows();
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = kInf;
    Eigen::Index nearest = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (z.row(i) - z.row(j)).squaredNorm();
      if (d < best) {
        best = d;
        nearest = j;
      }
    }
    if ((i < n_real) == (nearest < n_real)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

MetricVector evaluate_metrics(const FeatureSet& real_features, const FeatureSet& fake_features,
                              const ProbabilityMatrix& real_probs,
                              const ProbabilityMatrix& fake_probs) {
  MetricVector m;
  m.emd = wasserstein(real_features, fake_features);
  m.fid = fid(real_features, fake_features);
  m.inception = inception_score(fake_probs);
  m.knn = one_nn_accuracy(real_features, fake_features);
  m.mmd = kernel_mmd(real_features, fake_features);
  m.mode = mode_score(fake_probs, real_probs);
  return m;
}

MetricVector reference_baseline(const FeatureSet& real_features, const ProbabilityMatrix& real_probs,
                                const BaselineOptions& options) {
  if (options.repeats == 0) throw DataError("baseline: repeats must be positive");
  if (!(options.split > 0.0 && options.split <= 0.5)) {
    throw DataError("baseline: split fraction must be in (0, 0.5]");
  }
  auto subset_size = [&](Eigen::Index n, std::string_view what) {
    const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * options.split));
    if (m < 2) {
      throw DataError("baseline: " + std::string(what) + " has " + std::to_string(n) +
                      " rows, too few for two disjoint subsets of at least 2");
    }
    return m;
  };
  const std::size_t mf = subset_size(real_features.rows(), "feature set");
  const std::size_t mp = subset_size(real_probs.rows(), "probability set");

  Rng rng(options.seed);
  auto draw = [&](Eigen::Index n, std::size_t m) {
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    return std::pair{std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m)),
                     std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(m),
                                              order.begin() + static_cast<std::ptrdiff_t>(2 * m))};
  };

  std::array<double, 6> sums{};
  for (std::size_t r = 0; r < options.repeats; ++r) {
    const auto [fa, fb] = draw(real_features.rows(), mf);
    const auto [pa, pb] = draw(real_probs.rows(), mp);
    const MetricVector m = evaluate_metrics(real_features.subset(fa), real_features.subset(fb),
                                            real_probs.subset(pa), real_probs.subset(pb));
    const auto v = m.values();
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += v[i];
  }
  for (auto& s : sums) s /= static_cast<double>(options.repeats);
  return MetricVector::from_values(sums);
}

MetricVector metric_errors(const MetricVector& model, const MetricVector& reference) {
  const auto a = model.values();
  const auto b = reference.values();
  std::array<double, 6> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(a[i] - b[i]);
  return MetricVector::from_values(out);
}

double model_mean_error(const MetricVector& errors) {
  double sum = 0.0;
  for (const double v : errors.values()) {
    if (!std::isfinite(v)) throw DataError("mean error: non-finite metric error");
    sum += v;
  }
  return sum / 6.0;
}

}  // namespace agrisynth
