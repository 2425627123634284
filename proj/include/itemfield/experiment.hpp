//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_EXPERIMENT_HPP
#define ITEMFIELD_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "itemfield/dataset.hpp"
#include "itemfield/maxent.hpp"

namespace itemfield {

enum class Method { kMaxent, kBetheMl, kExactMl, kCosineBaseline, kPearsonBaseline };

Method parse_method(const std::string &name);
std::string to_string(Method method);

/// Similarity measure that selects the graph for a method.
Similarity graph_measure(Method method);
/// Method defaults: max-ent settings for kMaxent, likelihood settings for
/// the ML trainers.
TrainConfig default_config(Method method);

enum class Protocol { kFold, kHoldout };

Protocol parse_protocol(const std::string &name);

struct ExperimentConfig {
  /// Fold protocol: directory with u1.base/u1.test ... u5.base/u5.test.
  /// Holdout protocol: a ratings file, or a directory holding ratings.dat
  /// (ml1m) or u.data (ml100k).
  std::filesystem::path dataset;
  Protocol protocol = Protocol::kFold;
  RatingFormat format = RatingFormat::kMl100k;
  std::vector<int> folds{1, 2, 3, 4, 5};
  UserHoldout holdout;
  Method method = Method::kMaxent;
  std::size_t k = 10;
  TrainConfig train = TrainConfig::maxent_defaults();
};

struct FoldReport {
  std::string split;  // "u1" ... or "holdout"
  double mae = 0.0;
  std::size_t scored = 0;
  std::size_t cold_users = 0;
  std::size_t edges = 0;
  double precompute_seconds = 0.0;
  double train_seconds = 0.0;
};

/// One summary row per method. MAE is the arithmetic mean of the per-split MAEs;
/// timings are per-split averages.
struct ExperimentReport {
  std::string method;
  std::size_t k = 0;
  double mae = 0.0;
  double precompute_seconds = 0.0;
  double train_seconds = 0.0;
  std::string config;
  std::vector<FoldReport> splits;
};

ExperimentReport run_experiment(const ExperimentConfig &cfg);

/// Tab-separated: method, k, mae, precompute_s, train_s, config.
std::string format_report_row(const ExperimentReport &report);
std::string report_header();

}  // namespace itemfield

#endif  // ITEMFIELD_EXPERIMENT_HPP
