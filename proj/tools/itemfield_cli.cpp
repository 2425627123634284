//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Command-line front end: prepare, train, predict, baseline, eval,
// experiment.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "itemfield/baselines.hpp"
#include "itemfield/dataset.hpp"
#include "itemfield/error.hpp"
#include "itemfield/evaluation.hpp"
#include "itemfield/experiment.hpp"
#include "itemfield/io.hpp"
#include "itemfield/maxent.hpp"
#include "itemfield/mltrain.hpp"
#include "itemfield/predict.hpp"

using namespace itemfield;

namespace {

struct Failure {
  std::string stage;
  std::string what;
};

template <class F>
auto staged(const std::string &stage, F &&f) {
  try {
    return f();
  } catch (const std::exception &e) {
    throw Failure{stage, e.what()};
  }
}

// Re-indexes raw (user, item, rating) rows onto the model's items. Items the
// model has never seen are dropped.
std::map<std::int64_t, KnownRatings>
group_by_user(const ItemFieldModel &model, const std::vector<RawRating> &rows,
              std::size_t &dropped) {
  std::map<std::int64_t, Index> dense;
  for (std::size_t i = 0; i < model.item_ids.size(); ++i)
    dense[model.item_ids[i]] = static_cast<Index>(i);
  std::map<std::int64_t, KnownRatings> out;
  dropped = 0;
  for (const auto &r : rows) {
    auto it = dense.find(r.item);
    if (it == dense.end()) {
      ++dropped;
      continue;
    }
    out[r.user].emplace_back(it->second, r.value);
  }
  for (auto &[user, known] : out)
    std::sort(known.begin(), known.end());
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Item-field collaborative filtering"};
  app.require_subcommand(1);

  // prepare
  std::string input, format = "ml100k", measure = "pearson", out;
  std::size_t k = 10;
  auto *prepare = app.add_subcommand("prepare", "Build item graph and moments");
  prepare->add_option("--input", input, "Training ratings file")->required();
  prepare->add_option("--format", format, "ml100k or ml1m");
  prepare->add_option("--k", k, "Neighbour budget");
  prepare->add_option("--measure", measure, "pearson or cosine");
  prepare->add_option("--out", out, "Output stats file")->required();

  // train
  std::string stats_path, method = "maxent", convention = "as-printed";
  TrainConfig train_cfg = TrainConfig::maxent_defaults();
  double alpha = train_cfg.alpha;
  std::size_t iters = 0;
  double ridge = -1.0;
  auto *train = app.add_subcommand("train", "Fit edge weights");
  train->add_option("--stats", stats_path, "Stats file from prepare")->required();
  train->add_option("--method", method, "maxent, bethe-ml or exact-ml");
  train->add_option("--alpha", alpha, "Step size (maxent)");
  train->add_option("--iters", iters, "Iteration budget");
  train->add_option("--ridge", ridge, "Diagonal ridge");
  train->add_option("--convention", convention,
                    "as-printed or entropy-consistent (maxent)");
  train->add_option("--out", out, "Output model file")->required();

  // predict
  std::string model_path, ratings_path;
  bool variance = false;
  auto *predict = app.add_subcommand("predict", "Predict unrated items per user");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--ratings", ratings_path, "Known ratings file")->required();
  predict->add_option("--format", format, "ml100k or ml1m");
  predict->add_flag("--variance", variance, "Also print conditional variances");

  // baseline
  auto *baseline = app.add_subcommand(
      "baseline", "Classical neighbourhood predictions from a stats file");
  baseline->add_option("--stats", stats_path, "Stats file from prepare")
      ->required();
  baseline->add_option("--ratings", ratings_path, "Known ratings file")
      ->required();
  baseline->add_option("--format", format, "ml100k or ml1m");

  // eval
  std::string test_path, train_path;
  auto *eval = app.add_subcommand("eval", "MAE of a model on a test file");
  eval->add_option("--model", model_path, "Model file")->required();
  eval->add_option("--test", test_path, "Test ratings file")->required();
  eval->add_option("--train", train_path,
                   "Training ratings the users condition on (default: none)");
  eval->add_option("--format", format, "ml100k or ml1m");

  // experiment
  ExperimentConfig exp;
  std::string dataset, protocol = "fold";
  std::uint64_t seed = exp.holdout.seed;
  std::vector<int> folds;
  auto *experiment = app.add_subcommand("experiment", "Cross-validated summary row");
  experiment->add_option("--dataset", dataset, "Dataset directory or file")
      ->required();
  experiment->add_option("--protocol", protocol, "fold or holdout");
  experiment->add_option("--format", format, "ml100k or ml1m");
  experiment->add_option("--seed", seed, "Holdout split seed");
  experiment->add_option("--folds", folds, "Fold numbers (default 1..5)");
  experiment->add_option("--method", method,
                         "maxent, bethe-ml, exact-ml, cosine-baseline or "
                         "pearson-baseline");
  experiment->add_option("--k", k, "Neighbour budget");
  experiment->add_option("--alpha", alpha, "Step size (maxent)");
  experiment->add_option("--iters", iters, "Iteration budget");
  experiment->add_option("--ridge", ridge, "Diagonal ridge");
  experiment->add_option("--convention", convention, "Multiplier convention");
  bool per_split = false;
  experiment->add_flag("--per-split", per_split, "Also print per-split rows");

  CLI11_PARSE(app, argc, argv);

  auto train_config = [&](Method m) {
    TrainConfig cfg = default_config(m);
    if (m == Method::kMaxent)
      cfg.alpha = alpha;
    if (iters > 0)
      cfg.iterations = iters;
    if (ridge >= 0.0)
      cfg.ridge = ridge;
    cfg.convention = parse_convention(convention);
    cfg.validate();
    return cfg;
  };

  try {
    if (*prepare) {
      auto fmt = staged("prepare", [&] { return parse_format(format); });
      auto sim = staged("prepare", [&] { return parse_similarity(measure); });
      auto ds = staged("load", [&] { return load_movielens(input, fmt); });
      auto stats = staged("precompute", [&] { return prepare_stats(ds, k, sim); });
      staged("save", [&] {
        save_stats(stats, out);
        return 0;
      });
      std::fprintf(stderr, "%zu items, %zu edges, %zu users\n",
                   stats.means.mu.size(), stats.graph().num_edges(),
                   stats.num_users);
    } else if (*train) {
      auto m = staged("train", [&] { return parse_method(method); });
      if (m == Method::kCosineBaseline || m == Method::kPearsonBaseline)
        throw Failure{"train", "baselines have no training stage"};
      auto cfg = staged("train", [&] { return train_config(m); });
      auto stats = staged("load", [&] { return load_stats(stats_path); });
      auto model = staged("train", [&] {
        switch (m) {
        case Method::kMaxent:
          return train_maxent(stats, cfg);
        case Method::kBetheMl:
          return train_bethe_ml(stats, cfg);
        default:
          return train_exact_ml(stats, cfg);
        }
      });
      staged("save", [&] {
        save_model(model, out);
        return 0;
      });
    } else if (*predict) {
      auto fmt = staged("predict", [&] { return parse_format(format); });
      auto model = staged("load", [&] { return load_model(model_path); });
      auto rows = staged("load", [&] { return read_ratings(ratings_path, fmt); });
      std::size_t dropped = 0;
      auto users = group_by_user(model, rows, dropped);
      if (dropped > 0)
        std::fprintf(stderr, "ignored %zu ratings of unknown items\n", dropped);
      PredictOptions opts;
      opts.want_variance = variance;
      for (const auto &[user, known] : users) {
        auto r = staged("predict", [&] { return predict_user(model, known, opts); });
        std::printf("# user %lld\n", static_cast<long long>(user));
        for (std::size_t u = 0; u < r.items.size(); ++u) {
          std::printf("%lld\t%.6f\t%.6f",
                      static_cast<long long>(model.item_ids[r.items[u]]),
                      r.mean_clamped[u], r.mean_raw[u]);
          if (variance) {
            const double v = (*r.variance)[u];
            if (std::isfinite(v))
              std::printf("\t%.6g", v);
            else
              std::printf("\tinf");
          }
          std::printf("\n");
        }
      }
    } else if (*baseline) {
      auto fmt = staged("baseline", [&] { return parse_format(format); });
      auto stats = staged("load", [&] { return load_stats(stats_path); });
      auto rows = staged("load", [&] { return read_ratings(ratings_path, fmt); });
      std::map<std::int64_t, Index> dense;
      for (std::size_t i = 0; i < stats.item_ids.size(); ++i)
        dense[stats.item_ids[i]] = static_cast<Index>(i);
      std::map<std::int64_t, KnownRatings> users;
      for (const auto &r : rows)
        if (auto it = dense.find(r.item); it != dense.end())
          users[r.user].emplace_back(it->second, r.value);
      const ClassicalPredictor predictor(stats.graph(), stats.means);
      for (const auto &[user, known] : users) {
        std::vector<char> rated(stats.item_ids.size(), 0);
        for (const auto &[item, value] : known)
          rated[item] = 1;
        const auto pred = predictor.predict_all(known);
        std::printf("# user %lld\n", static_cast<long long>(user));
        for (std::size_t i = 0; i < pred.size(); ++i)
          if (!rated[i]) {
            const double raw = predict_classical(stats.graph(), stats.means,
                                                 known, static_cast<Index>(i));
            std::printf("%lld\t%.6f\t%.6f\n",
                        static_cast<long long>(stats.item_ids[i]), pred[i], raw);
          }
      }
    } else if (*eval) {
      auto fmt = staged("eval", [&] { return parse_format(format); });
      auto model = staged("load", [&] { return load_model(model_path); });
      auto test_rows = staged("load", [&] { return read_ratings(test_path, fmt); });
      std::vector<RawRating> train_rows;
      if (!train_path.empty())
        train_rows = staged("load", [&] { return read_ratings(train_path, fmt); });

      std::size_t dropped = 0, unused = 0;
      auto known = group_by_user(model, train_rows, unused);
      auto truth = group_by_user(model, test_rows, dropped);
      double total = 0.0;
      std::size_t scored = 0, cold = 0;
      for (const auto &[user, targets] : truth) {
        auto it = known.find(user);
        KnownRatings k_u = it == known.end() ? KnownRatings{} : it->second;
        cold += k_u.empty() ? 1 : 0;
        auto pred = staged("eval", [&] {
          return ItemFieldPredictor(model).predict_all(k_u);
        });
        for (const auto &[item, value] : targets) {
          total += std::abs(pred[item] - value);
          ++scored;
        }
      }
      if (scored == 0)
        throw Failure{"eval", "no scorable test ratings"};
      std::printf("mae\t%.6f\nscored\t%zu\ncold_users\t%zu\nunknown_items\t%zu\n",
                  total / static_cast<double>(scored), scored, cold, dropped);
    } else if (*experiment) {
      exp.dataset = dataset;
      exp.protocol = staged("experiment", [&] { return parse_protocol(protocol); });
      exp.format = staged("experiment", [&] { return parse_format(format); });
      exp.method = staged("experiment", [&] { return parse_method(method); });
      exp.k = k;
      exp.holdout.seed = seed;
      if (!folds.empty())
        exp.folds = folds;
      exp.train = staged("experiment", [&] { return train_config(exp.method); });
      auto report = staged("experiment", [&] { return run_experiment(exp); });
      std::printf("%s\n%s\n", report_header().c_str(),
                  format_report_row(report).c_str());
      if (per_split)
        for (const auto &s : report.splits)
          std::printf("# %s\tmae=%.4f\tscored=%zu\tcold=%zu\tedges=%zu\t"
                      "precompute=%.3f\ttrain=%.3f\n",
                      s.split.c_str(), s.mae, s.scored, s.cold_users, s.edges,
                      s.precompute_seconds, s.train_seconds);
    }
  } catch (const Failure &f) {
    std::fprintf(stderr, "error: %s: %s\n", f.stage.c_str(), f.what.c_str());
    return 1;
  }
  return 0;
}
