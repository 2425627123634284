//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "itemfield/error.hpp"
#include "itemfield/evaluation.hpp"
#include "itemfield/itemgraph.hpp"
#include "itemfield/mltrain.hpp"

namespace itemfield {

Method parse_method(const std::string &name) {
  if (name == "maxent")
    return Method::kMaxent;
  if (name == "bethe-ml")
    return Method::kBetheMl;
  if (name == "exact-ml")
    return Method::kExactMl;
  if (name == "cosine-baseline")
    return Method::kCosineBaseline;
  if (name == "pearson-baseline")
    return Method::kPearsonBaseline;
  throw ValidationError("unknown method '" + name + "'");
}

std::string to_string(Method method) {
  switch (method) {
  case Method::kMaxent:
    return "maxent";
  case Method::kBetheMl:
    return "bethe-ml";
  case Method::kExactMl:
    return "exact-ml";
  case Method::kCosineBaseline:
    return "cosine-baseline";
  case Method::kPearsonBaseline:
    return "pearson-baseline";
  }
  return "?";
}

Similarity graph_measure(Method method) {
  return method == Method::kCosineBaseline ? Similarity::kCosine
                                           : Similarity::kPearson;
}

TrainConfig default_config(Method method) {
  return method == Method::kBetheMl || method == Method::kExactMl
             ? TrainConfig::ml_defaults()
             : TrainConfig::maxent_defaults();
}

Protocol parse_protocol(const std::string &name) {
  if (name == "fold")
    return Protocol::kFold;
  if (name == "holdout")
    return Protocol::kHoldout;
  throw ValidationError("unknown protocol '" + name + "'");
}

namespace {
  using Clock = std::chrono::steady_clock;

  double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  std::string stage(const std::string &name, const std::string &split) {
    return name + " [" + split + "]: ";
  }

  FoldReport run_split(const ExperimentConfig &cfg, const std::string &label,
                       const Split &split) {
    FoldReport rep;
    rep.split = label;

    auto t0 = Clock::now();
    SufficientStats stats;
    try {
      stats = prepare_stats(split.train, cfg.k, graph_measure(cfg.method));
    } catch (const Error &e) {
      throw Error(stage("precompute", label) + e.what());
    }
    rep.precompute_seconds = seconds_since(t0);
    rep.edges = stats.graph().num_edges();

    MaeResult mae;
    try {
      if (cfg.method == Method::kCosineBaseline ||
          cfg.method == Method::kPearsonBaseline) {
        rep.train_seconds = 0.0;
        mae = evaluate_mae(ClassicalPredictor(stats.graph(), stats.means),
                           split.train, split.test);
      } else {
        ItemFieldModel model;
        auto t1 = Clock::now();
        try {
          switch (cfg.method) {
          case Method::kMaxent:
            model = train_maxent(stats, cfg.train);
            break;
          case Method::kBetheMl:
            model = train_bethe_ml(stats, cfg.train);
            break;
          default:
            model = train_exact_ml(stats, cfg.train);
            break;
          }
        } catch (const Error &e) {
          throw Error(stage("train", label) + e.what());
        }
        rep.train_seconds = seconds_since(t1);
        mae = evaluate_mae(ItemFieldPredictor(model), split.train, split.test);
      }
    } catch (const Error &e) {
      const std::string what = e.what();
      if (what.rfind("train [", 0) == 0)
        throw;
      throw Error(stage("evaluate", label) + what);
    }
    rep.mae = mae.mae;
    rep.scored = mae.scored;
    rep.cold_users = mae.cold_users;
    return rep;
  }

  std::filesystem::path holdout_file(const ExperimentConfig &cfg) {
    if (!std::filesystem::is_directory(cfg.dataset))
      return cfg.dataset;
    const auto name =
        cfg.format == RatingFormat::kMl1m ? "ratings.dat" : "u.data";
    return cfg.dataset / name;
  }

  std::string snapshot(const ExperimentConfig &cfg) {
    std::ostringstream s;
    s << "protocol=" << (cfg.protocol == Protocol::kFold ? "fold" : "holdout");
    if (cfg.protocol == Protocol::kHoldout)
      s << ",seed=" << cfg.holdout.seed << ",user_frac=" << cfg.holdout.user_frac
        << ",train_frac=" << cfg.holdout.train_frac;
    if (cfg.method == Method::kMaxent)
      s << ",alpha=" << cfg.train.alpha << ",iters=" << cfg.train.iterations
        << ",convention=" << to_string(cfg.train.convention);
    else if (cfg.method == Method::kBetheMl || cfg.method == Method::kExactMl)
      s << ",max_iters=" << cfg.train.iterations;
    if (cfg.method != Method::kCosineBaseline &&
        cfg.method != Method::kPearsonBaseline)
      s << ",ridge=" << cfg.train.ridge;
    return s.str();
  }
}  // namespace

ExperimentReport run_experiment(const ExperimentConfig &cfg) {
  ExperimentReport report;
  report.method = to_string(cfg.method);
  report.k = cfg.k;
  report.config = snapshot(cfg);

  if (cfg.protocol == Protocol::kFold) {
    if (cfg.folds.empty())
      throw ValidationError("no folds selected");
    for (int f : cfg.folds) {
      const auto label = "u" + std::to_string(f);
      Split split;
      try {
        split = split_dataset(FoldFiles{cfg.dataset / (label + ".base"),
                                        cfg.dataset / (label + ".test"),
                                        cfg.format});
      } catch (const Error &e) {
        throw Error(stage("load", label) + e.what());
      }
      report.splits.push_back(run_split(cfg, label, split));
    }
  } else {
    Split split;
    try {
      auto ds = load_movielens(holdout_file(cfg), cfg.format);
      split = split_dataset(ds, cfg.holdout);
    } catch (const Error &e) {
      throw Error(stage("load", "holdout") + e.what());
    }
    report.splits.push_back(run_split(cfg, "holdout", split));
  }

  for (const auto &s : report.splits) {
    report.mae += s.mae;
    report.precompute_seconds += s.precompute_seconds;
    report.train_seconds += s.train_seconds;
  }
  const auto count = static_cast<double>(report.splits.size());
  report.mae /= count;
  report.precompute_seconds /= count;
  report.train_seconds /= count;
  return report;
}

std::string report_header() {
  return "method\tk\tmae\tprecompute_s\ttrain_s\tconfig";
}

std::string format_report_row(const ExperimentReport &report) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s\t%zu\t%.4f\t%.3f\t%.3f\t",
                report.method.c_str(), report.k, report.mae,
                report.precompute_seconds, report.train_seconds);
  return buf + report.config;
}

}  // namespace itemfield
