//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/evaluation.hpp"

#include <cmath>
#include <limits>

#include "itemfield/baselines.hpp"
#include "itemfield/error.hpp"

namespace itemfield {

std::vector<double>
ItemFieldPredictor::predict_all(const KnownRatings &known) const {
  auto res = predict_user(model_, known);
  std::vector<double> out(model_.num_items(), 0.0);
  for (std::size_t u = 0; u < res.items.size(); ++u)
    out[res.items[u]] = res.mean_clamped[u];
  for (const auto &[item, r] : known)
    out[item] = r;
  return out;
}

std::vector<double>
ClassicalPredictor::predict_all(const KnownRatings &known) const {
  const auto n = graph_.num_items();
  std::vector<double> dense(n, std::numeric_limits<double>::quiet_NaN());
  for (const auto &[item, r] : known)
    dense[item] = r;
  std::vector<double> out(n);
  for (Index i = 0; i < static_cast<Index>(n); ++i)
    out[i] = std::isnan(dense[i])
                 ? clamp_rating(predict_classical(graph_, means_, dense, i))
                 : dense[i];
  return out;
}

KnownRatings known_ratings(const RatingsDataset &ds, Index user) {
  KnownRatings known;
  for (auto t : ds.by_user(user))
    known.emplace_back(ds.triples()[t].item, ds.triples()[t].value);
  return known;
}

MaeResult evaluate_mae(const Predictor &predictor, const RatingsDataset &train,
                       const RatingsDataset &test) {
  if (train.num_users() != test.num_users() ||
      train.num_items() != test.num_items())
    throw ValidationError("train and test do not share an id universe");

  MaeResult res;
  double total = 0.0;
  for (Index u = 0; u < static_cast<Index>(test.num_users()); ++u) {
    const auto &rows = test.by_user(u);
    if (rows.empty())
      continue;
    ++res.users;
    const auto known = known_ratings(train, u);
    if (known.empty())
      ++res.cold_users;
    const auto pred = predictor.predict_all(known);
    for (auto t : rows) {
      const auto &r = test.triples()[t];
      total += std::abs(pred[r.item] - r.value);
      ++res.scored;
    }
  }
  if (res.scored == 0)
    throw ValidationError("no scorable test ratings");
  res.mae = total / static_cast<double>(res.scored);
  return res;
}

}  // namespace itemfield
