//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_EVALUATION_HPP
#define ITEMFIELD_EVALUATION_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "itemfield/dataset.hpp"
#include "itemfield/model.hpp"
#include "itemfield/predict.hpp"

namespace itemfield {

/// Bulk predictor: clamped predictions for every item, given one user's
/// known ratings. Known items may be returned with any value.
class Predictor {
public:
  virtual ~Predictor() = default;
  virtual std::vector<double> predict_all(const KnownRatings &known) const = 0;
};

class ItemFieldPredictor : public Predictor {
public:
  explicit ItemFieldPredictor(const ItemFieldModel &model) : model_(model) {}
  std::vector<double> predict_all(const KnownRatings &known) const override;

private:
  const ItemFieldModel &model_;
};

class ClassicalPredictor : public Predictor {
public:
  ClassicalPredictor(const ItemGraph &graph, const ItemMeans &means)
      : graph_(graph), means_(means) {}
  std::vector<double> predict_all(const KnownRatings &known) const override;

private:
  const ItemGraph &graph_;
  const ItemMeans &means_;
};

struct MaeResult {
  double mae = 0.0;
  std::size_t scored = 0;
  std::size_t users = 0;
  std::size_t cold_users = 0;  // test users without training ratings
};

/// Mean absolute error of clamped predictions over the test triples. Each
/// test user is predicted once, in bulk, conditioned on their training
/// ratings; users without training ratings condition on nothing. Throws
/// ValidationError when there is nothing to score. train and test must share
/// id maps.
MaeResult evaluate_mae(const Predictor &predictor, const RatingsDataset &train,
                       const RatingsDataset &test);

KnownRatings known_ratings(const RatingsDataset &ds, Index user);

}  // namespace itemfield

#endif  // ITEMFIELD_EVALUATION_HPP
