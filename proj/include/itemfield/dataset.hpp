//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_DATASET_HPP
#define ITEMFIELD_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace itemfield {

using Index = std::int32_t;

inline constexpr double kMinRating = 1.0;
inline constexpr double kMaxRating = 5.0;

enum class RatingFormat { kMl100k, kMl1m };

RatingFormat parse_format(const std::string &name);

struct Rating {
  Index user;
  Index item;
  double value;

  friend bool operator==(const Rating &, const Rating &) = default;
};

/// Bidirectional map between the raw ids found in rating files and dense
/// indices. Dense indices are assigned in order of first appearance.
class IdMap {
public:
  Index intern(std::int64_t raw);
  Index find(std::int64_t raw) const;  // -1 when absent
  std::int64_t raw(Index dense) const { return raws_[dense]; }
  std::size_t size() const noexcept { return raws_.size(); }
  const std::vector<std::int64_t> &raws() const noexcept { return raws_; }

private:
  std::unordered_map<std::int64_t, Index> dense_;
  std::vector<std::int64_t> raws_;
};

/// Sparse (user, item, rating) triples with dense ids and per-user /
/// per-item positions into the triple list.
class RatingsDataset {
public:
  RatingsDataset() = default;
  RatingsDataset(IdMap users, IdMap items, std::vector<Rating> triples);

  std::size_t num_users() const noexcept { return users_.size(); }
  std::size_t num_items() const noexcept { return items_.size(); }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  const std::vector<Rating> &triples() const noexcept { return triples_; }
  const std::vector<std::size_t> &by_user(Index u) const { return by_user_[u]; }
  const std::vector<std::size_t> &by_item(Index i) const { return by_item_[i]; }

  const IdMap &users() const noexcept { return users_; }
  const IdMap &items() const noexcept { return items_; }

private:
  IdMap users_;
  IdMap items_;
  std::vector<Rating> triples_;
  std::vector<std::vector<std::size_t>> by_user_;
  std::vector<std::vector<std::size_t>> by_item_;
};

/// Raw rows as read from a ratings file, before id remapping.
struct RawRating {
  std::int64_t user;
  std::int64_t item;
  double value;
};

std::vector<RawRating> read_ratings(std::istream &in, RatingFormat format);
std::vector<RawRating> read_ratings(const std::filesystem::path &path,
                                    RatingFormat format);

RatingsDataset load_movielens(const std::filesystem::path &path,
                              RatingFormat format);

/// Builds a dataset over fixed id universes. Users/items not yet present in
/// the maps are interned. Throws ValidationError on out-of-range ratings or
/// duplicate (user, item) pairs.
RatingsDataset make_dataset(IdMap &users, IdMap &items,
                            const std::vector<RawRating> &rows);

struct UserHoldout {
  double user_frac = 0.9;
  double train_frac = 0.75;
  std::uint64_t seed = 42;
};

struct FoldFiles {
  std::filesystem::path base;
  std::filesystem::path test;
  RatingFormat format = RatingFormat::kMl100k;
};

using SplitProtocol = std::variant<UserHoldout, FoldFiles>;

struct Split {
  RatingsDataset train;
  RatingsDataset test;
};

/// Seeded splitter stream: 64-bit LCG with Knuth's MMIX constants
/// (a = 6364136223846793005, c = 1442695040888963407, m = 2^64). Uniform
/// draws take the top 53 bits.
class SplitRng {
public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept;
  double uniform() noexcept;  // [0, 1)
  std::size_t below(std::size_t n) noexcept;  // [0, n)

private:
  std::uint64_t state_;
};

/// Train and test share the id maps of `ds`.
Split split_dataset(const RatingsDataset &ds, const UserHoldout &protocol);
/// Loads both fold files against one shared id mapping.
Split split_dataset(const FoldFiles &protocol);
Split split_dataset(const RatingsDataset &ds, const SplitProtocol &protocol);

struct ItemMeans {
  std::vector<double> mu;
  double global_mean = 0.0;
};

ItemMeans compute_item_means(const RatingsDataset &train);

}  // namespace itemfield

#endif  // ITEMFIELD_DATASET_HPP
