//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <string_view>

#include "itemfield/error.hpp"

namespace itemfield {

RatingFormat parse_format(const std::string &name) {
  if (name == "ml100k")
    return RatingFormat::kMl100k;
  if (name == "ml1m")
    return RatingFormat::kMl1m;
  throw ValidationError("unknown rating format '" + name +
                        "' (expected ml100k or ml1m)");
}

Index IdMap::intern(std::int64_t raw) {
  auto [it, inserted] =
      dense_.try_emplace(raw, static_cast<Index>(raws_.size()));
  if (inserted)
    raws_.push_back(raw);
  return it->second;
}

Index IdMap::find(std::int64_t raw) const {
  auto it = dense_.find(raw);
  return it == dense_.end() ? -1 : it->second;
}

RatingsDataset::RatingsDataset(IdMap users, IdMap items,
                               std::vector<Rating> triples)
    : users_(std::move(users)), items_(std::move(items)),
      triples_(std::move(triples)), by_user_(users_.size()),
      by_item_(items_.size()) {
  for (std::size_t t = 0; t < triples_.size(); ++t) {
    by_user_[triples_[t].user].push_back(t);
    by_item_[triples_[t].item].push_back(t);
  }
  // Index lists are ordered by the other coordinate so that pairwise sums
  // accumulate in the same order from either side.
  for (auto &pos : by_user_)
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
      return triples_[a].item < triples_[b].item;
    });
  for (auto &pos : by_item_)
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
      return triples_[a].user < triples_[b].user;
    });
}

namespace {
  std::vector<std::string_view> split_fields(std::string_view line,
                                             std::string_view sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
      auto next = line.find(sep, pos);
      if (next == std::string_view::npos) {
        out.push_back(line.substr(pos));
        return out;
      }
      out.push_back(line.substr(pos, next - pos));
      pos = next + sep.size();
    }
  }

  template <class T>
  bool parse_number(std::string_view s, T &value) {
    if (s.empty())
      return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
  }
}  // namespace

std::vector<RawRating> read_ratings(std::istream &in, RatingFormat format) {
  const std::string_view sep = format == RatingFormat::kMl100k ? "\t" : "::";
  std::vector<RawRating> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;

    auto fields = split_fields(line, sep);
    if (fields.size() != 4)
      throw ParseError("expected 4 fields, found " +
                           std::to_string(fields.size()),
                       lineno);

    RawRating row{};
    std::int64_t timestamp = 0;
    if (!parse_number(fields[0], row.user))
      throw ParseError("bad user id '" + std::string(fields[0]) + "'", lineno);
    if (!parse_number(fields[1], row.item))
      throw ParseError("bad item id '" + std::string(fields[1]) + "'", lineno);
    if (!parse_number(fields[2], row.value) || !std::isfinite(row.value))
      throw ParseError("bad rating '" + std::string(fields[2]) + "'", lineno);
    if (!parse_number(fields[3], timestamp))
      throw ParseError("bad timestamp '" + std::string(fields[3]) + "'",
                       lineno);
    if (row.value < kMinRating || row.value > kMaxRating)
      throw ValidationError("rating " + std::string(fields[2]) +
                            " outside [1,5] at line " +
                            std::to_string(lineno));
    rows.push_back(row);
  }
  return rows;
}

std::vector<RawRating> read_ratings(const std::filesystem::path &path,
                                    RatingFormat format) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open ratings file " + path.string());
  return read_ratings(in, format);
}

RatingsDataset make_dataset(IdMap &users, IdMap &items,
                            const std::vector<RawRating> &rows) {
  std::vector<Rating> triples;
  triples.reserve(rows.size());
  std::set<std::pair<Index, Index>> seen;
  for (const auto &row : rows) {
    if (row.value < kMinRating || row.value > kMaxRating)
      throw ValidationError("rating outside [1,5]");
    Rating r{users.intern(row.user), items.intern(row.item), row.value};
    if (!seen.emplace(r.user, r.item).second)
      throw ValidationError("duplicate rating for user " +
                            std::to_string(row.user) + ", item " +
                            std::to_string(row.item));
    triples.push_back(r);
  }
  return RatingsDataset(users, items, std::move(triples));
}

RatingsDataset load_movielens(const std::filesystem::path &path,
                              RatingFormat format) {
  IdMap users, items;
  return make_dataset(users, items, read_ratings(path, format));
}

std::uint64_t SplitRng::next() noexcept {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

double SplitRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t SplitRng::below(std::size_t n) noexcept {
  auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(k, n - 1);
}

namespace {
  template <class T>
  void shuffle(std::vector<T> &v, SplitRng &rng) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[rng.below(i)]);
  }
}  // namespace

Split split_dataset(const RatingsDataset &ds, const UserHoldout &protocol) {
  if (!(protocol.user_frac > 0.0 && protocol.user_frac < 1.0))
    throw ValidationError("user_frac must lie in (0,1)");
  if (!(protocol.train_frac > 0.0 && protocol.train_frac < 1.0))
    throw ValidationError("train_frac must lie in (0,1)");

  SplitRng rng(protocol.seed);
  std::vector<Index> users(ds.num_users());
  std::iota(users.begin(), users.end(), 0);
  shuffle(users, rng);

  const auto n_full = static_cast<std::size_t>(
      std::llround(protocol.user_frac * static_cast<double>(users.size())));

  std::vector<char> to_test(ds.size(), 0);
  for (std::size_t k = n_full; k < users.size(); ++k) {
    // by_user lists are ordered by dense item id.
    std::vector<std::size_t> pos = ds.by_user(users[k]);
    shuffle(pos, rng);
    if (pos.size() < 2)
      continue;
    auto n_train = static_cast<std::size_t>(std::llround(
        protocol.train_frac * static_cast<double>(pos.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, pos.size() - 1);
    for (std::size_t t = n_train; t < pos.size(); ++t)
      to_test[pos[t]] = 1;
  }

  std::vector<Rating> train, test;
  for (std::size_t t = 0; t < ds.size(); ++t)
    (to_test[t] ? test : train).push_back(ds.triples()[t]);
  return {RatingsDataset(ds.users(), ds.items(), std::move(train)),
          RatingsDataset(ds.users(), ds.items(), std::move(test))};
}

Split split_dataset(const FoldFiles &protocol) {
  auto base_rows = read_ratings(protocol.base, protocol.format);
  auto test_rows = read_ratings(protocol.test, protocol.format);

  IdMap users, items;
  for (const auto &r : base_rows) {
    users.intern(r.user);
    items.intern(r.item);
  }
  for (const auto &r : test_rows) {
    users.intern(r.user);
    items.intern(r.item);
  }

  auto train = make_dataset(users, items, base_rows);
  auto test = make_dataset(users, items, test_rows);

  std::set<std::pair<Index, Index>> in_train;
  for (const auto &r : train.triples())
    in_train.emplace(r.user, r.item);
  for (const auto &r : test.triples())
    if (in_train.count({r.user, r.item}))
      throw ValidationError(
          "fold files overlap: user " + std::to_string(users.raw(r.user)) +
          ", item " + std::to_string(items.raw(r.item)) + " in both");

  // make_dataset interned nothing new, so both share the final universe.
  return {RatingsDataset(users, items, train.triples()),
          RatingsDataset(users, items, test.triples())};
}

Split split_dataset(const RatingsDataset &ds, const SplitProtocol &protocol) {
  return std::visit(
      [&](const auto &p) -> Split {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, UserHoldout>)
          return split_dataset(ds, p);
        else
          return split_dataset(p);
      },
      protocol);
}

ItemMeans compute_item_means(const RatingsDataset &train) {
  if (train.empty())
    throw ValidationError("cannot compute item means of an empty training set");

  ItemMeans means;
  double total = 0.0;
  for (const auto &r : train.triples())
    total += r.value;
  means.global_mean = total / static_cast<double>(train.size());

  means.mu.assign(train.num_items(), means.global_mean);
  for (Index i = 0; i < static_cast<Index>(train.num_items()); ++i) {
    const auto &pos = train.by_item(i);
    if (pos.empty())
      continue;
    double sum = 0.0;
    for (auto t : pos)
      sum += train.triples()[t].value;
    means.mu[i] = sum / static_cast<double>(pos.size());
  }
  return means;
}

}  // namespace itemfield
