//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <doctest.h>

#include "itemfield/dataset.hpp"
#include "itemfield/error.hpp"

using namespace itemfield;
namespace fs = std::filesystem;

namespace {

RatingsDataset from_text(const std::string &text,
                         RatingFormat format = RatingFormat::kMl100k) {
  std::istringstream in(text);
  IdMap users, items;
  return make_dataset(users, items, read_ratings(in, format));
}

const fs::path kData = ITEMFIELD_DATA_DIR;

// (raw user, raw item) -> rating, for multiset comparisons across splits.
std::map<std::pair<std::int64_t, std::int64_t>, double>
keyed(const RatingsDataset &ds) {
  std::map<std::pair<std::int64_t, std::int64_t>, double> out;
  for (const auto &r : ds.triples())
    out[{ds.users().raw(r.user), ds.items().raw(r.item)}] = r.value;
  return out;
}

RatingsDataset random_dataset(std::size_t users, std::size_t items,
                              double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution rated(density);
  std::uniform_int_distribution<int> stars(1, 5);
  std::vector<RawRating> rows;
  for (std::size_t u = 0; u < users; ++u)
    for (std::size_t i = 0; i < items; ++i)
      if (rated(rng))
        rows.push_back({static_cast<std::int64_t>(u + 1),
                        static_cast<std::int64_t>(i + 1),
                        static_cast<double>(stars(rng))});
  IdMap um, im;
  return make_dataset(um, im, rows);
}

}  // namespace

TEST_CASE("two-line file yields two users and one item") {
  auto ds = from_text("1\t1\t5\t0\n2\t1\t3\t0\n");
  CHECK(ds.num_users() == 2);
  CHECK(ds.num_items() == 1);
  REQUIRE(ds.size() == 2);
  CHECK(ds.triples()[0].value == 5.0);
  CHECK(ds.triples()[1].value == 3.0);
  CHECK(ds.users().raw(1) == 2);
}

TEST_CASE("ids are remapped densely in first-seen order") {
  auto ds = from_text("70\t300\t4\t9\n12\t300\t2\t9\n70\t5\t1\t9\n");
  CHECK(ds.num_users() == 2);
  CHECK(ds.num_items() == 2);
  CHECK(ds.users().find(70) == 0);
  CHECK(ds.users().find(12) == 1);
  CHECK(ds.items().find(5) == 1);
  CHECK(ds.items().find(6) == -1);
  CHECK(ds.by_user(0).size() == 2);
  CHECK(ds.by_item(0).size() == 2);
}

TEST_CASE("double-colon rows parse") {
  auto ds = from_text("1::1193::5::978300760\n1::661::3::978302109\n",
                      RatingFormat::kMl1m);
  CHECK(ds.num_users() == 1);
  CHECK(ds.num_items() == 2);
  CHECK(ds.items().raw(0) == 1193);
}

TEST_CASE("malformed rows report their line number") {
  std::istringstream in("1\t1\t5\t0\n1\t2\tfive\t0\n");
  try {
    read_ratings(in, RatingFormat::kMl100k);
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
  std::istringstream short_row("1\t1\t5\n");
  CHECK_THROWS_AS(read_ratings(short_row, RatingFormat::kMl100k), ParseError);
  std::istringstream wrong_sep("1::1::5::0\n");
  CHECK_THROWS_AS(read_ratings(wrong_sep, RatingFormat::kMl100k), ParseError);
}

TEST_CASE("ratings outside [1,5] and duplicates are rejected") {
  CHECK_THROWS_AS(from_text("1\t1\t6\t0\n"), ValidationError);
  CHECK_THROWS_AS(from_text("1\t1\t0\t0\n"), ValidationError);
  CHECK_THROWS_AS(from_text("1\t1\t3\t0\n1\t1\t4\t5\n"), ValidationError);
}

TEST_CASE("format names") {
  CHECK(parse_format("ml100k") == RatingFormat::kMl100k);
  CHECK(parse_format("ml1m") == RatingFormat::kMl1m);
  CHECK_THROWS_AS(parse_format("netflix"), ValidationError);
}

TEST_CASE("split generator follows the 64-bit LCG") {
  // state' = a * state + c (mod 2^64), evaluated by hand from state 0 and 1.
  SplitRng zero(0);
  CHECK(zero.next() == 1442695040888963407ULL);
  SplitRng one(1);
  CHECK(one.next() == 6364136223846793005ULL + 1442695040888963407ULL);
  SplitRng r(42);
  for (int t = 0; t < 1000; ++t) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("item means") {
  SUBCASE("constant ratings") {
    auto ds = from_text("1\t1\t4\t0\n2\t1\t4\t0\n3\t1\t4\t0\n");
    CHECK(compute_item_means(ds).mu[0] == 4.0);
  }
  SUBCASE("two ratings") {
    auto ds = from_text("1\t1\t5\t0\n2\t1\t3\t0\n");
    CHECK(compute_item_means(ds).mu[0] == 4.0);
  }
  SUBCASE("unrated item takes the global mean") {
    IdMap users, items;
    items.intern(99);  // known to the universe, never rated in training
    std::istringstream in("1\t1\t5\t0\n2\t1\t3\t0\n2\t2\t1\t0\n");
    auto ds = make_dataset(users, items, read_ratings(in, RatingFormat::kMl100k));
    auto m = compute_item_means(ds);
    CHECK(m.global_mean == 3.0);
    CHECK(m.mu[items.find(99)] == 3.0);
  }
  SUBCASE("empty training set") {
    CHECK_THROWS_AS(compute_item_means(RatingsDataset{}), ValidationError);
  }
}

TEST_CASE("property: item means equal an independent scan") {
  auto ds = random_dataset(60, 25, 0.3, 3);
  auto m = compute_item_means(ds);
  std::vector<double> sum(ds.num_items(), 0.0);
  std::vector<int> count(ds.num_items(), 0);
  double total = 0.0;
  for (const auto &r : ds.triples()) {
    sum[r.item] += r.value;
    ++count[r.item];
    total += r.value;
  }
  for (std::size_t i = 0; i < ds.num_items(); ++i) {
    const double expect = count[i] > 0
                              ? sum[i] / count[i]
                              : total / static_cast<double>(ds.size());
    CHECK(m.mu[i] == expect);
    CHECK(m.mu[i] >= 1.0);
    CHECK(m.mu[i] <= 5.0);
  }
}

TEST_CASE("property: holdout splits partition the data") {
  auto ds = random_dataset(80, 30, 0.35, 11);
  for (std::uint64_t seed : {1ULL, 42ULL, 12345ULL}) {
    auto split = split_dataset(ds, UserHoldout{0.7, 0.75, seed});
    auto all = keyed(ds);
    auto tr = keyed(split.train);
    auto te = keyed(split.test);
    CHECK(tr.size() + te.size() == all.size());
    for (const auto &[key, v] : te) {
      CHECK(tr.count(key) == 0);
      CHECK(all.at(key) == v);
    }
    for (const auto &[key, v] : tr)
      CHECK(all.at(key) == v);

    // Every test rating belongs to a user who also trains.
    for (const auto &r : split.test.triples())
      CHECK_FALSE(split.train.by_user(r.user).empty());
  }
}

TEST_CASE("holdout proportions") {
  auto ds = random_dataset(200, 40, 0.5, 5);
  auto split = split_dataset(ds, UserHoldout{0.9, 0.75, 42});
  std::size_t held_users = 0;
  for (Index u = 0; u < static_cast<Index>(ds.num_users()); ++u) {
    const auto te = split.test.by_user(u).size();
    if (te == 0)
      continue;
    ++held_users;
    const auto tr = split.train.by_user(u).size();
    const double frac = static_cast<double>(tr) / static_cast<double>(tr + te);
    CHECK(frac == doctest::Approx(0.75).epsilon(0.1));
  }
  CHECK(held_users == 20);
}

TEST_CASE("same seed gives identical splits, another seed does not") {
  auto ds = random_dataset(50, 20, 0.4, 9);
  auto a = split_dataset(ds, UserHoldout{0.9, 0.75, 42});
  auto b = split_dataset(ds, SplitProtocol{UserHoldout{0.9, 0.75, 42}});
  auto c = split_dataset(ds, UserHoldout{0.9, 0.75, 43});
  CHECK(a.train.triples() == b.train.triples());
  CHECK(a.test.triples() == b.test.triples());
  CHECK(a.test.triples() != c.test.triples());
}

TEST_CASE("invalid holdout fractions") {
  auto ds = random_dataset(10, 5, 0.5, 1);
  CHECK_THROWS_AS(split_dataset(ds, UserHoldout{1.0, 0.75, 1}), ValidationError);
  CHECK_THROWS_AS(split_dataset(ds, UserHoldout{0.9, 0.0, 1}), ValidationError);
}

TEST_CASE("fold files share one id universe and must not overlap") {
  auto dir = fs::temp_directory_path() / "itemfield_fold_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "a.base") << "1\t10\t4\t0\n2\t10\t3\t0\n";
    std::ofstream(dir / "a.test") << "2\t20\t5\t0\n3\t10\t1\t0\n";
    std::ofstream(dir / "b.test") << "1\t10\t2\t0\n";
  }
  auto split = split_dataset(FoldFiles{dir / "a.base", dir / "a.test"});
  CHECK(split.train.num_users() == 3);
  CHECK(split.test.num_users() == 3);
  CHECK(split.train.num_items() == 2);
  CHECK(split.train.size() == 2);
  CHECK(split.test.size() == 2);
  CHECK(split.train.users().raws() == split.test.users().raws());
  CHECK(split.train.by_user(split.train.users().find(3)).empty());

  CHECK_THROWS_AS(split_dataset(FoldFiles{dir / "a.base", dir / "b.test"}),
                  ValidationError);
  CHECK_THROWS(split_dataset(FoldFiles{dir / "a.base", dir / "missing"}));
  fs::remove_all(dir);
}

TEST_CASE("MovieLens 100K counts" * doctest::skip(!fs::exists(kData / "ml-100k" / "u.data"))) {
  auto ds = load_movielens(kData / "ml-100k" / "u.data", RatingFormat::kMl100k);
  CHECK(ds.num_users() == 943);
  CHECK(ds.num_items() == 1682);
  CHECK(ds.size() == 100000);

  auto fold = split_dataset(FoldFiles{kData / "ml-100k" / "u1.base",
                                      kData / "ml-100k" / "u1.test"});
  CHECK(fold.train.size() == 80000);
  CHECK(fold.test.size() == 20000);
}

TEST_CASE("MovieLens 1M counts" * doctest::skip(!fs::exists(kData / "ml-1m" / "ratings.dat"))) {
  auto ds = load_movielens(kData / "ml-1m" / "ratings.dat", RatingFormat::kMl1m);
  CHECK(ds.num_users() == 6040);
  // Only items with at least one rating appear in the ratings file.
  CHECK(ds.num_items() <= 3952);
  CHECK(ds.items().raws().size() == ds.num_items());
  auto split = split_dataset(ds, UserHoldout{0.9, 0.75, 42});
  for (const auto &r : split.test.triples())
    CHECK_FALSE(split.train.by_user(r.user).empty());
}
