//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "itemfield/error.hpp"

namespace itemfield {

namespace {
  constexpr const char *kStatsHeader = "ITEMFIELD-STATS v1";
  constexpr const char *kModelHeader = "ITEMFIELD-MODEL v1";

  std::string real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  class Reader {
  public:
    explicit Reader(std::istream &in) : in_(in) {}

    void header(const char *expected) {
      std::string line;
      if (!std::getline(in_, line))
        throw FormatError("empty file");
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line != expected)
        throw FormatError("unsupported header '" + line + "', expected '" +
                          expected + "'");
    }

    std::string token() {
      std::string t;
      if (!(in_ >> t))
        throw FormatError("file truncated");
      return t;
    }

    void keyword(const char *expected) {
      auto t = token();
      if (t != expected)
        throw FormatError("expected '" + std::string(expected) + "', found '" +
                          t + "'");
    }

    template <class T>
    T number() {
      auto t = token();
      T v{};
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size())
        throw FormatError("bad number '" + t + "'");
      return v;
    }

    Index index(std::size_t n) {
      auto v = number<long long>();
      if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw FormatError("item index " + std::to_string(v) + " out of range");
      return static_cast<Index>(v);
    }

    void end() {
      std::string t;
      if (in_ >> t)
        throw FormatError("trailing data '" + t + "'");
    }

  private:
    std::istream &in_;
  };

  void write_means(std::ostream &out, const ItemMeans &means,
                   const std::vector<std::int64_t> &ids) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      out << ids[i] << ' ' << real(means.mu[i]) << '\n';
  }

  void read_means(Reader &rd, std::size_t n, ItemMeans &means,
                  std::vector<std::int64_t> &ids) {
    means.mu.resize(n);
    ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ids[i] = rd.number<std::int64_t>();
      means.mu[i] = rd.number<double>();
    }
  }

  std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
      throw Error("cannot write " + path.string());
    return out;
  }

  std::ifstream open_in(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
      throw Error("cannot open " + path.string());
    return in;
  }
}  // namespace

void write_stats(std::ostream &out, const SufficientStats &stats) {
  const auto &g = stats.graph();
  out << kStatsHeader << '\n'
      << "N " << g.num_items() << '\n'
      << "U " << stats.num_users << '\n'
      << "K " << g.k() << '\n'
      << "global_mean " << real(stats.means.global_mean) << '\n'
      << "E " << g.num_edges() << '\n';
  write_means(out, stats.means, stats.item_ids);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    out << g.edges()[e].i << ' ' << g.edges()[e].j << ' ' << real(g.sim()[e])
        << ' ' << real(stats.sigma.offdiag()[e]) << '\n';
  for (std::size_t i = 0; i < g.num_items(); ++i)
    out << i << ' ' << real(stats.sigma.diag()[i]) << '\n';
}

SufficientStats read_stats(std::istream &in) {
  Reader rd(in);
  rd.header(kStatsHeader);
  SufficientStats stats;
  rd.keyword("N");
  const auto n = rd.number<std::size_t>();
  rd.keyword("U");
  stats.num_users = rd.number<std::size_t>();
  rd.keyword("K");
  const auto k = rd.number<std::size_t>();
  rd.keyword("global_mean");
  stats.means.global_mean = rd.number<double>();
  rd.keyword("E");
  const auto m = rd.number<std::size_t>();

  read_means(rd, n, stats.means, stats.item_ids);
  std::vector<Edge> edges(m);
  std::vector<double> sim(m), off(m), diag(n);
  for (std::size_t e = 0; e < m; ++e) {
    edges[e].i = rd.index(n);
    edges[e].j = rd.index(n);
    sim[e] = rd.number<double>();
    off[e] = rd.number<double>();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rd.index(n) != static_cast<Index>(i))
      throw FormatError("diagonal block out of order");
    diag[i] = rd.number<double>();
  }
  rd.end();

  auto graph = std::make_shared<const ItemGraph>(n, k, edges, sim);
  if (graph->edges() != edges)
    throw FormatError("stats edges are not in canonical order");
  stats.sigma = SparseSymmetric(graph, std::move(diag), std::move(off));
  return stats;
}

void save_stats(const SufficientStats &stats, const std::filesystem::path &path) {
  auto out = open_out(path);
  write_stats(out, stats);
}

SufficientStats load_stats(const std::filesystem::path &path) {
  auto in = open_in(path);
  return read_stats(in);
}

void write_model(std::ostream &out, const ItemFieldModel &model) {
  const auto &g = *model.graph;
  out << kModelHeader << '\n'
      << "N " << g.num_items() << '\n'
      << "ridge " << real(model.ridge) << '\n'
      << "K " << g.k() << '\n'
      << "global_mean " << real(model.means.global_mean) << '\n'
      << "E " << g.num_edges() << '\n';
  write_means(out, model.means, model.item_ids);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    out << g.edges()[e].i << ' ' << g.edges()[e].j << ' '
        << real(model.theta[e]) << '\n';
}

ItemFieldModel read_model(std::istream &in) {
  Reader rd(in);
  rd.header(kModelHeader);
  ItemFieldModel model;
  rd.keyword("N");
  const auto n = rd.number<std::size_t>();
  rd.keyword("ridge");
  model.ridge = rd.number<double>();
  rd.keyword("K");
  const auto k = rd.number<std::size_t>();
  rd.keyword("global_mean");
  model.means.global_mean = rd.number<double>();
  rd.keyword("E");
  const auto m = rd.number<std::size_t>();

  read_means(rd, n, model.means, model.item_ids);
  std::vector<Edge> edges(m);
  model.theta.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    edges[e].i = rd.index(n);
    edges[e].j = rd.index(n);
    model.theta[e] = rd.number<double>();
  }
  rd.end();

  model.graph = std::make_shared<const ItemGraph>(n, k, edges);
  if (model.graph->edges() != edges)
    throw FormatError("model edges are not in canonical order");
  model.validate();
  return model;
}

void save_model(const ItemFieldModel &model, const std::filesystem::path &path) {
  auto out = open_out(path);
  write_model(out, model);
}

ItemFieldModel load_model(const std::filesystem::path &path) {
  auto in = open_in(path);
  return read_model(in);
}

}  // namespace itemfield
