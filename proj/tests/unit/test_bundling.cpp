#include <doctest.h>

#include <algorithm>

#include "fdp/bundling.hpp"
#include "fdp/grouping.hpp"
#include "oracles.hpp"

using namespace fdp;

namespace {

std::vector<Vertex> verts(const std::vector<Request>& rs, const std::vector<int>& ids) {
  std::vector<Vertex> out;
  for (int id : ids) out.push_back(rs[static_cast<std::size_t>(id)].vertex);
  return out;
}

/// Minimum of cost(L|prev) + cost(R|next) over every assignment of `cur`.
std::int64_t brute_force_split(const RootedTree& t, const Rational& f, const std::vector<Request>& rs,
                               const std::vector<int>& prev, const std::vector<int>& cur,
                               const std::vector<int>& next) {
  std::int64_t best = -1;
  for (std::uint32_t mask = 0; mask < (1U << cur.size()); ++mask) {
    std::vector<int> l, r;
    for (std::size_t j = 0; j < cur.size(); ++j) ((mask >> j) & 1U ? l : r).push_back(cur[j]);
    const std::int64_t v = oracle::conditional_cost(t, verts(rs, l), verts(rs, prev), f) +
                           oracle::conditional_cost(t, verts(rs, r), verts(rs, next), f);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

}  // namespace

TEST_CASE("bucket boundaries are half-open") {
  CHECK(bucket_of(0, 5) == 1);
  CHECK(bucket_of(5, 5) == 2);
  CHECK(bucket_of(12, 5) == 3);
  CHECK(bucket_of(3, Rational(3, 2)) == 3);
  auto b = bucketize({{0, 1}, {5, 1}, {4, 1}, {12, 1}}, 5);
  CHECK(b.at(1) == std::vector<int>{0, 2});
  CHECK(b.at(2) == std::vector<int>{1});
  CHECK(b.at(7).empty());
  CHECK(b.last() == 3);
  CHECK_THROWS_AS(bucketize({}, 0), InputError);
}

TEST_CASE("single-vehicle split") {
  // o=0, x=1, x'=2, y=3: o–x(1), x–x'(1), o–y(1)
  RootedTree t({-1, 0, 1, 0}, {0, 1, 1, 1}, 0);
  std::vector<Request> rs{{0, 2}, {1, 1}, {2, 3}};
  auto s = split_single(t, rs, {0}, {1}, {2});
  CHECK(s.left == std::vector<int>{1});
  CHECK(s.right.empty());
  auto none = split_single(t, rs, {0}, {}, {2});
  CHECK(none.left.empty());
  CHECK(none.right.empty());
  // equidistant: both neighbours empty
  auto tie = split_single(t, rs, {}, {2}, {});
  CHECK(tie.left == std::vector<int>{2});
  // y is closer to the next bucket's tree
  auto away = split_single(t, rs, {0}, {2}, {2});
  CHECK(away.right == std::vector<int>{2});
}

TEST_CASE("single-vehicle split minimises the summed msts") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.uniform(2, 10));
    auto t = oracle::random_tree(rng, n, 4);
    std::vector<Request> rs;
    for (int i = 0; i < 9; ++i) rs.push_back({0, static_cast<Vertex>(rng.uniform(1, n - 1))});
    std::vector<int> prev{0, 1, 2}, cur{3, 4, 5}, next{6, 7, 8};
    prev.resize(static_cast<std::size_t>(rng.uniform(0, 3)));
    next.resize(static_cast<std::size_t>(rng.uniform(0, 3)));
    auto s = split_single(t, rs, prev, cur, next);
    auto value = [&](const std::vector<int>& l, const std::vector<int>& r) {
      std::vector<Vertex> a = verts(rs, prev), b = verts(rs, next);
      for (Vertex v : verts(rs, l)) a.push_back(v);
      for (Vertex v : verts(rs, r)) b.push_back(v);
      return oracle::mst_anchored(t, 0, a) + oracle::mst_anchored(t, 0, b);
    };
    Length best = -1;
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<int> l, r;
      for (int j = 0; j < 3; ++j) ((mask >> j) & 1 ? l : r).push_back(cur[static_cast<std::size_t>(j)]);
      const Length v = value(l, r);
      if (best < 0 || v < best) best = v;
    }
    REQUIRE(value(s.left, s.right) == best);
  }
}

TEST_CASE("multi-vehicle split on an empty bucket") {
  RootedTree t({-1, 0}, {0, 3}, 0);
  auto s = split_multi(t, {{0, 1}}, {0}, {}, {}, 5);
  CHECK(s.split.left.empty());
  CHECK(s.split.right.empty());
  CHECK(s.objective_units == 0);
}

TEST_CASE("multi-vehicle split matches exhaustive enumeration") {
  Rng rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = static_cast<int>(rng.uniform(2, 11));
    auto base = oracle::random_tree(rng, n, 6);
    auto bt = binarize(base).tree;
    const int nb = bt.size();
    const int cur_size = static_cast<int>(rng.uniform(1, 10));
    const int prev_size = static_cast<int>(rng.uniform(0, 4));
    const int next_size = static_cast<int>(rng.uniform(0, 4));
    std::vector<Request> rs;
    std::vector<int> prev, cur, next;
    for (int i = 0; i < prev_size + cur_size + next_size; ++i) {
      rs.push_back({0, static_cast<Vertex>(rng.uniform(1, n - 1))});
      (i < prev_size ? prev : i < prev_size + cur_size ? cur : next).push_back(i);
    }
    if (trial % 5 == 0) {
      prev.clear();
      next.clear();
    }
    const Rational f(rng.uniform(1, 8));
    const Rational eps = trial % 2 == 0 ? Rational(1) : Rational(1, 4);
    auto res = split_multi(bt, rs, prev, cur, next, f, eps);
    auto rt = round_tree(bt, f, eps, static_cast<std::int64_t>(prev.size() + cur.size() + next.size()));
    CHECK(nb == rt.tree.size());
    REQUIRE(rt.grid * rt.f_units == f);
    const auto brute = brute_force_split(rt.tree, rt.f_units, rs, prev, cur, next);
    REQUIRE(res.objective_units == brute);
    const auto realised = oracle::conditional_cost(rt.tree, verts(rs, res.split.left), verts(rs, prev), rt.f_units) +
                          oracle::conditional_cost(rt.tree, verts(rs, res.split.right), verts(rs, next), rt.f_units);
    REQUIRE(realised == res.objective_units);
    REQUIRE(res.objective == Rational(res.objective_units) * rt.grid);
    REQUIRE(res.split.left.size() + res.split.right.size() == cur.size());
    if (prev.empty() && next.empty()) {
      REQUIRE(realised == oracle::cost(rt.tree, verts(rs, res.split.left), rt.f_units) +
                              oracle::cost(rt.tree, verts(rs, res.split.right), rt.f_units));
    }
  }
}

TEST_CASE("multi-vehicle ties put early requests left") {
  // two mirror-image leaves with nothing on either side: everything is free
  RootedTree t({-1, 0, 0}, {0, 1, 1}, 0);
  std::vector<Request> rs{{0, 1}, {0, 2}};
  auto s = split_multi(t, rs, {}, {0, 1}, {}, 10);
  CHECK(s.split.left == std::vector<int>{0, 1});
}

TEST_CASE("bundle stream") {
  RootedTree t({-1, 0, 0}, {0, 1, 1}, 0);
  CHECK(stream_bundles(bucketize({}, 5), SplitMode::kSingle, t, {}).empty());

  std::vector<Request> first{{0, 1}, {3, 2}};
  auto b1 = stream_bundles(bucketize(first, 5), SplitMode::kSingle, t, first);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].index == 1);
  CHECK(b1[0].release == Rational(15));
  CHECK(b1[0].members() == std::vector<int>{0, 1});

  std::vector<Request> second{{6, 1}};
  for (auto mode : {SplitMode::kSingle, SplitMode::kMulti}) {
    auto b2 = stream_bundles(bucketize(second, 5), mode, t, second);
    REQUIRE(b2.size() == 1);
    CHECK((b2[0].index == 1 || b2[0].index == 3));
  }
}

TEST_CASE("bundles partition the requests") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.uniform(2, 12));
    auto t = binarize(oracle::random_tree(rng, n, 4)).tree;
    std::vector<Request> rs;
    const int m = static_cast<int>(rng.uniform(0, 30));
    for (int i = 0; i < m; ++i) rs.push_back({rng.uniform(0, 40), static_cast<Vertex>(rng.uniform(1, n - 1))});
    const Rational f(rng.uniform(1, 9));
    for (auto mode : {SplitMode::kSingle, SplitMode::kMulti}) {
      auto bundles = stream_bundles(bucketize(rs, f), mode, t, rs);
      std::vector<int> seen;
      for (const auto& b : bundles) {
        REQUIRE(b.index % 2 == 1);
        REQUIRE(b.release == Rational(b.index + 2) * f);
        for (int id : b.members()) {
          seen.push_back(id);
          REQUIRE(Rational(rs[static_cast<std::size_t>(id)].arrival) >= Rational(b.index - 2) * f);
          REQUIRE(Rational(rs[static_cast<std::size_t>(id)].arrival) < b.release);
        }
      }
      std::sort(seen.begin(), seen.end());
      std::vector<int> all(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;
      REQUIRE(seen == all);
    }
  }
}
