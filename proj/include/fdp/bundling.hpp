#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fdp/instance.hpp"
#include "fdp/metric.hpp"
#include "fdp/rational.hpp"

namespace fdp {

/// Requests grouped by arrival interval: bucket i holds r with (i-1)F <= r < iF.
class IntervalBuckets {
 public:
  IntervalBuckets(Rational f, std::map<std::int64_t, std::vector<int>> buckets)
      : f_(f), buckets_(std::move(buckets)) {}

  [[nodiscard]] const Rational& f() const { return f_; }
  /// Request indices of bucket i in ascending order (empty if none).
  [[nodiscard]] const std::vector<int>& at(std::int64_t i) const;
  /// Largest non-empty bucket index, 0 without requests.
  [[nodiscard]] std::int64_t last() const;
  [[nodiscard]] const std::map<std::int64_t, std::vector<int>>& all() const { return buckets_; }

 private:
  Rational f_;
  std::map<std::int64_t, std::vector<int>> buckets_;
};

std::int64_t bucket_of(Time arrival, const Rational& f);

/// Throws InputError when F <= 0.
IntervalBuckets bucketize(const std::vector<Request>& requests, const Rational& f);

struct Split {
  std::vector<int> left;
  std::vector<int> right;
};

/// Vertices of a list of request indices.
VertexSet vertices_of(const std::vector<Request>& requests, const std::vector<int>& ids);

/// Single-vehicle rule: a request goes left iff its distance to the minimal
/// depot-rooted subtree spanning `prev` is at most that for `next`.
Split split_single(const RootedTree& t, const std::vector<Request>& requests,
                   const std::vector<int>& prev, const std::vector<int>& cur,
                   const std::vector<int>& next);

/// Tree whose lengths are rounded up to a grid of eps*F/(n*|R|).
struct RoundedTree {
  RootedTree tree;     // lengths in grid units
  Rational grid;       // one grid unit in length units
  Rational f_units;    // F measured in grid units
};

/// `population` is the |R| of the grid; must be positive.
RoundedTree round_tree(const RootedTree& t, const Rational& f, const Rational& eps,
                       std::int64_t population);

struct MultiSplit {
  Split split;
  /// cost(L|prev) + cost(R|next) on the rounded tree, in grid units.
  std::int64_t objective_units = 0;
  Rational grid;
  /// objective_units * grid.
  Rational objective;
};

/// Multi-vehicle rule: exact minimum of cost(L|prev) + cost(R|next) on the
/// rounded tree, by dynamic programming over the tree. Requests at the same
/// vertex always share a side. Among optimal splits the one putting the
/// earliest-indexed requests left is chosen.
MultiSplit split_multi(const RootedTree& t, const std::vector<Request>& requests,
                       const std::vector<int>& prev, const std::vector<int>& cur,
                       const std::vector<int>& next, const Rational& f, const Rational& eps = 1);

/// Same DP on an explicitly rounded tree (lengths already in grid units).
MultiSplit split_multi_rounded(const RoundedTree& rt, const std::vector<Request>& requests,
                               const std::vector<int>& prev, const std::vector<int>& cur,
                               const std::vector<int>& next);

enum class SplitMode { kSingle, kMulti };

struct Bundle {
  std::int64_t index = 1;  // odd
  Rational release;        // (index + 2) F
  std::vector<int> from_prev;  // right part of bucket index-1
  std::vector<int> core;       // bucket index
  std::vector<int> from_next;  // left part of bucket index+1
  /// Union of the three parts, ascending.
  [[nodiscard]] std::vector<int> members() const;
};

/// Runs the interval-pairing loop: at time (i+1)F for every even i, split
/// bucket i and release the bundle of index i-1. Empty bundles are skipped.
std::vector<Bundle> stream_bundles(const IntervalBuckets& buckets, SplitMode mode,
                                   const RootedTree& t, const std::vector<Request>& requests,
                                   const Rational& eps = 1);

}  // namespace fdp
