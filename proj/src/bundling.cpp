#include "fdp/bundling.hpp"

#include <algorithm>
#include <unordered_map>

#include "fdp/errors.hpp"

namespace fdp {

const std::vector<int>& IntervalBuckets::at(std::int64_t i) const {
  static const std::vector<int> kEmpty;
  auto it = buckets_.find(i);
  return it == buckets_.end() ? kEmpty : it->second;
}

std::int64_t IntervalBuckets::last() const { return buckets_.empty() ? 0 : buckets_.rbegin()->first; }

std::int64_t bucket_of(Time arrival, const Rational& f) { return floor_div(Rational(arrival), f) + 1; }

IntervalBuckets bucketize(const std::vector<Request>& requests, const Rational& f) {
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
  std::map<std::int64_t, std::vector<int>> buckets;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    buckets[bucket_of(requests[i].arrival, f)].push_back(static_cast<int>(i));
  }
  return IntervalBuckets(f, std::move(buckets));
}

VertexSet vertices_of(const std::vector<Request>& requests, const std::vector<int>& ids) {
  std::vector<Vertex> vs;
  vs.reserve(ids.size());
  for (int id : ids) vs.push_back(requests[static_cast<std::size_t>(id)].vertex);
  return VertexSet(std::move(vs));
}

Split split_single(const RootedTree& t, const std::vector<Request>& requests,
                   const std::vector<int>& prev, const std::vector<int>& cur,
                   const std::vector<int>& next) {
  const auto p = subtree_profile(t, vertices_of(requests, prev));
  const auto n = subtree_profile(t, vertices_of(requests, next));
  Split s;
  for (int id : cur) {
    const Vertex v = requests[static_cast<std::size_t>(id)].vertex;
    if (distance_to_spanning_tree(t, v, p) <= distance_to_spanning_tree(t, v, n)) {
      s.left.push_back(id);
    } else {
      s.right.push_back(id);
    }
  }
  return s;
}

RoundedTree round_tree(const RootedTree& t, const Rational& f, const Rational& eps,
                       std::int64_t population) {
  if (f <= Rational(0)) throw InputError("F must be positive");
  if (eps <= Rational(0)) throw InputError("rounding epsilon must be positive");
  if (population < 1) throw InputError("rounding needs at least one request");
  const Rational grid = eps * f / Rational(static_cast<std::int64_t>(t.size()) * population);
  std::vector<Length> lens(static_cast<std::size_t>(t.size()), 0);
  for (Vertex v = 0; v < t.size(); ++v) lens[static_cast<std::size_t>(v)] = ceil_div(Rational(t.parent_length(v)), grid);
  return {t.with_lengths(std::move(lens)), grid, f / grid};
}

namespace {

struct Key {
  std::int64_t dl;
  std::int64_t dr;
  bool fl;
  bool fr;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.dl) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.dr) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= (static_cast<std::uint64_t>(k.fl) << 1) | static_cast<std::uint64_t>(k.fr);
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

/// Items of the split in order; bit for item j lives at word j/64, position
/// 63 - j%64, so comparing words lexicographically compares assignments.
using Mask = std::vector<std::uint64_t>;

struct Entry {
  std::int64_t cost;
  Mask mask;
};

using Table = std::unordered_map<Key, Entry, KeyHash>;

bool better(const Entry& a, const Entry& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return std::lexicographical_compare(b.mask.begin(), b.mask.end(), a.mask.begin(), a.mask.end());
}

void offer(Table& table, const Key& key, Entry&& e) {
  auto [it, inserted] = table.try_emplace(key, std::move(e));
  if (!inserted && better(e, it->second)) it->second = std::move(e);
}

std::int64_t floor_units(std::int64_t m, const Rational& f) {
  return floor_div(Rational(m), f);
}

std::int64_t ceil_units(std::int64_t m, const Rational& f) {
  return ceil_div(Rational(m), f);
}

}  // namespace

MultiSplit split_multi_rounded(const RoundedTree& rt, const std::vector<Request>& requests,
                               const std::vector<int>& prev, const std::vector<int>& cur,
                               const std::vector<int>& next) {
  const RootedTree& t = rt.tree;
  const Rational& f = rt.f_units;
  MultiSplit out;
  out.grid = rt.grid;
  if (cur.empty()) return out;

  // items are distinct vertices, ordered by their smallest request index
  std::vector<int> sorted_cur = cur;
  std::sort(sorted_cur.begin(), sorted_cur.end());
  std::vector<int> item_of(static_cast<std::size_t>(t.size()), -1);
  std::vector<Vertex> item_vertex;
  for (int id : sorted_cur) {
    const Vertex v = requests[static_cast<std::size_t>(id)].vertex;
    if (item_of[static_cast<std::size_t>(v)] < 0) {
      item_of[static_cast<std::size_t>(v)] = static_cast<int>(item_vertex.size());
      item_vertex.push_back(v);
    }
  }
  const std::size_t words = (item_vertex.size() + 63) / 64;

  const auto prof_p = subtree_profile(t, vertices_of(requests, prev));
  const auto prof_n = subtree_profile(t, vertices_of(requests, next));
  const auto prof_items = subtree_profile(t, VertexSet(item_vertex));

  std::vector<Table> tables(static_cast<std::size_t>(t.size()));
  const auto& order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    const auto vi = static_cast<std::size_t>(v);
    if (!prof_items.touches(v)) continue;

    Table table;
    if (item_of[vi] >= 0) {
      Mask left(words, 0);
      const auto j = static_cast<std::size_t>(item_of[vi]);
      left[j / 64] |= std::uint64_t{1} << (63 - j % 64);
      table.emplace(Key{0, 0, true, false}, Entry{0, std::move(left)});
      table.emplace(Key{0, 0, false, true}, Entry{0, Mask(words, 0)});
    } else {
      table.emplace(Key{0, 0, false, false}, Entry{0, Mask(words, 0)});
    }

    for (Vertex c : t.children(v)) {
      if (!prof_items.touches(c)) continue;
      const bool tp = prof_p.touches(c);
      const bool tn = prof_n.touches(c);
      const Length len = t.parent_length(c);
      const Length dep = t.depth(c);

      // lift the child's states across edge (v, c)
      Table lifted;
      for (auto& [k, e] : tables[static_cast<std::size_t>(c)]) {
        const std::int64_t ml = tp ? k.dl : (k.fl ? dep + k.dl : 0);
        const std::int64_t mr = tn ? k.dr : (k.fr ? dep + k.dr : 0);
        const std::int64_t cl = tp ? floor_units(ml, f) : ceil_units(ml, f);
        const std::int64_t cr = tn ? floor_units(mr, f) : ceil_units(mr, f);
        const Key up{tp ? k.dl : (k.fl ? len + k.dl : 0), tn ? k.dr : (k.fr ? len + k.dr : 0), k.fl, k.fr};
        offer(lifted, up, Entry{e.cost + 2 * len * (cl + cr), std::move(e.mask)});
      }
      tables[static_cast<std::size_t>(c)] = Table();

      Table merged;
      merged.reserve(table.size() * lifted.size());
      for (const auto& [ka, ea] : table) {
        for (const auto& [kb, eb] : lifted) {
          Mask m = ea.mask;
          for (std::size_t w = 0; w < words; ++w) m[w] |= eb.mask[w];
          offer(merged, Key{ka.dl + kb.dl, ka.dr + kb.dr, ka.fl || kb.fl, ka.fr || kb.fr},
                Entry{ea.cost + eb.cost, std::move(m)});
        }
      }
      table = std::move(merged);
    }
    tables[vi] = std::move(table);
  }

  const Table& root = tables[static_cast<std::size_t>(t.root())];
  const Entry* best = nullptr;
  for (const auto& [k, e] : root) {
    if (best == nullptr || better(e, *best)) best = &e;
  }
  if (best == nullptr) throw InvariantViolation("split DP produced no state");

  for (int id : sorted_cur) {
    const auto j = static_cast<std::size_t>(item_of[static_cast<std::size_t>(requests[static_cast<std::size_t>(id)].vertex)]);
    const bool left = (best->mask[j / 64] >> (63 - j % 64)) & 1U;
    (left ? out.split.left : out.split.right).push_back(id);
  }
  out.objective_units = best->cost;
  out.objective = Rational(best->cost) * rt.grid;
  return out;
}

MultiSplit split_multi(const RootedTree& t, const std::vector<Request>& requests,
                       const std::vector<int>& prev, const std::vector<int>& cur,
                       const std::vector<int>& next, const Rational& f, const Rational& eps) {
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
  if (cur.empty()) {
    MultiSplit out;
    out.grid = eps * f;
    return out;
  }
  const auto population = static_cast<std::int64_t>(prev.size() + cur.size() + next.size());
  return split_multi_rounded(round_tree(t, f, eps, population), requests, prev, cur, next);
}

std::vector<int> Bundle::members() const {
  std::vector<int> all = from_prev;
  all.insert(all.end(), core.begin(), core.end());
  all.insert(all.end(), from_next.begin(), from_next.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Bundle> stream_bundles(const IntervalBuckets& buckets, SplitMode mode,
                                   const RootedTree& t, const std::vector<Request>& requests,
                                   const Rational& eps) {
  std::vector<Bundle> out;
  const std::int64_t last = buckets.last();
  if (last == 0) return out;
  const std::int64_t final_even = last % 2 == 1 ? last + 1 : last + 2;
  std::vector<int> carry;  // right part of the previous even bucket
  for (std::int64_t i = 2; i <= final_even; i += 2) {
    const auto& prev = buckets.at(i - 1);
    const auto& cur = buckets.at(i);
    const auto& next = buckets.at(i + 1);
    Split s = mode == SplitMode::kSingle
                  ? split_single(t, requests, prev, cur, next)
                  : split_multi(t, requests, prev, cur, next, buckets.f(), eps).split;
    Bundle b;
    b.index = i - 1;
    b.release = Rational(i + 1) * buckets.f();
    b.from_prev = std::move(carry);
    b.core = prev;
    b.from_next = std::move(s.left);
    carry = std::move(s.right);
    if (!b.from_prev.empty() || !b.core.empty() || !b.from_next.empty()) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace fdp
