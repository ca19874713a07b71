#pragma once

// Slow, obviously-correct reference implementations used to freeze the
// values computed by the library. Nothing here shares code with src/.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "fdp/metric.hpp"
#include "fdp/rational.hpp"
#include "fdp/rng.hpp"

namespace oracle {

using fdp::Length;
using fdp::RootedTree;
using fdp::Vertex;

inline bool below(const RootedTree& t, Vertex x, Vertex e) {
  for (Vertex u = x; u != -1; u = t.parent(u)) {
    if (u == e) return true;
  }
  return false;
}

/// Marks the root path of every x in V_e ∩ X and sums the marked edges.
inline Length mst_anchored(const RootedTree& t, Vertex e, const std::vector<Vertex>& xs) {
  std::set<Vertex> marked;
  for (Vertex x : xs) {
    if (!below(t, x, e)) continue;
    for (Vertex u = x; u != t.root(); u = t.parent(u)) marked.insert(u);
  }
  Length s = 0;
  for (Vertex u : marked) s += t.parent_length(u);
  return s;
}

/// Marks the path from each x in V_v ∩ X up to v.
inline Length subtree_mst(const RootedTree& t, Vertex v, const std::vector<Vertex>& xs) {
  std::set<Vertex> marked;
  for (Vertex x : xs) {
    if (!below(t, x, v)) continue;
    for (Vertex u = x; u != v; u = t.parent(u)) marked.insert(u);
  }
  Length s = 0;
  for (Vertex u : marked) s += t.parent_length(u);
  return s;
}

inline std::int64_t ceil_frac(Length a, const fdp::Rational& f) {
  // ceil(a * den / num) with plain integer arithmetic
  const std::int64_t p = a * f.den();
  const std::int64_t q = f.num();
  return p >= 0 ? (p + q - 1) / q : -((-p) / q);
}

inline std::int64_t floor_frac(Length a, const fdp::Rational& f) {
  const std::int64_t p = a * f.den();
  const std::int64_t q = f.num();
  return p >= 0 ? p / q : -((-p + q - 1) / q);
}

inline Length cost(const RootedTree& t, const std::vector<Vertex>& xs, const fdp::Rational& f) {
  Length s = 0;
  for (Vertex e = 0; e < t.size(); ++e) {
    if (e == t.root()) continue;
    s += ceil_frac(mst_anchored(t, e, xs), f) * t.parent_length(e);
  }
  return 2 * s;
}

inline std::int64_t cond_count(const RootedTree& t, Vertex e, const std::vector<Vertex>& xs,
                               const std::vector<Vertex>& given, const fdp::Rational& f) {
  bool touched = false;
  for (Vertex g : given) touched = touched || below(t, g, e);
  if (!touched) return ceil_frac(mst_anchored(t, e, xs), f);
  std::vector<Vertex> uni = xs;
  uni.insert(uni.end(), given.begin(), given.end());
  return floor_frac(mst_anchored(t, e, uni) - mst_anchored(t, e, given), f);
}

inline Length conditional_cost(const RootedTree& t, const std::vector<Vertex>& xs,
                               const std::vector<Vertex>& given, const fdp::Rational& f) {
  Length s = 0;
  for (Vertex e = 0; e < t.size(); ++e) {
    if (e == t.root()) continue;
    s += cond_count(t, e, xs, given, f) * t.parent_length(e);
  }
  return 2 * s;
}

/// Floyd–Warshall over an explicit edge list.
inline std::vector<std::vector<Length>> all_pairs(int n, const std::vector<fdp::Edge>& edges) {
  const Length inf = std::numeric_limits<Length>::max() / 4;
  std::vector<std::vector<Length>> d(static_cast<std::size_t>(n), std::vector<Length>(static_cast<std::size_t>(n), inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.length);
  }
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  return d;
}

/// Random tree on n vertices rooted at 0 with lengths in [0, max_len].
inline RootedTree random_tree(fdp::Rng& rng, int n, Length max_len) {
  std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
  std::vector<Length> len(static_cast<std::size_t>(n), 0);
  for (int v = 1; v < n; ++v) {
    parent[v] = static_cast<Vertex>(rng.uniform(0, v - 1));
    len[v] = rng.uniform(0, max_len);
  }
  return RootedTree(parent, len, 0);
}

inline std::vector<Vertex> random_subset(fdp::Rng& rng, int n, int max_size) {
  std::vector<Vertex> xs;
  const auto sz = rng.uniform(0, max_size);
  for (int i = 0; i < sz; ++i) xs.push_back(static_cast<Vertex>(rng.uniform(0, n - 1)));
  return xs;
}

/// Connected random graph: a random spanning tree plus `chords` extra edges,
/// lengths in [1, max_len].
inline std::vector<fdp::Edge> random_graph(fdp::Rng& rng, int n, int chords, Length max_len) {
  std::vector<fdp::Edge> edges;
  for (int v = 1; v < n; ++v) {
    edges.push_back({static_cast<Vertex>(rng.uniform(0, v - 1)), v, rng.uniform(1, max_len)});
  }
  for (int i = 0; i < chords && n > 1; ++i) {
    const auto u = static_cast<Vertex>(rng.uniform(0, n - 1));
    const auto v = static_cast<Vertex>(rng.uniform(0, n - 1));
    if (u != v) edges.push_back({u, v, rng.uniform(1, max_len)});
  }
  return edges;
}

/// Shortest closed tour from `o` through every vertex of `xs`, by permutation.
inline Length tsp(const std::vector<std::vector<Length>>& d, Vertex o, std::vector<Vertex> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.erase(std::remove(xs.begin(), xs.end(), o), xs.end());
  if (xs.empty()) return 0;
  Length best = std::numeric_limits<Length>::max();
  do {
    Length len = d[o][xs.front()] + d[xs.back()][o];
    for (std::size_t i = 1; i < xs.size(); ++i) len += d[xs[i - 1]][xs[i]];
    best = std::min(best, len);
  } while (std::next_permutation(xs.begin(), xs.end()));
  return best;
}

/// Optimal CVRP length: every ordering of the demands cut into consecutive
/// routes of at most `cap` demands (cap <= 0 means unbounded).
inline Length cvrp(const std::vector<std::vector<Length>>& d, Vertex o, std::vector<Vertex> demand, int cap) {
  const std::size_t m = demand.size();
  if (m == 0) return 0;
  const std::size_t c = cap <= 0 ? m : static_cast<std::size_t>(cap);
  std::sort(demand.begin(), demand.end());
  Length best = std::numeric_limits<Length>::max();
  do {
    // best[j]: cheapest routing of the first j demands of this order
    std::vector<Length> dp(m + 1, std::numeric_limits<Length>::max() / 4);
    dp[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      for (std::size_t len = 1; len <= std::min(c, j); ++len) {
        const std::size_t a = j - len;
        Length route = d[o][demand[a]] + d[demand[j - 1]][o];
        for (std::size_t i = a + 1; i < j; ++i) route += d[demand[i - 1]][demand[i]];
        dp[j] = std::min(dp[j], dp[a] + route);
      }
    }
    best = std::min(best, dp[m]);
  } while (std::next_permutation(demand.begin(), demand.end()));
  return best;
}

/// Minimum max flow at unit speed by unpruned enumeration: repeatedly pick an
/// open request set, a vehicle and an order of the set's distinct vertices;
/// the trip starts once the vehicle is back and the set has arrived.
struct FlowSearch {
  const std::vector<std::vector<Length>>& d;
  Vertex o;
  std::vector<Length> arrival;
  std::vector<Vertex> vertex;
  int cap;  // <= 0: unbounded

  Length best = std::numeric_limits<Length>::max();

  void run(unsigned served, std::vector<Length>& free_at, Length cur) {
    const unsigned n = static_cast<unsigned>(arrival.size());
    const unsigned full = (1U << n) - 1;
    if (served == full) {
      best = std::min(best, cur);
      return;
    }
    for (unsigned s = 1; s <= full; ++s) {
      if (s & served) continue;
      if (cap > 0 && std::popcount(s) > cap) continue;
      Length ready = 0;
      std::vector<Vertex> verts;
      for (unsigned i = 0; i < n; ++i) {
        if (s >> i & 1U) {
          ready = std::max(ready, arrival[i]);
          verts.push_back(vertex[i]);
        }
      }
      std::sort(verts.begin(), verts.end());
      verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
      for (std::size_t v = 0; v < free_at.size(); ++v) {
        const Length start = std::max(free_at[v], ready);
        std::vector<Vertex> order = verts;
        do {
          Length at = 0;
          Vertex here = o;
          Length worst = cur;
          for (Vertex x : order) {
            at += d[here][x];
            here = x;
            for (unsigned i = 0; i < n; ++i) {
              if ((s >> i & 1U) && vertex[i] == x) worst = std::max(worst, start + at - arrival[i]);
            }
          }
          const Length saved = free_at[v];
          free_at[v] = start + at + d[here][o];
          run(served | s, free_at, worst);
          free_at[v] = saved;
        } while (std::next_permutation(order.begin(), order.end()));
      }
    }
  }
};

}  // namespace oracle
