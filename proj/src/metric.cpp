#include "fdp/metric.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "fdp/errors.hpp"

namespace fdp {
namespace {

constexpr Length kInf = std::numeric_limits<Length>::max() / 4;

void require_positive(const Rational& f) {
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
}

}  // namespace

// ---------------------------------------------------------------- MetricGraph

MetricGraph::MetricGraph(std::vector<Label> labels, const std::vector<LabeledEdge>& edges,
                         Label depot) {
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw InputError("duplicate vertex id");
  }
  if (labels.empty()) throw InputError("graph has no vertices");
  labels_ = std::move(labels);
  for (std::size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = static_cast<Vertex>(i);

  auto depot_it = index_.find(depot);
  if (depot_it == index_.end()) throw InputError("depot " + std::to_string(depot) + " is not a vertex");
  depot_ = depot_it->second;

  adjacency_.assign(labels_.size(), {});
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.length < 0) {
      throw InputError("negative length on edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
    const Vertex u = index_of(e.u);
    const Vertex v = index_of(e.v);
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    edges_.push_back({u, v, e.length});
    adjacency_[static_cast<std::size_t>(u)].emplace_back(v, e.length);
    adjacency_[static_cast<std::size_t>(v)].emplace_back(u, e.length);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  compute_shortest_paths();
}

MetricGraph MetricGraph::dense(int n, const std::vector<Edge>& edges, Vertex depot) {
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
  std::vector<LabeledEdge> le;
  le.reserve(edges.size());
  for (const auto& e : edges) le.push_back({e.u, e.v, e.length});
  return MetricGraph(std::move(labels), le, depot);
}

Vertex MetricGraph::index_of(Label label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw InputError("unknown vertex " + std::to_string(label));
  return it->second;
}

void MetricGraph::check(Vertex v) const {
  if (v < 0 || v >= size()) throw InputError("unknown vertex index " + std::to_string(v));
}

std::span<const std::pair<Vertex, Length>> MetricGraph::neighbors(Vertex v) const {
  check(v);
  return adjacency_[static_cast<std::size_t>(v)];
}

std::optional<Length> MetricGraph::edge_length(Vertex u, Vertex v) const {
  check(u);
  check(v);
  std::optional<Length> best;
  const auto& adj = adjacency_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(adj.begin(), adj.end(), std::pair<Vertex, Length>{v, 0});
  if (it != adj.end() && it->first == v) best = it->second;  // sorted: smallest length first
  return best;
}

void MetricGraph::compute_shortest_paths() {
  const auto n = static_cast<std::size_t>(size());
  dist_.assign(n * n, kInf);
  parent_.assign(n * n, -1);
  using Item = std::pair<Length, Vertex>;
  for (std::size_t s = 0; s < n; ++s) {
    Length* dist = &dist_[s * n];
    Vertex* parent = &parent_[s * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[s] = 0;
    heap.emplace(0, static_cast<Vertex>(s));
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d != dist[u]) continue;
      for (auto [v, len] : adjacency_[static_cast<std::size_t>(u)]) {
        const Length nd = d + len;
        if (nd < dist[v]) {
          dist[v] = nd;
          parent[v] = u;
          heap.emplace(nd, v);
        }
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (dist_[static_cast<std::size_t>(depot_) * n + v] >= kInf) {
      throw InputError("graph is not connected: vertex " + std::to_string(labels_[v]) +
                       " unreachable from depot");
    }
  }
}

Length MetricGraph::distance(Vertex u, Vertex v) const {
  check(u);
  check(v);
  return dist_[static_cast<std::size_t>(u) * labels_.size() + static_cast<std::size_t>(v)];
}

std::vector<Vertex> MetricGraph::shortest_path(Vertex u, Vertex v) const {
  check(u);
  check(v);
  std::vector<Vertex> path;
  const Vertex* parent = &parent_[static_cast<std::size_t>(u) * labels_.size()];
  for (Vertex x = v; x != u; x = parent[x]) path.push_back(x);
  path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

Length MetricGraph::max_depot_distance() const {
  Length best = 0;
  for (Vertex v = 0; v < size(); ++v) best = std::max(best, distance(depot_, v));
  return best;
}

// ----------------------------------------------------------------- RootedTree

RootedTree::RootedTree(const MetricGraph& g) : root_(g.depot()) {
  if (!g.is_tree()) {
    throw InputError("graph is not a tree: " + std::to_string(g.edges().size()) + " edges on " +
                     std::to_string(g.size()) + " vertices");
  }
  const auto n = static_cast<std::size_t>(g.size());
  parent_.assign(n, -1);
  parent_length_.assign(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{root_};
  seen[static_cast<std::size_t>(root_)] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (auto [v, len] : g.neighbors(u)) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      parent_[static_cast<std::size_t>(v)] = u;
      parent_length_[static_cast<std::size_t>(v)] = len;
      stack.push_back(v);
    }
  }
  build();
}

RootedTree::RootedTree(std::vector<Vertex> parent, std::vector<Length> parent_length, Vertex root)
    : parent_(std::move(parent)), parent_length_(std::move(parent_length)), root_(root) {
  if (parent_.size() != parent_length_.size()) throw InputError("parent/length size mismatch");
  if (root_ < 0 || root_ >= size() || parent_[static_cast<std::size_t>(root_)] != -1) {
    throw InputError("root must have parent -1");
  }
  parent_length_[static_cast<std::size_t>(root_)] = 0;
  for (Vertex v = 0; v < size(); ++v) {
    const Vertex p = parent_[static_cast<std::size_t>(v)];
    if (v != root_ && (p < 0 || p >= size())) throw InputError("vertex without a valid parent");
    if (parent_length_[static_cast<std::size_t>(v)] < 0) throw InputError("negative edge length");
  }
  build();
}

void RootedTree::build() {
  const auto n = parent_.size();
  children_.assign(n, {});
  for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
    if (v != root_) children_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])].push_back(v);
  }
  depth_.assign(n, 0);
  hops_.assign(n, 0);
  tin_.assign(n, -1);
  tout_.assign(n, -1);
  preorder_.clear();
  preorder_.reserve(n);

  int clock = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack{{root_, 0}};
  tin_[static_cast<std::size_t>(root_)] = clock++;
  preorder_.push_back(root_);
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& kids = children_[static_cast<std::size_t>(u)];
    if (next == kids.size()) {
      tout_[static_cast<std::size_t>(u)] = clock++;
      stack.pop_back();
      continue;
    }
    const Vertex c = kids[next++];
    const auto ci = static_cast<std::size_t>(c);
    depth_[ci] = depth_[static_cast<std::size_t>(u)] + parent_length_[ci];
    hops_[ci] = hops_[static_cast<std::size_t>(u)] + 1;
    tin_[ci] = clock++;
    preorder_.push_back(c);
    stack.emplace_back(c, 0);
  }
  if (preorder_.size() != n) throw InputError("parent map contains a cycle or is disconnected");
}

bool RootedTree::is_ancestor(Vertex a, Vertex v) const {
  const auto ai = static_cast<std::size_t>(a);
  const auto vi = static_cast<std::size_t>(v);
  return tin_[ai] <= tin_[vi] && tout_[vi] <= tout_[ai];
}

Length RootedTree::distance(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= size() || v >= size()) throw InputError("unknown vertex");
  Vertex a = u;
  Vertex b = v;
  while (hops_[static_cast<std::size_t>(a)] > hops_[static_cast<std::size_t>(b)]) a = parent(a);
  while (hops_[static_cast<std::size_t>(b)] > hops_[static_cast<std::size_t>(a)]) b = parent(b);
  while (a != b) {
    a = parent(a);
    b = parent(b);
  }
  return depth(u) + depth(v) - 2 * depth(a);
}

Length RootedTree::total_length() const {
  Length s = 0;
  for (Length l : parent_length_) s += l;
  return s;
}

RootedTree RootedTree::with_lengths(std::vector<Length> parent_length) const {
  return RootedTree(parent_, std::move(parent_length), root_);
}

// ------------------------------------------------------------------ VertexSet

VertexSet::VertexSet(std::vector<Vertex> vs) : items_(std::move(vs)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(items_.begin(), items_.end(), v);
}

VertexSet operator|(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
  return r;
}

VertexSet operator&(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
  return r;
}

VertexSet operator-(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.items_));
  return r;
}

// ------------------------------------------------------------ mst quantities

SubtreeProfile subtree_profile(const RootedTree& t, const VertexSet& x) {
  const auto n = static_cast<std::size_t>(t.size());
  SubtreeProfile p{std::vector<int>(n, 0), std::vector<Length>(n, 0)};
  for (Vertex v : x) {
    if (v < 0 || v >= t.size()) throw InputError("vertex " + std::to_string(v) + " not in tree");
    p.members[static_cast<std::size_t>(v)] = 1;
  }
  const auto& order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    if (v == t.root()) continue;
    const auto vi = static_cast<std::size_t>(v);
    if (p.members[vi] == 0) continue;
    const auto pi = static_cast<std::size_t>(t.parent(v));
    p.members[pi] += p.members[vi];
    p.below[pi] += t.parent_length(v) + p.below[vi];
  }
  return p;
}

Length mst(const RootedTree& t, const VertexSet& x) {
  return subtree_profile(t, x).below[static_cast<std::size_t>(t.root())];
}

Length mst_anchored(const RootedTree& t, Vertex e, const VertexSet& x) {
  if (e < 0 || e >= t.size()) throw InputError("vertex " + std::to_string(e) + " not in tree");
  const auto p = subtree_profile(t, x);
  const auto ei = static_cast<std::size_t>(e);
  return p.members[ei] > 0 ? t.depth(e) + p.below[ei] : 0;
}

Length subtree_mst(const RootedTree& t, Vertex v, const VertexSet& x) {
  if (v < 0 || v >= t.size()) throw InputError("vertex " + std::to_string(v) + " not in tree");
  return subtree_profile(t, x).below[static_cast<std::size_t>(v)];
}

std::vector<Length> mst_anchored_all(const RootedTree& t, const VertexSet& x) {
  const auto p = subtree_profile(t, x);
  std::vector<Length> out(static_cast<std::size_t>(t.size()), 0);
  for (Vertex v = 0; v < t.size(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (p.members[vi] > 0) out[vi] = t.depth(v) + p.below[vi];
  }
  return out;
}

Length distance_to_spanning_tree(const RootedTree& t, Vertex v, const SubtreeProfile& profile) {
  // The spanning tree consists of every vertex whose subtree meets X, plus the root.
  Vertex u = v;
  while (u != t.root() && !profile.touches(u)) u = t.parent(u);
  return t.depth(v) - t.depth(u);
}

std::vector<std::int64_t> edge_counts(const RootedTree& t, const VertexSet& x, const Rational& f) {
  require_positive(f);
  const auto m = mst_anchored_all(t, x);
  std::vector<std::int64_t> out(m.size(), 0);
  for (Vertex v = 0; v < t.size(); ++v) {
    if (v == t.root()) continue;
    out[static_cast<std::size_t>(v)] = ceil_div(Rational(m[static_cast<std::size_t>(v)]), f);
  }
  return out;
}

std::vector<std::int64_t> conditional_edge_counts(const RootedTree& t, const VertexSet& x,
                                                  const VertexSet& given, const Rational& f) {
  require_positive(f);
  const auto m_x = mst_anchored_all(t, x);
  const auto m_given = mst_anchored_all(t, given);
  const auto m_union = mst_anchored_all(t, x | given);
  const auto given_profile = subtree_profile(t, given);
  std::vector<std::int64_t> out(m_x.size(), 0);
  for (Vertex v = 0; v < t.size(); ++v) {
    if (v == t.root()) continue;
    const auto vi = static_cast<std::size_t>(v);
    if (!given_profile.touches(v)) {
      out[vi] = ceil_div(Rational(m_x[vi]), f);
    } else {
      out[vi] = floor_div(Rational(m_union[vi] - m_given[vi]), f);
    }
  }
  return out;
}

Length cost(const RootedTree& t, const VertexSet& x, const Rational& f) {
  const auto counts = edge_counts(t, x, f);
  Length total = 0;
  for (Vertex v = 0; v < t.size(); ++v) total += counts[static_cast<std::size_t>(v)] * t.parent_length(v);
  return 2 * total;
}

Length conditional_cost(const RootedTree& t, const VertexSet& x, const VertexSet& given,
                        const Rational& f) {
  const auto counts = conditional_edge_counts(t, x, given, f);
  Length total = 0;
  for (Vertex v = 0; v < t.size(); ++v) total += counts[static_cast<std::size_t>(v)] * t.parent_length(v);
  return 2 * total;
}

}  // namespace fdp
