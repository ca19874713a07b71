#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fdp/rational.hpp"

namespace fdp {

/// Dense vertex index in [0, n). Documents use arbitrary integer labels;
/// dense indices follow ascending label order.
using Vertex = std::int32_t;
using Label = std::int64_t;
/// Edge lengths and integral times share one fixed-point unit.
using Length = std::int64_t;
using Time = std::int64_t;

struct LabeledEdge {
  Label u = 0;
  Label v = 0;
  Length length = 0;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Length length = 0;
};

/// Connected undirected graph with non-negative integer lengths and a depot.
/// All-pairs shortest paths are computed once at construction; the object is
/// immutable afterwards.
class MetricGraph {
 public:
  MetricGraph(std::vector<Label> labels, const std::vector<LabeledEdge>& edges, Label depot);

  /// Graph on vertices labelled 0..n-1.
  static MetricGraph dense(int n, const std::vector<Edge>& edges, Vertex depot = 0);

  [[nodiscard]] int size() const { return static_cast<int>(labels_.size()); }
  [[nodiscard]] Vertex depot() const { return depot_; }
  [[nodiscard]] Label label(Vertex v) const { return labels_.at(static_cast<std::size_t>(v)); }
  [[nodiscard]] const std::vector<Label>& labels() const { return labels_; }
  /// Throws InputError for an unknown label.
  [[nodiscard]] Vertex index_of(Label label) const;
  [[nodiscard]] bool has_label(Label label) const { return index_.count(label) != 0; }

  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] std::span<const std::pair<Vertex, Length>> neighbors(Vertex v) const;
  /// Length of the shortest direct edge between u and v, if adjacent.
  [[nodiscard]] std::optional<Length> edge_length(Vertex u, Vertex v) const;

  /// Throws InputError when either vertex is out of range.
  [[nodiscard]] Length distance(Vertex u, Vertex v) const;
  /// Vertex sequence u..v of one shortest path (deterministic tie-breaking).
  [[nodiscard]] std::vector<Vertex> shortest_path(Vertex u, Vertex v) const;
  [[nodiscard]] Length max_depot_distance() const;

  [[nodiscard]] bool is_tree() const { return static_cast<int>(edges_.size()) == size() - 1; }

 private:
  void check(Vertex v) const;
  void compute_shortest_paths();

  std::vector<Label> labels_;
  std::unordered_map<Label, Vertex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<Vertex, Length>>> adjacency_;
  Vertex depot_ = 0;
  std::vector<Length> dist_;     // n*n
  std::vector<Vertex> parent_;   // n*n, parent_[src*n + v] on the shortest-path tree of src
};

/// Tree rooted at the depot. Edges are identified by their child vertex.
class RootedTree {
 public:
  /// Throws InputError when `g` is not a tree.
  explicit RootedTree(const MetricGraph& g);
  /// parent[root] must be -1; parent_length[v] is the length of (parent[v], v).
  RootedTree(std::vector<Vertex> parent, std::vector<Length> parent_length, Vertex root);

  [[nodiscard]] int size() const { return static_cast<int>(parent_.size()); }
  [[nodiscard]] Vertex root() const { return root_; }
  [[nodiscard]] Vertex parent(Vertex v) const { return parent_[static_cast<std::size_t>(v)]; }
  [[nodiscard]] Length parent_length(Vertex v) const {
    return parent_length_[static_cast<std::size_t>(v)];
  }
  [[nodiscard]] const std::vector<Vertex>& children(Vertex v) const {
    return children_[static_cast<std::size_t>(v)];
  }
  [[nodiscard]] Length depth(Vertex v) const { return depth_[static_cast<std::size_t>(v)]; }
  /// Root first; every vertex appears after its parent; children ascending.
  [[nodiscard]] const std::vector<Vertex>& preorder() const { return preorder_; }
  [[nodiscard]] bool is_ancestor(Vertex a, Vertex v) const;
  [[nodiscard]] Length distance(Vertex u, Vertex v) const;
  [[nodiscard]] Length total_length() const;

  /// Same shape with replaced parent lengths.
  [[nodiscard]] RootedTree with_lengths(std::vector<Length> parent_length) const;

 private:
  void build();

  std::vector<Vertex> parent_;
  std::vector<Length> parent_length_;
  Vertex root_ = 0;
  std::vector<std::vector<Vertex>> children_;
  std::vector<Length> depth_;
  std::vector<int> hops_;
  std::vector<Vertex> preorder_;
  std::vector<int> tin_;
  std::vector<int> tout_;
};

/// Set of tree vertices (positions of requests with arrival times erased).
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> vs) : VertexSet(std::vector<Vertex>(vs)) {}
  explicit VertexSet(std::vector<Vertex> vs);

  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] bool contains(Vertex v) const;
  [[nodiscard]] const std::vector<Vertex>& items() const { return items_; }
  [[nodiscard]] auto begin() const { return items_.begin(); }
  [[nodiscard]] auto end() const { return items_.end(); }

  friend VertexSet operator|(const VertexSet& a, const VertexSet& b);
  friend VertexSet operator&(const VertexSet& a, const VertexSet& b);
  friend VertexSet operator-(const VertexSet& a, const VertexSet& b);
  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> items_;
};

/// Per-vertex view of a set X on a tree: `members[v]` = |V_v ∩ X| and
/// `below[v]` = length of the minimal subtree containing v and V_v ∩ X.
struct SubtreeProfile {
  std::vector<int> members;
  std::vector<Length> below;

  [[nodiscard]] bool touches(Vertex v) const { return members[static_cast<std::size_t>(v)] > 0; }
};

SubtreeProfile subtree_profile(const RootedTree& t, const VertexSet& x);

/// Minimal subtree containing the root and X.
Length mst(const RootedTree& t, const VertexSet& x);
/// mst(V_e ∩ X); `e` is a vertex or the child end of an edge.
Length mst_anchored(const RootedTree& t, Vertex e, const VertexSet& x);
/// Minimal subtree containing v and V_v ∩ X, without the path to the root.
Length subtree_mst(const RootedTree& t, Vertex v, const VertexSet& x);
/// mst_anchored for every vertex at once.
std::vector<Length> mst_anchored_all(const RootedTree& t, const VertexSet& x);

/// Distance from v to the minimal root-containing subtree spanning X
/// (the subtree is just {root} when X is empty).
Length distance_to_spanning_tree(const RootedTree& t, Vertex v, const SubtreeProfile& profile);

/// c_F(X, e) = ceil(mst_e(X) / F) for every edge, indexed by child vertex.
std::vector<std::int64_t> edge_counts(const RootedTree& t, const VertexSet& x, const Rational& f);
/// c(X, e | X') per edge, indexed by child vertex.
std::vector<std::int64_t> conditional_edge_counts(const RootedTree& t, const VertexSet& x,
                                                  const VertexSet& given, const Rational& f);

/// 2 Σ_e ceil(mst_e(X) / F) ℓ(e). Throws InputError when F <= 0.
Length cost(const RootedTree& t, const VertexSet& x, const Rational& f);
/// 2 Σ_e c(X, e | X') ℓ(e). Throws InputError when F <= 0.
Length conditional_cost(const RootedTree& t, const VertexSet& x, const VertexSet& given,
                        const Rational& f);

}  // namespace fdp
