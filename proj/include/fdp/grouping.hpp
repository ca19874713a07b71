#pragma once

#include <vector>

#include "fdp/instance.hpp"
#include "fdp/metric.hpp"
#include "fdp/rational.hpp"

namespace fdp {

/// Tree in which every vertex has at most two children. Original vertices
/// keep their indices; gadget vertices are appended after them.
struct BinarizedTree {
  RootedTree tree;
  int original_size = 0;

  [[nodiscard]] bool is_gadget(Vertex v) const { return v >= original_size; }
};

/// Replaces every vertex v with d >= 3 children by a complete binary tree
/// with d leaves, laid out in heap order: v is position 1, positions 2..d-1
/// are new vertices joined by 0-length edges, and positions d..2d-1 are the
/// children in ascending order, each keeping its original edge length.
BinarizedTree binarize(const RootedTree& t);

struct Group {
  std::vector<int> requests;  // ascending request indices
  Length mst = 0;             // root-anchored
  Vertex apex = 0;            // the vertex whose subtree was cut off
};

/// Cuts a bundle into groups: repeatedly take a lowest vertex whose subtree
/// part of the remaining requests spans at least 3F (ties: smallest id; the
/// root when none qualifies) and remove everything below it.
std::vector<Group> make_groups(const BinarizedTree& bt, const std::vector<Request>& requests,
                               const std::vector<int>& bundle, const Rational& f);

}  // namespace fdp
