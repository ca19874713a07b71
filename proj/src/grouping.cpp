#include "fdp/grouping.hpp"

#include <algorithm>

#include "fdp/errors.hpp"

namespace fdp {

BinarizedTree binarize(const RootedTree& t) {
  std::vector<Vertex> parent(static_cast<std::size_t>(t.size()));
  std::vector<Length> len(static_cast<std::size_t>(t.size()));
  for (Vertex v = 0; v < t.size(); ++v) {
    parent[static_cast<std::size_t>(v)] = t.parent(v);
    len[static_cast<std::size_t>(v)] = t.parent_length(v);
  }
  for (Vertex v = 0; v < t.size(); ++v) {
    const auto& kids = t.children(v);
    const auto d = static_cast<int>(kids.size());
    if (d <= 2) continue;
    // heap position -> vertex
    std::vector<Vertex> at(static_cast<std::size_t>(2 * d), -1);
    at[1] = v;
    for (int pos = 2; pos < d; ++pos) {
      at[static_cast<std::size_t>(pos)] = static_cast<Vertex>(parent.size());
      parent.push_back(at[static_cast<std::size_t>(pos / 2)]);
      len.push_back(0);
    }
    for (int j = 0; j < d; ++j) {
      const Vertex c = kids[static_cast<std::size_t>(j)];
      parent[static_cast<std::size_t>(c)] = at[static_cast<std::size_t>((d + j) / 2)];
    }
  }
  return {RootedTree(std::move(parent), std::move(len), t.root()), t.size()};
}

std::vector<Group> make_groups(const BinarizedTree& bt, const std::vector<Request>& requests,
                               const std::vector<int>& bundle, const Rational& f) {
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
  const RootedTree& t = bt.tree;
  const auto n = static_cast<std::size_t>(t.size());
  std::vector<Group> groups;
  if (bundle.empty()) return groups;

  std::vector<std::vector<int>> at_vertex(n);
  for (int id : bundle) {
    const Vertex v = requests[static_cast<std::size_t>(id)].vertex;
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("request vertex outside the tree");
    at_vertex[static_cast<std::size_t>(v)].push_back(id);
  }

  // members[v]: remaining requests below v; below[v]: subtree-only span
  std::vector<int> members(n, 0);
  std::vector<Length> below(n, 0);
  for (Vertex v = 0; v < t.size(); ++v) members[static_cast<std::size_t>(v)] = static_cast<int>(at_vertex[static_cast<std::size_t>(v)].size());
  const auto& order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    if (v == t.root() || members[static_cast<std::size_t>(v)] == 0) continue;
    const auto p = static_cast<std::size_t>(t.parent(v));
    members[p] += members[static_cast<std::size_t>(v)];
    below[p] += t.parent_length(v) + below[static_cast<std::size_t>(v)];
  }

  const Rational threshold = Rational(3) * f;
  int remaining = static_cast<int>(bundle.size());
  while (remaining > 0) {
    Vertex chosen = t.root();
    for (Vertex v = 0; v < t.size(); ++v) {
      if (members[static_cast<std::size_t>(v)] == 0 || Rational(below[static_cast<std::size_t>(v)]) < threshold) continue;
      // below[] is monotone along root paths, so checking the children suffices
      const auto& kids = t.children(v);
      const bool lowest = std::none_of(kids.begin(), kids.end(), [&](Vertex c) {
        return members[static_cast<std::size_t>(c)] > 0 && Rational(below[static_cast<std::size_t>(c)]) >= threshold;
      });
      if (lowest) {
        chosen = v;
        break;
      }
    }

    Group g;
    g.apex = chosen;
    g.mst = t.depth(chosen) + below[static_cast<std::size_t>(chosen)];
    std::vector<Vertex> stack{chosen};
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      auto& here = at_vertex[static_cast<std::size_t>(u)];
      g.requests.insert(g.requests.end(), here.begin(), here.end());
      here.clear();
      for (Vertex c : t.children(u)) {
        if (members[static_cast<std::size_t>(c)] > 0) stack.push_back(c);
      }
    }
    std::sort(g.requests.begin(), g.requests.end());
    const int removed = static_cast<int>(g.requests.size());

    // clear the subtree and patch the ancestors
    stack.assign(1, chosen);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex c : t.children(u)) {
        if (members[static_cast<std::size_t>(c)] > 0) stack.push_back(c);
      }
      members[static_cast<std::size_t>(u)] = 0;
      below[static_cast<std::size_t>(u)] = 0;
    }
    if (chosen != t.root()) {
      Length lost = t.parent_length(chosen) + (g.mst - t.depth(chosen));
      for (Vertex u = t.parent(chosen); u != -1; u = t.parent(u)) {
        const auto ui = static_cast<std::size_t>(u);
        const Length old = below[ui];
        below[ui] -= lost;
        members[ui] -= removed;
        if (u == t.root()) break;
        lost = members[ui] == 0 ? t.parent_length(u) + old : old - below[ui];
      }
    }
    remaining -= removed;
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace fdp
