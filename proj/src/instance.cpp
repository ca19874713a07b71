#include "fdp/instance.hpp"

#include <algorithm>
#include <numeric>

#include "fdp/rng.hpp"

namespace fdp {

Instance Instance::make(std::shared_ptr<const MetricGraph> graph, int k, Capacity capacity,
                        std::vector<Request> requests) {
  if (!graph) throw InputError("instance without a graph");
  if (k < 1) throw InputError("k must be at least 1, got " + std::to_string(k));
  if (capacity && *capacity < 1) {
    throw InputError("capacity must be positive or unbounded, got " + std::to_string(*capacity));
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    if (r.arrival < 0) throw InputError("request " + std::to_string(i) + " has negative arrival");
    if (r.vertex < 0 || r.vertex >= graph->size()) {
      throw InputError("request " + std::to_string(i) + " targets an unknown vertex");
    }
    if (r.vertex == graph->depot()) {
      throw InputError("request " + std::to_string(i) + " targets the depot");
    }
  }
  Instance inst;
  inst.graph = std::move(graph);
  if (inst.graph->is_tree()) inst.tree = std::make_shared<const RootedTree>(*inst.graph);
  inst.k = k;
  inst.capacity = capacity;
  inst.requests = std::move(requests);
  return inst;
}

std::size_t Schedule::trip_count() const {
  std::size_t n = 0;
  for (const auto& v : vehicles) n += v.size();
  return n;
}

Length walk_length(const MetricGraph& g, const std::vector<Vertex>& walk) {
  Length total = 0;
  for (std::size_t i = 1; i < walk.size(); ++i) {
    auto len = g.edge_length(walk[i - 1], walk[i]);
    if (!len) {
      throw ValidationError(ValidationError::Kind::kMalformedWalk,
                            "vertices " + std::to_string(g.label(walk[i - 1])) + " and " +
                                std::to_string(g.label(walk[i])) + " are not adjacent");
    }
    total += *len;
  }
  return total;
}

Rational trip_end(const MetricGraph& g, const Trip& trip, const Rational& speed) {
  return trip.start + Rational(walk_length(g, trip.walk)) / speed;
}

ValidationError::ValidationError(Kind kind, const std::string& detail)
    : InputError(std::string(tag(kind)) + ": " + detail), kind_(kind) {}

const char* ValidationError::tag(Kind kind) {
  switch (kind) {
    case Kind::kVehicleCount: return "vehicle-count";
    case Kind::kMalformedWalk: return "malformed-walk";
    case Kind::kCapacity: return "capacity";
    case Kind::kOverlap: return "overlapping-trips";
    case Kind::kUnknownRequest: return "unknown-request";
    case Kind::kDuplicateService: return "duplicate-service";
    case Kind::kNotOnWalk: return "not-on-walk";
    case Kind::kServeBeforeArrival: return "serve-before-arrival";
    case Kind::kUnserved: return "unserved";
  }
  return "invalid";
}

FlowReport validate(const Instance& inst, const Schedule& sch, const Rational& speed) {
  using K = ValidationError::Kind;
  if (speed < Rational(1)) throw InputError("speed must be at least 1");
  const MetricGraph& g = inst.g();
  const Vertex o = g.depot();
  if (static_cast<int>(sch.vehicles.size()) > inst.k) {
    throw ValidationError(K::kVehicleCount, std::to_string(sch.vehicles.size()) +
                                                " itineraries for " + std::to_string(inst.k) +
                                                " vehicles");
  }

  const auto n = inst.requests.size();
  FlowReport rep;
  rep.serve_time.assign(n, Rational(0));
  rep.flow.assign(n, Rational(0));
  std::vector<char> served(n, 0);

  for (std::size_t vi = 0; vi < sch.vehicles.size(); ++vi) {
    std::optional<Rational> free_at;
    for (std::size_t ti = 0; ti < sch.vehicles[vi].size(); ++ti) {
      const Trip& trip = sch.vehicles[vi][ti];
      const std::string where = "vehicle " + std::to_string(vi) + " trip " + std::to_string(ti);
      const auto& w = trip.walk;
      if (w.size() < 3 || w.front() != o || w.back() != o) {
        throw ValidationError(K::kMalformedWalk, where + " must leave and return to the depot");
      }
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] < 0 || w[j] >= g.size()) throw ValidationError(K::kMalformedWalk, where + " visits an unknown vertex");
        if (j > 0 && j + 1 < w.size() && w[j] == o) {
          throw ValidationError(K::kMalformedWalk, where + " passes through the depot");
        }
      }
      if (inst.capacity && static_cast<int>(trip.served.size()) > *inst.capacity) {
        throw ValidationError(K::kCapacity, where + " serves " + std::to_string(trip.served.size()) +
                                                " requests with capacity " +
                                                std::to_string(*inst.capacity));
      }
      if (trip.start < Rational(0)) throw ValidationError(K::kOverlap, where + " starts before time 0");
      if (free_at && trip.start < *free_at) {
        throw ValidationError(K::kOverlap, where + " starts at " + trip.start.str() +
                                               " before the previous trip ends at " +
                                               free_at->str());
      }

      // prefix distance to the first visit of every vertex on the walk
      std::vector<std::pair<Vertex, Length>> first_visit;
      Length prefix = 0;
      for (std::size_t j = 1; j < w.size(); ++j) {
        auto len = g.edge_length(w[j - 1], w[j]);
        if (!len) {
          throw ValidationError(K::kMalformedWalk,
                                where + " uses a non-edge " + std::to_string(g.label(w[j - 1])) +
                                    "-" + std::to_string(g.label(w[j])));
        }
        prefix += *len;
        const Vertex v = w[j];
        if (std::none_of(first_visit.begin(), first_visit.end(),
                         [v](const auto& p) { return p.first == v; })) {
          first_visit.emplace_back(v, prefix);
        }
      }

      for (int idx : trip.served) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= n) {
          throw ValidationError(K::kUnknownRequest, where + " serves request " + std::to_string(idx));
        }
        const auto ri = static_cast<std::size_t>(idx);
        if (served[ri]) {
          throw ValidationError(K::kDuplicateService, "request " + std::to_string(idx) + " served twice");
        }
        served[ri] = 1;
        const Request& r = inst.requests[ri];
        if (Rational(r.arrival) > trip.start) {
          throw ValidationError(K::kServeBeforeArrival,
                                "request " + std::to_string(idx) + " arrives at " +
                                    std::to_string(r.arrival) + " after its trip starts at " +
                                    trip.start.str());
        }
        auto it = std::find_if(first_visit.begin(), first_visit.end(),
                               [&](const auto& p) { return p.first == r.vertex; });
        if (it == first_visit.end() || r.vertex == o) {
          throw ValidationError(K::kNotOnWalk, "request " + std::to_string(idx) + " at vertex " +
                                                   std::to_string(g.label(r.vertex)) +
                                                   " is not visited by " + where);
        }
        rep.serve_time[ri] = trip.start + Rational(it->second) / speed;
        rep.flow[ri] = rep.serve_time[ri] - Rational(r.arrival);
      }
      free_at = trip.start + Rational(prefix) / speed;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!served[i]) throw ValidationError(K::kUnserved, "request " + std::to_string(i) + " is never served");
    if (rep.argmax < 0 || rep.flow[i] > rep.max_flow) {
      rep.max_flow = rep.flow[i];
      rep.argmax = static_cast<int>(i);
    }
  }
  return rep;
}

// ----------------------------------------------------------------- generator

namespace {

/// Closed walk from the root along the minimal subtree spanning `targets`,
/// children in ascending order.
std::vector<Vertex> euler_walk(const RootedTree& t, const VertexSet& targets) {
  const auto prof = subtree_profile(t, targets);
  std::vector<Vertex> walk{t.root()};
  std::vector<std::pair<Vertex, std::size_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto [u, next] = stack.back();
    const auto& kids = t.children(u);
    while (next < kids.size() && !prof.touches(kids[next])) ++next;
    if (next == kids.size()) {
      stack.pop_back();
      if (!stack.empty()) walk.push_back(stack.back().first);
      continue;
    }
    stack.back().second = next + 1;
    walk.push_back(kids[next]);
    stack.emplace_back(kids[next], 0);
  }
  return walk;
}

}  // namespace

Generated generate_feasible(std::uint64_t seed, const GenerateParams& p) {
  if (p.vertices < 2) throw InputError("need at least one non-depot vertex");
  if (p.k < 1) throw InputError("k must be at least 1");
  if (p.requests < 0) throw InputError("request count must be non-negative");
  if (p.f_target < 2) throw InputError("F_target must be at least 2 to fit a unit round trip");
  if (p.max_edge_length < 1) throw InputError("max edge length must be at least 1");
  if (p.capacity && *p.capacity < 1) throw InputError("capacity must be positive");
  if (p.extra_edges < 0) throw InputError("extra edge count must be non-negative");

  Rng rng(seed);
  const Length budget = p.f_target / 2;  // every vertex lies within F/2 of the depot

  std::vector<Vertex> parent(static_cast<std::size_t>(p.vertices), -1);
  std::vector<Length> plen(static_cast<std::size_t>(p.vertices), 0);
  std::vector<Length> depth(static_cast<std::size_t>(p.vertices), 0);
  std::vector<Edge> edges;
  for (Vertex v = 1; v < p.vertices; ++v) {
    auto par = static_cast<Vertex>(rng.uniform(0, v - 1));
    if (budget - depth[static_cast<std::size_t>(par)] < 1) par = 0;
    const Length hi = std::min(p.max_edge_length, budget - depth[static_cast<std::size_t>(par)]);
    const Length len = rng.uniform(1, hi);
    parent[static_cast<std::size_t>(v)] = par;
    plen[static_cast<std::size_t>(v)] = len;
    depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(par)] + len;
    edges.push_back({par, v, len});
  }
  const RootedTree tree(parent, plen, 0);
  for (int i = 0; i < p.extra_edges; ++i) {
    const auto u = static_cast<Vertex>(rng.uniform(0, p.vertices - 1));
    const auto v = static_cast<Vertex>(rng.uniform(0, p.vertices - 1));
    if (u == v) continue;
    edges.push_back({std::min(u, v), std::max(u, v), rng.uniform(1, p.max_edge_length)});
  }
  auto graph = std::make_shared<const MetricGraph>(MetricGraph::dense(p.vertices, edges, 0));

  const int per_trip = p.capacity ? *p.capacity : std::max(1, p.max_trip_requests);
  struct Pending {
    Request request;
    int vehicle;
    std::size_t trip;
  };
  std::vector<Pending> pending;
  Schedule witness;
  witness.vehicles.assign(static_cast<std::size_t>(p.k), {});
  std::vector<Time> free_at(static_cast<std::size_t>(p.k), 0);

  int remaining = p.requests;
  while (remaining > 0) {
    const auto veh = static_cast<std::size_t>(rng.uniform(0, p.k - 1));
    const Time start = free_at[veh] + rng.uniform(0, p.f_target);
    const auto size = static_cast<int>(rng.uniform(1, std::min(per_trip, remaining)));
    std::vector<Vertex> chosen;
    for (int j = 0; j < size; ++j) chosen.push_back(static_cast<Vertex>(rng.uniform(1, p.vertices - 1)));
    // shorten the trip until its length fits in F
    std::vector<Vertex> walk = euler_walk(tree, VertexSet(chosen));
    while (walk_length(*graph, walk) > p.f_target) {
      chosen.pop_back();
      walk = euler_walk(tree, VertexSet(chosen));
    }
    // pieces between depot visits become separate back-to-back trips
    Time t = start;
    std::size_t piece_begin = 0;
    for (std::size_t j = 1; j < walk.size(); ++j) {
      if (walk[j] != 0) continue;
      Trip trip;
      trip.start = t;
      trip.walk.assign(walk.begin() + static_cast<std::ptrdiff_t>(piece_begin),
                       walk.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      const Length len = walk_length(*graph, trip.walk);
      auto& itinerary = witness.vehicles[veh];
      for (Vertex v : chosen) {
        auto hit = std::find(trip.walk.begin(), trip.walk.end(), v);
        if (hit == trip.walk.end()) continue;
        const Time serve = t + walk_length(*graph, std::vector<Vertex>(trip.walk.begin(), hit + 1));
        const Time arrival = rng.uniform(std::max<Time>(0, serve - p.f_target), t);
        pending.push_back({{arrival, v}, static_cast<int>(veh), itinerary.size()});
      }
      itinerary.push_back(std::move(trip));
      t += len;
      piece_begin = j;
    }
    free_at[veh] = t;
    remaining -= static_cast<int>(chosen.size());
  }

  std::vector<std::size_t> order(pending.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pending[a].request.arrival < pending[b].request.arrival;
  });
  std::vector<Request> requests;
  requests.reserve(order.size());
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const auto& pr = pending[order[idx]];
    requests.push_back(pr.request);
    witness.vehicles[static_cast<std::size_t>(pr.vehicle)][pr.trip].served.push_back(static_cast<int>(idx));
  }
  for (auto& it : witness.vehicles) {
    for (auto& trip : it) std::sort(trip.served.begin(), trip.served.end());
  }
  return {Instance::make(graph, p.k, p.capacity, std::move(requests)), std::move(witness)};
}

}  // namespace fdp
