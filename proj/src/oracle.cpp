#include "fdp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "fdp/errors.hpp"

namespace fdp {

namespace {

struct TripOption {
  std::vector<Vertex> walk;
  Length length = 0;
  std::vector<Length> offset;  // first-visit distance per request of the set
};

struct Search {
  explicit Search(const Instance& instance) : inst(instance) {}

  const Instance& inst;
  std::vector<std::uint32_t> subsets;
  std::vector<std::vector<TripOption>> options;  // by subset mask
  std::vector<Length> depot_dist;
  std::uint32_t full = 0;

  Rational best;
  bool found = false;
  std::vector<std::pair<std::uint32_t, const TripOption*>> best_trips;
  std::vector<int> best_vehicle;
  std::vector<Rational> best_start;

  std::vector<std::pair<std::uint32_t, const TripOption*>> trips;
  std::vector<int> vehicle_of;
  std::vector<Rational> start_of;
  std::int64_t nodes = 0;

  void dfs(std::uint32_t served, std::vector<Rational>& free_at, const Rational& last_start, const Rational& cur) {
    ++nodes;
    if (served == full) {
      if (!found || cur < best) {
        found = true;
        best = cur;
        best_trips = trips;
        best_vehicle = vehicle_of;
        best_start = start_of;
      }
      return;
    }
    // every open request starts no earlier than the last trip and still has
    // to reach its vertex
    Rational bound = cur;
    for (std::size_t i = 0; i < inst.requests.size(); ++i) {
      if (served >> i & 1U) continue;
      const Rational a(inst.requests[i].arrival);
      const Rational earliest = std::max(a, last_start) + Rational(depot_dist[i]);
      bound = std::max(bound, earliest - a);
    }
    if (found && bound >= best) return;

    for (std::uint32_t s : subsets) {
      if (s & served) continue;
      Time ready = 0;
      for (std::size_t i = 0; i < inst.requests.size(); ++i) {
        if (s >> i & 1U) ready = std::max(ready, inst.requests[i].arrival);
      }
      for (std::size_t v = 0; v < free_at.size(); ++v) {
        bool repeat = false;
        for (std::size_t u = 0; u < v; ++u) repeat = repeat || free_at[u] == free_at[v];
        if (repeat) continue;
        const Rational start = std::max(free_at[v], Rational(ready));
        if (start < last_start) continue;
        for (const auto& opt : options[s]) {
          Rational worst = cur;
          std::size_t j = 0;
          for (std::size_t i = 0; i < inst.requests.size(); ++i) {
            if (!(s >> i & 1U)) continue;
            worst = std::max(worst, start + Rational(opt.offset[j++]) - Rational(inst.requests[i].arrival));
          }
          if (found && worst >= best) continue;
          const Rational saved = free_at[v];
          free_at[v] = start + Rational(opt.length);
          trips.emplace_back(s, &opt);
          vehicle_of.push_back(static_cast<int>(v));
          start_of.push_back(start);
          dfs(served | s, free_at, start, worst);
          trips.pop_back();
          vehicle_of.pop_back();
          start_of.pop_back();
          free_at[v] = saved;
        }
      }
    }
  }
};

/// Walks o, v_1, ..., v_m, o for every order of the distinct vertices of the
/// set; orders whose walk passes the depot early are dropped (two trips do
/// the same), and so are options dominated in length and every offset.
std::vector<TripOption> trip_options(const Instance& inst, std::uint32_t s) {
  const MetricGraph& g = inst.g();
  const Vertex o = g.depot();
  std::vector<Vertex> verts;
  std::vector<Vertex> req_vertex;
  for (std::size_t i = 0; i < inst.requests.size(); ++i) {
    if (s >> i & 1U) {
      verts.push_back(inst.requests[i].vertex);
      req_vertex.push_back(inst.requests[i].vertex);
    }
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  std::vector<TripOption> out;
  do {
    TripOption opt;
    opt.walk = {o};
    bool through_depot = false;
    std::vector<Vertex> stops = verts;
    stops.push_back(o);
    for (Vertex to : stops) {
      const auto path = g.shortest_path(opt.walk.back(), to);
      for (std::size_t p = 1; p < path.size(); ++p) {
        opt.walk.push_back(path[p]);
        if (path[p] == o && !(to == o && p + 1 == path.size())) through_depot = true;
      }
    }
    if (through_depot) continue;
    std::vector<Length> first(static_cast<std::size_t>(g.size()), -1);
    Length prefix = 0;
    for (std::size_t p = 1; p < opt.walk.size(); ++p) {
      prefix += *g.edge_length(opt.walk[p - 1], opt.walk[p]);
      auto& f = first[static_cast<std::size_t>(opt.walk[p])];
      if (f < 0) f = prefix;
    }
    opt.length = prefix;
    for (Vertex v : req_vertex) opt.offset.push_back(first[static_cast<std::size_t>(v)]);
    out.push_back(std::move(opt));
  } while (std::next_permutation(verts.begin(), verts.end()));

  auto dominates = [](const TripOption& a, const TripOption& b) {
    if (a.length > b.length) return false;
    for (std::size_t j = 0; j < a.offset.size(); ++j) {
      if (a.offset[j] > b.offset[j]) return false;
    }
    return true;
  };
  std::vector<TripOption> kept;
  for (std::size_t a = 0; a < out.size(); ++a) {
    bool beaten = false;
    for (std::size_t b = 0; b < out.size() && !beaten; ++b) {
      if (a == b || !dominates(out[b], out[a])) continue;
      // equal options: keep the first
      beaten = !dominates(out[a], out[b]) || b < a;
    }
    if (!beaten) kept.push_back(out[a]);
  }
  return kept;
}

}  // namespace

OptResult optimal_max_flow(const Instance& inst, int limit) {
  const int n = static_cast<int>(inst.requests.size());
  if (n > limit || n > 20) {
    throw UnsupportedError("oracle limited to " + std::to_string(limit) + " requests, got " + std::to_string(n));
  }
  Search search{inst};
  search.full = n == 0 ? 0 : (1U << n) - 1;
  search.options.resize(static_cast<std::size_t>(search.full) + 1);
  for (std::uint32_t s = 1; s <= search.full; ++s) {
    const int size = std::popcount(s);
    if (inst.capacity && size > *inst.capacity) continue;
    search.options[s] = trip_options(inst, s);
    if (!search.options[s].empty()) search.subsets.push_back(s);
  }
  for (const auto& r : inst.requests) search.depot_dist.push_back(inst.g().distance(inst.depot(), r.vertex));

  std::vector<Rational> free_at(static_cast<std::size_t>(inst.k), Rational(0));
  search.dfs(0, free_at, Rational(0), Rational(0));

  OptResult res;
  res.max_flow = search.best;
  res.nodes = search.nodes;
  res.witness.vehicles.assign(static_cast<std::size_t>(inst.k), {});
  for (std::size_t t = 0; t < search.best_trips.size(); ++t) {
    const auto [s, opt] = search.best_trips[t];
    Trip trip;
    trip.start = search.best_start[t];
    trip.walk = opt->walk;
    for (int i = 0; i < n; ++i) {
      if (s >> i & 1U) trip.served.push_back(i);
    }
    res.witness.vehicles[static_cast<std::size_t>(search.best_vehicle[t])].push_back(std::move(trip));
  }
  return res;
}

std::map<std::int64_t, std::vector<int>> opt_partition(const Instance& inst, const Schedule& witness,
                                                       const Rational& f) {
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
  const FlowReport rep = validate(inst, witness);
  if (rep.max_flow > f) {
    throw InputError("witness max flow " + rep.max_flow.str() + " exceeds F = " + f.str());
  }
  std::map<std::int64_t, std::vector<int>> parts;
  for (const auto& itinerary : witness.vehicles) {
    for (const auto& trip : itinerary) {
      if (trip.served.empty()) continue;
      Time lo = std::numeric_limits<Time>::max();
      Time hi = std::numeric_limits<Time>::min();
      for (int id : trip.served) {
        lo = std::min(lo, inst.requests[static_cast<std::size_t>(id)].arrival);
        hi = std::max(hi, inst.requests[static_cast<std::size_t>(id)].arrival);
      }
      if (Rational(hi - lo) > f) {
        throw InputError("contradiction: a witness trip serves arrivals " + std::to_string(lo) + " and " +
                         std::to_string(hi) + ", more than F apart");
      }
      auto& part = parts[floor_div(Rational(lo), f) + 1];
      part.insert(part.end(), trip.served.begin(), trip.served.end());
    }
  }
  for (auto& [i, ids] : parts) std::sort(ids.begin(), ids.end());
  return parts;
}

std::vector<std::int64_t> trip_count_lower_bound(const RootedTree& t, const VertexSet& rp, const Rational& f) {
  return edge_counts(t, rp, f);
}

std::vector<std::int64_t> edge_trip_counts(const RootedTree& t, const Schedule& sch, const std::vector<int>& subset) {
  std::vector<std::int64_t> uses(static_cast<std::size_t>(t.size()), 0);
  std::vector<char> used(uses.size(), 0);
  for (const auto& itinerary : sch.vehicles) {
    for (const auto& trip : itinerary) {
      const bool relevant = std::any_of(trip.served.begin(), trip.served.end(), [&](int id) {
        return std::find(subset.begin(), subset.end(), id) != subset.end();
      });
      if (!relevant) continue;
      std::fill(used.begin(), used.end(), 0);
      for (std::size_t i = 1; i < trip.walk.size(); ++i) {
        const Vertex a = trip.walk[i - 1];
        const Vertex b = trip.walk[i];
        const Vertex child = t.parent(b) == a ? b : a;
        if (!used[static_cast<std::size_t>(child)]) {
          used[static_cast<std::size_t>(child)] = 1;
          ++uses[static_cast<std::size_t>(child)];
        }
      }
    }
  }
  return uses;
}

Length counting_tsp_lower_bound(const MetricGraph& g, const std::vector<Vertex>& vp) {
  const Vertex o = g.depot();
  std::vector<Vertex> xs = vp;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.erase(std::remove(xs.begin(), xs.end(), o), xs.end());
  if (xs.empty()) return 0;
  Length delta = std::numeric_limits<Length>::max();
  Vertex wa = o;
  Vertex wb = xs.front();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Length to_depot = 2 * g.distance(o, xs[i]);
    if (to_depot < delta) {
      delta = to_depot;
      wa = o;
      wb = xs[i];
    }
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const Length d = g.distance(xs[i], xs[j]);
      if (d < delta) {
        delta = d;
        wa = xs[i];
        wb = xs[j];
      }
    }
  }
  if (delta == 0) {
    throw InputError("counting bound needs positive separation; vertices " + std::to_string(g.label(wa)) +
                     " and " + std::to_string(g.label(wb)) + " are at distance 0");
  }
  return delta * static_cast<Length>(xs.size());
}

}  // namespace fdp
